#pragma once

#include "jr/cyclo.hpp"
#include "jr/lattice.hpp"
#include "jr/orbital.hpp"

#include <vector>

namespace jr {

struct PhaseOutsideRing : std::domain_error {
    using std::domain_error::domain_error;
};

/// Even-dimensional quadratic space (V, q) over Q_p: q(x) = x^T B x with B
/// symmetric; the Fourier pairing is <x,y> = x^T M y with M = 2B.
struct WeilCtx {
    long p;
    QMat B;        // Gram of q
    QMat M;        // 2B
    int gammaV;    // Weil constant, +1 or -1 in the unramified setting
    bool allowCyclotomic = true;

    WeilCtx(long p_, QMat B_, int gamma_);

    int dim() const { return B.rows(); }

    /// chi_V(a) = (a, (-1)^{dim/2} det B)_p.
    int chi(const Rat& a) const;

    /// Orthogonal sum of m hyperbolic planes: q(x, y) = sum x_i y_i.
    static WeilCtx split_space(long p, int m);

    /// Space induced from a hermitian space with Gram J: q(x) = <x,x>_J,
    /// with gamma_V = eta(det J) (unramified epsilon factor is 1).
    static WeilCtx from_hermitian(const FMat& J, const LocalFieldCtx& ctx);
};

/// psi(t) = e^{2 pi i {t}_p} at level 0; the p-fractional part {t}_p.
Rat p_fractional_part(const Rat& t, long p);
Cyclo psi_phase(const Rat& t, const WeilCtx& ctx);   // throws PhaseOutsideRing if disabled

/// One term coef * psi(<x, nu>) * 1_{mu + lam}(x).
struct SchwartzTerm {
    AlgScaled coef;
    std::vector<Rat> nu;
    std::vector<Rat> mu;
    Lattice lam;
};

struct Schwartz {
    std::vector<SchwartzTerm> terms;

    static Schwartz indicator(const std::vector<Rat>& mu, const Lattice& lam, long p);
    Schwartz negated_argument() const;   // x -> -x
};

/// Normal form: nu reduced mod the M-dual of lam (constant part folded into
/// the coefficient), mu reduced mod lam, equal keys merged, sorted.
Schwartz canonicalize(const Schwartz& f, const WeilCtx& ctx);

/// Exact equality as functions (refines both to a common lattice first).
bool schwartz_equal(const Schwartz& f, const Schwartz& g, const WeilCtx& ctx);

/// Pointwise value (exact).
AlgScaled evaluate(const Schwartz& f, const std::vector<Rat>& x, const WeilCtx& ctx);

/// Self-dual-measure Fourier transform, term by term:
///   F[1_{mu+L} psi(<.,nu>)](x) = vol(L) psi(<mu,nu>) psi(<x,mu>) 1_{-nu+L*}(x).
Schwartz fourier(const Schwartz& f, const WeilCtx& ctx);

/// vol(L) = p^{-idx(L, L*)/2}; self-dual lattices get volume 1.
AlgScaled lattice_volume(const Lattice& L, const WeilCtx& ctx);

struct WeilGen {
    enum Kind { N, MDiag, W } kind;
    Rat param;   // b for n(b), a for m(a)

    static WeilGen n(const Rat& b) { return {N, b}; }
    static WeilGen m(const Rat& a) { return {MDiag, a}; }
    static WeilGen w() { return {W, Rat(0)}; }
};

/// omega(word) f, word applied left-to-right as a product of generators.
Schwartz weil_act(const std::vector<WeilGen>& word, const Schwartz& f, const WeilCtx& ctx);

/// gamma_V of a hermitian space: eta(det)·epsilon(eta,1/2,psi)^dim with
/// epsilon = 1 (unramified, level 0).  Returns +1/-1.
int weil_constant(const FMat& J, const LocalFieldCtx& ctx);

/// m(a)-transformation law of the Weil action against orbital integrals:
/// Orb(x, omega(m_a) Phi, s) = chi(a) |a|^m Orb(a.x, Phi, s), checked as an
/// exact Laurent identity, plus the transfer-factor law
/// omega(gamma, a u') = eta(a)^m omega(gamma, u').
bool orbit_transform_check(const SemiLiePair& x, const Rat& a, const LocalFieldCtx& ctx);
bool orbit_transform_check(const UnitaryPair& x, const Rat& a, const LocalFieldCtx& ctx);

}  // namespace jr
