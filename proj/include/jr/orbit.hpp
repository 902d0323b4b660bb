#pragma once

#include "jr/lattice.hpp"
#include "jr/poly.hpp"

#include <optional>
#include <random>

namespace jr {

struct NotRegular : std::domain_error {
    using std::domain_error::domain_error;
};
struct DegenerateGram : std::domain_error {
    using std::domain_error::domain_error;
};
struct SingularDenominator : std::domain_error {
    using std::domain_error::domain_error;
};
struct OutsideOpenLocus : std::domain_error {
    using std::domain_error::domain_error;
};
struct NotOnBaseVariety : std::domain_error {
    using std::domain_error::domain_error;
};

/// (gamma, (u1, u2)) in S_m x (F_0^m x (F_0^m)^*): gamma conj(gamma) = 1,
/// u1 a rational column, u2 a rational row.
struct SemiLiePair {
    FMat gamma;              // m x m over F
    std::vector<Rat> u1;     // column
    std::vector<Rat> u2;     // row
    int rank() const { return gamma.rows(); }
};

/// (g, u) in U(V) x V for the hermitian space with Gram J:
/// <x,y> = conj(y)^T J x, conj(g)^T J g = J.
struct UnitaryPair {
    FMat gram;               // m x m hermitian Gram
    FMat g;                  // m x m unitary
    std::vector<QuadElem> u; // column in F^m
    int rank() const { return g.rows(); }
};

/// The common invariants: char polynomial and moments a_i (0 <= i < m).
struct InvariantVector {
    FPoly charpoly;                 // monic, det(T I - gamma), degree m
    std::vector<QuadElem> moments;  // a_i = u2 gamma^i u1 = <g^i u, u>
    int rank() const { return charpoly.degree(); }
};

bool conjugate_self_reciprocal(const FPoly& alpha);

// Hermitian pairing <x,y> = conj(y)^T J x.
QuadElem herm_pair(const FMat& J, const std::vector<QuadElem>& x, const std::vector<QuadElem>& y);

bool is_in_S(const FMat& gamma);                       // gamma conj(gamma) = 1
bool is_unitary(const FMat& J, const FMat& g);         // conj(g)^T J g = J
bool is_anti_selfadjoint(const FMat& J, const FMat& x);// <xv,w> + <v,xw> = 0
bool is_in_lie_s(const FMat& y);                       // y + conj(y) = 0

InvariantVector invariants(const SemiLiePair& x);
InvariantVector invariants(const UnitaryPair& x);

bool is_regular_semisimple(const SemiLiePair& x);
bool is_regular_semisimple(const UnitaryPair& x);
bool is_strongly_rs(const SemiLiePair& x);
bool is_strongly_rs(const UnitaryPair& x);

bool matches(const SemiLiePair& s, const UnitaryPair& u);

enum class Side { split, nonsplit };

/// Moment Gram G_{ij} = a_{i-j} (a_{-k} = conj(a_k)); its determinant lies
/// in F_0^x and eta(det) decides the hermitian space containing the data.
FMat moment_gram(const InvariantVector& iv, const LocalFieldCtx& ctx);
Side decide_side(const InvariantVector& iv, const LocalFieldCtx& ctx);

/// Constructive oracle: a self-dual lattice for the hermitian space with
/// this Gram, when one exists.
std::optional<QuadLattice> build_self_dual_lattice(const FMat& J, const LocalFieldCtx& ctx);

/// omega(gamma, u') = eta~(det(gamma)^{-floor(m/2)} det(gamma^i u1)).
int transfer_factor(const SemiLiePair& x, const LocalFieldCtx& ctx);
/// Group version on S_n with the column e = e_n.
int transfer_factor_group(const FMat& gamma, const LocalFieldCtx& ctx);

// Cayley maps c(x) = -(1-x)(1+x)^{-1}, c^{-1}(g) = (1-g)^{-1}(1+g),
// both sides of the comparison use the same rational formulas.
FMat cayley_to_group(const FMat& x);
FMat cayley_to_lie(const FMat& g);

/// One-step reduction data of a framed (m+1)-pair down to rank m.
struct UnitaryReduction {
    FMat gram;                     // Gram of V_m (top-left block)
    FMat g;                        // rank-m unitary
    std::vector<QuadElem> u;       // output vector (r or r-natural)
    QuadElem e;                    // lower-right entry of the inverse Cayley image
    // block data of the twisted input, for identity checks
    FMat h;
    std::vector<QuadElem> ucol, w;
    QuadElem dcorner;
};

struct SymmetricReduction {
    SemiLiePair pair;
    QuadElem e;
    FMat a;
    std::vector<QuadElem> bcol, crow;   // untwisted blocks of xi*gamma'
    QuadElem dcorner;
};

enum class ReduceVariant { r, r_natural };

/// Requires the space framed as V_m + F u_0 with <u_0,u_0> = 1, i.e. Gram
/// block-diagonal [J, 1].  xi must have norm one.
UnitaryReduction reduce_unitary(const FMat& gramFramed, const FMat& gprime, ReduceVariant variant,
                                const QuadElem& xi, const LocalFieldCtx& ctx);

SymmetricReduction reduce_symmetric(const FMat& gammaPrime, ReduceVariant variant,
                                    const QuadElem& xi, const LocalFieldCtx& ctx);

/// Inverse maps (lift): rebuild the (m+1)-point from (g, u, e).
FMat lift_unitary(const FMat& gram, const FMat& g, const std::vector<QuadElem>& u,
                  const QuadElem& e, ReduceVariant variant, const QuadElem& xi,
                  const LocalFieldCtx& ctx);
FMat lift_symmetric(const FMat& gamma, const std::vector<Rat>& u1, const std::vector<Rat>& u2,
                    const QuadElem& e, ReduceVariant variant, const QuadElem& xi,
                    const LocalFieldCtx& ctx);

/// Rewrites a unitary pair (space, g', special vector u0 with norm 1) in a
/// basis adapted to V = u0-perp, so the Gram becomes [J, 1]-block-diagonal
/// and u0 becomes the last basis vector.
struct FramedSpace {
    FMat gram;       // full (m+1) framed Gram, block-diag [J, 1]
    FMat transform;  // columns: adapted basis in old coordinates
};
FramedSpace frame_special_vector(const FMat& gram, const std::vector<QuadElem>& u0);

// ---------------------------------------------------------------------
// Synthesis of representatives.

/// gamma in S_m(F_0) with the prescribed conjugate-self-reciprocal
/// characteristic polynomial, via the Cayley map (with a norm-one twist
/// when alpha(1) = 0).  Throws NotOnBaseVariety for inadmissible alpha.
FMat semilie_group_rep(const FPoly& alpha, const LocalFieldCtx& ctx);

/// Representative (gamma, u1, u2) with the given invariants.
SemiLiePair semilie_from_invariants(const InvariantVector& iv, const LocalFieldCtx& ctx);

/// Unitary representative with the given invariants on the split space;
/// Gram is the moment Gram in the cyclic basis {g^i u}.
UnitaryPair unitary_from_invariants(const InvariantVector& iv, const LocalFieldCtx& ctx);

/// Group-version matching partner: for gamma' in S_n(F_0) rs (w.r.t. the
/// e_n-framing) builds (gram H, g' = companion, u0 = e_1) with
/// <g'^i u0, u0> = e^* gamma'^i e.
UnitaryPair unitary_partner_of_group_element(const FMat& gammaPrime, const LocalFieldCtx& ctx);

// ---------------------------------------------------------------------
// Randomized generators for property suites (deterministic per seed).

struct RandomSource {
    std::mt19937_64 rng;
    explicit RandomSource(unsigned long seed) : rng(seed) {}
    long integer(long lo, long hi);
    Rat rational(long maxNum, long maxDen);   // nonzero-denominator small rational
    QuadElem quad(long d, long maxNum, long maxDen);
};

FMat random_s_element(int m, RandomSource& rs, const LocalFieldCtx& ctx);      // in S_m
FMat random_anti_selfadjoint(const FMat& J, RandomSource& rs, const LocalFieldCtx& ctx);
FMat random_unitary(const FMat& J, RandomSource& rs, const LocalFieldCtx& ctx);
FMat random_gl_rational(int m, RandomSource& rs, const LocalFieldCtx& ctx);    // GL_m(F_0)

/// Small norm-one elements (a+b sqrt d)/(a-b sqrt d), deduplicated, xi=1 first.
std::vector<QuadElem> norm_one_elements(const LocalFieldCtx& ctx, int count);

}  // namespace jr
