#pragma once

#include "jr/laurent.hpp"
#include "jr/orbit.hpp"

#include <optional>
#include <string>

namespace jr {

struct UnboundedSupport : std::domain_error {
    using std::domain_error::domain_error;
};
struct NonSplitSpace : std::domain_error {
    using std::domain_error::domain_error;
};
struct NotIntegral : std::domain_error {
    using std::domain_error::domain_error;
};
struct PreconditionFailed : std::domain_error {
    using std::domain_error::domain_error;
};

/// Weighted count over gamma-stable lattices
///   sum over L: gamma (O_F x L) = O_F x L, u1 in c1 L, u2(L) in c2 O
/// of (-1)^{d(L)} X^{d(L)} with d(L) the signed index against O^m.
/// The scalings c1, c2 support the Weil m(a)-action on the test function;
/// the standard test function is c1 = c2 = 1.
LaurentX orb_gl_scaled(const SemiLiePair& x, const LocalFieldCtx& ctx, const Rat& c1,
                       const Rat& c2);

struct OrbGlDetails {
    LaurentX value;
    long quotient_log;   // log_p |M2/M1| of the enumeration window
};
OrbGlDetails orb_gl_detailed(const SemiLiePair& x, const LocalFieldCtx& ctx, const Rat& c1,
                             const Rat& c2);

inline LaurentX orb_gl(const SemiLiePair& x, const LocalFieldCtx& ctx) {
    return orb_gl_scaled(x, ctx, Rat(1), Rat(1));
}

/// Count of self-dual g-stable O_F-lattices containing c^{-1} u (c = 1 in
/// the spec case).  Requires the space split.
long orb_u_scaled(const UnitaryPair& x, const LocalFieldCtx& ctx, const Rat& c);

inline long orb_u(const UnitaryPair& x, const LocalFieldCtx& ctx) {
    return orb_u_scaled(x, ctx, Rat(1));
}

/// true iff O_F[g] is maximal in F[g]; charpoly must be squarefree and
/// integral.  Squarefree reduction mod p short-circuits; otherwise the
/// Dedekind criterion at p decides.
bool is_maximal_order(const FPoly& charpoly, const LocalFieldCtx& ctx);

/// Valuation of disc(alpha) over O_F; test oracle for is_maximal_order.
long discriminant_valuation(const FPoly& alpha, const LocalFieldCtx& ctx);

struct FlReport {
    Side side;
    SpecialValues gl;
    LaurentX glLaurent;
    int omega;
    std::optional<long> orbU;
    bool pass;
    long quotientSizeLog;   // log_p |M2/M1|, reported for desk-scale visibility
};

/// Synthesizes both representatives from the invariants and checks the
/// fundamental-lemma identity: split side value0 = orbU, nonsplit side
/// value0 = 0.
FlReport fl_verify(const InvariantVector& iv, const LocalFieldCtx& ctx);

/// Lemma-4.8-style check: the r- and r-natural reductions of a matching
/// (gamma', g') pair at twist xi give the same semi-Lie orbital integral.
/// Preconditions: 1 - xi d unit and det(1 - xi gamma') unit.
struct OrbReductionReport {
    LaurentX viaR, viaRNatural;
    bool equal;
};
OrbReductionReport orb_reduction_check(const FMat& gammaPrime, const QuadElem& xi,
                                       const LocalFieldCtx& ctx);

}  // namespace jr
