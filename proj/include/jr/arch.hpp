#pragma once

#include "jr/orbit.hpp"
#include "jr/poly.hpp"

#include <vector>

namespace jr {

struct ToleranceNotMet : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ReduciblePolynomial : std::domain_error {
    using std::domain_error::domain_error;
};
struct SingularTraceForm : std::domain_error {
    using std::domain_error::domain_error;
};

/// Real number with a conservative absolute error bound.
struct ArchValue {
    double v = 0;
    double err = 0;

    ArchValue() = default;
    ArchValue(double v_, double err_) : v(v_), err(err_) {}
    static ArchValue exact(double v) { return {v, std::abs(v) * 1e-15}; }

    friend ArchValue operator+(const ArchValue& a, const ArchValue& b) {
        double v = a.v + b.v;
        return {v, a.err + b.err + std::abs(v) * 1e-16};
    }
    friend ArchValue operator-(const ArchValue& a, const ArchValue& b) {
        double v = a.v - b.v;
        return {v, a.err + b.err + std::abs(v) * 1e-16};
    }
    friend ArchValue operator*(const ArchValue& a, const ArchValue& b) {
        double v = a.v * b.v;
        double e = std::abs(a.v) * b.err + std::abs(b.v) * a.err + a.err * b.err;
        return {v, e + std::abs(v) * 1e-16};
    }
    friend ArchValue operator*(double c, const ArchValue& a) {
        return {c * a.v, std::abs(c) * a.err + std::abs(c * a.v) * 1e-16};
    }
};

struct ArchComplex {
    ArchValue re, im;
    double abs() const { return std::hypot(re.v, im.v); }
};

/// Iwasawa data of h in SL_2(R): h = n(b) m(sqrt a) kappa_theta.
struct IwasawaTriple {
    double a = 1.0;
    double b = 0.0;
    double theta = 0.0;
};

/// K_s(c) = (1/2) int_{R_+} e^{-c(u+1/u)/2} u^s du/u, by quadrature of the
/// cosh form; |s| real here.
ArchValue bessel_k(double s, double c, double tol = 1e-13);

/// Ei(-r) = -int_r^infty e^{-t}/t dt for r > 0 (argument passed as -r < 0).
ArchValue expint_ei(double x, double tol = 1e-14);

/// Closed-form archimedean orbital integral of the rank-one Gaussian:
///   chi_1(kappa_theta) e^{2 pi i b xi} a^{1-s} 2^{-1/2} |xi|^{(1-s)/2}
///     (K_{(1-s)/2} + sgn(xi) K_{(1+s)/2})(pi a |xi|);
/// with deriv=true (only at s=0) the d/ds|_{s=0} value:
/// (1/2) chi_1 e^{2 pi i b xi} a^{1/2} e^{pi a|xi|} Ei(-2 pi a |xi|) for
/// xi < 0, and -(log a + log|xi|/2) times the value for xi > 0.
ArchComplex orb_arch(double xi, double s, bool deriv = false, IwasawaTriple h = {});

/// Independent numeric evaluation of the defining integral (h = identity).
ArchValue orb_arch_quadrature(double xi, double s, double tol = 1e-11);

/// Product of rank-one closed forms (the compact-Cartan reduction).
ArchValue orb_arch_product(const std::vector<double>& xiList, double s);

/// Nilpotent value 2^{s/2-1}.
ArchValue nilpotent_arch(double s);
/// Its defining Tate integral over the archimedean L-factor, by quadrature.
ArchValue nilpotent_arch_quadrature(double s, double tol = 1e-11);

/// Weight-k Whittaker value |a|^{k/2} e^{2 pi i xi (b + a i)} chi_k(kappa).
ArchComplex whittaker(int k, double xi, IwasawaTriple h);

/// Refined invariant xi' in F_0' = Q[T]/(alpha_0), alpha_0 the minimal
/// polynomial of beta = gamma + gamma^{-1}; coordinates in the power basis
/// plus the real embeddings (with error bounds).
struct RefinedInvariant {
    QPoly alpha0;
    std::vector<Rat> xiPrime;                 // sum xiPrime[j] beta^j
    std::vector<ArchValue> embeddings;        // values at the real roots of alpha0
    Rat coarse;                               // tr(xi') = xi
    int negativeCount() const {
        int n = 0;
        for (const auto& e : embeddings)
            if (e.v < 0) ++n;
        return n;
    }
};

RefinedInvariant refined_invariant(const InvariantVector& iv, const LocalFieldCtx& ctx);

/// Exact real-root isolation (Sturm + bisection) used for the embeddings.
std::vector<ArchValue> real_roots(const QPoly& f, double width = 1e-13);

}  // namespace jr
