#include "jr/arch.hpp"

#include <cmath>
#include <functional>

namespace jr {

namespace {

// Trapezoid rule with halving on [lo, hi] for a smooth integrand; the
// reported error combines the last halving difference and the caller's
// tail bound.
ArchValue trapezoid(const std::function<double(double)>& f, double lo, double hi, double tol,
                    double tailBound) {
    int n = 64;
    auto eval = [&](int steps) {
        double h = (hi - lo) / steps;
        double acc = 0.5 * (f(lo) + f(hi));
        for (int i = 1; i < steps; ++i) acc += f(lo + h * i);
        return acc * h;
    };
    double prev = eval(n);
    for (int it = 0; it < 14; ++it) {
        n *= 2;
        double cur = eval(n);
        double diff = std::abs(cur - prev);
        prev = cur;
        if (diff < tol * 0.25 && it >= 2)
            return {cur, diff + tailBound + std::abs(cur) * 1e-14};
    }
    throw ToleranceNotMet("quadrature did not converge to the requested tolerance");
}

}  // namespace

ArchValue bessel_k(double s, double c, double tol) {
    if (c <= 0) throw BadContext("bessel_k needs c > 0");
    s = std::abs(s);   // K_s = K_{-s}
    // integrand e^{-c cosh t} cosh(s t) on [0, T]
    double T = 1.0;
    auto logI = [&](double t) { return -c * std::cosh(t) + s * t; };
    while (logI(T) > std::log(tol) - 8.0) T += 0.5;
    // tail bound: cosh t >= cosh T + sinh(T)(t - T)
    double lam = c * std::sinh(T) - s;
    double tail = lam > 0 ? std::exp(logI(T)) / lam : 1.0;
    auto f = [&](double t) { return std::exp(-c * std::cosh(t)) * std::cosh(s * t); };
    return trapezoid(f, 0.0, T, tol, tail);
}

ArchValue expint_ei(double x, double tol) {
    if (x >= 0) throw BadContext("expint_ei expects a negative argument");
    double r = -x;
    if (r <= 2.0) {
        // Ei(-r) = gamma + log r + sum (-r)^n / (n n!)
        const double euler = 0.57721566490153286060651209008240;
        double acc = euler + std::log(r);
        double term = 1.0;
        double sum = 0.0;
        for (int n = 1; n < 200; ++n) {
            term *= -r / n;
            double add = term / n;
            sum += add;
            if (std::abs(add) < tol * 0.01 && n > 4)
                return {acc + sum, std::abs(add) * 2 + std::abs(acc + sum) * 1e-15};
        }
        throw ToleranceNotMet("Ei series did not converge");
    }
    // continued fraction for E_1(r): e^{-r} / (r + 1 - 1/(r + 3 - 4/(r + 5 - ...)))
    // evaluated by the modified Lentz method; Ei(-r) = -E_1(r).
    double b = r + 1.0;
    double cL = 1.0 / 1e-30;
    double dL = 1.0 / b;
    double h = dL;
    for (int i = 1; i <= 300; ++i) {
        double an = -static_cast<double>(i) * i;
        b += 2.0;
        dL = an * dL + b;
        if (std::abs(dL) < 1e-30) dL = 1e-30;
        cL = b + an / cL;
        if (std::abs(cL) < 1e-30) cL = 1e-30;
        dL = 1.0 / dL;
        double del = dL * cL;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) {
            double e1 = std::exp(-r) * h;
            return {-e1, std::abs(e1) * 1e-13 + 1e-308};
        }
    }
    throw ToleranceNotMet("Ei continued fraction did not converge");
}

ArchComplex orb_arch(double xi, double s, bool deriv, IwasawaTriple h) {
    if (xi == 0) throw BadContext("orb_arch needs xi != 0");
    double axi = std::abs(xi);
    int sgn = xi > 0 ? 1 : -1;
    double c = M_PI * h.a * axi;
    ArchComplex out;
    double phase = 2 * M_PI * h.b * xi + h.theta;   // arg of chi_1(kappa) e^{2 pi i b xi}
    if (!deriv) {
        ArchValue k1 = bessel_k((1 - s) / 2, c);
        ArchValue k2 = bessel_k((1 + s) / 2, c);
        ArchValue bracket = (sgn > 0) ? (k1 + k2) : (k1 - k2);
        double pref = std::pow(h.a, 1 - s) * std::pow(axi, (1 - s) / 2) / std::sqrt(2.0);
        ArchValue mag = pref * bracket;
        out.re = std::cos(phase) * mag;
        out.im = std::sin(phase) * mag;
        return out;
    }
    if (s != 0) throw BadContext("derivative only taken at s = 0");
    if (sgn > 0) {
        // d/ds of the prefactor only; the Bessel bracket is stationary
        ArchComplex val = orb_arch(xi, 0, false, h);
        double fac = -(std::log(h.a) + 0.5 * std::log(axi));
        out.re = fac * val.re;
        out.im = fac * val.im;
        return out;
    }
    ArchValue ei = expint_ei(-2 * c);
    double mag = 0.5 * std::sqrt(h.a) * std::exp(c);
    ArchValue m = mag * ei;
    out.re = std::cos(phase) * m;
    out.im = std::sin(phase) * m;
    return out;
}

ArchValue orb_arch_quadrature(double xi, double s, double tol) {
    if (xi == 0) throw BadContext("orb_arch_quadrature needs xi != 0");
    double axi = std::abs(xi);
    int sgn = xi > 0 ? 1 : -1;
    // t = e^x substitution of the defining integral
    auto f = [&](double x) {
        double t = std::exp(x);
        double g = std::exp(-0.5 * M_PI * (t * t + xi * xi / (t * t)));
        return (t + sgn * axi / t) * g * std::exp(-s * x);
    };
    double T = 2.0;
    auto decays = [&](double x) { return std::abs(f(x)) < tol * 1e-6; };
    while (!(decays(T) && decays(-T))) T += 0.5;
    return (1.0 / std::sqrt(2.0)) * trapezoid(f, -T, T, tol, tol * 1e-5);
}

ArchValue orb_arch_product(const std::vector<double>& xiList, double s) {
    ArchValue acc = ArchValue::exact(1.0);
    for (double xi : xiList) {
        ArchComplex v = orb_arch(xi, s, false, {});
        acc = acc * v.re;   // h = identity: value is real
    }
    return acc;
}

ArchValue nilpotent_arch(double s) { return ArchValue::exact(std::pow(2.0, s / 2 - 1)); }

ArchValue nilpotent_arch_quadrature(double s, double tol) {
    // numerator: int_{R^x} phi'(g, 0) |g|^s eta(g) dg  with
    // phi'(x,y) = 2^{-3/2}(x+y)e^{-pi(x^2+y^2)/2}; the two half-lines match,
    // giving 2^{-1/2} int_0^infty e^{-pi x^2/2} x^{s+1} dx/x.
    auto f = [&](double u) {
        double x = std::exp(u);
        return std::exp(-0.5 * M_PI * x * x) * std::pow(x, s + 1);
    };
    double T = 3.0;
    while (std::abs(f(T)) > tol * 1e-6 || std::abs(f(-T)) > tol * 1e-6) T += 0.5;
    ArchValue numer = (1.0 / std::sqrt(2.0)) * trapezoid(f, -T, T, tol, tol * 1e-5);
    // L(s, eta_R) = pi^{-(s+1)/2} Gamma((s+1)/2)
    double L = std::pow(M_PI, -(s + 1) / 2) * std::exp(std::lgamma((s + 1) / 2));
    return (1.0 / L) * numer;
}

ArchComplex whittaker(int k, double xi, IwasawaTriple h) {
    if (h.a <= 0) throw BadContext("whittaker needs a > 0");
    double mag = std::pow(h.a, k / 2.0) * std::exp(-2 * M_PI * xi * h.a);
    double phase = 2 * M_PI * xi * h.b + k * h.theta;
    ArchComplex out;
    out.re = ArchValue::exact(mag * std::cos(phase));
    out.im = ArchValue::exact(mag * std::sin(phase));
    return out;
}

// ---------------------------------------------------------------------

namespace {

int sign_changes(const std::vector<QPoly>& sturm, const Rat& x) {
    int changes = 0, prev = 0;
    for (const auto& f : sturm) {
        Rat v = f.eval(x);
        int s = v == 0 ? 0 : (v > 0 ? 1 : -1);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

}  // namespace

std::vector<ArchValue> real_roots(const QPoly& f, double width) {
    if (f.degree() < 1) return {};
    std::vector<QPoly> sturm{f, f.derivative()};
    while (sturm.back().degree() > 0) {
        auto [q, r] = QPoly::divmod(sturm[sturm.size() - 2], sturm.back());
        (void)q;
        if (r.is_zero()) break;
        sturm.push_back(Rat(-1) * r);
    }
    // Cauchy bound
    Rat M(1);
    for (int i = 0; i < f.degree(); ++i) {
        Rat c = f.c[static_cast<size_t>(i)] / f.lead();
        if (c < 0) c = -c;
        if (c + 1 > M) M = c + 1;
    }
    struct Interval {
        Rat lo, hi;
        int count;
    };
    std::vector<Interval> work{{-M, M, 0}};
    work[0].count = sign_changes(sturm, work[0].lo) - sign_changes(sturm, work[0].hi);
    std::vector<Interval> isolated;
    while (!work.empty()) {
        Interval iv = work.back();
        work.pop_back();
        if (iv.count == 0) continue;
        if (iv.count == 1) {
            isolated.push_back(iv);
            continue;
        }
        Rat mid = (iv.lo + iv.hi) / 2;
        if (f.eval(mid) == 0) {
            // nudge the midpoint to keep endpoints off the roots
            mid = (iv.lo * 3 + iv.hi) / 4;
        }
        int left = sign_changes(sturm, iv.lo) - sign_changes(sturm, mid);
        work.push_back({iv.lo, mid, left});
        work.push_back({mid, iv.hi, iv.count - left});
    }
    std::vector<ArchValue> roots;
    for (auto& iv : isolated) {
        Rat lo = iv.lo, hi = iv.hi;
        auto sgn_at = [&](const Rat& x) {
            Rat v = f.eval(x);
            return v == 0 ? 0 : (v > 0 ? 1 : -1);
        };
        int slo = sgn_at(lo);
        while (Rat(hi - lo).get_d() > width) {
            Rat mid = (lo + hi) / 2;
            int sm = sgn_at(mid);
            if (sm == 0) {
                roots.push_back({mid.get_d(), width});
                slo = 2;   // mark resolved
                break;
            }
            if (sm == slo)
                lo = mid;
            else
                hi = mid;
        }
        if (slo != 2) roots.push_back({Rat((lo + hi) / 2).get_d(), Rat(hi - lo).get_d()});
    }
    std::sort(roots.begin(), roots.end(), [](const ArchValue& a, const ArchValue& b) {
        return a.v < b.v;
    });
    return roots;
}

RefinedInvariant refined_invariant(const InvariantVector& iv, const LocalFieldCtx& ctx) {
    const int m = iv.rank();
    SemiLiePair pair = semilie_from_invariants(iv, ctx);
    // beta = gamma + gamma^{-1} acts rationally on F_0^m
    FMat beta = pair.gamma + pair.gamma.inverse();
    QMat A, B;
    split_parts(beta, A, B);
    if (!B.is_zero()) throw std::logic_error("beta not rational");
    QPoly alpha0 = charpoly_poly(A);
    if (!poly_squarefree(alpha0))
        throw ReduciblePolynomial("beta is not separable; decompose factor-wise first");

    // trace form T(i,j) = tr(beta^{i+j}) and data r_i = u2 beta^i u1
    std::vector<QMat> pows;
    pows.push_back(QMat::identity(m, Rat(0)));
    for (int k = 1; k <= 2 * m; ++k) pows.push_back(pows.back() * A);
    auto trace = [&](const QMat& X) {
        Rat t(0);
        for (int i = 0; i < m; ++i) t += X(i, i);
        return t;
    };
    QMat T(m, m, Rat(0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) T(i, j) = trace(pows[static_cast<size_t>(i + j)]);
    if (T.det() == 0) throw SingularTraceForm("degenerate trace form");
    std::vector<Rat> rhs(static_cast<size_t>(m), Rat(0));
    for (int i = 0; i < m; ++i) {
        auto w = pows[static_cast<size_t>(i)].apply(pair.u1);
        Rat acc(0);
        for (int t2 = 0; t2 < m; ++t2) acc += pair.u2[static_cast<size_t>(t2)] * w[static_cast<size_t>(t2)];
        rhs[static_cast<size_t>(i)] = acc;
    }
    RefinedInvariant out;
    out.alpha0 = alpha0;
    out.xiPrime = T.solve(rhs);
    out.coarse = rhs[0];
    if (iv.moments[0].b != 0 || out.coarse != iv.moments[0].a)
        throw std::logic_error("trace of xi' does not match the coarse invariant");
    for (const ArchValue& root : real_roots(alpha0)) {
        // evaluate sum x_j root^j with interval propagation
        ArchValue acc = ArchValue::exact(0.0);
        ArchValue pw = ArchValue::exact(1.0);
        ArchValue r = root;
        for (int j = 0; j < m; ++j) {
            acc = acc + out.xiPrime[static_cast<size_t>(j)].get_d() * pw;
            pw = pw * r;
        }
        out.embeddings.push_back(acc);
    }
    return out;
}

}  // namespace jr
