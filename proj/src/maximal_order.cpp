#include "jr/orbital.hpp"

#include <functional>

namespace jr {

namespace {

// Residue field O_F / (p) = F_p(delta), delta^2 = d mod p.
struct Fp2 {
    long p, d;
    long a, b;   // a + b delta, both in [0, p)

    Fp2(long p_, long d_, long a_ = 0, long b_ = 0) : p(p_), d(d_) {
        a = ((a_ % p) + p) % p;
        b = ((b_ % p) + p) % p;
    }
    bool is_zero() const { return a == 0 && b == 0; }
    friend Fp2 operator+(const Fp2& x, const Fp2& y) { return Fp2(x.p, x.d, x.a + y.a, x.b + y.b); }
    friend Fp2 operator-(const Fp2& x, const Fp2& y) {
        return Fp2(x.p, x.d, x.a - y.a + x.p, x.b - y.b + x.p);
    }
    friend Fp2 operator*(const Fp2& x, const Fp2& y) {
        long dd = ((x.d % x.p) + x.p) % x.p;
        return Fp2(x.p, x.d, x.a * y.a + dd * x.b * y.b, x.a * y.b + x.b * y.a);
    }
    Fp2 inv() const {
        // (a + b delta)^{-1} = (a - b delta) / (a^2 - d b^2)
        long dd = ((d % p) + p) % p;
        long n = ((a * a - dd * b * b) % p + p) % p;
        if (n == 0) throw std::domain_error("Fp2 inverse of zero");
        long ninv = 1;
        long base = n, e = p - 2;
        while (e) {
            if (e & 1) ninv = (ninv * base) % p;
            base = (base * base) % p;
            e >>= 1;
        }
        return Fp2(p, d, a * ninv % p, (p - b % p) * ninv % p);
    }
    friend bool operator==(const Fp2& x, const Fp2& y) { return x.a == y.a && x.b == y.b; }
};

using Fp2Poly = std::vector<Fp2>;   // low-to-high, trimmed

void trim(Fp2Poly& f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
}

Fp2Poly reduce_mod_p(const FPoly& f, const LocalFieldCtx& ctx) {
    Fp2Poly out;
    for (const auto& c : f.c) {
        if (!in_OF(c, ctx.p)) throw NotIntegral("coefficient not integral");
        Rat ra = reduce_mod_p_power(c.a, ctx.p, 1);
        Rat rb = reduce_mod_p_power(c.b, ctx.p, 1);
        out.emplace_back(ctx.p, ctx.d, ra.get_num().get_si(), rb.get_num().get_si());
    }
    trim(out);
    return out;
}

Fp2Poly derivative(const Fp2Poly& f, long p, long d) {
    Fp2Poly out;
    for (size_t k = 1; k < f.size(); ++k)
        out.push_back(Fp2(p, d, static_cast<long>(k % static_cast<size_t>(p)), 0) * f[k]);
    trim(out);
    return out;
}

Fp2Poly divmod(const Fp2Poly& f, const Fp2Poly& g, Fp2Poly* quot) {
    Fp2Poly r = f;
    Fp2Poly q(f.size(), Fp2(g.empty() ? 3 : g[0].p, g.empty() ? 1 : g[0].d));
    if (g.empty()) throw std::domain_error("Fp2 division by zero");
    Fp2 linv = g.back().inv();
    while (r.size() >= g.size() && !r.empty()) {
        size_t k = r.size() - g.size();
        Fp2 c = r.back() * linv;
        q[k] = q[k] + c;
        for (size_t j = 0; j < g.size(); ++j) r[j + k] = r[j + k] - c * g[j];
        trim(r);
    }
    if (quot) {
        trim(q);
        *quot = q;
    }
    return r;
}

Fp2Poly gcd(Fp2Poly f, Fp2Poly g) {
    trim(f);
    trim(g);
    while (!g.empty()) {
        Fp2Poly r = divmod(f, g, nullptr);
        f = g;
        g = r;
    }
    if (!f.empty()) {
        Fp2 linv = f.back().inv();
        for (auto& c : f) c = c * linv;
    }
    return f;
}

// Canonical integral lift of a residue polynomial.
FPoly lift_from_residue(const Fp2Poly& f, const LocalFieldCtx& ctx) {
    std::vector<QuadElem> c;
    c.reserve(f.size());
    for (const auto& x : f) c.emplace_back(ctx.d, Rat(x.a), Rat(x.b));
    return FPoly(std::move(c));
}

}  // namespace

long discriminant_valuation(const FPoly& alpha, const LocalFieldCtx& ctx) {
    // disc = (-1)^{m(m-1)/2} Res(alpha, alpha') for monic alpha
    std::function<QuadElem(FPoly, FPoly)> res = [&](FPoly f, FPoly g) -> QuadElem {
        QuadElem one = QuadElem::one(ctx.d);
        if (f.is_zero() || g.is_zero()) return QuadElem::zero(ctx.d);
        if (g.degree() == 0) {
            QuadElem acc = one;
            for (int i = 0; i < f.degree(); ++i) acc = acc * g.lead();
            return acc;
        }
        auto [q, r] = FPoly::divmod(f, g);
        (void)q;
        if (r.is_zero()) return QuadElem::zero(ctx.d);
        QuadElem sign = ((f.degree() * g.degree()) % 2) ? -one : one;
        QuadElem lcpow = one;
        for (int i = 0; i < f.degree() - r.degree(); ++i) lcpow = lcpow * g.lead();
        return sign * lcpow * res(g, r);
    };
    QuadElem disc = res(alpha, alpha.derivative());
    if (disc.is_zero()) return VAL_INF;
    return valuation(disc, ctx);
}

bool is_maximal_order(const FPoly& alpha, const LocalFieldCtx& ctx) {
    if (alpha.degree() < 1) throw PreconditionFailed("constant polynomial");
    for (const auto& c : alpha.c)
        if (!in_OF(c, ctx.p)) throw NotIntegral("charpoly not integral");
    if (!poly_squarefree(alpha)) throw PreconditionFailed("charpoly not squarefree over F");

    Fp2Poly abar = reduce_mod_p(alpha, ctx);
    if (abar.size() != alpha.c.size())
        throw NotIntegral("charpoly not monic after reduction");
    Fp2Poly sq = gcd(abar, derivative(abar, ctx.p, ctx.d));
    if (sq.size() <= 1) return true;   // separable residue: disc is a unit

    // Dedekind criterion: gbar = radical, hbar = abar / gbar,
    // Fstar = (g h - alpha)/p, maximal iff gcd(gbar, hbar, Fbar) = 1.
    Fp2Poly gbar;
    divmod(abar, sq, &gbar);            // radical = abar / gcd(abar, abar')
    Fp2Poly hbar;
    divmod(abar, gbar, &hbar);
    FPoly g = lift_from_residue(gbar, ctx);
    FPoly h = lift_from_residue(hbar, ctx);
    FPoly diff = g * h - alpha;
    std::vector<QuadElem> fc;
    for (const auto& c : diff.c) {
        QuadElem scaled = Rat(1, ctx.p) * c;
        if (!in_OF(scaled, ctx.p)) throw std::logic_error("Dedekind lift not divisible by p");
        fc.push_back(scaled);
    }
    Fp2Poly Fbar = reduce_mod_p(FPoly(std::move(fc)), ctx);
    Fp2Poly g1 = gcd(gcd(gbar, hbar), Fbar);
    return g1.size() <= 1;
}

}  // namespace jr
