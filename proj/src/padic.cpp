#include "jr/padic.hpp"

namespace jr {

long valuation_int(const Int& n, long p) {
    if (n == 0) return VAL_INF;
    Int m = n;
    long v = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        ++v;
    }
    return v;
}

long valuation_rat(const Rat& x, long p) {
    if (x == 0) return VAL_INF;
    return valuation_int(x.get_num(), p) - valuation_int(x.get_den(), p);
}

bool is_prime(long n) {
    if (n < 2) return false;
    Int z(n);
    return mpz_probab_prime_p(z.get_mpz_t(), 40) != 0;
}

int legendre_symbol(long a, long p) {
    Int az(a), pz(p);
    return mpz_legendre(az.get_mpz_t(), pz.get_mpz_t());
}

Rat p_power(long p, long k) {
    Int pw;
    Int base(p);
    mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(k >= 0 ? k : -k));
    return k >= 0 ? Rat(pw) : Rat(1) / Rat(pw);
}

Rat unit_part(const Rat& x, long p) {
    if (x == 0) throw ZeroArgument("unit_part of zero");
    return x / p_power(p, valuation_rat(x, p));
}

int hilbert_symbol(const Rat& a, const Rat& b, long p) {
    if (a == 0 || b == 0) throw ZeroArgument("hilbert symbol of zero");
    if (!is_prime(p)) throw BadContext("hilbert_symbol: prime required");
    long al = valuation_rat(a, p), be = valuation_rat(b, p);
    Rat u = unit_part(a, p), w = unit_part(b, p);
    if (p == 2) {
        // unit residue mod 8 of x/y (odd x, y): x*y mod 8
        auto res8 = [](const Rat& r) {
            Int n = (r.get_num() * r.get_den()) % 8;
            if (n < 0) n += 8;
            return n.get_si();
        };
        auto eps = [](long n) { return ((n - 1) / 2) % 2; };         // (n-1)/2 mod 2
        auto omg = [](long n) { return ((n * n - 1) / 8) % 2; };     // (n^2-1)/8 mod 2
        long un = res8(u), wn = res8(w);
        long e = eps(un) * eps(wn) + al * omg(wn) + be * omg(un);
        return (e % 2) ? -1 : 1;
    }
    // (a,b)_p = (-1)^{al*be*eps} (u|p)^be (w|p)^al with eps = (p-1)/2 mod 2.
    auto legendre_of_rat = [&](const Rat& r) {
        Int num = r.get_num() % p;
        Int den = r.get_den() % p;
        Int pr(p);
        int ln = mpz_legendre(num.get_mpz_t(), pr.get_mpz_t());
        int ld = mpz_legendre(den.get_mpz_t(), pr.get_mpz_t());
        return ln * ld;
    };
    int s = 1;
    if ((al % 2) && (be % 2) && ((p - 1) / 2) % 2) s = -s;
    if (be % 2) s *= legendre_of_rat(u);
    if (al % 2) s *= legendre_of_rat(w);
    return s;
}

LocalFieldCtx::LocalFieldCtx(long p_, long d_) : p(p_), d(d_) {
    if (p < 3 || !is_prime(p)) throw BadContext("p must be an odd prime");
    if (d == 0) throw BadContext("d must be nonzero");
    if (d % p == 0) throw BadContext("d must be a unit mod p (unramified case)");
    // squarefree check
    for (long k = 2; k * k <= (d > 0 ? d : -d); ++k)
        if (d % (k * k) == 0) throw BadContext("d must be squarefree");
    if (legendre_symbol(d, p) != -1)
        throw BadContext("d must be a quadratic nonresidue mod p");
}

QuadElem QuadElem::inv() const {
    if (is_zero()) throw ZeroArgument("inverse of zero");
    Rat n = norm();
    return QuadElem(d, a / n, -b / n);
}

QuadElem operator+(const QuadElem& x, const QuadElem& y) {
    if (x.d != y.d) throw BadContext("mixed quadratic fields");
    return QuadElem(x.d, x.a + y.a, x.b + y.b);
}
QuadElem operator-(const QuadElem& x, const QuadElem& y) {
    if (x.d != y.d) throw BadContext("mixed quadratic fields");
    return QuadElem(x.d, x.a - y.a, x.b - y.b);
}
QuadElem operator*(const QuadElem& x, const QuadElem& y) {
    if (x.d != y.d) throw BadContext("mixed quadratic fields");
    return QuadElem(x.d, x.a * y.a + Rat(x.d) * x.b * y.b, x.a * y.b + x.b * y.a);
}
QuadElem operator/(const QuadElem& x, const QuadElem& y) { return x * y.inv(); }

QuadElem operator*(const Rat& c, const QuadElem& x) { return QuadElem(x.d, c * x.a, c * x.b); }

long valuation(const QuadElem& x, const LocalFieldCtx& ctx) {
    if (x.d != ctx.d) throw BadContext("element does not belong to ctx field");
    long va = valuation_rat(x.a, ctx.p);
    long vb = valuation_rat(x.b, ctx.p);
    return va < vb ? va : vb;
}

int eta(const Rat& x, const LocalFieldCtx& ctx) {
    if (x == 0) throw ZeroArgument("eta(0)");
    return (valuation_rat(x, ctx.p) % 2) ? -1 : 1;
}

int eta_tilde(const QuadElem& x, const LocalFieldCtx& ctx) {
    if (x.is_zero()) throw ZeroArgument("eta_tilde(0)");
    return (valuation(x, ctx) % 2) ? -1 : 1;
}

std::string rat_to_string(const Rat& x) {
    Rat c(x);
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rat rat_from_string(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    r.canonicalize();
    return r;
}

}  // namespace jr
