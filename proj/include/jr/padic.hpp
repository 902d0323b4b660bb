#pragma once

#include <gmpxx.h>
#include <limits>
#include <stdexcept>
#include <string>

namespace jr {

using Rat = mpq_class;
using Int = mpz_class;

struct ZeroArgument : std::domain_error {
    using std::domain_error::domain_error;
};
struct BadContext : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Sentinel for v(0) = +infinity.
inline constexpr long VAL_INF = std::numeric_limits<long>::max();

long valuation_int(const Int& n, long p);   // v_p(n), VAL_INF at 0
long valuation_rat(const Rat& x, long p);   // v_p(num) - v_p(den)

bool is_prime(long n);
int legendre_symbol(long a, long p);        // (a|p) for odd prime p, in {-1,0,1}

// Hilbert symbol (a,b)_p for an odd prime p and nonzero rationals a, b.
int hilbert_symbol(const Rat& a, const Rat& b, long p);

// p-free part: x / p^{v_p(x)}.
Rat unit_part(const Rat& x, long p);

Rat p_power(long p, long k);   // p^k as a rational, k may be negative

/// F_0 = Q_p and F = Q_p(sqrt(d)), modelled globally inside Q(sqrt(d)).
/// Requires p odd prime, d a squarefree nonzero integer with (d|p) = -1,
/// so that F/F_0 is the unramified quadratic extension and q = p.
struct LocalFieldCtx {
    long p;
    long d;
    int psiLevel = 0;   // level of the additive character psi

    LocalFieldCtx(long p_, long d_);

    long q() const { return p; }
};

/// Element a + b*sqrt(d) of Q(sqrt(d)).  Carries its own d so values from
/// different fields cannot be mixed silently.
struct QuadElem {
    long d = 0;
    Rat a, b;

    QuadElem() = default;
    QuadElem(long d_, Rat a_, Rat b_ = Rat(0)) : d(d_), a(std::move(a_)), b(std::move(b_)) {}

    static QuadElem zero(long d) { return QuadElem(d, 0, 0); }
    static QuadElem one(long d) { return QuadElem(d, 1, 0); }
    static QuadElem sqrt_d(long d) { return QuadElem(d, 0, 1); }

    bool is_zero() const { return a == 0 && b == 0; }
    bool is_rational() const { return b == 0; }

    QuadElem conj() const { return QuadElem(d, a, -b); }
    Rat norm() const { return a * a - Rat(d) * b * b; }   // x * conj(x)
    Rat trace() const { return 2 * a; }

    QuadElem operator-() const { return QuadElem(d, -a, -b); }
    QuadElem inv() const;

    friend QuadElem operator+(const QuadElem& x, const QuadElem& y);
    friend QuadElem operator-(const QuadElem& x, const QuadElem& y);
    friend QuadElem operator*(const QuadElem& x, const QuadElem& y);
    friend QuadElem operator/(const QuadElem& x, const QuadElem& y);
    friend bool operator==(const QuadElem& x, const QuadElem& y) {
        return x.a == y.a && x.b == y.b;
    }
    friend bool operator!=(const QuadElem& x, const QuadElem& y) { return !(x == y); }

    QuadElem& operator+=(const QuadElem& y) { return *this = *this + y; }
    QuadElem& operator-=(const QuadElem& y) { return *this = *this - y; }
    QuadElem& operator*=(const QuadElem& y) { return *this = *this * y; }
    QuadElem& operator/=(const QuadElem& y) { return *this = *this / y; }
};

QuadElem operator*(const Rat& c, const QuadElem& x);

/// v_F(a + b sqrt d) = min(v_p(a), v_p(b)); VAL_INF at 0.  Unramified, so
/// this extends v_p with the same value group.
long valuation(const QuadElem& x, const LocalFieldCtx& ctx);

/// eta(x) = (-1)^{v_p(x)} on Q^x (the quadratic character of F/F_0).
int eta(const Rat& x, const LocalFieldCtx& ctx);

/// eta-tilde(x) = (-1)^{v_F(x)} on F^x, the natural unramified extension.
int eta_tilde(const QuadElem& x, const LocalFieldCtx& ctx);

std::string rat_to_string(const Rat& x);
Rat rat_from_string(const std::string& s);

}  // namespace jr
