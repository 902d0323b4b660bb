#pragma once

#include "jr/padic.hpp"

#include <complex>
#include <map>

namespace jr {

/// Exact element of Q(zeta_N) for N = p^k (N = 1 means Q), held in the
/// canonical basis {zeta^j : 0 <= j < phi(N)}.
class Cyclo {
  public:
    Cyclo() : p_(0), N_(1) {}
    explicit Cyclo(const Rat& c) : p_(0), N_(1) { add(0, c); }
    Cyclo(long p, long N) : p_(p), N_(N) {}

    static Cyclo zero() { return Cyclo(); }
    static Cyclo one() { return Cyclo(Rat(1)); }
    /// e^{2 pi i r} for r with p-power denominator.
    static Cyclo root_of_unity(long p, const Rat& r);

    bool is_zero() const { return c_.empty(); }
    bool is_rational() const;
    Rat rational_part() const;   // coefficient of zeta^0

    long modulus() const { return N_; }

    friend Cyclo operator+(const Cyclo& x, const Cyclo& y);
    friend Cyclo operator-(const Cyclo& x, const Cyclo& y);
    friend Cyclo operator*(const Cyclo& x, const Cyclo& y);
    friend Cyclo operator*(const Rat& c, const Cyclo& x);
    Cyclo operator-() const { return Rat(-1) * *this; }
    friend bool operator==(const Cyclo& x, const Cyclo& y);
    friend bool operator!=(const Cyclo& x, const Cyclo& y) { return !(x == y); }

    std::complex<double> to_complex() const;
    std::string str() const;

  private:
    long p_;   // 0 when N_ == 1
    long N_;   // p^k
    std::map<long, Rat> c_;   // exponent -> coefficient, canonical basis

    void add(long e, const Rat& v);
    void reduce(long e, const Rat& v);         // fold zeta^e into the basis
    Cyclo lifted_to(long p, long N) const;     // embed into a larger p-power level
    friend std::pair<Cyclo, Cyclo> common_level(const Cyclo& x, const Cyclo& y);
};

/// Scalar of the form A + B sqrt(p) with A, B in Q(zeta_{p^k}); the exact
/// coefficient ring for finite-place Schwartz functions (volumes contribute
/// half-integral p-powers, psi-phases contribute p-power roots of unity).
struct AlgScaled {
    long p = 0;
    Cyclo a, b;   // a + b sqrt(p)

    AlgScaled() = default;
    explicit AlgScaled(long p_) : p(p_) {}
    AlgScaled(long p_, Cyclo a_, Cyclo b_) : p(p_), a(std::move(a_)), b(std::move(b_)) {}

    static AlgScaled from_rat(long p, const Rat& r) { return AlgScaled(p, Cyclo(r), Cyclo()); }
    static AlgScaled one(long p) { return from_rat(p, Rat(1)); }
    /// p^{h/2} for integer h.
    static AlgScaled half_power(long p, long h);

    bool is_zero() const { return a.is_zero() && b.is_zero(); }

    friend AlgScaled operator+(const AlgScaled& x, const AlgScaled& y);
    friend AlgScaled operator-(const AlgScaled& x, const AlgScaled& y);
    friend AlgScaled operator*(const AlgScaled& x, const AlgScaled& y);
    friend bool operator==(const AlgScaled& x, const AlgScaled& y) {
        return x.a == y.a && x.b == y.b;
    }
    friend bool operator!=(const AlgScaled& x, const AlgScaled& y) { return !(x == y); }

    std::complex<double> to_complex() const;
    std::string str() const;
};

}  // namespace jr
