#include "jr/cyclo.hpp"

#include <cmath>
#include <sstream>

namespace jr {

namespace {
long phi_of_prime_power(long p, long N) { return N == 1 ? 1 : (N / p) * (p - 1); }
}

void Cyclo::reduce(long e, const Rat& v) {
    if (v == 0) return;
    e %= N_;
    if (e < 0) e += N_;
    long phi = phi_of_prime_power(p_, N_);
    if (e < phi) {
        auto it = c_.find(e);
        if (it == c_.end()) {
            c_[e] = v;
            if (c_[e] == 0) c_.erase(e);
        } else {
            it->second += v;
            if (it->second == 0) c_.erase(it);
        }
        return;
    }
    // zeta^e with e >= phi(N): use 1 + zeta^{N/p} + ... + zeta^{(p-1)N/p} = 0,
    // i.e. zeta^{(p-1)N/p + t} = -sum_{i<p-1} zeta^{iN/p + t}.
    long step = N_ / p_;
    long t = e - (p_ - 1) * step;
    for (long i = 0; i < p_ - 1; ++i) reduce(t + i * step, -v);
}

void Cyclo::add(long e, const Rat& v) { reduce(e, v); }

Cyclo Cyclo::root_of_unity(long p, const Rat& r) {
    // r reduced mod 1 must have p-power denominator
    Rat fr = r - Rat(mpz_class(r.get_num() / r.get_den()));
    if (fr < 0) fr += 1;
    Int den = fr.get_den();
    long N = 1;
    while (den > 1) {
        if (!mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(p)))
            throw BadContext("phase denominator is not a p-power");
        mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(p));
        N *= p;
    }
    if (N == 1) {
        Cyclo out;
        out.add(0, Rat(1));
        return out;
    }
    Cyclo out(p, N);
    long e = mpz_class(fr.get_num() * (N / fr.get_den().get_si())).get_si();
    out.add(e, Rat(1));
    return out;
}

bool Cyclo::is_rational() const {
    for (const auto& [e, v] : c_)
        if (e != 0 && v != 0) return false;
    return true;
}

Rat Cyclo::rational_part() const {
    auto it = c_.find(0);
    return it == c_.end() ? Rat(0) : it->second;
}

Cyclo Cyclo::lifted_to(long p, long N) const {
    if (N_ == N) return *this;
    if (N_ > N) throw BadContext("cannot lower cyclotomic level");
    Cyclo out(p, N);
    long f = N / N_;
    for (const auto& [e, v] : c_) out.add(e * f, v);
    return out;
}

std::pair<Cyclo, Cyclo> common_level(const Cyclo& x, const Cyclo& y) {
    long p = std::max(x.p_, y.p_);
    if (x.p_ != 0 && y.p_ != 0 && x.p_ != y.p_)
        throw BadContext("mixed cyclotomic primes");
    long N = std::max(x.N_, y.N_);
    return {x.lifted_to(p, N), y.lifted_to(p, N)};
}

Cyclo operator+(const Cyclo& x, const Cyclo& y) {
    auto [a, b] = common_level(x, y);
    for (const auto& [e, v] : b.c_) a.add(e, v);
    return a;
}

Cyclo operator-(const Cyclo& x, const Cyclo& y) {
    auto [a, b] = common_level(x, y);
    for (const auto& [e, v] : b.c_) a.add(e, -v);
    return a;
}

Cyclo operator*(const Cyclo& x, const Cyclo& y) {
    auto [a, b] = common_level(x, y);
    Cyclo out(a.p_, a.N_);
    for (const auto& [e1, v1] : a.c_)
        for (const auto& [e2, v2] : b.c_) out.add(e1 + e2, v1 * v2);
    return out;
}

Cyclo operator*(const Rat& c, const Cyclo& x) {
    Cyclo out(x.p_, x.N_);
    for (const auto& [e, v] : x.c_) out.add(e, c * v);
    return out;
}

bool operator==(const Cyclo& x, const Cyclo& y) {
    auto [a, b] = common_level(x, y);
    return a.c_ == b.c_;
}

std::complex<double> Cyclo::to_complex() const {
    std::complex<double> acc(0.0, 0.0);
    const double tau = 6.283185307179586476925286766559;
    for (const auto& [e, v] : c_) {
        double ang = tau * static_cast<double>(e) / static_cast<double>(N_);
        acc += v.get_d() * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return acc;
}

std::string Cyclo::str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, v] : c_) {
        if (!first) os << " + ";
        first = false;
        os << rat_to_string(v);
        if (e != 0) os << "*z" << N_ << "^" << e;
    }
    return os.str();
}

AlgScaled AlgScaled::half_power(long p, long h) {
    long k = (h >= 0) ? h / 2 : -((-h + 1) / 2);
    long r = h - 2 * k;   // 0 or 1
    Rat scale = p_power(p, k);
    AlgScaled out(p);
    if (r == 0)
        out.a = Cyclo(scale);
    else
        out.b = Cyclo(scale);
    return out;
}

AlgScaled operator+(const AlgScaled& x, const AlgScaled& y) {
    long p = x.p ? x.p : y.p;
    return AlgScaled(p, x.a + y.a, x.b + y.b);
}
AlgScaled operator-(const AlgScaled& x, const AlgScaled& y) {
    long p = x.p ? x.p : y.p;
    return AlgScaled(p, x.a - y.a, x.b - y.b);
}
AlgScaled operator*(const AlgScaled& x, const AlgScaled& y) {
    long p = x.p ? x.p : y.p;
    Cyclo pr = Cyclo(Rat(p));
    return AlgScaled(p, x.a * y.a + pr * (x.b * y.b), x.a * y.b + x.b * y.a);
}

std::complex<double> AlgScaled::to_complex() const {
    double sq = p ? std::sqrt(static_cast<double>(p)) : 1.0;
    return a.to_complex() + sq * b.to_complex();
}

std::string AlgScaled::str() const {
    if (b.is_zero()) return a.str();
    std::ostringstream os;
    os << a.str() << " + (" << b.str() << ")*sqrt(" << p << ")";
    return os.str();
}

}  // namespace jr
