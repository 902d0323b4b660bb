#pragma once

#include "jr/matrix.hpp"

#include <vector>

namespace jr {

// Polynomials, coefficients low-to-high, trailing zeros trimmed.
template <class T>
struct Poly {
    std::vector<T> c;

    Poly() = default;
    explicit Poly(std::vector<T> coeffs) : c(std::move(coeffs)) { trim(); }

    void trim() {
        while (!c.empty() && is_zero_elem(c.back())) c.pop_back();
    }
    int degree() const { return static_cast<int>(c.size()) - 1; }   // -1 for 0
    bool is_zero() const { return c.empty(); }
    const T& lead() const { return c.back(); }

    T at(int k, const T& sample) const {
        if (k < 0 || k >= static_cast<int>(c.size())) return zero_like(sample);
        return c[static_cast<size_t>(k)];
    }

    T eval(const T& x) const {
        if (c.empty()) return zero_like(x);
        T acc = zero_like(x);
        for (int k = degree(); k >= 0; --k) acc = acc * x + c[static_cast<size_t>(k)];
        return acc;
    }

    Poly derivative() const {
        if (c.size() <= 1) return Poly();
        std::vector<T> d;
        d.reserve(c.size() - 1);
        for (size_t k = 1; k < c.size(); ++k) d.push_back(Rat(static_cast<long>(k)) * c[k]);
        return Poly(std::move(d));
    }

    friend Poly operator+(const Poly& f, const Poly& g) {
        std::vector<T> r = f.c;
        if (g.c.size() > r.size()) r.resize(g.c.size(), zero_like(g.c[0]));
        for (size_t k = 0; k < g.c.size(); ++k) r[k] = r[k] + g.c[k];
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& f, const Poly& g) {
        std::vector<T> r = f.c;
        if (g.c.size() > r.size()) r.resize(g.c.size(), zero_like(g.c[0]));
        for (size_t k = 0; k < g.c.size(); ++k) r[k] = r[k] - g.c[k];
        return Poly(std::move(r));
    }
    friend Poly operator*(const Poly& f, const Poly& g) {
        if (f.is_zero() || g.is_zero()) return Poly();
        std::vector<T> r(f.c.size() + g.c.size() - 1, zero_like(f.c[0]));
        for (size_t i = 0; i < f.c.size(); ++i)
            for (size_t j = 0; j < g.c.size(); ++j) r[i + j] = r[i + j] + f.c[i] * g.c[j];
        return Poly(std::move(r));
    }
    friend Poly operator*(const T& s, const Poly& f) {
        std::vector<T> r = f.c;
        for (auto& x : r) x = s * x;
        return Poly(std::move(r));
    }
    friend bool operator==(const Poly& f, const Poly& g) { return f.c == g.c; }
    friend bool operator!=(const Poly& f, const Poly& g) { return !(f == g); }

    // Euclidean division over a field; returns (quotient, remainder).
    static std::pair<Poly, Poly> divmod(const Poly& f, const Poly& g) {
        if (g.is_zero()) throw std::domain_error("poly division by zero");
        Poly r = f, q;
        q.c.assign(f.c.size(), zero_like(g.lead()));
        T linv = one_like(g.lead()) / g.lead();
        while (!r.is_zero() && r.degree() >= g.degree()) {
            int k = r.degree() - g.degree();
            T coef = r.lead() * linv;
            q.c[static_cast<size_t>(k)] = q.c[static_cast<size_t>(k)] + coef;
            for (int j = 0; j <= g.degree(); ++j)
                r.c[static_cast<size_t>(j + k)] =
                    r.c[static_cast<size_t>(j + k)] - coef * g.c[static_cast<size_t>(j)];
            r.trim();
        }
        q.trim();
        return {q, r};
    }

    Poly monic() const {
        if (is_zero()) return *this;
        return (one_like(lead()) / lead()) * (*this);
    }
};

template <class T>
Poly<T> poly_gcd(Poly<T> f, Poly<T> g) {
    while (!g.is_zero()) {
        auto [q, r] = Poly<T>::divmod(f, g);
        f = g;
        g = r;
    }
    return f.monic();
}

template <class T>
bool poly_squarefree(const Poly<T>& f) {
    if (f.degree() <= 1) return true;
    return poly_gcd(f, f.derivative()).degree() == 0;
}

using QPoly = Poly<Rat>;
using FPoly = Poly<QuadElem>;

inline FPoly lift_poly(long d, const QPoly& f) {
    std::vector<QuadElem> c;
    c.reserve(f.c.size());
    for (const auto& x : f.c) c.emplace_back(d, x);
    return FPoly(std::move(c));
}

// Coefficient-wise Galois conjugate.
inline FPoly conj_poly(const FPoly& f) {
    std::vector<QuadElem> c = f.c;
    for (auto& x : c) x = x.conj();
    return FPoly(std::move(c));
}

template <class T>
Poly<T> charpoly_poly(const Mat<T>& A) {
    return Poly<T>(charpoly(A));
}

}  // namespace jr
