#pragma once

#include "jr/padic.hpp"

#include <map>

namespace jr {

/// Laurent polynomial in X = q^{-s} with rational coefficients.
struct LaurentX {
    std::map<long, Rat> coeffs;   // degree -> coefficient, zeros dropped

    LaurentX() = default;
    static LaurentX monomial(const Rat& c, long k) {
        LaurentX f;
        if (c != 0) f.coeffs[k] = c;
        return f;
    }
    static LaurentX zero() { return LaurentX(); }
    static LaurentX one() { return monomial(Rat(1), 0); }

    bool is_zero() const { return coeffs.empty(); }

    void add_term(long k, const Rat& c) {
        if (c == 0) return;
        auto it = coeffs.find(k);
        if (it == coeffs.end()) {
            coeffs[k] = c;
        } else {
            it->second += c;
            if (it->second == 0) coeffs.erase(it);
        }
    }

    friend LaurentX operator+(const LaurentX& f, const LaurentX& g) {
        LaurentX h = f;
        for (const auto& [k, c] : g.coeffs) h.add_term(k, c);
        return h;
    }
    friend LaurentX operator-(const LaurentX& f, const LaurentX& g) {
        LaurentX h = f;
        for (const auto& [k, c] : g.coeffs) h.add_term(k, -c);
        return h;
    }
    friend LaurentX operator*(const LaurentX& f, const LaurentX& g) {
        LaurentX h;
        for (const auto& [k1, c1] : f.coeffs)
            for (const auto& [k2, c2] : g.coeffs) h.add_term(k1 + k2, c1 * c2);
        return h;
    }
    friend bool operator==(const LaurentX& f, const LaurentX& g) { return f.coeffs == g.coeffs; }
    friend bool operator!=(const LaurentX& f, const LaurentX& g) { return !(f == g); }

    Rat value_at_one() const {
        Rat s(0);
        for (const auto& [k, c] : coeffs) s += c;
        return s;
    }
    /// Coefficient of log q in d/ds at s=0: d/ds X^k = -k log q X^k.
    Rat minus_degree_weighted_sum() const {
        Rat s(0);
        for (const auto& [k, c] : coeffs) s -= Rat(k) * c;
        return s;
    }
    /// Numeric value at real s for residue cardinality q.
    double eval(double q, double s) const;
};

/// omega * Orb(., 0) and the log q coefficient of omega * dOrb/ds at 0.
struct SpecialValues {
    Rat value0;
    Rat dvalue0;
};

inline SpecialValues special_values(const LaurentX& P, int omega) {
    SpecialValues sv;
    sv.value0 = Rat(omega) * P.value_at_one();
    sv.dvalue0 = Rat(omega) * P.minus_degree_weighted_sum();
    return sv;
}

}  // namespace jr
