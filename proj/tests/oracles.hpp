#pragma once

// Independent oracles used by the test suites.  Everything here is kept
// deliberately separate from the library implementation paths it checks.

#include "jr/laurent.hpp"
#include "jr/padic.hpp"

#include <algorithm>
#include <vector>

namespace jr::oracles {

// Gaussian binomial [n k]_p as an exact integer.
inline Int gaussian_binomial(long n, long k, long p) {
    if (k < 0 || k > n) return 0;
    Int num(1), den(1);
    for (long i = 0; i < k; ++i) {
        Int pn, pk;
        Int base(p);
        mpz_pow_ui(pn.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(n - i));
        mpz_pow_ui(pk.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(i + 1));
        num *= pn - 1;
        den *= pk - 1;
    }
    return num / den;
}

// Conjugate partition.
inline std::vector<long> conjugate(const std::vector<long>& lam) {
    std::vector<long> out;
    if (lam.empty()) return out;
    long maxPart = *std::max_element(lam.begin(), lam.end());
    for (long i = 1; i <= maxPart; ++i) {
        long c = 0;
        for (long x : lam)
            if (x >= i) ++c;
        out.push_back(c);
    }
    return out;
}

// Number of subgroups of type nu inside an abelian p-group of type lam
// (both partitions, weakly decreasing): the classical formula
//   prod_i p^{nu'_{i+1}(lam'_i - nu'_i)} * [lam'_i - nu'_{i+1}, nu'_i - nu'_{i+1}]_p.
inline Int subgroup_count_of_type(const std::vector<long>& lam, const std::vector<long>& nu,
                                  long p) {
    auto lc = conjugate(lam), nc = conjugate(nu);
    size_t len = std::max(lc.size(), nc.size());
    lc.resize(len + 1, 0);
    nc.resize(len + 1, 0);
    Int total(1);
    for (size_t i = 0; i < len; ++i) {
        long l = lc[i], n = nc[i], n1 = nc[i + 1];
        Int pw;
        Int base(p);
        mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(n1 * (l - n)));
        total *= pw * gaussian_binomial(l - n1, n - n1, p);
    }
    return total;
}

// Total number of subgroups of the abelian p-group of type lam.
inline Int total_subgroups(const std::vector<long>& lam, long p) {
    std::vector<long> sorted = lam;
    std::sort(sorted.rbegin(), sorted.rend());
    while (!sorted.empty() && sorted.back() == 0) sorted.pop_back();
    // enumerate subpartitions nu with nu_i <= lam_i
    Int total(0);
    std::vector<long> nu(sorted.size(), 0);
    while (true) {
        // check weakly decreasing
        bool ok = true;
        for (size_t i = 1; i < nu.size(); ++i) ok = ok && nu[i] <= nu[i - 1];
        if (ok) {
            std::vector<long> trimmed = nu;
            while (!trimmed.empty() && trimmed.back() == 0) trimmed.pop_back();
            total += subgroup_count_of_type(sorted, trimmed, p);
        }
        size_t pos = 0;
        while (pos < nu.size()) {
            if (++nu[pos] <= sorted[pos]) break;
            nu[pos] = 0;
            ++pos;
        }
        if (pos == nu.size()) break;
    }
    return total;
}

// Rank-one semi-Lie orbital integral by direct enumeration of the chain of
// lattices p^k Z_(p), -v(u2) <= k <= v(u1); gamma is a norm-one scalar.
inline LaurentX orb_gl_rank1(long vu1, long vu2) {
    LaurentX out;
    for (long k = -vu2; k <= vu1; ++k) out.add_term(k, Rat((k % 2) ? -1 : 1));
    return out;
}

}  // namespace jr::oracles
