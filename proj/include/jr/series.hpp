#pragma once

#include "jr/arch.hpp"
#include "jr/orbital.hpp"
#include "jr/weil.hpp"

#include <complex>
#include <map>
#include <optional>
#include <vector>

namespace jr {

struct MultipleDerivativePlaces : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Exact element of Q + sum_p Q log p.
struct LogLinear {
    Rat constant;
    std::map<long, Rat> logTerms;   // prime -> coefficient, zeros dropped

    LogLinear() : constant(0) {}
    explicit LogLinear(Rat c) : constant(std::move(c)) {}

    void add_log(long p, const Rat& c) {
        if (c == 0) return;
        auto it = logTerms.find(p);
        if (it == logTerms.end())
            logTerms[p] = c;
        else {
            it->second += c;
            if (it->second == 0) logTerms.erase(it);
        }
    }
    bool is_zero() const { return constant == 0 && logTerms.empty(); }

    friend LogLinear operator+(const LogLinear& x, const LogLinear& y) {
        LogLinear z = x;
        z.constant += y.constant;
        for (const auto& [p, c] : y.logTerms) z.add_log(p, c);
        return z;
    }
    friend LogLinear operator-(const LogLinear& x, const LogLinear& y) {
        LogLinear z = x;
        z.constant -= y.constant;
        for (const auto& [p, c] : y.logTerms) z.add_log(p, -c);
        return z;
    }
    friend LogLinear operator*(const Rat& c, const LogLinear& x) {
        LogLinear z;
        z.constant = c * x.constant;
        for (const auto& [p, v] : x.logTerms) z.add_log(p, c * v);
        return z;
    }
    friend bool operator==(const LogLinear& x, const LogLinear& y) {
        return x.constant == y.constant && x.logTerms == y.logTerms;
    }
    friend bool operator!=(const LogLinear& x, const LogLinear& y) { return !(x == y); }
};

/// Formal q-expansion with exponents in (1/N) Z_{>=0} and LogLinear
/// coefficients.
struct QExp {
    int weight = 0;
    long level = 1;
    std::map<Rat, LogLinear> coeffs;

    void set(const Rat& xi, const LogLinear& c);
    friend QExp operator+(const QExp& f, const QExp& g);
};

/// Per-place input to a Fourier-coefficient product: either a special
/// value (rational) or the derivative place (rational log-q_v coefficient).
struct PlaceDatum {
    long q;           // residue cardinality of the place
    Rat value;        // value0, or dvalue0 at the derivative place
    bool derivative = false;
};

/// Leibniz assembly: the derivative place contributes dvalue0 * log q_v,
/// all other places their special values; archFactor is the (rational)
/// normalized archimedean multiplier.
LogLinear assemble_coefficient(const std::vector<PlaceDatum>& localData,
                               const Rat& archFactor = Rat(1));

struct SupportReport {
    bool allCoprimeVanish;
    std::vector<Rat> witnesses;
};
/// Scans coefficients with exponent coprime to every prime of B.
SupportReport support_check(const QExp& f, const std::vector<long>& B);

/// The m=1 fundamental-lemma difference series: coefficient at xi is
/// value0(GL) - (unitary count or 0), exact, for 1 <= xi <= ximax.
QExp fl_difference_series(const LocalFieldCtx& ctx, long ximax);

// ---------------------------------------------------------------------
// The n = 1 global functional equation over an imaginary quadratic field.

/// eta_p(x) = (x, D)_p for the quadratic character of Q(sqrt D)/Q.
int eta_local(const Rat& x, long D, long p);

/// Dirichlet L(s, chi_D) for real s (Hurwitz-zeta with Euler-Maclaurin).
ArchValue dirichlet_L(double s, long D);
/// Complete L(s, eta) = pi^{-(s+1)/2} Gamma((s+1)/2) L_f(s, eta) (eta odd).
ArchValue complete_L(double s, long D);

/// Finite test data: one 2-dimensional Schwartz function per listed prime
/// (standard lattice elsewhere).  All lattices must be diagonal in the
/// (u1, u2) coordinates.
struct TateFeSpec {
    long D;   // field discriminant of the imaginary quadratic field (-3, -4, ...)
    std::map<long, Schwartz> finiteData;
    long denominatorBound = 1;   // exponents live in (1/denominatorBound) Z
};

struct TateFeReport {
    std::complex<double> J, Jhat;
    double diff;
    double tailBound;
    double archErr;
    bool pass;   // diff <= tol + tailBound + archErr
};

/// Two-sided evaluation of J(phi', s) = J(phi-hat', s) truncated at |xi| <= X.
TateFeReport tate_fe_check(const TateFeSpec& spec, double s, long X, double tol = 1e-6);

/// Exact local orbital factor at p of the rank-one orbit (1, xi) against a
/// 2-dimensional Schwartz function, evaluated at real s.
std::complex<double> local_orbit_factor(const Schwartz& data, const WeilCtx& wctx, const Rat& xi,
                                        long D, double s);

/// Local nilpotent factor Orb(0_{+/-}, phi_p, s) (Tate integral divided by
/// L(s, eta_p)).
std::complex<double> local_nilpotent_factor(const Schwartz& data, const WeilCtx& wctx, bool plus,
                                            long D, double s);

}  // namespace jr
