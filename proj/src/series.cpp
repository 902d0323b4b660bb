#include "jr/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace jr {

void QExp::set(const Rat& xi, const LogLinear& c) {
    if (c.is_zero())
        coeffs.erase(xi);
    else
        coeffs[xi] = c;
}

QExp operator+(const QExp& f, const QExp& g) {
    QExp h = f;
    for (const auto& [xi, c] : g.coeffs) {
        LogLinear s = c;
        auto it = h.coeffs.find(xi);
        if (it != h.coeffs.end()) s = s + it->second;
        h.set(xi, s);
    }
    return h;
}

LogLinear assemble_coefficient(const std::vector<PlaceDatum>& localData, const Rat& archFactor) {
    int derivCount = 0;
    long derivQ = 0;
    Rat prod(1);
    for (const auto& d : localData) {
        if (d.derivative) {
            ++derivCount;
            derivQ = d.q;
        }
        prod *= d.value;
    }
    if (derivCount != 1)
        throw MultipleDerivativePlaces("exactly one derivative place required");
    LogLinear out;
    out.add_log(derivQ, archFactor * prod);
    return out;
}

SupportReport support_check(const QExp& f, const std::vector<long>& B) {
    SupportReport rep;
    rep.allCoprimeVanish = true;
    for (const auto& [xi, c] : f.coeffs) {
        if (c.is_zero()) continue;
        bool coprime = true;
        for (long p : B)
            if (valuation_rat(xi, p) != 0) coprime = false;
        if (coprime && xi != 0) {
            rep.allCoprimeVanish = false;
            rep.witnesses.push_back(xi);
        }
    }
    return rep;
}

QExp fl_difference_series(const LocalFieldCtx& ctx, long ximax) {
    QExp f;
    f.weight = 1;
    f.level = 1;
    for (long xi = 1; xi <= ximax; ++xi) {
        InvariantVector iv;
        iv.charpoly = FPoly(std::vector<QuadElem>{QuadElem(ctx.d, Rat(-1)), QuadElem::one(ctx.d)});
        iv.moments = {QuadElem(ctx.d, Rat(xi))};
        FlReport rep = fl_verify(iv, ctx);
        Rat uside = rep.orbU ? Rat(*rep.orbU) : Rat(0);
        f.set(Rat(xi), LogLinear(rep.gl.value0 - uside));
    }
    return f;
}

// ---------------------------------------------------------------------

int eta_local(const Rat& x, long D, long p) { return hilbert_symbol(x, Rat(D), p); }

namespace {

// Non-principal real character mod |D| for a fundamental discriminant D:
// chi(n) = product of local symbols away from infinity.
int chi_D(long D, long n) {
    if (std::gcd(std::abs(D), n) != 1) return 0;
    // Kronecker symbol (D | n) for n > 0
    long a = D, b = n;
    int result = 1;
    // n odd positive here (conductor |D| with gcd 1; our D in {-3,-4,-7,-8,...})
    // use Jacobi with the standard 2-handling
    auto jacobi = [](long aa, long bb) {
        // bb odd positive
        aa %= bb;
        if (aa < 0) aa += bb;
        int r = 1;
        while (aa != 0) {
            while (aa % 2 == 0) {
                aa /= 2;
                if (bb % 8 == 3 || bb % 8 == 5) r = -r;
            }
            std::swap(aa, bb);
            if (aa % 4 == 3 && bb % 4 == 3) r = -r;
            aa %= bb;
        }
        return bb == 1 ? r : 0;
    };
    if (b % 2 == 0) {
        // split off the 2-part: chi(2) for odd D: (D|2) = (2|D)-reciprocity;
        // for D even chi(2) = 0 (coprimality already excluded it).
        long twos = 0;
        while (b % 2 == 0) {
            b /= 2;
            ++twos;
        }
        long dmod = ((D % 8) + 8) % 8;
        int chi2 = (dmod == 1 || dmod == 7) ? 1 : -1;   // (2|D) for odd |D|
        while (twos--) result *= chi2;
    }
    if (b == 1) return result;
    long amod = ((a % b) + b) % b;
    int j = jacobi(amod, b);
    // sign adjustment for negative discriminant is already encoded in
    // Jacobi(a mod b, b) since we reduced a mod b with positive rep
    return result * j;
}

struct EtaSpec {
    long D;
    long p;
    bool ramified;
    int eta_p;   // eta_p(p)

    explicit EtaSpec(long D_, long p_) : D(D_), p(p_) {
        ramified = (std::abs(D_) % p_ == 0);
        eta_p = hilbert_symbol(Rat(p_), Rat(D_), p_);
    }
    int on_unit(const Rat& u) const { return hilbert_symbol(u, Rat(D), p); }
    // level J such that eta is constant on unit classes mod p^J
    long unit_level() const {
        if (!ramified) return 0;
        return p == 2 ? 3 : 1;
    }
};

long val_or_inf(const Rat& x, long p) { return x == 0 ? VAL_INF : valuation_rat(x, p); }

// residue of a p-adic unit modulo p^J as a long
long unit_residue(const Rat& u, long p, long J) {
    Int mod(1);
    for (long i = 0; i < J; ++i) mod *= p;
    Int num = u.get_num() % mod;
    if (num < 0) num += mod;
    Int dinv;
    if (mpz_invert(dinv.get_mpz_t(), Int(u.get_den()).get_mpz_t(), mod.get_mpz_t()) == 0)
        throw std::logic_error("unit_residue: non-unit denominator");
    return mpz_class((num * dinv) % mod).get_si();
}

std::complex<double> phase_to_complex(const Rat& frac) {
    double ang = 2.0 * M_PI * frac.get_d();
    return {std::cos(ang), std::sin(ang)};
}

struct DiagTerm {
    std::complex<double> coef;
    long a, b;      // lattice diag(p^a, p^b)
    Rat mu1, mu2;
    Rat nu1, nu2;
};

std::vector<DiagTerm> diag_terms(const Schwartz& data, const WeilCtx& wctx) {
    std::vector<DiagTerm> out;
    for (const auto& t : data.terms) {
        const QMat& B = t.lam.basis();
        if (B.rows() != 2 || B(0, 1) != 0 || B(1, 0) != 0)
            throw BadContext("FE data must have diagonal (product) lattices");
        DiagTerm dt;
        dt.coef = t.coef.to_complex();
        dt.a = valuation_rat(B(0, 0), wctx.p);
        dt.b = valuation_rat(B(1, 1), wctx.p);
        dt.mu1 = t.mu[0];
        dt.mu2 = t.mu[1];
        dt.nu1 = t.nu[0];
        dt.nu2 = t.nu[1];
        out.push_back(dt);
    }
    return out;
}

// sum over units u in (c0 mod p^{j0}) of eta(u) psi(q2 u) psi(q1 u^{-1}),
// as a multiplicative integral with vol(Z_p^x) = 1.
std::complex<double> unit_integral(const EtaSpec& eta, long p, const Rat& q1, const Rat& q2,
                                   long j0, const Rat& c0) {
    long J = std::max(j0, eta.unit_level());
    if (q1 != 0) J = std::max(J, -val_or_inf(q1, p));
    if (q2 != 0) J = std::max(J, -val_or_inf(q2, p));
    if (J == 0) return eta.ramified ? 0.0 : 1.0;
    long mod = 1;
    for (long i = 0; i < J; ++i) mod *= p;
    long c0r = (j0 > 0) ? unit_residue(c0, p, j0) : 0;
    long modj = 1;
    for (long i = 0; i < j0; ++i) modj *= p;
    std::complex<double> acc(0, 0);
    double classVol = 1.0;
    {
        // vol of one unit class mod p^J
        double units = static_cast<double>(mod) * (1.0 - 1.0 / p);
        classVol = 1.0 / units;
    }
    for (long c = 1; c < mod; ++c) {
        if (c % p == 0) continue;
        if (j0 > 0 && (c % modj) != c0r) continue;
        int e = eta.on_unit(Rat(c));
        Rat total(0);
        if (q2 != 0) total += q2 * Rat(c);
        if (q1 != 0) {
            Int cinv;
            mpz_invert(cinv.get_mpz_t(), Int(c).get_mpz_t(), Int(mod).get_mpz_t());
            total += q1 * Rat(mpz_class(cinv));
        }
        acc += static_cast<double>(e) * phase_to_complex(p_fractional_part(total, p));
    }
    return acc * classVol;
}

}  // namespace

std::complex<double> local_orbit_factor(const Schwartz& data, const WeilCtx& wctx, const Rat& xi,
                                        long D, double s) {
    if (xi == 0) throw BadContext("xi must be nonzero");
    const long p = wctx.p;
    EtaSpec eta(D, p);
    long vxi = valuation_rat(xi, p);
    std::complex<double> acc(0, 0);
    for (const auto& t : diag_terms(data, wctx)) {
        long v1 = val_or_inf(t.mu1, p);
        long v2 = val_or_inf(t.mu2, p);
        long klo, khi;
        if (v1 < t.a) {
            klo = khi = v1;
        } else {
            klo = t.a;
            khi = std::numeric_limits<long>::max() / 4;
        }
        if (v2 < t.b) {
            long k = vxi - v2;
            klo = std::max(klo, k);
            khi = std::min(khi, k);
        } else {
            khi = std::min(khi, vxi - t.b);
        }
        for (long k = klo; k <= khi; ++k) {
            long j1 = (v1 < t.a) ? t.a - k : 0;
            long j2 = (v2 < t.b) ? t.b - v2 : 0;
            Rat c1 = (j1 > 0) ? t.mu1 / p_power(p, k) : Rat(1);
            Rat c2 = (j2 > 0) ? (xi / p_power(p, k)) / t.mu2 : Rat(1);
            long j0;
            Rat c0;
            if (j1 >= j2) {
                j0 = j1;
                c0 = c1;
                if (j2 > 0 && unit_residue(c1, p, j2) != unit_residue(c2, p, j2)) continue;
            } else {
                j0 = j2;
                c0 = c2;
                if (j1 > 0 && unit_residue(c1, p, j1) != unit_residue(c2, p, j1)) continue;
            }
            // phases psi(t nu2 + (xi/t) nu1), t = p^k u
            Rat q2 = t.nu2 * p_power(p, k);
            Rat q1 = t.nu1 * xi / p_power(p, k);
            std::complex<double> ui = unit_integral(eta, p, q1, q2, j0, c0);
            double etapk = (k % 2 && eta.eta_p < 0) ? -1.0 : 1.0;
            acc += t.coef * etapk * std::pow(static_cast<double>(p), -s * k) * ui;
        }
    }
    return acc;
}

std::complex<double> local_nilpotent_factor(const Schwartz& data, const WeilCtx& wctx, bool plus,
                                            long D, double s) {
    const long p = wctx.p;
    EtaSpec eta(D, p);
    double seff = plus ? s : -s;
    std::complex<double> acc(0, 0);
    double X = std::pow(static_cast<double>(p), -seff);
    double ex = eta.eta_p * X;
    for (const auto& t0 : diag_terms(data, wctx)) {
        DiagTerm t = t0;
        if (!plus) {
            std::swap(t.a, t.b);
            std::swap(t.mu1, t.mu2);
            std::swap(t.nu1, t.nu2);
        }
        // integrate over (t, 0): the second coset must contain 0
        long v2 = val_or_inf(t.mu2, p);
        if (v2 < t.b) continue;
        long v1 = val_or_inf(t.mu1, p);
        std::complex<double> termval(0, 0);
        if (v1 < t.a) {
            long k = v1;
            Rat q2 = t.nu2 * p_power(p, k);
            std::complex<double> ui =
                unit_integral(eta, p, Rat(0), q2, t.a - k, t.mu1 / p_power(p, k));
            double etapk = (k % 2 && eta.eta_p < 0) ? -1.0 : 1.0;
            termval = etapk * std::pow(static_cast<double>(p), -seff * k) * ui;
            // divide by L(s, eta_p): multiply by (1 - eta(p) X) if unramified
            if (!eta.ramified) termval *= (1.0 - ex);
        } else {
            // k ranges over [a, infinity); stabilizes once the phase dies
            long kstab = t.a;
            if (t.nu2 != 0) kstab = std::max(kstab, -val_or_inf(t.nu2, p));
            std::complex<double> finite(0, 0);
            for (long k = t.a; k < kstab; ++k) {
                Rat q2 = t.nu2 * p_power(p, k);
                std::complex<double> ui = unit_integral(eta, p, Rat(0), q2, 0, Rat(1));
                double etapk = (k % 2 && eta.eta_p < 0) ? -1.0 : 1.0;
                finite += etapk * std::pow(static_cast<double>(p), -seff * k) * ui;
            }
            if (eta.ramified) {
                termval = finite;   // tail unit-integrals vanish, L = 1
            } else {
                // (finite + tail) / L with tail = sum_{k >= kstab} (eta X)^k
                double tailTop = std::pow(ex, static_cast<double>(kstab));
                termval = finite * (1.0 - ex) + tailTop;
            }
        }
        acc += t.coef * termval;
    }
    return acc;
}

// ---------------------------------------------------------------------

namespace {

double hurwitz_zeta(double s, double x) {
    if (std::abs(s - 1.0) < 1e-9) throw BadContext("hurwitz zeta at s = 1");
    const int N = 24;
    double acc = 0;
    for (int k = 0; k < N; ++k) acc += std::pow(k + x, -s);
    double Nx = N + x;
    acc += std::pow(Nx, 1 - s) / (s - 1);
    acc += 0.5 * std::pow(Nx, -s);
    // Euler-Maclaurin correction terms with B_2, B_4, ...
    static const double bern[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730};
    double fact = s;
    double pw = std::pow(Nx, -s - 1);
    for (int j = 0; j < 6; ++j) {
        // B_{2j+2}/(2j+2)! * s(s+1)...(s+2j) * Nx^{-s-2j-1}
        double tgamma2 = 1.0;
        for (int t = 0; t < 2 * j + 2; ++t) tgamma2 *= (t + 1);
        acc += bern[j] / tgamma2 * fact * pw;
        fact *= (s + 2 * j + 1) * (s + 2 * j + 2);
        pw /= (Nx * Nx);
    }
    return acc;
}

}  // namespace

ArchValue dirichlet_L(double s, long D) {
    long q = std::abs(D);
    double acc = 0;
    for (long a = 1; a <= q; ++a) {
        int c = chi_D(D, a);
        if (c) acc += c * hurwitz_zeta(s, static_cast<double>(a) / q);
    }
    double v = acc * std::pow(static_cast<double>(q), -s);
    return {v, std::abs(v) * 1e-10 + 1e-12};
}

ArchValue complete_L(double s, long D) {
    ArchValue Lf = dirichlet_L(s, D);
    double gammaFac = std::pow(M_PI, -(s + 1) / 2) * std::exp(std::lgamma((s + 1) / 2));
    return gammaFac * Lf;
}

TateFeReport tate_fe_check(const TateFeSpec& spec, double s, long X, double tol) {
    if (spec.D >= 0) throw BadContext("imaginary quadratic discriminant required");
    // contexts per prime with nonstandard data; ramified primes always join
    std::map<long, Schwartz> data = spec.finiteData;
    std::set<long> primes;
    for (auto& [p, f] : data) primes.insert(p);
    for (long p = 2; p * p <= std::abs(spec.D) + 1 || p <= std::abs(spec.D); ++p)
        if (is_prime(p) && std::abs(spec.D) % p == 0) primes.insert(p);

    std::map<long, WeilCtx> ctxs;
    for (long p : primes) ctxs.emplace(p, WeilCtx::split_space(p, 1));
    for (long p : primes)
        if (!data.count(p))
            data.emplace(p, Schwartz::indicator({Rat(0), Rat(0)}, Lattice::standard(p, 2), p));

    std::map<long, Schwartz> dataHat;
    for (auto& [p, f] : data) dataHat.emplace(p, fourier(f, ctxs.at(p)));

    auto local_product = [&](const std::map<long, Schwartz>& dd, const Rat& xi)
        -> std::complex<double> {
        std::complex<double> prod(1, 0);
        std::set<long> ps = primes;
        // primes dividing xi also contribute
        Int n = xi.get_num() * xi.get_den();
        if (n < 0) n = -n;
        for (long p = 2; Int(p) * Int(p) <= n; ++p) {
            if (!is_prime(p)) continue;
            if (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) ps.insert(p);
        }
        if (n > 1) {
            // remaining large prime factor(s): divide out the small ones
            Int rem = n;
            for (long p : ps) {
                while (mpz_divisible_ui_p(rem.get_mpz_t(), static_cast<unsigned long>(p)))
                    mpz_divexact_ui(rem.get_mpz_t(), rem.get_mpz_t(), static_cast<unsigned long>(p));
            }
            if (rem > 1) ps.insert(rem.get_si());
        }
        for (long p : ps) {
            const Schwartz* f = nullptr;
            auto it = dd.find(p);
            Schwartz std_f;
            WeilCtx wc = ctxs.count(p) ? ctxs.at(p) : WeilCtx::split_space(p, 1);
            if (it != dd.end()) {
                f = &it->second;
            } else {
                std_f = Schwartz::indicator({Rat(0), Rat(0)}, Lattice::standard(p, 2), p);
                f = &std_f;
            }
            prod *= local_orbit_factor(*f, wc, xi, spec.D, s);
            if (std::abs(prod) == 0.0) break;
        }
        return prod;
    };

    auto assemble = [&](const std::map<long, Schwartz>& dd, std::complex<double> archNil,
                        std::complex<double> archScale, double& archErrOut)
        -> std::complex<double> {
        // nilpotent terms
        std::complex<double> nilPlus(1, 0), nilMinus(1, 0);
        for (long p : primes) {
            nilPlus *= local_nilpotent_factor(dd.at(p), ctxs.at(p), true, spec.D, s);
            nilMinus *= local_nilpotent_factor(dd.at(p), ctxs.at(p), false, spec.D, s);
        }
        ArchValue Ls = complete_L(s, spec.D);
        ArchValue Lms = complete_L(-s, spec.D);
        ArchValue nilArchP = nilpotent_arch(s);
        ArchValue nilArchM = nilpotent_arch(-s);
        std::complex<double> total = Ls.v * nilPlus * (archNil * nilArchP.v) +
                                     Lms.v * nilMinus * (archNil * nilArchM.v);
        double archErr = Ls.err + Lms.err;
        // xi sum
        long NB = spec.denominatorBound;
        for (long j = 1; j <= X * NB; ++j) {
            Rat xi(j, NB);
            xi.canonicalize();
            for (int sgn = 0; sgn < 2; ++sgn) {
                Rat xr = sgn ? -xi : xi;
                std::complex<double> fin = local_product(dd, xr);
                if (std::abs(fin) == 0.0) continue;
                ArchComplex av = orb_arch(xr.get_d(), s, false, {});
                total += fin * archScale * std::complex<double>(av.re.v, av.im.v);
                archErr += std::abs(fin) * (av.re.err + av.im.err);
            }
        }
        archErrOut = archErr;
        return total;
    };

    TateFeReport rep;
    double e1 = 0, e2 = 0;
    rep.J = assemble(data, {1, 0}, {1, 0}, e1);
    // Fourier side: the archimedean Gaussian is a weight-one eigenvector,
    // so its Fourier transform is i times itself.
    rep.Jhat = assemble(dataHat, {0, 1}, {0, 1}, e2);
    rep.archErr = e1 + e2;
    rep.diff = std::abs(rep.J - rep.Jhat);

    // tail bound: |term| <= finiteBound * archBound, archBound from
    // K_nu(c) <= sqrt(2 pi / c) e^{nu^2/(2c)} e^{-c}
    double tail = 0;
    long NB = spec.denominatorBound;
    double coefBound = 1;
    for (auto& [p, f] : data)
        for (auto& t : f.terms) coefBound = std::max(coefBound, std::abs(t.coef.to_complex()));
    coefBound = coefBound * coefBound;   // both sides, crude
    for (long j = X * NB + 1; j <= X * NB + 400; ++j) {
        double xi = static_cast<double>(j) / NB;
        double c = M_PI * xi;
        double nu = (1 + std::abs(s)) / 2;
        double kbound = std::sqrt(2 * M_PI / c) * std::exp(nu * nu / (2 * c)) * std::exp(-c);
        double arch = std::pow(xi, (1 - s) / 2) * 2 * kbound;
        double finite = coefBound * static_cast<double>(j) * 8.0;   // crude divisor bound
        tail += 2 * finite * arch;
    }
    rep.tailBound = tail * 2;
    rep.pass = rep.diff <= tol + rep.tailBound + rep.archErr;
    return rep;
}

}  // namespace jr
