#include "jr/lattice.hpp"

#include <algorithm>
#include <functional>

namespace jr {

bool in_Zp(const Rat& x, long p) {
    if (x == 0) return true;
    return valuation_int(x.get_den(), p) == 0;
}

bool in_OF(const QuadElem& x, long p) { return in_Zp(x.a, p) && in_Zp(x.b, p); }

Rat reduce_mod_p_power(const Rat& x, long p, long k) {
    if (x == 0) return Rat(0);
    long v = valuation_rat(x, p);
    if (v >= k) return Rat(0);
    // x = p^v * a/b with a, b coprime to p; representative p^v * (a b^{-1} mod p^{k-v}).
    Rat u = x / p_power(p, v);
    Int mod;
    Int base(p);
    mpz_pow_ui(mod.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(k - v));
    Int a = u.get_num() % mod;
    if (a < 0) a += mod;
    Int binv;
    if (mpz_invert(binv.get_mpz_t(), Int(u.get_den()).get_mpz_t(), mod.get_mpz_t()) == 0)
        throw std::logic_error("reduce_mod_p_power: denominator not a unit");
    Int r = (a * binv) % mod;
    if (r < 0) r += mod;
    return Rat(r) * p_power(p, v);
}

QMat hnf_Zp(const QMat& gens, long p) {
    const int m = gens.rows();
    const int n = gens.cols();
    if (n < m) throw SingularBasis("not enough generators");
    std::vector<std::vector<Rat>> cols(n);
    for (int j = 0; j < n; ++j) cols[static_cast<size_t>(j)] = gens.col(j);

    std::vector<std::vector<Rat>> pivot(static_cast<size_t>(m));
    std::vector<bool> used(n, false);
    for (int i = m - 1; i >= 0; --i) {
        int best = -1;
        long bestv = 0;
        for (int j = 0; j < n; ++j) {
            if (used[static_cast<size_t>(j)]) continue;
            const Rat& e = cols[static_cast<size_t>(j)][static_cast<size_t>(i)];
            if (e == 0) continue;
            long v = valuation_rat(e, p);
            if (best < 0 || v < bestv) {
                best = j;
                bestv = v;
            }
        }
        if (best < 0) throw SingularBasis("generators not of full rank");
        used[static_cast<size_t>(best)] = true;
        auto& pc = cols[static_cast<size_t>(best)];
        // normalize: entry at row i becomes exactly p^bestv
        Rat unit = pc[static_cast<size_t>(i)] / p_power(p, bestv);
        for (auto& e : pc) e = e / unit;
        for (int j = 0; j < n; ++j) {
            if (used[static_cast<size_t>(j)]) continue;
            auto& cj = cols[static_cast<size_t>(j)];
            const Rat& e = cj[static_cast<size_t>(i)];
            if (e == 0) continue;
            Rat f = e / pc[static_cast<size_t>(i)];
            for (int r = 0; r <= i; ++r)
                cj[static_cast<size_t>(r)] =
                    cj[static_cast<size_t>(r)] - f * pc[static_cast<size_t>(r)];
        }
        pivot[static_cast<size_t>(i)] = pc;
    }

    QMat H(m, m, Rat(0));
    for (int j = 0; j < m; ++j)
        for (int i = 0; i <= j; ++i) H(i, j) = pivot[static_cast<size_t>(j)][static_cast<size_t>(i)];
    // reduce above-diagonal entries
    for (int j = 1; j < m; ++j)
        for (int i = j - 1; i >= 0; --i) {
            long ki = valuation_rat(H(i, i), p);
            Rat r = reduce_mod_p_power(H(i, j), p, ki);
            Rat f = (H(i, j) - r) / H(i, i);
            for (int t = 0; t <= i; ++t) H(t, j) = H(t, j) - f * H(t, i);
        }
    return H;
}

Lattice::Lattice(long p, const QMat& gens) : p_(p) { basis_ = hnf_Zp(gens, p); }

Lattice Lattice::standard(long p, int m) { return Lattice(p, QMat::identity(m, Rat(0))); }

Lattice Lattice::scaled(const Rat& c) const {
    if (c == 0) throw SingularBasis("zero scaling");
    Lattice L = *this;
    L.basis_ = c * basis_;
    L.basis_ = hnf_Zp(L.basis_, p_);
    return L;
}

bool Lattice::contains(const std::vector<Rat>& v) const {
    // back-substitution against the upper triangular basis
    std::vector<Rat> w = v;
    const int m = dim();
    for (int i = m - 1; i >= 0; --i) {
        Rat c = w[static_cast<size_t>(i)] / basis_(i, i);
        if (!in_Zp(c, p_)) return false;
        for (int t = 0; t <= i; ++t) w[static_cast<size_t>(t)] = w[static_cast<size_t>(t)] - c * basis_(t, i);
    }
    return true;
}

bool Lattice::contains(const Lattice& other) const {
    for (int j = 0; j < other.dim(); ++j)
        if (!contains(other.basis_.col(j))) return false;
    return true;
}

bool Lattice::operator<(const Lattice& o) const {
    for (int j = 0; j < dim(); ++j)
        for (int i = 0; i < dim(); ++i) {
            if (basis_(i, j) < o.basis_(i, j)) return true;
            if (o.basis_(i, j) < basis_(i, j)) return false;
        }
    return false;
}

Lattice operator+(const Lattice& a, const Lattice& b) {
    if (a.p_ != b.p_ || a.dim() != b.dim()) throw BadContext("lattice sum mismatch");
    QMat g(a.dim(), 2 * a.dim(), Rat(0));
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) {
            g(i, j) = a.basis_(i, j);
            g(i, a.dim() + j) = b.basis_(i, j);
        }
    return Lattice(a.p_, g);
}

long lattice_index(const Lattice& L, const Lattice& L0) {
    Rat dL = L.basis().det(), d0 = L0.basis().det();
    return valuation_rat(dL, L.p()) - valuation_rat(d0, L.p());
}

Lattice canonicalize(const Lattice& L) { return L; }

Lattice preimage_lattice(const QMat& C, long p) {
    // {x : Cx in Z^rows}: dual of the row span under the standard pairing.
    QMat Ct = C.transpose();            // columns = rows of C
    QMat B = hnf_Zp(Ct, p);             // basis of the row span
    return Lattice(p, B.transpose().inverse());
}

Lattice dual_lattice_bilinear(const Lattice& L, const QMat& M) {
    if (M.det() == 0) throw DegenerateForm("degenerate pairing");
    // {x : (M l)^T x in Z for basis vectors l} = preimage of (M B)^T
    QMat C = (M * L.basis()).transpose();
    return preimage_lattice(C, L.p());
}

Lattice coordinate_section(const Lattice& L, int k) {
    QMat top = L.basis().block(0, 0, k, k);
    return Lattice(L.p(), top);
}

SnfResult snf_Zp(const QMat& R, long p) {
    const int n = R.rows();
    QMat A = R;
    QMat U = QMat::identity(n, Rat(0));
    QMat V = QMat::identity(n, Rat(0));
    // invariant: R = U * A * V
    for (int t = 0; t < n; ++t) {
        int bi = -1, bj = -1;
        long bestv = 0;
        for (int i = t; i < n; ++i)
            for (int j = t; j < n; ++j) {
                if (A(i, j) == 0) continue;
                long v = valuation_rat(A(i, j), p);
                if (bi < 0 || v < bestv) {
                    bi = i;
                    bj = j;
                    bestv = v;
                }
            }
        if (bi < 0) throw SingularBasis("snf of singular matrix");
        // move pivot to (t,t): row swap affects U columns, col swap affects V rows
        if (bi != t)
            for (int j = 0; j < n; ++j) {
                std::swap(A(bi, j), A(t, j));
                std::swap(U(j, bi), U(j, t));
            }
        if (bj != t)
            for (int i = 0; i < n; ++i) {
                std::swap(A(i, bj), A(i, t));
                std::swap(V(bj, i), V(t, i));
            }
        // normalize pivot to p^bestv
        Rat unit = A(t, t) / p_power(p, bestv);
        for (int j = 0; j < n; ++j) A(t, j) = A(t, j) / unit;
        for (int j = 0; j < n; ++j) U(j, t) = U(j, t) * unit;
        // clear row t and column t
        for (int i = t + 1; i < n; ++i) {
            if (A(i, t) == 0) continue;
            Rat f = A(i, t) / A(t, t);
            for (int j = 0; j < n; ++j) A(i, j) = A(i, j) - f * A(t, j);
            for (int j = 0; j < n; ++j) U(j, t) = U(j, t) + f * U(j, i);
        }
        for (int j = t + 1; j < n; ++j) {
            if (A(t, j) == 0) continue;
            Rat f = A(t, j) / A(t, t);
            for (int i = 0; i < n; ++i) A(i, j) = A(i, j) - f * A(i, t);
            for (int i = 0; i < n; ++i) V(t, i) = V(t, i) + f * V(j, i);
        }
    }
    SnfResult res;
    res.exponents.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) res.exponents[static_cast<size_t>(i)] = valuation_rat(A(i, i), p);
    // ascending order by simultaneous permutation
    std::vector<int> perm(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    std::sort(perm.begin(), perm.end(), [&](int a, int b) {
        return res.exponents[static_cast<size_t>(a)] < res.exponents[static_cast<size_t>(b)];
    });
    QMat U2(n, n, Rat(0)), V2(n, n, Rat(0));
    std::vector<long> e2(static_cast<size_t>(n));
    for (int t = 0; t < n; ++t) {
        int s = perm[static_cast<size_t>(t)];
        e2[static_cast<size_t>(t)] = res.exponents[static_cast<size_t>(s)];
        for (int i = 0; i < n; ++i) {
            U2(i, t) = U(i, s);
            V2(t, i) = V(s, i);
        }
    }
    res.U = U2;
    res.V = V2;
    res.exponents = e2;
    return res;
}

std::vector<Lattice> lattices_between(const Lattice& M1, const Lattice& M2) {
    if (M1.p() != M2.p() || M1.dim() != M2.dim()) throw BadContext("lattices_between mismatch");
    if (!M2.contains(M1)) throw NotNested("M1 is not contained in M2");
    const long p = M1.p();
    const int m = M1.dim();
    QMat R = M2.basis().inverse() * M1.basis();
    SnfResult snf = snf_Zp(R, p);
    // In coordinates z = (B2 U)^{-1} x we need D Z^m subset L subset Z^m
    // with D = diag(p^{e_i}).  Such L are in bijection with integral HNF
    // matrices H: diagonal p^{k_i}, 0 <= k_i <= e_i, entries above the
    // diagonal in [0, p^{k_i}) for row i, subject to D Z^m subset H Z^m.
    QMat frame = M2.basis() * snf.U;
    const auto& e = snf.exponents;

    std::vector<Lattice> out;
    std::vector<long> k(static_cast<size_t>(m), 0);
    QMat H = QMat::identity(m, Rat(0));

    // positions of the above-diagonal entries, column-major
    struct OffEntry {
        int i, j;
    };
    std::vector<OffEntry> off;
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < j; ++i) off.push_back({i, j});

    auto emit = [&]() {
        bool ok = true;
        for (int i = 0; i < m && ok; ++i) {
            std::vector<Rat> v(static_cast<size_t>(m), Rat(0));
            v[static_cast<size_t>(i)] = p_power(p, e[static_cast<size_t>(i)]);
            // back-substitution against H
            for (int t = m - 1; t >= 0 && ok; --t) {
                Rat c = v[static_cast<size_t>(t)] / H(t, t);
                if (!in_Zp(c, p)) ok = false;
                for (int s = 0; s <= t; ++s)
                    v[static_cast<size_t>(s)] = v[static_cast<size_t>(s)] - c * H(s, t);
            }
        }
        if (ok) out.emplace_back(p, frame * H);
    };

    // enumerate off-diagonal integers recursively for a fixed diagonal
    std::function<void(size_t)> rec_off = [&](size_t t) {
        if (t == off.size()) {
            emit();
            return;
        }
        auto [i, j] = off[t];
        long bound = 1;
        for (long x = 0; x < k[static_cast<size_t>(i)]; ++x) bound *= p;
        for (long v = 0; v < bound; ++v) {
            H(i, j) = Rat(v);
            rec_off(t + 1);
        }
        H(i, j) = Rat(0);
    };

    std::function<void(int)> rec_diag = [&](int i) {
        if (i == m) {
            rec_off(0);
            return;
        }
        for (long ki = 0; ki <= e[static_cast<size_t>(i)]; ++ki) {
            k[static_cast<size_t>(i)] = ki;
            H(i, i) = p_power(p, ki);
            rec_diag(i + 1);
        }
    };
    rec_diag(0);

    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------

std::vector<Rat> quad_vec_coords(const std::vector<QuadElem>& v) {
    std::vector<Rat> c;
    c.reserve(2 * v.size());
    for (const auto& x : v) c.push_back(x.a);
    for (const auto& x : v) c.push_back(x.b);
    return c;
}

std::vector<QuadElem> quad_vec_from_coords(long d, const std::vector<Rat>& c) {
    size_t m = c.size() / 2;
    std::vector<QuadElem> v;
    v.reserve(m);
    for (size_t i = 0; i < m; ++i) v.emplace_back(d, c[i], c[m + i]);
    return v;
}

QMat sqrt_d_action(long d, int m) {
    QMat M(2 * m, 2 * m, Rat(0));
    for (int i = 0; i < m; ++i) {
        M(i, m + i) = Rat(d);
        M(m + i, i) = Rat(1);
    }
    return M;
}

QMat quad_matrix_action(const FMat& g) {
    QMat A, B;
    split_parts(g, A, B);
    int m = g.rows();
    long d = g.sample().d;
    QMat M(2 * m, 2 * m, Rat(0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            M(i, j) = A(i, j);
            M(i, m + j) = Rat(d) * B(i, j);
            M(m + i, j) = B(i, j);
            M(m + i, m + j) = A(i, j);
        }
    return M;
}

QuadLattice::QuadLattice(const LocalFieldCtx& ctx, int m,
                         const std::vector<std::vector<QuadElem>>& gens)
    : p_(ctx.p), d_(ctx.d), m_(m) {
    QMat G(2 * m, static_cast<int>(2 * gens.size()), Rat(0));
    int col = 0;
    QuadElem sd = QuadElem::sqrt_d(ctx.d);
    for (const auto& v : gens) {
        auto c = quad_vec_coords(v);
        for (int i = 0; i < 2 * m; ++i) G(i, col) = c[static_cast<size_t>(i)];
        ++col;
        std::vector<QuadElem> sv;
        sv.reserve(v.size());
        for (const auto& x : v) sv.push_back(sd * x);
        auto cs = quad_vec_coords(sv);
        for (int i = 0; i < 2 * m; ++i) G(i, col) = cs[static_cast<size_t>(i)];
        ++col;
    }
    raw_ = Lattice(p_, G);
}

QuadLattice::QuadLattice(long p, long d, int m, Lattice raw)
    : p_(p), d_(d), m_(m), raw_(std::move(raw)) {}

QuadLattice QuadLattice::standard(const LocalFieldCtx& ctx, int m) {
    return QuadLattice(ctx.p, ctx.d, m, Lattice::standard(ctx.p, 2 * m));
}

bool QuadLattice::sqrt_d_stable() const {
    QMat S = sqrt_d_action(d_, m_);
    for (int j = 0; j < 2 * m_; ++j)
        if (!raw_.contains(S.apply(raw_.basis().col(j)))) return false;
    return true;
}

bool QuadLattice::stable_under(const FMat& g) const {
    QMat M = quad_matrix_action(g);
    for (int j = 0; j < 2 * m_; ++j)
        if (!raw_.contains(M.apply(raw_.basis().col(j)))) return false;
    return true;
}

bool QuadLattice::contains(const std::vector<QuadElem>& v) const {
    return raw_.contains(quad_vec_coords(v));
}

bool QuadLattice::contains(const QuadLattice& other) const { return raw_.contains(other.raw_); }

QuadLattice QuadLattice::dual(const FMat& J) const {
    if (J.det().is_zero()) throw DegenerateForm("degenerate hermitian form");
    // Conditions <x, w_j> in O_F for the 2m basis vectors w_j of this lattice:
    // the F-row conj(w_j)^T J evaluated on x = u + sqrt(d) v splits into two
    // rational rows on the coordinates (u, v).
    QMat C(4 * m_, 2 * m_, Rat(0));
    for (int j = 0; j < 2 * m_; ++j) {
        auto w = quad_vec_from_coords(d_, raw_.basis().col(j));
        // rowF = conj(w)^T J as a 1 x m F-row
        std::vector<QuadElem> rowF(static_cast<size_t>(m_), QuadElem::zero(d_));
        for (int t = 0; t < m_; ++t)
            for (int s = 0; s < m_; ++s)
                rowF[static_cast<size_t>(t)] =
                    rowF[static_cast<size_t>(t)] + w[static_cast<size_t>(s)].conj() * J(s, t);
        // value on x: (r + sqrt d s)(u + sqrt d v) -> [r | d s] and [s | r]
        for (int t = 0; t < m_; ++t) {
            C(2 * j, t) = rowF[static_cast<size_t>(t)].a;
            C(2 * j, m_ + t) = Rat(d_) * rowF[static_cast<size_t>(t)].b;
            C(2 * j + 1, t) = rowF[static_cast<size_t>(t)].b;
            C(2 * j + 1, m_ + t) = rowF[static_cast<size_t>(t)].a;
        }
    }
    return QuadLattice(p_, d_, m_, preimage_lattice(C, p_));
}

bool QuadLattice::self_dual(const FMat& J) const { return dual(J) == *this; }

long quad_lattice_index(const QuadLattice& L, const QuadLattice& L0) {
    return lattice_index(L.raw(), L0.raw());
}

std::vector<QuadLattice> quad_lattices_between(const QuadLattice& M1, const QuadLattice& M2) {
    auto raws = lattices_between(M1.raw(), M2.raw());
    std::vector<QuadLattice> out;
    out.reserve(raws.size());
    for (auto& L : raws) out.emplace_back(M1.p(), M1.d(), M1.rank(), std::move(L));
    return out;
}

namespace {

QuadElem reduce_quad_mod_p_power(const QuadElem& x, long p, long k) {
    return QuadElem(x.d, reduce_mod_p_power(x.a, p, k), reduce_mod_p_power(x.b, p, k));
}

long val_F(const QuadElem& x, long p) {
    long va = valuation_rat(x.a, p), vb = valuation_rat(x.b, p);
    return va < vb ? va : vb;
}

}  // namespace

FMat hnf_OF(const FMat& gens, const LocalFieldCtx& ctx) {
    const int m = gens.rows();
    const int n = gens.cols();
    const long p = ctx.p;
    if (n < m) throw SingularBasis("not enough generators");
    std::vector<std::vector<QuadElem>> cols(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) cols[static_cast<size_t>(j)] = gens.col(j);
    std::vector<std::vector<QuadElem>> pivot(static_cast<size_t>(m));
    std::vector<bool> used(static_cast<size_t>(n), false);
    for (int i = m - 1; i >= 0; --i) {
        int best = -1;
        long bestv = 0;
        for (int j = 0; j < n; ++j) {
            if (used[static_cast<size_t>(j)]) continue;
            const QuadElem& e = cols[static_cast<size_t>(j)][static_cast<size_t>(i)];
            if (e.is_zero()) continue;
            long v = val_F(e, p);
            if (best < 0 || v < bestv) {
                best = j;
                bestv = v;
            }
        }
        if (best < 0) throw SingularBasis("generators not of full rank over O_F");
        used[static_cast<size_t>(best)] = true;
        auto& pc = cols[static_cast<size_t>(best)];
        QuadElem unit = pc[static_cast<size_t>(i)] / QuadElem(ctx.d, p_power(p, bestv));
        for (auto& e : pc) e = e / unit;
        for (int j = 0; j < n; ++j) {
            if (used[static_cast<size_t>(j)]) continue;
            auto& cj = cols[static_cast<size_t>(j)];
            if (cj[static_cast<size_t>(i)].is_zero()) continue;
            QuadElem f = cj[static_cast<size_t>(i)] / pc[static_cast<size_t>(i)];
            for (int r = 0; r <= i; ++r)
                cj[static_cast<size_t>(r)] = cj[static_cast<size_t>(r)] - f * pc[static_cast<size_t>(r)];
        }
        pivot[static_cast<size_t>(i)] = pc;
    }
    FMat H(m, m, QuadElem::zero(ctx.d));
    for (int j = 0; j < m; ++j)
        for (int i = 0; i <= j; ++i) H(i, j) = pivot[static_cast<size_t>(j)][static_cast<size_t>(i)];
    for (int j = 1; j < m; ++j)
        for (int i = j - 1; i >= 0; --i) {
            long ki = val_F(H(i, i), p);
            QuadElem r = reduce_quad_mod_p_power(H(i, j), p, ki);
            QuadElem f = (H(i, j) - r) / H(i, i);
            for (int t = 0; t <= i; ++t) H(t, j) = H(t, j) - f * H(t, i);
        }
    return H;
}

SnfOFResult snf_OF(const FMat& R, const LocalFieldCtx& ctx) {
    const int n = R.rows();
    const long p = ctx.p;
    FMat A = R;
    FMat U = FMat::identity(n, QuadElem::one(ctx.d));
    for (int t = 0; t < n; ++t) {
        int bi = -1, bj = -1;
        long bestv = 0;
        for (int i = t; i < n; ++i)
            for (int j = t; j < n; ++j) {
                if (A(i, j).is_zero()) continue;
                long v = val_F(A(i, j), p);
                if (bi < 0 || v < bestv) {
                    bi = i;
                    bj = j;
                    bestv = v;
                }
            }
        if (bi < 0) throw SingularBasis("snf of singular matrix");
        if (bi != t)
            for (int j = 0; j < n; ++j) {
                std::swap(A(bi, j), A(t, j));
                std::swap(U(j, bi), U(j, t));
            }
        if (bj != t)
            for (int i = 0; i < n; ++i) std::swap(A(i, bj), A(i, t));
        QuadElem unit = A(t, t) / QuadElem(ctx.d, p_power(p, bestv));
        for (int j = 0; j < n; ++j) A(t, j) = A(t, j) / unit;
        for (int j = 0; j < n; ++j) U(j, t) = U(j, t) * unit;
        for (int i = t + 1; i < n; ++i) {
            if (A(i, t).is_zero()) continue;
            QuadElem f = A(i, t) / A(t, t);
            for (int j = 0; j < n; ++j) A(i, j) = A(i, j) - f * A(t, j);
            for (int j = 0; j < n; ++j) U(j, t) = U(j, t) + f * U(j, i);
        }
        for (int j = t + 1; j < n; ++j) {
            if (A(t, j).is_zero()) continue;
            QuadElem f = A(t, j) / A(t, t);
            for (int i = 0; i < n; ++i) A(i, j) = A(i, j) - f * A(i, t);
        }
    }
    SnfOFResult res;
    res.exponents.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) res.exponents[static_cast<size_t>(i)] = val_F(A(i, i), p);
    std::vector<int> perm(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    std::sort(perm.begin(), perm.end(), [&](int a, int b) {
        return res.exponents[static_cast<size_t>(a)] < res.exponents[static_cast<size_t>(b)];
    });
    FMat U2(n, n, QuadElem::zero(ctx.d));
    std::vector<long> e2(static_cast<size_t>(n));
    for (int t = 0; t < n; ++t) {
        int s = perm[static_cast<size_t>(t)];
        e2[static_cast<size_t>(t)] = res.exponents[static_cast<size_t>(s)];
        for (int i = 0; i < n; ++i) U2(i, t) = U(i, s);
    }
    res.U = U2;
    res.exponents = e2;
    return res;
}

std::vector<QuadLattice> of_lattices_between(const FMat& B1, const FMat& B2,
                                             const LocalFieldCtx& ctx) {
    const int m = B1.rows();
    const long p = ctx.p;
    FMat R = B2.inverse() * B1;
    SnfOFResult snf = snf_OF(R, ctx);
    FMat frame = B2 * snf.U;
    const auto& e = snf.exponents;
    for (long x : e)
        if (x < 0) throw NotNested("M1 not inside M2 over O_F");

    std::vector<QuadLattice> out;
    FMat H = FMat::identity(m, QuadElem::one(ctx.d));
    std::vector<long> k(static_cast<size_t>(m), 0);
    struct OffEntry {
        int i, j;
    };
    std::vector<OffEntry> off;
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < j; ++i) off.push_back({i, j});

    auto emit = [&]() {
        // containment of diag(p^{e_i}) via back-substitution over O_F
        for (int i = 0; i < m; ++i) {
            std::vector<QuadElem> v(static_cast<size_t>(m), QuadElem::zero(ctx.d));
            v[static_cast<size_t>(i)] = QuadElem(ctx.d, p_power(p, e[static_cast<size_t>(i)]));
            for (int t = m - 1; t >= 0; --t) {
                QuadElem c = v[static_cast<size_t>(t)] / H(t, t);
                if (!in_OF(c, p)) return;
                for (int s = 0; s <= t; ++s)
                    v[static_cast<size_t>(s)] = v[static_cast<size_t>(s)] - c * H(s, t);
            }
        }
        FMat basis = frame * H;
        std::vector<std::vector<QuadElem>> gens;
        for (int j = 0; j < m; ++j) gens.push_back(basis.col(j));
        out.emplace_back(ctx, m, gens);
    };

    std::function<void(size_t)> rec_off = [&](size_t t) {
        if (t == off.size()) {
            emit();
            return;
        }
        auto [i, j] = off[t];
        long bound = 1;
        for (long x = 0; x < k[static_cast<size_t>(i)]; ++x) bound *= p;
        for (long va = 0; va < bound; ++va)
            for (long vb = 0; vb < bound; ++vb) {
                H(i, j) = QuadElem(ctx.d, Rat(va), Rat(vb));
                rec_off(t + 1);
            }
        H(i, j) = QuadElem::zero(ctx.d);
    };
    std::function<void(int)> rec_diag = [&](int i) {
        if (i == m) {
            rec_off(0);
            return;
        }
        for (long ki = 0; ki <= e[static_cast<size_t>(i)]; ++ki) {
            k[static_cast<size_t>(i)] = ki;
            H(i, i) = QuadElem(ctx.d, p_power(p, ki));
            rec_diag(i + 1);
        }
    };
    rec_diag(0);
    return out;
}

}  // namespace jr
