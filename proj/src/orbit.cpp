#include "jr/orbit.hpp"

#include <algorithm>
#include <set>

namespace jr {

namespace {

std::vector<QuadElem> lift_vec(long d, const std::vector<Rat>& v) {
    std::vector<QuadElem> out;
    out.reserve(v.size());
    for (const auto& x : v) out.emplace_back(d, x);
    return out;
}

std::vector<QuadElem> mat_vec(const FMat& M, const std::vector<QuadElem>& v) { return M.apply(v); }

QuadElem dot_row_col(const std::vector<QuadElem>& row, const std::vector<QuadElem>& col) {
    QuadElem s = QuadElem::zero(row[0].d);
    for (size_t i = 0; i < row.size(); ++i) s = s + row[i] * col[i];
    return s;
}

FMat scalar_times(const QuadElem& c, const FMat& M) {
    FMat R = M;
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) R(i, j) = c * M(i, j);
    return R;
}

FMat companion_matrix(const FPoly& alpha, long d) {
    int m = alpha.degree();
    FMat C(m, m, QuadElem::zero(d));
    for (int i = 0; i + 1 < m; ++i) C(i + 1, i) = QuadElem::one(d);
    for (int i = 0; i < m; ++i) C(i, m - 1) = -alpha.c[static_cast<size_t>(i)];
    return C;
}

}  // namespace

bool conjugate_self_reciprocal(const FPoly& alpha) {
    int m = alpha.degree();
    if (m < 1) return false;
    const QuadElem& a0 = alpha.c[0];
    if (a0.is_zero()) return false;
    for (int k = 0; k <= m; ++k) {
        QuadElem lhs = alpha.c[static_cast<size_t>(m - k)];
        QuadElem rhs = a0 * alpha.c[static_cast<size_t>(k)].conj();
        if (lhs != rhs) return false;
    }
    return true;
}

QuadElem herm_pair(const FMat& J, const std::vector<QuadElem>& x, const std::vector<QuadElem>& y) {
    QuadElem s = QuadElem::zero(J.sample().d);
    for (int i = 0; i < J.rows(); ++i)
        for (int j = 0; j < J.cols(); ++j) s = s + y[static_cast<size_t>(i)].conj() * J(i, j) * x[static_cast<size_t>(j)];
    return s;
}

bool is_in_S(const FMat& gamma) {
    FMat prod = gamma * gamma.conj();
    return prod == FMat::identity(gamma.rows(), gamma.sample());
}

bool is_unitary(const FMat& J, const FMat& g) { return g.conj_transpose() * J * g == J; }

bool is_anti_selfadjoint(const FMat& J, const FMat& x) {
    return (J * x + x.conj_transpose() * J).is_zero();
}

bool is_in_lie_s(const FMat& y) { return (y + y.conj()).is_zero(); }

InvariantVector invariants(const SemiLiePair& x) {
    long d = x.gamma.sample().d;
    InvariantVector iv;
    iv.charpoly = charpoly_poly(x.gamma);
    std::vector<QuadElem> v = lift_vec(d, x.u1);
    std::vector<QuadElem> u2 = lift_vec(d, x.u2);
    for (int i = 0; i < x.rank(); ++i) {
        iv.moments.push_back(dot_row_col(u2, v));
        v = mat_vec(x.gamma, v);
    }
    return iv;
}

InvariantVector invariants(const UnitaryPair& x) {
    InvariantVector iv;
    iv.charpoly = charpoly_poly(x.g);
    std::vector<QuadElem> v = x.u;
    for (int i = 0; i < x.rank(); ++i) {
        iv.moments.push_back(herm_pair(x.gram, v, x.u));
        v = mat_vec(x.g, v);
    }
    return iv;
}

namespace {

// columns u, gamma u, ..., gamma^{m-1} u
FMat cyclic_matrix(const FMat& gamma, std::vector<QuadElem> v) {
    int m = gamma.rows();
    FMat W(m, m, QuadElem::zero(gamma.sample().d));
    for (int j = 0; j < m; ++j) {
        W.set_col(j, v);
        v = mat_vec(gamma, v);
    }
    return W;
}

bool semisimple(const FMat& gamma) {
    FPoly cp = charpoly_poly(gamma);
    FPoly sf = Poly<QuadElem>::divmod(cp, poly_gcd(cp, cp.derivative())).first;
    // evaluate sf at gamma
    int m = gamma.rows();
    FMat acc = FMat::zeros(m, m, gamma.sample());
    FMat pw = FMat::identity(m, gamma.sample());
    for (int k = 0; k <= sf.degree(); ++k) {
        acc = acc + scalar_times(sf.c[static_cast<size_t>(k)], pw);
        pw = pw * gamma;
    }
    return acc.is_zero();
}

}  // namespace

bool is_regular_semisimple(const SemiLiePair& x) {
    long d = x.gamma.sample().d;
    FMat W = cyclic_matrix(x.gamma, lift_vec(d, x.u1));
    if (W.det().is_zero()) return false;
    FMat Wt = cyclic_matrix(x.gamma.transpose(), lift_vec(d, x.u2));
    return !Wt.det().is_zero();
}

bool is_regular_semisimple(const UnitaryPair& x) {
    return !cyclic_matrix(x.g, x.u).det().is_zero();
}

bool is_strongly_rs(const SemiLiePair& x) {
    return is_regular_semisimple(x) && semisimple(x.gamma);
}

bool is_strongly_rs(const UnitaryPair& x) { return is_regular_semisimple(x) && semisimple(x.g); }

bool matches(const SemiLiePair& s, const UnitaryPair& u) {
    InvariantVector a = invariants(s), b = invariants(u);
    return a.charpoly == b.charpoly && a.moments == b.moments;
}

FMat moment_gram(const InvariantVector& iv, const LocalFieldCtx& ctx) {
    int m = iv.rank();
    FMat G(m, m, QuadElem::zero(ctx.d));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            int k = i - j;
            G(i, j) = k >= 0 ? iv.moments[static_cast<size_t>(k)]
                             : iv.moments[static_cast<size_t>(-k)].conj();
        }
    return G;
}

Side decide_side(const InvariantVector& iv, const LocalFieldCtx& ctx) {
    FMat G = moment_gram(iv, ctx);
    QuadElem det = G.det();
    if (det.is_zero()) throw DegenerateGram("moment Gram is degenerate");
    if (det.b != 0) throw DegenerateGram("moment Gram determinant not in F_0");
    return (valuation_rat(det.a, ctx.p) % 2) ? Side::nonsplit : Side::split;
}

namespace {

int column_rank(const FMat& M) {
    FMat E = M;
    int rank = 0;
    for (int col = 0; col < E.cols() && rank < E.rows(); ++col) {
        int piv = -1;
        for (int r = rank; r < E.rows(); ++r)
            if (!E(r, col).is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        for (int c2 = 0; c2 < E.cols(); ++c2) std::swap(E(piv, c2), E(rank, c2));
        for (int r = rank + 1; r < E.rows(); ++r) {
            if (E(r, col).is_zero()) continue;
            QuadElem f = E(r, col) / E(rank, col);
            for (int c2 = 0; c2 < E.cols(); ++c2) E(r, c2) = E(r, c2) - f * E(rank, c2);
        }
        ++rank;
    }
    return rank;
}

// Greedy maximal independent subset, in order.
std::vector<std::vector<QuadElem>> independent_subset(const std::vector<std::vector<QuadElem>>& vecs,
                                                      int ambient, long d, int want) {
    std::vector<std::vector<QuadElem>> picked;
    for (const auto& v : vecs) {
        if (static_cast<int>(picked.size()) == want) break;
        auto trial = picked;
        trial.push_back(v);
        FMat M(ambient, static_cast<int>(trial.size()), QuadElem::zero(d));
        for (size_t j = 0; j < trial.size(); ++j) M.set_col(static_cast<int>(j), trial[j]);
        if (column_rank(M) == static_cast<int>(trial.size())) picked = trial;
    }
    return picked;
}

// Orthogonal basis of the space with Gram J, by Gram-Schmidt with a small
// search for non-isotropic pivots.
std::vector<std::vector<QuadElem>> orthogonalize(const FMat& J, const LocalFieldCtx& ctx) {
    int m = J.rows();
    long d = ctx.d;
    std::vector<std::vector<QuadElem>> basis;
    for (int i = 0; i < m; ++i) {
        std::vector<QuadElem> e(static_cast<size_t>(m), QuadElem::zero(d));
        e[static_cast<size_t>(i)] = QuadElem::one(d);
        basis.push_back(e);
    }
    std::vector<std::vector<QuadElem>> out;
    while (!basis.empty()) {
        // find a vector with nonzero norm among small combinations
        std::vector<QuadElem> pivot;
        QuadElem sd = QuadElem::sqrt_d(d);
        for (size_t i = 0; i < basis.size() && pivot.empty(); ++i)
            if (!herm_pair(J, basis[i], basis[i]).is_zero()) pivot = basis[i];
        for (size_t i = 0; i < basis.size() && pivot.empty(); ++i)
            for (size_t j = i + 1; j < basis.size() && pivot.empty(); ++j)
                for (int sgn = 0; sgn < 4 && pivot.empty(); ++sgn) {
                    QuadElem c = (sgn < 2) ? QuadElem(d, sgn == 0 ? 1 : -1) : (sgn == 2 ? sd : -sd);
                    std::vector<QuadElem> v = basis[i];
                    for (size_t t = 0; t < v.size(); ++t) v[t] = v[t] + c * basis[j][t];
                    if (!herm_pair(J, v, v).is_zero()) pivot = v;
                }
        if (pivot.empty()) throw DegenerateForm("isotropic kernel: form degenerate");
        out.push_back(pivot);
        QuadElem q = herm_pair(J, pivot, pivot);
        std::vector<std::vector<QuadElem>> next;
        for (auto& b : basis) {
            std::vector<QuadElem> v = b;
            QuadElem c = herm_pair(J, b, pivot) / q;
            for (size_t t = 0; t < v.size(); ++t) v[t] = v[t] - c * pivot[t];
            bool zero = true;
            for (auto& x : v) zero = zero && x.is_zero();
            if (!zero) next.push_back(v);
        }
        basis = independent_subset(next, m, d, static_cast<int>(basis.size()) - 1);
    }
    return out;
}

// Solve Nm(beta) = x^2 - d y^2 congruent to c mod p by brute force.
QuadElem solve_norm_mod_p(const Rat& c, const LocalFieldCtx& ctx) {
    long p = ctx.p;
    Int cm = c.get_num() % p;
    Int den = c.get_den() % p;
    Int dinv;
    mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), Int(p).get_mpz_t());
    long target = mpz_class((cm * dinv) % p).get_si();
    if (target < 0) target += p;
    long dm = ((ctx.d % p) + p) % p;
    for (long x = 0; x < p; ++x)
        for (long y = 0; y < p; ++y) {
            long v = ((x * x - dm * y * y) % p + p) % p;
            if (v == target) return QuadElem(ctx.d, Rat(x), Rat(y));
        }
    throw std::logic_error("norm not surjective mod p (impossible)");
}

}  // namespace

std::optional<QuadLattice> build_self_dual_lattice(const FMat& J, const LocalFieldCtx& ctx) {
    if (J.det().is_zero()) throw DegenerateForm("degenerate hermitian form");
    int m = J.rows();
    auto ortho = orthogonalize(J, ctx);
    // rescale to make norms p^0 or p^1 times unit
    std::vector<std::vector<QuadElem>> unitvecs, oddvecs;
    for (auto& v : ortho) {
        QuadElem q = herm_pair(J, v, v);
        long val = valuation_rat(q.a, ctx.p);   // q in F_0
        long half = (val >= 0) ? val / 2 : -((-val + 1) / 2);
        Rat scale = Rat(1) / p_power(ctx.p, half);
        std::vector<QuadElem> w = v;
        for (auto& x : w) x = scale * x;
        long rem = val - 2 * half;   // 0 or 1
        (rem == 0 ? unitvecs : oddvecs).push_back(w);
    }
    // pair odd-valuation vectors two at a time
    while (oddvecs.size() >= 2) {
        auto vi = oddvecs.back();
        oddvecs.pop_back();
        auto vj = oddvecs.back();
        oddvecs.pop_back();
        QuadElem qi = herm_pair(J, vi, vi), qj = herm_pair(J, vj, vj);
        // find beta with v(qi + Nm(beta) qj) exactly 1 + v(qi) - 1 ... i.e.
        // unit + Nm(beta) unit' = p * unit''
        Rat ui = qi.a / p_power(ctx.p, 1), uj = qj.a / p_power(ctx.p, 1);
        QuadElem beta = solve_norm_mod_p(-ui / uj, ctx);
        auto norm_val = [&](const QuadElem& b) {
            Rat q = ui + b.norm() * uj;
            return q == 0 ? VAL_INF : valuation_rat(q, ctx.p);
        };
        if (norm_val(beta) != 1) {
            QuadElem adjust(ctx.d, Rat(1 + ctx.p), Rat(0));
            beta = beta * adjust;
        }
        if (norm_val(beta) != 1) throw std::logic_error("norm adjustment failed");
        // x = vi + beta vj has norm p^2 * unit; x/p is a unit vector
        std::vector<QuadElem> x = vi;
        for (size_t t = 0; t < x.size(); ++t) x[t] = x[t] + beta * vj[t];
        QuadElem qx = herm_pair(J, x, x);
        for (auto& c : x) c = Rat(1, ctx.p) * c;
        qx = herm_pair(J, x, x);
        // orthogonal complement of x inside span(vi, vj)
        std::vector<QuadElem> y = vj;
        QuadElem cproj = herm_pair(J, vj, x) / qx;
        for (size_t t = 0; t < y.size(); ++t) y[t] = y[t] - cproj * x[t];
        QuadElem qy = herm_pair(J, y, y);
        long vy = valuation_rat(qy.a, ctx.p);
        if (vy % 2 != 0) throw std::logic_error("complement norm has odd valuation");
        Rat sc = Rat(1) / p_power(ctx.p, vy / 2);
        for (auto& c : y) c = sc * c;
        unitvecs.push_back(x);
        unitvecs.push_back(y);
    }
    if (!oddvecs.empty()) return std::nullopt;   // nonsplit space
    if (static_cast<int>(unitvecs.size()) != m) throw std::logic_error("basis size mismatch");
    return QuadLattice(ctx, m, unitvecs);
}

int transfer_factor(const SemiLiePair& x, const LocalFieldCtx& ctx) {
    long d = x.gamma.sample().d;
    FMat W = cyclic_matrix(x.gamma, lift_vec(d, x.u1));
    QuadElem det = W.det();
    if (det.is_zero()) throw NotRegular("transfer factor of a non-regular pair");
    QuadElem dg = x.gamma.det();
    int fl = x.rank() / 2;
    QuadElem arg = det;
    for (int i = 0; i < fl; ++i) arg = arg / dg;
    return eta_tilde(arg, ctx);
}

int transfer_factor_group(const FMat& gamma, const LocalFieldCtx& ctx) {
    int n = gamma.rows();
    long d = gamma.sample().d;
    std::vector<QuadElem> e(static_cast<size_t>(n), QuadElem::zero(d));
    e[static_cast<size_t>(n - 1)] = QuadElem::one(d);
    FMat W = cyclic_matrix(gamma, e);
    QuadElem det = W.det();
    if (det.is_zero()) throw NotRegular("transfer factor of a non-regular element");
    QuadElem dg = gamma.det();
    int fl = n / 2;
    QuadElem arg = det;
    for (int i = 0; i < fl; ++i) arg = arg / dg;
    return eta_tilde(arg, ctx);
}

FMat cayley_to_group(const FMat& x) {
    int m = x.rows();
    FMat I = FMat::identity(m, x.sample());
    FMat den = I + x;
    if (den.det().is_zero()) throw SingularDenominator("det(1+x) = 0");
    return -((I - x) * den.inverse());
}

FMat cayley_to_lie(const FMat& g) {
    int m = g.rows();
    FMat I = FMat::identity(m, g.sample());
    FMat den = I - g;
    if (den.det().is_zero()) throw SingularDenominator("det(1-g) = 0");
    return den.inverse() * (I + g);
}

FramedSpace frame_special_vector(const FMat& gram, const std::vector<QuadElem>& u0) {
    int n = gram.rows();
    long d = gram.sample().d;
    QuadElem norm = herm_pair(gram, u0, u0);
    if (norm != QuadElem::one(d)) throw BadContext("special vector must have norm one");
    // project the standard basis onto the orthogonal complement of u0
    std::vector<std::vector<QuadElem>> cand;
    for (int i = 0; i < n; ++i) {
        std::vector<QuadElem> e(static_cast<size_t>(n), QuadElem::zero(d));
        e[static_cast<size_t>(i)] = QuadElem::one(d);
        QuadElem c = herm_pair(gram, e, u0);   // <e, u0>
        for (int t = 0; t < n; ++t) e[static_cast<size_t>(t)] = e[static_cast<size_t>(t)] - c * u0[static_cast<size_t>(t)];
        cand.push_back(e);
    }
    auto picked = independent_subset(cand, n, d, n - 1);
    if (static_cast<int>(picked.size()) != n - 1) throw DegenerateForm("no complement basis");
    FMat T(n, n, QuadElem::zero(d));
    for (int j = 0; j < n - 1; ++j) T.set_col(j, picked[static_cast<size_t>(j)]);
    T.set_col(n - 1, u0);
    FramedSpace fs;
    fs.transform = T;
    fs.gram = T.conj_transpose() * gram * T;
    for (int i = 0; i < n - 1; ++i) {
        if (!fs.gram(i, n - 1).is_zero() || !fs.gram(n - 1, i).is_zero())
            throw std::logic_error("framing failed");
    }
    return fs;
}

UnitaryReduction reduce_unitary(const FMat& gramFramed, const FMat& gprime, ReduceVariant variant,
                                const QuadElem& xi, const LocalFieldCtx& ctx) {
    int n = gprime.rows();
    int m = n - 1;
    long d = ctx.d;
    if (xi.norm() != 1) throw BadContext("xi must have norm one");
    for (int i = 0; i < m; ++i)
        if (!gramFramed(i, n - 1).is_zero() || !gramFramed(n - 1, i).is_zero())
            throw BadContext("space not framed");
    if (gramFramed(n - 1, n - 1) != QuadElem::one(d)) throw BadContext("special vector not norm one");
    if (!is_unitary(gramFramed, gprime)) throw BadContext("g' not unitary");

    FMat g2 = scalar_times(xi, gprime);
    UnitaryReduction R;
    R.gram = gramFramed.block(0, 0, m, m);
    R.h = g2.block(0, 0, m, m);
    R.ucol.resize(static_cast<size_t>(m), QuadElem::zero(d));
    R.w.resize(static_cast<size_t>(m), QuadElem::zero(d));
    for (int i = 0; i < m; ++i) R.ucol[static_cast<size_t>(i)] = g2(i, n - 1);
    R.dcorner = g2(n - 1, n - 1);
    // w from the adjoint row:   w*_row = conj(w)^T J
    FMat Jinv = R.gram.inverse();
    std::vector<QuadElem> wstar(static_cast<size_t>(m), QuadElem::zero(d));
    for (int j = 0; j < m; ++j) wstar[static_cast<size_t>(j)] = g2(n - 1, j);
    for (int i = 0; i < m; ++i) {
        QuadElem acc = QuadElem::zero(d);
        for (int j = 0; j < m; ++j) acc = acc + wstar[static_cast<size_t>(j)] * Jinv(j, i);
        R.w[static_cast<size_t>(i)] = acc.conj();
    }

    QuadElem one = QuadElem::one(d);
    if ((one - R.dcorner).is_zero()) throw OutsideOpenLocus("1 - d = 0");
    FMat I = FMat::identity(n, one);
    if ((I - g2).det().is_zero()) throw OutsideOpenLocus("det(1 - xi g') = 0");

    FMat xprime = cayley_to_lie(g2);
    R.e = xprime(n - 1, n - 1);
    FMat x = xprime.block(0, 0, m, m);
    R.g = cayley_to_group(x);

    QuadElem sqeps = QuadElem::sqrt_d(d);
    if (variant == ReduceVariant::r) {
        QuadElem den = (one - R.dcorner) * sqeps;
        R.u.resize(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) R.u[static_cast<size_t>(i)] = R.ucol[static_cast<size_t>(i)] / den;
    } else {
        R.u.resize(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) R.u[static_cast<size_t>(i)] = xprime(i, n - 1) / sqeps;
    }
    return R;
}

SymmetricReduction reduce_symmetric(const FMat& gammaPrime, ReduceVariant variant,
                                    const QuadElem& xi, const LocalFieldCtx& ctx) {
    int n = gammaPrime.rows();
    int m = n - 1;
    long d = ctx.d;
    if (xi.norm() != 1) throw BadContext("xi must have norm one");
    if (!is_in_S(gammaPrime)) throw BadContext("gamma' not in S_n");

    FMat g2 = scalar_times(xi, gammaPrime);
    SymmetricReduction R;
    R.a = g2.block(0, 0, m, m);
    R.bcol.resize(static_cast<size_t>(m));
    R.crow.resize(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        R.bcol[static_cast<size_t>(i)] = g2(i, n - 1);
        R.crow[static_cast<size_t>(i)] = g2(n - 1, i);
    }
    R.dcorner = g2(n - 1, n - 1);
    QuadElem one = QuadElem::one(d);
    if ((one - R.dcorner).is_zero()) throw OutsideOpenLocus("1 - d = 0");
    FMat I = FMat::identity(n, one);
    if ((I - g2).det().is_zero()) throw OutsideOpenLocus("det(1 - xi gamma') = 0");

    FMat yprime = cayley_to_lie(g2);
    R.e = yprime(n - 1, n - 1);
    FMat y = yprime.block(0, 0, m, m);
    FMat gamma = cayley_to_group(y);

    QuadElem sqeps = QuadElem::sqrt_d(d);
    std::vector<QuadElem> btilde(static_cast<size_t>(m)), ctilde(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        btilde[static_cast<size_t>(i)] = yprime(i, n - 1);
        ctilde[static_cast<size_t>(i)] = yprime(n - 1, i);
    }
    std::vector<QuadElem> c2 = ctilde;
    if (variant == ReduceVariant::r) {
        FMat Im = FMat::identity(m, one);
        FMat inv = (Im - y * y).inverse();
        std::vector<QuadElem> tmp(static_cast<size_t>(m), QuadElem::zero(d));
        for (int j = 0; j < m; ++j) {
            QuadElem acc = QuadElem::zero(d);
            for (int i = 0; i < m; ++i) acc = acc + ctilde[static_cast<size_t>(i)] * inv(i, j);
            tmp[static_cast<size_t>(j)] = acc;
        }
        c2 = tmp;
    }
    R.pair.gamma = gamma;
    R.pair.u1.resize(static_cast<size_t>(m));
    R.pair.u2.resize(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        QuadElem x1 = btilde[static_cast<size_t>(i)] / sqeps;
        QuadElem x2 = c2[static_cast<size_t>(i)] / sqeps;
        if (x1.b != 0 || x2.b != 0) throw std::logic_error("reduction output not rational");
        R.pair.u1[static_cast<size_t>(i)] = x1.a;
        R.pair.u2[static_cast<size_t>(i)] = x2.a;
    }
    return R;
}

FMat lift_unitary(const FMat& gram, const FMat& g, const std::vector<QuadElem>& u,
                  const QuadElem& e, ReduceVariant variant, const QuadElem& xi,
                  const LocalFieldCtx& ctx) {
    int m = g.rows();
    int n = m + 1;
    long d = ctx.d;
    QuadElem one = QuadElem::one(d);
    QuadElem sqeps = QuadElem::sqrt_d(d);
    if (!(e + e.conj()).is_zero()) throw BadContext("e not in u(1)");
    FMat x = cayley_to_lie(g);
    std::vector<QuadElem> utilde(static_cast<size_t>(m));
    if (variant == ReduceVariant::r) {
        FMat inv = (FMat::identity(m, one) - g).inverse();
        auto t = inv.apply(u);
        for (int i = 0; i < m; ++i)
            utilde[static_cast<size_t>(i)] = Rat(2) * (sqeps * t[static_cast<size_t>(i)]);
    } else {
        for (int i = 0; i < m; ++i) utilde[static_cast<size_t>(i)] = sqeps * u[static_cast<size_t>(i)];
    }
    // utilde^* = conj(utilde)^T J
    std::vector<QuadElem> ustar(static_cast<size_t>(m), QuadElem::zero(d));
    for (int j = 0; j < m; ++j) {
        QuadElem acc = QuadElem::zero(d);
        for (int i = 0; i < m; ++i) acc = acc + utilde[static_cast<size_t>(i)].conj() * gram(i, j);
        ustar[static_cast<size_t>(j)] = acc;
    }
    FMat xprime(n, n, QuadElem::zero(d));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) xprime(i, j) = x(i, j);
    for (int i = 0; i < m; ++i) {
        xprime(i, n - 1) = utilde[static_cast<size_t>(i)];
        xprime(n - 1, i) = -ustar[static_cast<size_t>(i)];
    }
    xprime(n - 1, n - 1) = e;
    FMat gprime = cayley_to_group(xprime);
    return scalar_times(xi.inv(), gprime);
}

FMat lift_symmetric(const FMat& gamma, const std::vector<Rat>& u1, const std::vector<Rat>& u2,
                    const QuadElem& e, ReduceVariant variant, const QuadElem& xi,
                    const LocalFieldCtx& ctx) {
    int m = gamma.rows();
    int n = m + 1;
    long d = ctx.d;
    QuadElem one = QuadElem::one(d);
    QuadElem sqeps = QuadElem::sqrt_d(d);
    if (!(e + e.conj()).is_zero()) throw BadContext("e not in lie(s_1)");
    FMat y = cayley_to_lie(gamma);
    std::vector<QuadElem> btilde(static_cast<size_t>(m)), ctilde(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) btilde[static_cast<size_t>(i)] = sqeps * QuadElem(d, u1[static_cast<size_t>(i)]);
    if (variant == ReduceVariant::r) {
        FMat ymat = FMat::identity(m, one) - y * y;
        // c~ = sqrt(eps) u2 (1 - y^2)
        for (int j = 0; j < m; ++j) {
            QuadElem acc = QuadElem::zero(d);
            for (int i = 0; i < m; ++i) acc = acc + QuadElem(d, u2[static_cast<size_t>(i)]) * ymat(i, j);
            ctilde[static_cast<size_t>(j)] = sqeps * acc;
        }
    } else {
        for (int i = 0; i < m; ++i) ctilde[static_cast<size_t>(i)] = sqeps * QuadElem(d, u2[static_cast<size_t>(i)]);
    }
    FMat yprime(n, n, QuadElem::zero(d));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) yprime(i, j) = y(i, j);
    for (int i = 0; i < m; ++i) {
        yprime(i, n - 1) = btilde[static_cast<size_t>(i)];
        yprime(n - 1, i) = ctilde[static_cast<size_t>(i)];
    }
    yprime(n - 1, n - 1) = e;
    FMat gprime = cayley_to_group(yprime);
    return scalar_times(xi.inv(), gprime);
}

// ---------------------------------------------------------------------

FMat semilie_group_rep(const FPoly& alpha, const LocalFieldCtx& ctx) {
    if (!conjugate_self_reciprocal(alpha))
        throw NotOnBaseVariety("charpoly not conjugate self-reciprocal");
    int m = alpha.degree();
    long d = ctx.d;
    if (m == 1) {
        QuadElem t = -alpha.c[0];
        FMat g(1, 1, t);
        if (!is_in_S(g)) throw NotOnBaseVariety("norm of the root is not one");
        return g;
    }
    for (const QuadElem& xi : norm_one_elements(ctx, 64)) {
        // alpha_xi(U) = xi^{-m} alpha(xi U)
        FPoly ax;
        ax.c.resize(static_cast<size_t>(m) + 1, QuadElem::zero(d));
        QuadElem xipow = QuadElem::one(d);
        for (int k = 0; k <= m; ++k) {
            QuadElem coef = alpha.c[static_cast<size_t>(k)] * xipow;   // a_k xi^k
            ax.c[static_cast<size_t>(k)] = coef;
            xipow = xipow * xi;
        }
        QuadElem ximinv = (xi.inv());
        QuadElem scale = QuadElem::one(d);
        for (int k = 0; k < m; ++k) scale = scale * ximinv;
        for (int k = 0; k <= m; ++k) ax.c[static_cast<size_t>(k)] = scale * ax.c[static_cast<size_t>(k)];
        ax.trim();
        if (ax.degree() != m) continue;
        QuadElem a1 = ax.eval(QuadElem::one(d));
        if (a1.is_zero()) continue;
        // charpoly of y: (S+1)^m alpha_xi((S-1)/(S+1)) / alpha_xi(1)
        FPoly sm1(std::vector<QuadElem>{QuadElem(d, Rat(-1)), QuadElem::one(d)});   // S - 1
        FPoly sp1(std::vector<QuadElem>{QuadElem::one(d), QuadElem::one(d)});       // S + 1
        FPoly P;
        for (int k = 0; k <= m; ++k) {
            FPoly term(std::vector<QuadElem>{ax.c[static_cast<size_t>(k)]});
            for (int t = 0; t < k; ++t) term = term * sm1;
            for (int t = k; t < m; ++t) term = term * sp1;
            P = P + term;
        }
        QuadElem a1inv = a1.inv();
        for (auto& c : P.c) c = a1inv * c;
        // y = sqrt(d) B: charpoly_B(U) = charpoly_y(sqrt(d) U) / sqrt(d)^m must be rational
        QPoly bpoly;
        bpoly.c.resize(static_cast<size_t>(m) + 1, Rat(0));
        bool ok = true;
        QuadElem sd = QuadElem::sqrt_d(d);
        for (int k = 0; k <= m && ok; ++k) {
            // coefficient c_k * sqrt(d)^{k-m}
            QuadElem coef = P.at(k, sd);
            QuadElem pw = QuadElem::one(d);
            for (int t = 0; t < m - k; ++t) pw = pw * sd;
            coef = coef / pw;
            if (coef.b != 0) ok = false;
            else bpoly.c[static_cast<size_t>(k)] = coef.a;
        }
        if (!ok) continue;
        bpoly.trim();
        if (bpoly.degree() != m) continue;
        FMat B = companion_matrix(lift_poly(d, bpoly), d);
        FMat y = scalar_times(sd, B);
        FMat gamma0;
        try {
            gamma0 = cayley_to_group(y);
        } catch (const SingularDenominator&) {
            continue;
        }
        FMat gamma = scalar_times(xi, gamma0);
        if (!is_in_S(gamma)) continue;
        if (charpoly_poly(gamma) != alpha) continue;
        return gamma;
    }
    throw NotOnBaseVariety("no representative found for this charpoly");
}

SemiLiePair semilie_from_invariants(const InvariantVector& iv, const LocalFieldCtx& ctx) {
    int m = iv.rank();
    long d = ctx.d;
    FMat gamma = semilie_group_rep(iv.charpoly, ctx);
    // candidate cyclic vectors
    std::vector<std::vector<Rat>> cands;
    for (int i = 0; i < m; ++i) {
        std::vector<Rat> e(static_cast<size_t>(m), Rat(0));
        e[static_cast<size_t>(i)] = Rat(1);
        cands.push_back(e);
    }
    cands.emplace_back(static_cast<size_t>(m), Rat(1));
    for (long s = 2; s <= 6; ++s) {
        std::vector<Rat> v(static_cast<size_t>(m));
        long x = 1;
        for (int i = 0; i < m; ++i) {
            v[static_cast<size_t>(i)] = Rat(x);
            x = (x * s + 1) % 17 + 1;
        }
        cands.push_back(v);
    }
    for (const auto& u1 : cands) {
        FMat W = cyclic_matrix(gamma, lift_vec(d, u1));
        if (W.det().is_zero()) continue;
        // solve u2 W = (a_0 .. a_{m-1})
        FMat Winv = W.inverse();
        std::vector<QuadElem> u2f(static_cast<size_t>(m), QuadElem::zero(d));
        for (int j = 0; j < m; ++j) {
            QuadElem acc = QuadElem::zero(d);
            for (int i = 0; i < m; ++i) acc = acc + iv.moments[static_cast<size_t>(i)] * Winv(i, j);
            u2f[static_cast<size_t>(j)] = acc;
        }
        bool rat = true;
        for (const auto& x : u2f) rat = rat && x.b == 0;
        if (!rat) continue;
        SemiLiePair pair;
        pair.gamma = gamma;
        pair.u1 = u1;
        pair.u2.resize(static_cast<size_t>(m));
        for (int j = 0; j < m; ++j) pair.u2[static_cast<size_t>(j)] = u2f[static_cast<size_t>(j)].a;
        if (!is_regular_semisimple(pair)) continue;
        InvariantVector got = invariants(pair);
        if (got.charpoly == iv.charpoly && got.moments == iv.moments) return pair;
    }
    throw NotOnBaseVariety("invariants do not come from a rational semi-Lie pair");
}

UnitaryPair unitary_from_invariants(const InvariantVector& iv, const LocalFieldCtx& ctx) {
    int m = iv.rank();
    long d = ctx.d;
    UnitaryPair up;
    up.gram = moment_gram(iv, ctx);
    if (up.gram.det().is_zero()) throw DegenerateGram("moment Gram degenerate");
    up.g = companion_matrix(iv.charpoly, d);
    up.u.assign(static_cast<size_t>(m), QuadElem::zero(d));
    up.u[0] = QuadElem::one(d);
    if (up.gram != up.gram.conj_transpose()) throw NotOnBaseVariety("moment Gram not hermitian");
    if (!is_unitary(up.gram, up.g)) throw NotOnBaseVariety("companion not unitary for moment Gram");
    InvariantVector got = invariants(up);
    if (got.charpoly != iv.charpoly || got.moments != iv.moments)
        throw NotOnBaseVariety("unitary synthesis invariants mismatch");
    return up;
}

UnitaryPair unitary_partner_of_group_element(const FMat& gammaPrime, const LocalFieldCtx& ctx) {
    int n = gammaPrime.rows();
    long d = ctx.d;
    if (!is_in_S(gammaPrime)) throw BadContext("not an S_n element");
    std::vector<QuadElem> e(static_cast<size_t>(n), QuadElem::zero(d));
    e[static_cast<size_t>(n - 1)] = QuadElem::one(d);
    // h_k = e^* gamma'^k e
    std::vector<QuadElem> h(static_cast<size_t>(n), QuadElem::zero(d));
    std::vector<QuadElem> v = e;
    for (int k = 0; k < n; ++k) {
        h[static_cast<size_t>(k)] = v[static_cast<size_t>(n - 1)];
        v = gammaPrime.apply(v);
    }
    InvariantVector iv;
    iv.charpoly = charpoly_poly(gammaPrime);
    iv.moments = h;
    return unitary_from_invariants(iv, ctx);
}

// ---------------------------------------------------------------------

long RandomSource::integer(long lo, long hi) {
    std::uniform_int_distribution<long> dist(lo, hi);
    return dist(rng);
}

Rat RandomSource::rational(long maxNum, long maxDen) {
    long num = integer(-maxNum, maxNum);
    long den = integer(1, maxDen);
    Rat r(num, den);
    r.canonicalize();
    return r;
}

QuadElem RandomSource::quad(long d, long maxNum, long maxDen) {
    return QuadElem(d, rational(maxNum, maxDen), rational(maxNum, maxDen));
}

FMat random_s_element(int m, RandomSource& rs, const LocalFieldCtx& ctx) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        QMat B(m, m, Rat(0));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) B(i, j) = rs.rational(3, 3);
        FMat y = scalar_times(QuadElem::sqrt_d(ctx.d), lift_to_quad(ctx.d, B));
        try {
            FMat g = cayley_to_group(y);
            if (is_in_S(g)) return g;
        } catch (const SingularDenominator&) {
        }
    }
    throw std::logic_error("random_s_element failed");
}

FMat random_anti_selfadjoint(const FMat& J, RandomSource& rs, const LocalFieldCtx& ctx) {
    int m = J.rows();
    long d = ctx.d;
    FMat S(m, m, QuadElem::zero(d));
    for (int i = 0; i < m; ++i) {
        S(i, i) = QuadElem(d, Rat(0), rs.rational(3, 3));
        for (int j = i + 1; j < m; ++j) {
            S(i, j) = rs.quad(d, 3, 3);
            S(j, i) = -S(i, j).conj();
        }
    }
    FMat x = J.inverse() * S;
    if (!is_anti_selfadjoint(J, x)) throw std::logic_error("anti-selfadjoint construction failed");
    return x;
}

FMat random_unitary(const FMat& J, RandomSource& rs, const LocalFieldCtx& ctx) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        FMat x = random_anti_selfadjoint(J, rs, ctx);
        try {
            FMat g = cayley_to_group(x);
            if (is_unitary(J, g)) return g;
        } catch (const SingularDenominator&) {
        }
    }
    throw std::logic_error("random_unitary failed");
}

FMat random_gl_rational(int m, RandomSource& rs, const LocalFieldCtx& ctx) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        QMat B(m, m, Rat(0));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) B(i, j) = rs.rational(4, 3);
        if (B.det() != 0) return lift_to_quad(ctx.d, B);
    }
    throw std::logic_error("random_gl_rational failed");
}

std::vector<QuadElem> norm_one_elements(const LocalFieldCtx& ctx, int count) {
    std::vector<QuadElem> out;
    std::set<std::pair<std::string, std::string>> seen;
    auto push = [&](const QuadElem& x) {
        if (static_cast<int>(out.size()) >= count) return;
        auto key = std::make_pair(rat_to_string(x.a), rat_to_string(x.b));
        if (seen.insert(key).second) out.push_back(x);
    };
    push(QuadElem::one(ctx.d));
    push(QuadElem(ctx.d, Rat(-1)));
    for (long a = 1; a <= 6 && static_cast<int>(out.size()) < count; ++a)
        for (long b = -6; b <= 6 && static_cast<int>(out.size()) < count; ++b) {
            if (b == 0) continue;
            QuadElem num(ctx.d, Rat(a), Rat(b));
            QuadElem den = num.conj();
            if (den.is_zero()) continue;
            push(num / den);
        }
    return out;
}

}  // namespace jr
