#include "jr/orbital.hpp"

#include <cmath>

namespace jr {

double LaurentX::eval(double q, double s) const {
    double acc = 0;
    for (const auto& [k, c] : coeffs) acc += c.get_d() * std::pow(q, -s * static_cast<double>(k));
    return acc;
}

namespace {

bool charpoly_integral(const FPoly& cp, const LocalFieldCtx& ctx) {
    for (const auto& c : cp.c)
        if (!in_OF(c, ctx.p)) return false;
    return true;
}

std::vector<QuadElem> lift_vec(long d, const std::vector<Rat>& v) {
    std::vector<QuadElem> out;
    out.reserve(v.size());
    for (const auto& x : v) out.emplace_back(d, x);
    return out;
}

}  // namespace

OrbGlDetails orb_gl_detailed(const SemiLiePair& x, const LocalFieldCtx& ctx, const Rat& c1,
                             const Rat& c2) {
    if (!is_regular_semisimple(x)) throw NotRegular("orb_gl of a non-rs pair");
    const int m = x.rank();
    const long p = ctx.p;
    const long d = ctx.d;
    FPoly cp = charpoly_poly(x.gamma);
    if (!charpoly_integral(cp, ctx)) return {LaurentX::zero(), 0};

    // M1 = O_F-span{gamma^i u1/c1} cap F_0^m, as a rank-m lattice in Q^m.
    // Build the rank-2m span with the rational block in the FIRST m
    // coordinates, so the canonical HNF exposes the section {y = 0} as its
    // top-left block.
    std::vector<QuadElem> v = lift_vec(d, x.u1);
    for (auto& e : v) e = (Rat(1) / c1) * e;
    std::vector<std::vector<QuadElem>> gens;
    for (int i = 0; i < m; ++i) {
        gens.push_back(v);
        v = x.gamma.apply(v);
    }
    QuadElem sd = QuadElem::sqrt_d(d);
    QMat G(2 * m, 2 * static_cast<int>(gens.size()), Rat(0));
    int col = 0;
    for (const auto& w : gens) {
        for (int i = 0; i < m; ++i) {
            G(i, col) = w[static_cast<size_t>(i)].a;        // x-block first
            G(m + i, col) = w[static_cast<size_t>(i)].b;    // sqrt(d)-block last
        }
        ++col;
        for (int i = 0; i < m; ++i) {
            QuadElem t = sd * w[static_cast<size_t>(i)];
            G(i, col) = t.a;
            G(m + i, col) = t.b;
        }
        ++col;
    }
    Lattice span2m(p, G);
    Lattice M1 = coordinate_section(span2m, m);

    // M2 = {z in Q^m : u2 gamma^i z in c2 O_F, i < m}.
    QMat C(2 * m, m, Rat(0));
    std::vector<QuadElem> row = lift_vec(d, x.u2);
    for (auto& e : row) e = (Rat(1) / c2) * e;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            C(2 * i, j) = row[static_cast<size_t>(j)].a;
            C(2 * i + 1, j) = row[static_cast<size_t>(j)].b;
        }
        // row <- row * gamma
        std::vector<QuadElem> next(static_cast<size_t>(m), QuadElem::zero(d));
        for (int j = 0; j < m; ++j) {
            QuadElem acc = QuadElem::zero(d);
            for (int t = 0; t < m; ++t) acc = acc + row[static_cast<size_t>(t)] * x.gamma(t, j);
            next[static_cast<size_t>(j)] = acc;
        }
        row = next;
    }
    Lattice M2 = preimage_lattice(C, p);

    // Admissible lattices satisfy M1 subset L subset M2; an incompatible
    // window means the support is empty and the integral vanishes.
    if (!M2.contains(M1)) return {LaurentX::zero(), 0};

    QMat A, Bpart;
    split_parts(x.gamma, A, Bpart);
    Lattice std_lattice = Lattice::standard(p, m);
    LaurentX result;
    long quotient_log = lattice_index(M1, M2);
    for (const Lattice& L : lattices_between(M1, M2)) {
        // gamma-stability: A L, B L inside L
        bool stable = true;
        for (int j = 0; j < m && stable; ++j) {
            auto cvec = L.basis().col(j);
            stable = L.contains(A.apply(cvec)) && L.contains(Bpart.apply(cvec));
        }
        if (!stable) continue;
        // u1 in c1 L
        Lattice Lc = (c1 == 1) ? L : L.scaled(c1);
        if (!Lc.contains(x.u1)) continue;
        // u2(L) in c2 O_F0
        bool codom = true;
        for (int j = 0; j < m && codom; ++j) {
            auto cvec = L.basis().col(j);
            Rat val(0);
            for (int t = 0; t < m; ++t) val += x.u2[static_cast<size_t>(t)] * cvec[static_cast<size_t>(t)];
            codom = in_Zp(val / c2, p);
        }
        if (!codom) continue;
        long deg = lattice_index(L, std_lattice);
        result.add_term(deg, Rat((deg % 2) ? -1 : 1));
    }
    return {result, quotient_log};
}

LaurentX orb_gl_scaled(const SemiLiePair& x, const LocalFieldCtx& ctx, const Rat& c1,
                       const Rat& c2) {
    return orb_gl_detailed(x, ctx, c1, c2).value;
}

long orb_u_scaled(const UnitaryPair& x, const LocalFieldCtx& ctx, const Rat& c) {
    if (!is_regular_semisimple(x)) throw NotRegular("orb_u of a non-rs pair");
    const int m = x.rank();
    QuadElem det = x.gram.det();
    if (det.is_zero() || det.b != 0) throw DegenerateGram("bad hermitian Gram");
    if (valuation_rat(det.a, ctx.p) % 2) throw NonSplitSpace("space has no self-dual lattice");

    FPoly cp = charpoly_poly(x.g);
    if (!charpoly_integral(cp, ctx)) return 0;

    // N1 = O_F[g] u; its Gram must be integral for any self-dual lattice
    // to contain it.
    std::vector<std::vector<QuadElem>> gens;
    std::vector<QuadElem> v = x.u;
    for (int i = 0; i < m; ++i) {
        std::vector<QuadElem> w = v;
        for (auto& e : w) e = (Rat(1) / c) * e;
        gens.push_back(w);
        v = x.g.apply(v);
    }
    for (const auto& a : gens)
        for (const auto& b : gens)
            if (!in_OF(herm_pair(x.gram, a, b), ctx.p)) return 0;

    // O_F-bases of N1 = O_F[g]u and of its hermitian dual
    FMat T(m, m, QuadElem::zero(ctx.d));
    for (int j = 0; j < m; ++j) T.set_col(j, gens[static_cast<size_t>(j)]);
    FMat Tdual = (T.conj().transpose() * x.gram).inverse();
    QuadLattice N1(ctx, m, gens);
    QuadLattice N1d = N1.dual(x.gram);
    if (!N1d.contains(N1)) throw std::logic_error("orb_u: N1 not inside its dual");
    long halfIndex = lattice_index(N1d.raw(), N1.raw());

    long count = 0;
    std::vector<QuadElem> uc = x.u;
    for (auto& e : uc) e = (Rat(1) / c) * e;
    for (const QuadLattice& L : of_lattices_between(T, Tdual, ctx)) {
        if (quad_lattice_index(L, N1) * 2 != halfIndex) continue;
        if (!L.contains(uc)) continue;
        if (!L.stable_under(x.g)) continue;
        if (!(L.dual(x.gram) == L)) continue;
        ++count;
    }
    return count;
}

FlReport fl_verify(const InvariantVector& iv, const LocalFieldCtx& ctx) {
    if (!charpoly_integral(iv.charpoly, ctx))
        throw PreconditionFailed("fl_verify needs an integral charpoly");
    SemiLiePair pair = semilie_from_invariants(iv, ctx);
    if (!is_strongly_rs(pair)) throw PreconditionFailed("fl_verify needs strongly rs data");

    FlReport rep;
    rep.side = decide_side(iv, ctx);
    OrbGlDetails det = orb_gl_detailed(pair, ctx, Rat(1), Rat(1));
    rep.glLaurent = det.value;
    rep.quotientSizeLog = det.quotient_log;
    rep.omega = transfer_factor(pair, ctx);
    rep.gl = special_values(rep.glLaurent, rep.omega);
    if (rep.side == Side::split) {
        UnitaryPair up = unitary_from_invariants(iv, ctx);
        rep.orbU = orb_u(up, ctx);
        rep.pass = (rep.gl.value0 == Rat(*rep.orbU));
    } else {
        rep.orbU.reset();
        rep.pass = (rep.gl.value0 == 0);
    }
    return rep;
}

OrbReductionReport orb_reduction_check(const FMat& gammaPrime, const QuadElem& xi,
                                       const LocalFieldCtx& ctx) {
    int n = gammaPrime.rows();
    long d = ctx.d;
    // unit conditions of the reduction lemma
    QuadElem dcorner = gammaPrime(n - 1, n - 1);
    QuadElem one = QuadElem::one(d);
    QuadElem t = one - xi * dcorner;
    if (t.is_zero() || valuation(t, ctx) != 0)
        throw PreconditionFailed("1 - xi d must be a unit");
    FMat I = FMat::identity(n, one);
    FMat scaled = gammaPrime;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scaled(i, j) = xi * scaled(i, j);
    QuadElem dd = (I - scaled).det();
    if (dd.is_zero() || valuation(dd, ctx) != 0)
        throw PreconditionFailed("det(1 - xi gamma') must be a unit");

    SymmetricReduction rr = reduce_symmetric(gammaPrime, ReduceVariant::r, xi, ctx);
    SymmetricReduction rn = reduce_symmetric(gammaPrime, ReduceVariant::r_natural, xi, ctx);
    OrbReductionReport rep;
    rep.viaR = orb_gl(rr.pair, ctx);
    rep.viaRNatural = orb_gl(rn.pair, ctx);
    rep.equal = (rep.viaR == rep.viaRNatural);
    return rep;
}

}  // namespace jr
