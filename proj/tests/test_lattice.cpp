#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jr/lattice.hpp"
#include "jr/orbit.hpp"
#include "oracles.hpp"

using namespace jr;

namespace {

QMat mat2(Rat a, Rat b, Rat c, Rat d) {
    QMat m(2, 2, Rat(0));
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

Lattice random_lattice(long p, int m, RandomSource& rs) {
    for (;;) {
        QMat g(m, m, Rat(0));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                long num = rs.integer(-8, 8);
                long den = rs.integer(0, 2);
                g(i, j) = Rat(num) * p_power(p, -den);
            }
        if (g.det() != 0) return Lattice(p, g);
    }
}

}  // namespace

TEST_CASE("canonical form basics") {
    long p = 3;
    Lattice std2 = Lattice::standard(p, 2);
    CHECK(std2.basis() == QMat::identity(2, Rat(0)));
    // [[p,1],[0,1]] has off-diagonal reduced mod the diagonal
    Lattice L(p, mat2(Rat(3), Rat(1), Rat(0), Rat(1)));
    CHECK(L.basis()(0, 0) == 3);
    CHECK(L.basis()(1, 1) == 1);
    CHECK(L.basis()(0, 1) >= 0);
    CHECK(L.basis()(0, 1) < 3);
    // canonicalization is idempotent
    CHECK(canonicalize(L) == L);
}

TEST_CASE("two bases of the same span canonicalize identically") {
    long p = 3;
    RandomSource rs(23);
    for (int trial = 0; trial < 40; ++trial) {
        Lattice L = random_lattice(p, 3, rs);
        // change of basis by a random unimodular-at-p matrix
        QMat U = QMat::identity(3, Rat(0));
        for (int k = 0; k < 4; ++k) {
            int i = static_cast<int>(rs.integer(0, 2)), j = static_cast<int>(rs.integer(0, 2));
            if (i == j) continue;
            Rat c = rs.rational(4, 2);
            for (int r = 0; r < 3; ++r) U(r, j) = U(r, j) + c * U(r, i);
        }
        Lattice L2(p, L.basis() * U);
        // mutual containment oracle
        CHECK(L.contains(L2));
        CHECK(L2.contains(L));
        CHECK(L == L2);
    }
}

TEST_CASE("lattice index") {
    long p = 3;
    Lattice std2 = Lattice::standard(p, 2);
    CHECK(lattice_index(std2, std2) == 0);
    Lattice pL = std2.scaled(Rat(p));
    CHECK(lattice_index(pL, std2) == 2);
    CHECK(lattice_index(std2, pL) == -2);
    RandomSource rs(3);
    // additivity in chains
    for (int t = 0; t < 20; ++t) {
        Lattice A = random_lattice(p, 2, rs), B = random_lattice(p, 2, rs),
                C = random_lattice(p, 2, rs);
        CHECK(lattice_index(A, B) + lattice_index(B, C) == lattice_index(A, C));
    }
}

TEST_CASE("membership and section") {
    long p = 5;
    QMat g = mat2(Rat(5), Rat(2), Rat(0), Rat(1, 5));
    Lattice L(p, g);
    CHECK(L.contains({Rat(5), Rat(0)}));
    CHECK(L.contains({Rat(2), Rat(1, 5)}));
    CHECK(!L.contains({Rat(1), Rat(0)}));
    CHECK(L.contains({Rat(7), Rat(1, 5)}));
}

TEST_CASE("dual under bilinear pairings") {
    long p = 3;
    QMat I2 = QMat::identity(2, Rat(0));
    Lattice std2 = Lattice::standard(p, 2);
    CHECK(dual_lattice_bilinear(std2, I2) == std2);
    Lattice pL = std2.scaled(Rat(p));
    CHECK(dual_lattice_bilinear(pL, I2) == std2.scaled(Rat(1, p)));
    QMat sing(2, 2, Rat(0));
    CHECK_THROWS_AS(dual_lattice_bilinear(std2, sing), DegenerateForm);
    RandomSource rs(7);
    for (int t = 0; t < 25; ++t) {
        Lattice L = random_lattice(p, 2, rs);
        // double dual identity
        CHECK(dual_lattice_bilinear(dual_lattice_bilinear(L, I2), I2) == L);
        // duality reverses inclusion
        Lattice M = L + random_lattice(p, 2, rs);
        CHECK(M.contains(L));
        CHECK(dual_lattice_bilinear(L, I2).contains(dual_lattice_bilinear(M, I2)));
    }
}

TEST_CASE("lattices_between: examples") {
    long p = 3;
    Lattice std1 = Lattice::standard(p, 1);
    Lattice std2 = Lattice::standard(p, 2);

    auto single = lattices_between(std2, std2);
    CHECK(single.size() == 1);
    CHECK(single[0] == std2);

    // rank one chain O, pO, p^2 O
    auto chain = lattices_between(std1.scaled(Rat(9)), std1);
    CHECK(chain.size() == 3);

    // p O^2 in O^2: subgroups of (Z/3)^2; the Birkhoff oracle gives p + 3
    auto between = lattices_between(std2.scaled(Rat(3)), std2);
    Int expect = oracles::total_subgroups({1, 1}, p);
    CHECK(Int(static_cast<long>(between.size())) == expect);
    CHECK(between.size() == 6);

    CHECK_THROWS_AS(lattices_between(std2, std2.scaled(Rat(3))), NotNested);
}

TEST_CASE("lattices_between: completeness against the subgroup-count oracle") {
    RandomSource rs(41);
    for (long p : {3L, 5L}) {
        for (int trial = 0; trial < 10; ++trial) {
            int m = static_cast<int>(rs.integer(1, 3));
            Lattice M2 = random_lattice(p, m, rs);
            // build a random smaller lattice inside M2
            QMat D(m, m, Rat(0));
            std::vector<long> exps;
            long total = 0;
            for (int i = 0; i < m; ++i) {
                long e = rs.integer(0, 2);
                if (total + e > 5) e = 0;
                total += e;
                exps.push_back(e);
                D(i, i) = p_power(p, e);
            }
            Lattice M1(p, M2.basis() * D);
            auto lp = lattices_between(M1, M2);
            Int expect = oracles::total_subgroups(exps, p);
            CHECK(Int(static_cast<long>(lp.size())) == expect);
            for (const auto& L : lp) {
                CHECK(L.contains(M1));
                CHECK(M2.contains(L));
            }
            // emitted exactly once, sorted
            for (size_t i = 1; i < lp.size(); ++i) CHECK(!(lp[i] == lp[i - 1]));
        }
    }
}

TEST_CASE("quad lattices: sqrt(d) action and hermitian duals") {
    LocalFieldCtx ctx(3, -1);
    int m = 2;
    QuadLattice std2 = QuadLattice::standard(ctx, m);
    CHECK(std2.sqrt_d_stable());
    FMat J = FMat::identity(m, QuadElem::one(ctx.d));
    CHECK(std2.self_dual(J));

    // p Lambda has dual p^{-1} Lambda
    QuadLattice pL(ctx.p, ctx.d, m, std2.raw().scaled(Rat(3)));
    QuadLattice dual = pL.dual(J);
    CHECK(dual.raw() == std2.raw().scaled(Rat(1, 3)));

    // double dual on random sqrt(d)-stable lattices
    RandomSource rs(9);
    for (int t = 0; t < 20; ++t) {
        std::vector<std::vector<QuadElem>> gens;
        for (int i = 0; i < m; ++i) {
            std::vector<QuadElem> v;
            for (int j = 0; j < m; ++j) v.push_back(rs.quad(ctx.d, 6, 3));
            gens.push_back(v);
        }
        try {
            QuadLattice L(ctx, m, gens);
            CHECK(L.dual(J).dual(J) == L);
        } catch (const SingularBasis&) {
            continue;
        }
    }
}

TEST_CASE("index of the dual on split spaces with unit discriminant") {
    LocalFieldCtx ctx(3, -1);
    int m = 2;
    FMat J = FMat::identity(m, QuadElem::one(ctx.d));
    QuadLattice ref = QuadLattice::standard(ctx, m);   // self-dual reference
    RandomSource rs(33);
    long vNm = 0;   // v(Nm(det J)) = 0 for the identity Gram
    for (int t = 0; t < 12; ++t) {
        std::vector<std::vector<QuadElem>> gens;
        for (int i = 0; i < m; ++i) {
            std::vector<QuadElem> v;
            for (int j = 0; j < m; ++j) v.push_back(rs.quad(ctx.d, 6, 3));
            gens.push_back(v);
        }
        try {
            QuadLattice L(ctx, m, gens);
            long lhs = quad_lattice_index(L.dual(J), L);
            long rhs = -vNm - 2 * quad_lattice_index(L, ref);
            CHECK(lhs == rhs);
        } catch (const SingularBasis&) {
            continue;
        }
    }
}
