#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jr/orbit.hpp"
#include "jr/padic.hpp"

using namespace jr;

TEST_CASE("context validation") {
    CHECK_NOTHROW(LocalFieldCtx(3, -1));
    CHECK_NOTHROW(LocalFieldCtx(5, 2));
    CHECK_THROWS_AS(LocalFieldCtx(2, -1), BadContext);    // p = 2 rejected
    CHECK_THROWS_AS(LocalFieldCtx(3, 3), BadContext);     // ramified
    CHECK_THROWS_AS(LocalFieldCtx(3, 1), BadContext);     // residue (1|3) = 1
    CHECK_THROWS_AS(LocalFieldCtx(3, -4), BadContext);    // not squarefree
    CHECK_THROWS_AS(LocalFieldCtx(9, -1), BadContext);    // not prime
}

TEST_CASE("valuation on F = Q(sqrt d)") {
    LocalFieldCtx ctx(3, -1);
    CHECK(valuation(QuadElem(-1, Rat(3), Rat(3)), ctx) == 1);
    CHECK(valuation(QuadElem(-1, Rat(1, 3)), ctx) == -1);
    CHECK(valuation(QuadElem::zero(-1), ctx) == VAL_INF);
    CHECK(valuation(QuadElem(-1, Rat(0), Rat(1)), ctx) == 0);   // sqrt(d) is a unit
    CHECK(valuation(QuadElem(-1, Rat(9), Rat(1, 3)), ctx) == -1);
}

TEST_CASE("valuation is additive and ultrametric") {
    LocalFieldCtx ctx(3, -1);
    RandomSource rs(17);
    for (int i = 0; i < 60; ++i) {
        QuadElem x = rs.quad(-1, 9, 9), y = rs.quad(-1, 9, 9);
        if (x.is_zero() || y.is_zero()) continue;
        CHECK(valuation(x * y, ctx) == valuation(x, ctx) + valuation(y, ctx));
        if ((x + y).is_zero()) continue;
        long vx = valuation(x, ctx), vy = valuation(y, ctx);
        long vs = valuation(x + y, ctx);
        CHECK(vs >= std::min(vx, vy));
        if (vx != vy) CHECK(vs == std::min(vx, vy));
    }
}

TEST_CASE("quadratic characters") {
    LocalFieldCtx ctx(3, -1);
    CHECK(eta(Rat(3), ctx) == -1);
    CHECK(eta(Rat(5), ctx) == 1);
    CHECK(eta(Rat(1, 3), ctx) == -1);
    CHECK_THROWS_AS(eta(Rat(0), ctx), ZeroArgument);
    // eta~(p (1 + sqrt d)) = -1: v(1 + sqrt d) = 0
    QuadElem x = QuadElem(-1, Rat(3)) * QuadElem(-1, Rat(1), Rat(1));
    CHECK(eta_tilde(x, ctx) == -1);
}

TEST_CASE("norms are eta-trivial and eta~ extends eta") {
    LocalFieldCtx ctx(3, -1);
    RandomSource rs(5);
    int checked = 0;
    for (int i = 0; i < 80 && checked < 50; ++i) {
        QuadElem x = rs.quad(-1, 12, 6);
        if (x.is_zero()) continue;
        ++checked;
        CHECK(eta(x.norm(), ctx) == 1);
        // membership oracle: eta(y) = 1 iff y is a norm from F; norms have
        // even valuation, non-norms odd, in the unramified extension
        CHECK(eta_tilde(x, ctx) == ((valuation(x, ctx) % 2) ? -1 : 1));
    }
    CHECK(checked == 50);
    for (int i = 0; i < 30; ++i) {
        Rat r = rs.rational(20, 10);
        if (r == 0) continue;
        CHECK(eta_tilde(QuadElem(-1, r), ctx) == eta(r, ctx));
    }
}

TEST_CASE("hilbert symbol, odd and even p") {
    // (d | p) = -1 cases drive eta
    CHECK(hilbert_symbol(Rat(3), Rat(-1), 3) == -1);
    CHECK(hilbert_symbol(Rat(5), Rat(2), 5) == -1);
    CHECK(hilbert_symbol(Rat(2), Rat(3), 3) == -1);   // 2 is a nonresidue mod 3
    CHECK(hilbert_symbol(Rat(7), Rat(3), 3) == 1);    // 7 = 1 mod 3 is a residue
    // classical 2-adic values
    CHECK(hilbert_symbol(Rat(-1), Rat(-1), 2) == -1);
    CHECK(hilbert_symbol(Rat(2), Rat(-1), 2) == 1);
    CHECK(hilbert_symbol(Rat(-1), Rat(3), 2) == -1);
    CHECK(hilbert_symbol(Rat(2), Rat(7), 2) == 1);
    CHECK(hilbert_symbol(Rat(2), Rat(3), 2) == -1);
    // symmetry and bimultiplicativity spot checks
    RandomSource rs(11);
    for (int i = 0; i < 40; ++i) {
        Rat a = rs.rational(9, 5), b = rs.rational(9, 5), c = rs.rational(9, 5);
        if (a == 0 || b == 0 || c == 0) continue;
        for (long p : {2L, 3L, 5L}) {
            CHECK(hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p));
            CHECK(hilbert_symbol(a * b, c, p) ==
                  hilbert_symbol(a, c, p) * hilbert_symbol(b, c, p));
        }
    }
}

TEST_CASE("rational string round trip") {
    CHECK(rat_to_string(Rat(-7, 3)) == "-7/3");
    CHECK(rat_from_string("-7/3") == Rat(-7, 3));
    CHECK(rat_to_string(Rat(4)) == "4");
}
