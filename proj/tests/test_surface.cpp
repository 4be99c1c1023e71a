#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "infgon/surface.hpp"
#include "oracles.hpp"

using namespace infgon;
using fixtures::p;

TEST_CASE("polygons") {
    Surface sq = make_polygon(4);
    CHECK(sq.acc_count() == 0);
    // a square has exactly two internal arcs
    int arcs = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (sq.classify(sq.curve(p(i), p(j))) == CurveKind::Internal) ++arcs;
    CHECK(arcs == 2);

    // enumerate all non-boundary chords of the pentagon by brute force
    Surface p5 = make_polygon(5);
    int diag = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            if (p5.classify(p5.curve(p(i), p(j))) == CurveKind::Internal) ++diag;
    CHECK(diag == 5);

    CHECK_THROWS_WITH_AS(make_polygon(3), doctest::Contains("InvalidSurface"), Error);
}

TEST_CASE("infinity-gons") {
    Surface i1 = fixtures::i1();
    CHECK(i1.acc_count() == 1);

    Surface i2 = fixtures::i2();
    CHECK(i2.acc_count() == 2);
    CHECK(i2.acc_ids().size() == 1);  // a single two-sided accumulation point

    Surface mixed = make_infinity_gon({Segment::finite(3), Segment::accumulating("a", Side::Left)});
    CHECK(mixed.acc_count() == 1);

    CHECK_THROWS_AS(make_infinity_gon({Segment::accumulating("a", Side::Left),
                                       Segment::accumulating("a", Side::Left)}),
                    Error);
    // Left and Right halves of a two-sided point must be adjacent
    CHECK_THROWS_AS(make_infinity_gon({Segment::accumulating("a", Side::Left), Segment::finite(2),
                                       Segment::accumulating("a", Side::Right)}),
                    Error);
}

TEST_CASE("truncate") {
    Surface i1 = fixtures::i1();
    auto w = i1.truncate(3);
    REQUIRE(w.size() == 4);
    CHECK(w[0].str() == "s0:0");
    CHECK(w[2].str() == "s0:2");
    CHECK(w[3].str() == "acc:a");

    Surface sq = make_polygon(4);
    CHECK(sq.truncate(10).size() == 4);  // finite surfaces are truncation-stable

    Surface i2 = fixtures::i2();
    auto w2 = i2.truncate(2);
    REQUIRE(w2.size() == 5);  // 2 + 2 points plus one shared accumulation point
    CHECK(w2[2].str() == "acc:a");
    CHECK(w2[3].str() == "s1:1");
    CHECK(w2[4].str() == "s1:0");
}

TEST_CASE("cross") {
    Surface hex = make_polygon(6);
    CHECK(hex.cross(hex.curve(p(0), p(2)), hex.curve(p(1), p(3))) == 1);
    CHECK(hex.cross(hex.curve(p(0), p(2)), hex.curve(p(2), p(4))) == 0);

    Surface i1 = fixtures::i1();
    Curve c1 = i1.curve(p(1), p(3));
    Curve c2 = i1.curve(p(2), MarkedPoint::accp("a"));
    CHECK(i1.cross(c1, c2) == 1);

    // symmetry and degenerate cases
    CHECK(i1.cross(c2, c1) == 1);
    CHECK(i1.cross(c1, c1) == 0);
}

TEST_CASE("crossing count equals brute-force interleaving on truncations") {
    std::mt19937 rng(7);
    for (int n : {6, 8, 10}) {
        Surface P = make_polygon(n);
        auto tris = oracles::polygon_triangulations(n);
        std::uniform_int_distribution<size_t> pick(0, tris.size() - 1);
        for (int rep = 0; rep < 10; ++rep) {
            auto& chords = tris[pick(rng)];
            std::uniform_int_distribution<int> v(0, n - 1);
            int a = v(rng), b = v(rng);
            if (a == b || (std::abs(a - b) == 1) || std::abs(a - b) == n - 1) continue;
            Curve g = P.curve(p(std::min(a, b)), p(std::max(a, b)));
            int mine = 0;
            for (auto& [x, y] : chords) mine += P.cross(g, P.curve(p(x), p(y)));
            CHECK(mine == oracles::interleave_count(n, {std::min(a, b), std::max(a, b)}, chords));
        }
    }
}

TEST_CASE("boundary adjacency through an accumulation point") {
    Surface i1 = fixtures::i1();
    // the wrap pair (p0, a) hugs the boundary: the fan's limit arc at p0
    CHECK(i1.classify(i1.curve(p(0), MarkedPoint::accp("a"))) == CurveKind::Boundary);
    CHECK(i1.classify(i1.curve(p(1), MarkedPoint::accp("a"))) == CurveKind::Internal);

    Surface i2 = fixtures::i2();
    // nothing is adjacent to a two-sided accumulation point
    CHECK(i2.classify(i2.curve(p(0), MarkedPoint::accp("a"))) == CurveKind::Internal);
    CHECK(i2.classify(i2.curve(fixtures::sp(1, 0), MarkedPoint::accp("a"))) == CurveKind::Internal);
    CHECK(i2.classify(i2.curve(p(0), fixtures::sp(1, 0))) == CurveKind::Boundary);  // the wrap
}

TEST_CASE("smooth_crossing") {
    Surface hex = make_polygon(6);
    auto sm = hex.smooth_crossing(hex.curve(p(0), p(3)), hex.curve(p(1), p(4)));
    CHECK(sm[0][0].curve.str() == "(s0:0,s0:1)");
    CHECK(sm[0][1].curve.str() == "(s0:3,s0:4)");
    CHECK(sm[1][0].curve.str() == "(s0:0,s0:4)");
    CHECK(sm[1][1].curve.str() == "(s0:1,s0:3)");
    CHECK(sm[0][0].kind == CurveKind::Boundary);
    CHECK(sm[1][1].kind == CurveKind::Internal);

    Surface sq = make_polygon(4);
    auto sm2 = sq.smooth_crossing(sq.curve(p(0), p(2)), sq.curve(p(1), p(3)));
    for (auto& pair : sm2)
        for (auto& g : pair) CHECK(g.kind == CurveKind::Boundary);

    Surface i1 = fixtures::i1();
    auto sm3 = i1.smooth_crossing(i1.curve(p(0), p(2)), i1.curve(p(1), MarkedPoint::accp("a")));
    CHECK(sm3[0][0].curve.str() == "(s0:0,s0:1)");
    CHECK(sm3[0][1].curve.str() == "(s0:2,acc:a)");
    CHECK(sm3[1][0].curve.str() == "(s0:0,acc:a)");
    CHECK(sm3[1][0].kind == CurveKind::Boundary);  // adjacency through the accumulation
    CHECK(sm3[1][1].curve.str() == "(s0:1,s0:2)");

    CHECK_THROWS_AS(hex.smooth_crossing(hex.curve(p(0), p(2)), hex.curve(p(2), p(4))), Error);
}

TEST_CASE("smoothing results are compatible with everything compatible with both") {
    // exhaustive on polygons up to 8 vertices
    for (int n : {6, 7, 8}) {
        Surface P = make_polygon(n);
        for (int a = 0; a < n; ++a)
            for (int b2 = a + 2; b2 < n && !(a == 0 && b2 == n - 1); ++b2)
                for (int c = a + 1; c < b2; ++c)
                    for (int d = b2 + 1; d < n + a && d - c != n; ++d) {
                        int dd = d % n;
                        Curve g1 = P.curve(p(a), p(b2));
                        if (dd == c) continue;
                        Curve g2 = P.curve(p(std::min(c, dd)), p(std::max(c, dd)));
                        if (!P.cross(g1, g2)) continue;
                        auto sm = P.smooth_crossing(g1, g2);
                        for (auto& pair : sm)
                            CHECK(P.cross(pair[0].curve, pair[1].curve) == 0);
                        // any arc compatible with both inputs is compatible with
                        // every smoothing result
                        for (int x = 0; x < n; ++x)
                            for (int y = x + 2; y < n && !(x == 0 && y == n - 1); ++y) {
                                Curve w = P.curve(p(x), p(y));
                                if (P.cross(w, g1) || P.cross(w, g2)) continue;
                                for (auto& pair : sm)
                                    for (auto& g : pair) CHECK(P.cross(w, g.curve) == 0);
                            }
                    }
    }
}
