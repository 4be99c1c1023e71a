#include <doctest.h>

#include "fixtures.hpp"
#include "infgon/json_io.hpp"
#include "infgon/triangulation.hpp"

using namespace infgon;
using fixtures::p;
using fixtures::sp;

TEST_CASE("validate") {
    Surface i1 = fixtures::i1();
    Triangulation T = fixtures::fan_at(i1, 0);
    CHECK(T.validate(5).empty());
    CHECK(T.validate(16).empty());

    // declared limit arcs must match the domains
    Triangulation T2 = fixtures::fan_at(i1, 0);
    T2.set_declared_limits({});
    auto issues = T2.validate(5);
    REQUIRE(!issues.empty());
    CHECK(issues[0].code == "BadLimitArc");

    Surface sq = make_polygon(4);
    Triangulation D(sq, {}, {sq.arc(p(0), p(2))});
    CHECK(D.validate(4).empty());

    // a crossing pair is reported
    Surface p6 = make_polygon(6);
    Triangulation bad(p6, {}, {p6.arc(p(0), p(2)), p6.arc(p(1), p(3)), p6.arc(p(3), p(5))});
    bool crossing = false;
    for (auto& i : bad.validate(6))
        if (i.code == "CrossingPair") crossing = true;
    CHECK(crossing);

    // a missing arc is reported with a witness
    Triangulation hole(p6, {}, {p6.arc(p(0), p(2)), p6.arc(p(0), p(3))});
    bool missing = false;
    for (auto& i : hole.validate(6))
        if (i.code == "NotMaximal") missing = true;
    CHECK(missing);
}

TEST_CASE("validate is monotone in the window") {
    Surface i1 = fixtures::i1();
    Triangulation T = fixtures::fan_at(i1, 2);
    for (long long N : {2, 3, 5, 9, 17}) CHECK(T.validate(N).empty());
}

TEST_CASE("limit arcs") {
    Surface i1 = fixtures::i1();
    Triangulation in = fixtures::fan_at(i1, 0);
    auto lims = in.limit_pairs();
    REQUIRE(lims.size() == 1);
    CHECK(lims[0].str() == "(s0:0,acc:a)");

    Triangulation out = fixtures::outgoing_i1(i1);
    CHECK(out.limit_pairs().empty());

    Surface i2 = fixtures::i2();
    Triangulation zig(i2, {Tail::zig_around(0, 0, 1, 0, false)}, {});
    CHECK(zig.validate(8).empty());
    CHECK(zig.limit_pairs().empty());
    CHECK(zig.type_at(0) == DomainType::Zig);
    CHECK(!zig.is_fan_triangulation());
}

TEST_CASE("zig-zag to a limit arc") {
    // two accumulation points facing each other across a marked point
    Surface S = make_infinity_gon({Segment::accumulating("a", Side::Left), Segment::finite(1),
                                   Segment::accumulating("b", Side::Right)});
    // the zig-zag between the two stretches limits onto (a,b); beyond it one
    // triangle with the isolated point remains
    Triangulation T(S, {Tail::zig_to_limit(0, 0, 2, 0, true)}, {});
    CHECK(T.validate(8).empty());
    auto lims = T.limit_pairs();
    REQUIRE(lims.size() == 1);
    CHECK(lims[0].str() == "(acc:a,acc:b)");
    CHECK(T.type_at(0) == DomainType::Zig);
    CHECK(T.type_at(2) == DomainType::Zig);
}

TEST_CASE("domain_of_arc") {
    Surface i1 = fixtures::i1();
    Triangulation T = fixtures::fan_at(i1, 0);

    // single crossing
    auto d1 = T.domain_of_arc(i1.arc(p(1), p(3)));
    REQUIRE(d1.runs.size() == 1);
    CHECK(!d1.runs[0].infinite);
    REQUIRE(d1.runs[0].arcs.size() == 1);
    CHECK(d1.runs[0].arcs[0].str() == "(s0:0,s0:2)");

    // infinite run into the accumulation point
    auto d2 = T.domain_of_arc(i1.arc(p(1), MarkedPoint::accp("a")));
    REQUIRE(d2.runs.size() == 1);
    CHECK(d2.runs[0].infinite);
    CHECK(d2.runs[0].lo == 2);
    CHECK(d2.runs[0].ascending);

    // an arc of the triangulation has an empty domain
    CHECK(T.domain_of_arc(i1.arc(p(0), p(4))).empty());

    // infinite runs only arise inside incoming fans
    Triangulation out = fixtures::outgoing_i1(i1);
    auto d3 = out.domain_of_arc(i1.arc(p(1), p(4)));
    for (auto& r : d3.runs) CHECK(!r.infinite);

    // zig-zag domains are rejected
    Surface i2 = fixtures::i2();
    Triangulation zig(i2, {Tail::zig_around(0, 0, 1, 0, false)}, {});
    CHECK_THROWS_WITH_AS(zig.domain_of_arc(i2.arc(p(0), p(2))),
                         doctest::Contains("ZigZagDomainPresent"), Error);
}

TEST_CASE("type_at and is_fan_triangulation") {
    Surface i1 = fixtures::i1();
    CHECK(fixtures::fan_at(i1, 0).type_at(0) == DomainType::In);
    CHECK(fixtures::outgoing_i1(i1).type_at(0) == DomainType::Out);
    CHECK(fixtures::fan_at(i1, 0).is_fan_triangulation());
    CHECK(fixtures::outgoing_i1(i1).is_fan_triangulation());
    Surface sq = make_polygon(4);
    CHECK(Triangulation(sq, {}, {sq.arc(p(0), p(2))}).is_fan_triangulation());
}

TEST_CASE("bad arcs") {
    Surface i1 = fixtures::i1();
    Triangulation in = fixtures::fan_at(i1, 0);
    Triangulation out = fixtures::outgoing_i1(i1);

    auto r1 = in.bad_arcs(out, 50);  // outgoing arcs all cross the fan infinitely
    CHECK(r1.infinite);
    REQUIRE(r1.witness.has_value());
    CHECK(r1.witness->str() == "(s0:0,acc:a)");

    auto r2 = out.bad_arcs(in, 50);  // no arc is bad for an outgoing fan triangulation
    CHECK(!r2.infinite);
    CHECK(r2.bad.empty());

    auto r3 = in.bad_arcs(in, 50);
    CHECK(!r3.infinite);
    CHECK(r3.bad.empty());

    // shifted fan: exactly the new limit arc is bad
    Triangulation in1 = fixtures::fan_at(i1, 1);
    auto r4 = in.bad_arcs(in1, 50);
    CHECK(!r4.infinite);
    REQUIRE(r4.bad.size() == 1);
    CHECK(r4.bad[0].str() == "(s0:1,acc:a)");
}

TEST_CASE("stronger domains") {
    Surface i1 = fixtures::i1();
    Triangulation in0 = fixtures::fan_at(i1, 0);
    Triangulation in1 = fixtures::fan_at(i1, 1);
    Triangulation out = fixtures::outgoing_i1(i1);

    CHECK(in0.stronger_at(out, 0));      // (In, Out)
    CHECK(!out.stronger_at(in0, 0));     // Out is never stronger
    CHECK(in1.stronger_at(in0, 0));      // limit of the shifted fan spans the other base
    CHECK(!in0.stronger_at(in1, 0));     // boundary-hugging limit crosses nothing
    CHECK(!in0.stronger_at(in0, 0));

    // transitivity over synthetic triples on the one-sided infinity-gon: fans
    // at increasing sources form a chain under the relation
    Triangulation in2 = fixtures::fan_at(i1, 2);
    if (in2.stronger_at(in1, 0) && in1.stronger_at(in0, 0)) CHECK(in2.stronger_at(in0, 0));
}

TEST_CASE("stronger is transitive over all fan/out triples at one direction") {
    Surface i1 = fixtures::i1();
    std::vector<Triangulation> doms;
    for (int s = 0; s <= 2; ++s) doms.push_back(fixtures::fan_at(i1, s));
    doms.push_back(fixtures::outgoing_i1(i1));
    for (auto& A : doms)
        for (auto& B : doms)
            for (auto& C : doms)
                if (A.stronger_at(B, 0) && B.stronger_at(C, 0)) CHECK(A.stronger_at(C, 0));
}

TEST_CASE("intersection counts") {
    Surface i1 = fixtures::i1();
    Triangulation T = fixtures::fan_at(i1, 0);

    // one flip differs by one crossing
    Triangulation Tf(i1, {Tail::incoming(p(0), 0, 1)}, {});
    // flip (p0,p2): replace with (p1,p3) by rebuilding core
    Triangulation Tflip(i1, {Tail::incoming(p(0), 0, 3)},
                        {i1.arc(p(1), p(3)), i1.arc(p(0), p(3))});
    CHECK(Tflip.validate(8).empty());
    auto ic = T.intersection_count(Tflip, 16);
    REQUIRE(ic.has_value());
    CHECK(*ic == 1);

    // fans at different sources cross unboundedly
    Triangulation T1 = fixtures::fan_at(i1, 1);
    CHECK(!T.intersection_count(T1, 1000).has_value());

    auto self = T.intersection_count(T, 16);
    REQUIRE(self.has_value());
    CHECK(*self == 0);

    // symmetry when finite
    auto ic_rev = Tflip.intersection_count(T, 16);
    REQUIRE(ic_rev.has_value());
    CHECK(*ic_rev == *ic);
}

TEST_CASE("octagon fixture is well-formed") {
    auto [T, Tp] = fixtures::octagon_pair();
    CHECK(T.validate(8).empty());
    CHECK(Tp.validate(8).empty());
    auto bad = T.bad_arcs(Tp, 64);
    CHECK(!bad.infinite);
    CHECK(bad.bad.size() == 3);
    CHECK(!T.intersection_count(Tp, 1000).has_value());
}

TEST_CASE("infinite intersection counts show strict growth at truncations") {
    // corroborate the exact infinite answer by counting realized crossings in
    // growing windows
    Surface i1 = fixtures::i1();
    Triangulation T = fixtures::fan_at(i1, 0);
    Triangulation T1 = fixtures::fan_at(i1, 1);
    REQUIRE(!T.intersection_count(T1, 1 << 20).has_value());
    long long prev = -1;
    for (long long N : {10, 20, 40}) {
        Realized a = T.realize(N), b = T1.realize(N);
        long long count = 0;
        for (auto& ca : a.chord_curves)
            for (auto& cb : b.chord_curves) count += i1.cross(ca, cb);
        CHECK(count > prev);
        prev = count;
    }
    CHECK(prev >= 39);  // grows without bound
}

TEST_CASE("descriptors round-trip through JSON") {
    // include <json_io.hpp> lazily here to keep other cases header-light
    Surface i2 = fixtures::i2();
    Triangulation Z(i2, {Tail::zig_around(0, 0, 1, 0, false)}, {});
    auto [To, Tp] = fixtures::octagon_pair();
    for (const Triangulation* T : {&Z, &To, &Tp}) {
        auto j = infgon::triangulation_to_json(*T);
        Triangulation back = infgon::triangulation_from_json(j);
        CHECK(back.same_realization(*T, 10));
        CHECK(back.validate(10).empty());
    }
}
