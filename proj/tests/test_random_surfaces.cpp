#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "infgon/expansion.hpp"
#include "oracles.hpp"

// Randomized consistency sweep over discs with several accumulation points:
// build a random fan triangulation (fans plus a greedily completed core),
// validate it, and check positivity, denominator vectors and the Ptolemy
// identity on random arcs and quadruples.

using namespace infgon;

namespace {

struct RandomSetup {
    Surface surface;
    Triangulation tri;
    std::vector<MarkedPoint> stable;  // endpoints safe at every window
};

RandomSetup random_fan_surface(std::mt19937& rng, int nacc) {
    std::vector<Segment> segs;
    std::uniform_int_distribution<int> fin(1, 2);
    std::vector<int> acc_segs, fin_segs;
    for (int i = 0; i < nacc; ++i) {
        fin_segs.push_back(static_cast<int>(segs.size()));
        segs.push_back(Segment::finite(fin(rng)));
        acc_segs.push_back(static_cast<int>(segs.size()));
        segs.push_back(Segment::accumulating("a" + std::to_string(i), Side::Left));
    }
    Surface S(segs);

    // one incoming fan per stretch, sourced at a random finite point
    std::vector<MarkedPoint> corners;
    for (int fs : fin_segs)
        for (long long j = 0; j < segs[fs].count; ++j) corners.push_back(MarkedPoint::pt(fs, j));
    std::uniform_int_distribution<size_t> pick(0, corners.size() - 1);
    std::vector<Tail> tails;
    std::vector<Curve> core;
    for (int as : acc_segs) {
        MarkedPoint src = corners[pick(rng)];
        tails.push_back(Tail::incoming(src, as, 0));
        Curve side = S.curve(src, MarkedPoint::pt(as, 0));
        if (S.classify(side) == CurveKind::Internal &&
            std::find(core.begin(), core.end(), side) == core.end())
            core.push_back(side);
    }
    // the fan sides must not cross each other; retry rather than repair
    for (size_t i = 0; i < core.size(); ++i)
        for (size_t j = i + 1; j < core.size(); ++j)
            if (S.cross(core[i], core[j])) return random_fan_surface(rng, nacc);

    Triangulation T0(S, tails, core);
    long long W = T0.min_window() + 2;
    std::vector<Curve> occupied = T0.arcs_in_window(W);

    // complete the core greedily over the window-stable vertex pool
    std::vector<MarkedPoint> pool = corners;
    for (int as : acc_segs) {
        pool.push_back(MarkedPoint::pt(as, 0));
        pool.push_back(MarkedPoint::accp(segs[as].target));
    }
    std::vector<Curve> cands;
    for (size_t i = 0; i < pool.size(); ++i)
        for (size_t j = i + 1; j < pool.size(); ++j) {
            Curve c = S.curve(pool[i], pool[j]);
            if (S.classify(c) == CurveKind::Internal) cands.push_back(c);
        }
    std::sort(cands.begin(), cands.end(),
              [](const Curve& a, const Curve& b) { return a.str() < b.str(); });
    for (auto& c : cands) {
        if (std::find(occupied.begin(), occupied.end(), c) != occupied.end()) continue;
        bool ok = true;
        for (auto& o : occupied)
            if (S.cross(c, o)) { ok = false; break; }
        if (!ok) continue;
        occupied.push_back(c);
        core.push_back(c);
    }
    Triangulation T(S, tails, core);
    return {S, T, pool};
}

}  // namespace

TEST_CASE("random multi-accumulation fan triangulations stay consistent") {
    std::mt19937 rng(20260811);
    int trials = 0;
    for (int round = 0; round < 12; ++round) {
        int nacc = 1 + round % 3;
        RandomSetup setup = random_fan_surface(rng, nacc);
        const Surface& S = setup.surface;
        Triangulation& T = setup.tri;
        if (!T.validate(8).empty()) continue;  // greedy completion rarely stalls
        ++trials;
        REQUIRE(T.is_fan_triangulation());

        // arc endpoints: stable pool plus a few deeper base points
        std::vector<MarkedPoint> pts = setup.stable;
        for (int s = 0; s < S.segment_count(); ++s)
            if (S.boundary()[s].infinite()) {
                pts.push_back(MarkedPoint::pt(s, 2));
                pts.push_back(MarkedPoint::pt(s, 3));
            }
        std::uniform_int_distribution<size_t> pick(0, pts.size() - 1);

        ExpansionCache cache;
        int arcs_done = 0;
        for (int k = 0; k < 60 && arcs_done < 10; ++k) {
            MarkedPoint a = pts[pick(rng)], b = pts[pick(rng)];
            if (a == b) continue;
            Curve g = S.curve(a, b);
            if (S.classify(g) != CurveKind::Internal) continue;
            ++arcs_done;
            Expansion e = expand(T, g, 4);
            CHECK(e.sum().all_coeffs_positive());
            // denominator exponents match crossing numbers of the
            // triangulation arcs, except that a crossed limit arc may cancel
            // against the limit-edge weights of the adjacent pieces
            auto lims = T.limit_pairs();
            for (auto& tau : T.singleton_arcs()) {
                long long cross = S.cross(g, tau);
                long long den = std::max(0, -e.sum().min_exponent(S.var_of(tau)));
                bool is_limit =
                    std::find(lims.begin(), lims.end(), tau) != lims.end();
                if (is_limit) CHECK(den <= cross);
                else CHECK(den == cross);
            }
        }

        int quads_done = 0;
        for (int k = 0; k < 80 && quads_done < 5; ++k) {
            std::set<std::string> seen;
            std::array<MarkedPoint, 4> quad;
            int got = 0;
            while (got < 4) {
                MarkedPoint cand = pts[pick(rng)];
                if (seen.count(cand.str())) continue;
                seen.insert(cand.str());
                quad[got++] = cand;
            }
            ++quads_done;
            CHECK(ptolemy_check(T, quad, 4, &cache));
        }
    }
    CHECK(trials >= 8);
}
