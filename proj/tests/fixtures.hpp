#pragma once

#include <vector>

#include "infgon/mutation.hpp"
#include "infgon/triangulation.hpp"

namespace fixtures {

using namespace infgon;

inline MarkedPoint p(long long i) { return MarkedPoint::pt(0, i); }
inline MarkedPoint sp(int s, long long i) { return MarkedPoint::pt(s, i); }

inline Surface i1() { return make_infinity_gon({Segment::accumulating("a", Side::Left)}); }

inline Surface i2() {
    return make_infinity_gon(
        {Segment::accumulating("a", Side::Left), Segment::accumulating("a", Side::Right)});
}

// one isolated point, then points accumulating to a
inline Surface i1_plus() {
    return make_infinity_gon({Segment::finite(1), Segment::accumulating("a", Side::Left)});
}

inline Triangulation fan_at(const Surface& S, long long src_index = 0) {
    // complete fan-at-p_src triangulation of i1(): arcs (p_src, p_j) for every
    // j, with the tail holding the infinite side and the core the finite one
    std::vector<Curve> core;
    for (long long j = 0; j + 2 <= src_index; ++j)
        core.push_back(S.arc(MarkedPoint::pt(0, src_index), MarkedPoint::pt(0, j)));
    return Triangulation(S, {Tail::incoming(MarkedPoint::pt(0, src_index), 0, src_index + 1)},
                         core);
}

inline Triangulation outgoing_i1(const Surface& S) {
    return Triangulation(S, {Tail::outgoing(0, 0)}, {});
}

inline Triangulation polygon_tri(const Surface& S,
                                 const std::vector<std::pair<int, int>>& chords) {
    std::vector<Curve> core;
    for (auto& [a, b] : chords) core.push_back(S.arc(p(a), p(b)));
    return Triangulation(S, {}, core);
}

inline std::vector<std::pair<int, int>> star_chords(int n, int center) {
    std::vector<std::pair<int, int>> out;
    for (int k = 0; k < n; ++k) {
        int d = (k - center + n) % n;
        if (d >= 2 && d <= n - 2) {
            int a = std::min(center, k), b = std::max(center, k);
            if ((b - a) != 1 && (b - a) != n - 1) out.push_back({a, b});
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Disc with four one-sided accumulation points and four ordinary corner
// points, octagon-style: q_i, then a stretch ascending to the i-th
// accumulation point.  Segments: [F(1), L(A), F(1), L(B), F(1), L(C), F(1), L(D)].
inline Surface octagon() {
    return make_infinity_gon({Segment::finite(1), Segment::accumulating("A", Side::Left),
                              Segment::finite(1), Segment::accumulating("B", Side::Left),
                              Segment::finite(1), Segment::accumulating("C", Side::Left),
                              Segment::finite(1), Segment::accumulating("D", Side::Left)});
}

// The pair of octagon triangulations illustrating the classifier gap: the
// intersection number is infinite, no domain is stronger on either side, and
// the bad-arc set is finite but contains non-limit arcs.  No sufficient
// condition applies, so the classifier must answer Unknown (and never Finite
// or FiniteSeqOfInfinite).
inline std::pair<Triangulation, Triangulation> octagon_pair() {
    Surface S = octagon();
    auto q = [&](int i) { return MarkedPoint::pt(2 * i, 0); };  // q1=q(0) .. q4=q(3)
    // T: each stretch fanned from the corner beyond its accumulation point,
    // core = central octagon fanned from q1
    std::vector<Tail> tails_T = {
        Tail::incoming(q(1), 1, 0),  // stretch to A from q2
        Tail::incoming(q(2), 3, 0),  // stretch to B from q3
        Tail::incoming(q(3), 5, 0),  // stretch to C from q4
        Tail::incoming(q(0), 7, 0),  // stretch to D from q1
    };
    std::vector<Curve> core_T;
    for (int s : {1, 3, 5, 7})
        core_T.push_back(S.curve(tails_T[(s - 1) / 2].source, MarkedPoint::pt(s, 0)));
    for (auto other : {q(1), q(2), q(3)}) core_T.push_back(S.curve(q(0), other));
    core_T.push_back(S.curve(q(0), sp(3, 0)));
    core_T.push_back(S.curve(q(0), sp(5, 0)));
    Triangulation T(S, tails_T, core_T);

    // T': the A-stretch is fanned from q4 instead, with extra arcs (q3, A)
    // and supporting chords; the other stretches keep their T-fans
    std::vector<Tail> tails_Tp = {
        Tail::incoming(q(3), 1, 0),  // stretch to A from q4
        Tail::incoming(q(2), 3, 0),
        Tail::incoming(q(3), 5, 0),
        Tail::incoming(q(0), 7, 0),
    };
    MarkedPoint A = MarkedPoint::accp("A");
    std::vector<Curve> core_Tp = {
        S.curve(q(3), sp(1, 0)),  // side of the shifted A-fan
        S.curve(q(2), A),         // bad non-limit arc into A
        S.curve(q(2), q(3)),
        S.curve(A, sp(3, 0)),     // covers the q2 corner region
        S.curve(q(2), sp(3, 0)),
        S.curve(q(3), sp(5, 0)),
        S.curve(q(0), sp(7, 0)),
        S.curve(q(0), q(3)),
    };
    Triangulation Tp(S, tails_Tp, core_Tp);
    return {T, Tp};
}

}  // namespace fixtures
