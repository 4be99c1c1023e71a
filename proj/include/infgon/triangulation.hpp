#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "infgon/surface.hpp"

namespace infgon {

// One almost-elementary domain attached to the accumulating end(s) of the
// boundary.  Fans are normalized to an elementary fan; anything finite lives
// in the core chord set of the triangulation.
struct Tail {
    enum class Kind { Incoming, Outgoing, ZigAround, ZigToLimit } kind = Kind::Incoming;
    MarkedPoint source;     // Incoming: fan source
    int seg = -1;           // base segment (accumulating)
    long long from = 0;     // first base index; generated arcs use indices > from
    int seg2 = -1;          // Zig*: second base segment
    long long from2 = 0;
    bool start_first = true;  // Zig*: first base leads the alternation

    static Tail incoming(MarkedPoint src, int seg, long long from) {
        Tail t; t.kind = Kind::Incoming; t.source = src; t.seg = seg; t.from = from; return t;
    }
    static Tail outgoing(int seg, long long from) {
        Tail t; t.kind = Kind::Outgoing; t.seg = seg; t.from = from; return t;
    }
    static Tail zig_around(int seg_l, long long from_l, int seg_r, long long from_r,
                           bool start_first = true) {
        Tail t; t.kind = Kind::ZigAround; t.seg = seg_l; t.from = from_l;
        t.seg2 = seg_r; t.from2 = from_r; t.start_first = start_first; return t;
    }
    static Tail zig_to_limit(int seg1, long long from1, int seg2, long long from2,
                             bool start_first = true) {
        Tail t; t.kind = Kind::ZigToLimit; t.seg = seg1; t.from = from1;
        t.seg2 = seg2; t.from2 = from2; t.start_first = start_first; return t;
    }
    bool is_fan() const { return kind == Kind::Incoming || kind == Kind::Outgoing; }
    bool is_zig() const { return !is_fan(); }
};

enum class DomainType { In, Out, Zig };

inline std::string domain_type_str(DomainType t) {
    switch (t) {
        case DomainType::In: return "In";
        case DomainType::Out: return "Out";
        default: return "Zig";
    }
}

struct ValidationIssue {
    std::string code;  // CrossingPair | NotMaximal | BadLimitArc
    std::string detail;
};

// Finite window onto a triangulation: the truncated polygon plus the chords
// realized inside it.
struct Realized {
    std::vector<MarkedPoint> poly;
    std::vector<PosKey> keys;           // key of poly[i]
    std::vector<std::pair<int, int>> chords;  // position pairs, first < second
    std::vector<Curve> chord_curves;

    int position(const Surface& S, const MarkedPoint& p) const {
        PosKey k = S.key(p);
        for (size_t i = 0; i < keys.size(); ++i)
            if (keys[i] == k) return static_cast<int>(i);
        throw Error("InvalidPoint", "point outside window: " + p.str());
    }
    bool present(int i, int j) const {
        if (i > j) std::swap(i, j);
        int m = static_cast<int>(poly.size());
        if ((j - i) == 1 || (i == 0 && j == m - 1)) return true;  // polygon edge
        for (auto& [a, b] : chords)
            if (a == i && b == j) return true;
        return false;
    }
    static bool chords_cross(std::pair<int, int> c, std::pair<int, int> d) {
        auto [a, b] = c;
        auto [x, y] = d;
        if (a == x || a == y || b == x || b == y) return false;
        bool xin = a < x && x < b, yin = a < y && y < b;
        return xin != yin;
    }
    // Apex of the triangle adjacent to chord-or-edge (i,j) on the side that
    // contains position `inside_hint` (strictly between i and j when hint is
    // on that side).  Returns -1 if the side holds no triangle in the window.
    int apex(int i, int j, bool side_between) const {
        if (i > j) std::swap(i, j);
        int m = static_cast<int>(poly.size());
        for (int w = 0; w < m; ++w) {
            if (w == i || w == j) continue;
            bool between = i < w && w < j;
            if (between != side_between) continue;
            if (present(i, w) && present(w, j)) return w;
        }
        return -1;
    }
};

struct PivotFamily {
    MarkedPoint pivot;
    int seg;         // accumulating base segment
    long long from;  // arcs have base index > from
    bool incoming;   // carries a limit pair (pivot, acc)
    std::string key; // stable id for reports
};

struct CrossInterval {
    long long lo = 0;
    std::optional<long long> hi;  // nullopt = infinite tail
    bool empty = true;
    long long size_or(long long inf_marker) const {
        if (empty) return 0;
        return hi ? *hi - lo + 1 : inf_marker;
    }
};

struct BadArcReport {
    bool infinite = false;
    std::vector<Curve> bad;          // finite case
    std::optional<Curve> witness;    // infinite case: limit arc of T
    std::string detail;
};

// One maximal run of the crossing sequence of an arc through a fan
// triangulation.  Finite runs list their arcs; an infinite run records the
// pivot family and the index of its first crossed arc.
struct CrossRun {
    std::string fan;
    MarkedPoint pivot;
    bool has_pivot = false;
    std::vector<Curve> arcs;              // materialized prefix
    std::vector<bool> limit_flags;        // per arc: crossed limit arc of T
    bool infinite = false;
    int seg = -1;                         // infinite: base segment
    long long lo = 0;                     // infinite: first crossed index
    bool ascending = true;                // infinite: crossed toward the limit
};

struct DomainOfArc {
    std::vector<CrossRun> runs;
    bool empty() const { return runs.empty(); }
};

class Triangulation {
public:
    Triangulation(Surface surf, std::vector<Tail> tails, std::vector<Curve> core)
        : surf_(std::move(surf)), tails_(std::move(tails)), core_(std::move(core)) {
        std::set<int> covered;
        for (auto& t : tails_) {
            check_tail(t);
            for (int s : tail_segments(t)) {
                if (covered.count(s))
                    throw Error("InvalidTriangulation",
                                "segment " + std::to_string(s) + " covered by two domains");
                covered.insert(s);
            }
        }
        for (int s = 0; s < surf_.segment_count(); ++s)
            if (surf_.boundary()[s].infinite() && !covered.count(s))
                throw Error("InvalidTriangulation",
                            "accumulating segment " + std::to_string(s) + " has no domain");
        for (auto& c : core_) surf_.classify(c);  // validates endpoints
    }

    const Surface& surface() const { return surf_; }
    const std::vector<Tail>& tails() const { return tails_; }
    const std::vector<Curve>& core() const { return core_; }

    void set_declared_limits(std::vector<Curve> limits) { declared_limits_ = std::move(limits); }
    const std::optional<std::vector<Curve>>& declared_limits() const { return declared_limits_; }

    // Stable name of the one-sided accumulation carried by segment `seg`.
    std::string direction_key(int seg) const {
        const Segment& s = surf_.boundary().at(seg);
        return "acc:" + s.target + ":" + (s.side == Side::Left ? "left" : "right");
    }
    std::optional<int> direction_of_key(const std::string& key) const {
        for (int s = 0; s < surf_.segment_count(); ++s)
            if (surf_.boundary()[s].infinite() && direction_key(s) == key) return s;
        return std::nullopt;
    }

    const Tail& tail_at(int seg) const {
        for (auto& t : tails_)
            for (int s : tail_segments(t))
                if (s == seg) return t;
        throw Error("InvalidTriangulation", "no domain at segment " + std::to_string(seg));
    }
    Tail& tail_at_mut(int seg) {
        for (auto& t : tails_)
            for (int s : tail_segments(t))
                if (s == seg) return t;
        throw Error("InvalidTriangulation", "no domain at segment " + std::to_string(seg));
    }

    DomainType type_at(int seg) const {
        const Tail& t = tail_at(seg);
        switch (t.kind) {
            case Tail::Kind::Incoming: return DomainType::In;
            case Tail::Kind::Outgoing: return DomainType::Out;
            default: return DomainType::Zig;
        }
    }

    bool is_fan_triangulation() const {
        for (auto& t : tails_)
            if (t.is_zig()) return false;
        return true;
    }

    // Limit arcs generated by the domains: one per incoming fan and one per
    // zig-zag converging to a limit arc (Prop: finitely many).
    std::vector<Curve> limit_pairs() const {
        std::vector<Curve> out;
        for (auto& t : tails_) {
            if (t.kind == Tail::Kind::Incoming)
                out.push_back(surf_.curve(t.source, acc_point(t.seg)));
            else if (t.kind == Tail::Kind::ZigToLimit)
                out.push_back(surf_.curve(acc_point(t.seg), acc_point(t.seg2)));
        }
        // shared limit arcs (two fans from one source) are listed once
        std::vector<Curve> uniq;
        for (auto& c : out)
            if (std::find(uniq.begin(), uniq.end(), c) == uniq.end()) uniq.push_back(c);
        return uniq;
    }

    bool is_limit_pair(const Curve& c) const {
        auto lp = limit_pairs();
        return std::find(lp.begin(), lp.end(), c) != lp.end();
    }

    MarkedPoint acc_point(int seg) const {
        return MarkedPoint::accp(surf_.boundary().at(seg).target);
    }

    long long min_window() const {
        long long w = 3;
        for (auto& c : core_) {
            for (auto* p : {&c.a, &c.b})
                if (!p->is_acc && surf_.boundary()[p->seg].infinite())
                    w = std::max(w, p->index + 2);
        }
        for (auto& t : tails_) {
            w = std::max(w, t.from + 3);
            if (t.is_zig()) w = std::max(w, t.from2 + 3);
            if (t.kind == Tail::Kind::Incoming && !t.source.is_acc &&
                surf_.boundary()[t.source.seg].infinite())
                w = std::max(w, t.source.index + 2);
        }
        return w;
    }

    // All arcs of the triangulation with both endpoints inside the window,
    // including internal limit arcs.  Boundary-parallel pairs are skipped.
    std::vector<Curve> arcs_in_window(long long N) const {
        std::vector<Curve> out;
        auto push = [&](const Curve& c) {
            if (surf_.classify(c) == CurveKind::Boundary) return;
            if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
        };
        for (auto& c : core_)
            if (surf_.in_window(c.a, N) && surf_.in_window(c.b, N)) push(c);
        for (auto& t : tails_) {
            if (t.is_fan()) {
                MarkedPoint piv = fan_pivot(t);
                for (long long j = t.from + 1; j < N; ++j)
                    push(surf_.curve(piv, MarkedPoint::pt(t.seg, j)));
            } else {
                for (auto& c : zig_arcs_in_window(t, N)) push(c);
            }
        }
        for (auto& c : limit_pairs()) push(c);
        return out;
    }

    Realized realize(long long N) const {
        long long W = std::max(N, min_window());
        Realized r;
        r.poly = surf_.truncate(W);
        for (auto& p : r.poly) r.keys.push_back(surf_.key(p));
        for (auto& c : arcs_in_window(W)) {
            int i = r.position(surf_, c.a), j = r.position(surf_, c.b);
            if (i > j) std::swap(i, j);
            int m = static_cast<int>(r.poly.size());
            if (j - i == 1 || (i == 0 && j == m - 1)) continue;  // hugs the window boundary
            r.chords.push_back({i, j});
            r.chord_curves.push_back(c);
        }
        return r;
    }

    std::vector<ValidationIssue> validate(long long N) const {
        std::vector<ValidationIssue> issues;
        Realized r = realize(N);
        for (size_t i = 0; i < r.chords.size(); ++i)
            for (size_t j = i + 1; j < r.chords.size(); ++j) {
                if (r.chords[i] == r.chords[j]) {
                    issues.push_back({"CrossingPair", "duplicate arc " + r.chord_curves[i].str()});
                } else if (Realized::chords_cross(r.chords[i], r.chords[j])) {
                    issues.push_back({"CrossingPair", r.chord_curves[i].str() + " x " +
                                                          r.chord_curves[j].str()});
                }
            }
        long long m = static_cast<long long>(r.poly.size());
        long long expected = m - 3;
        // A zig-zag converging to a limit arc meets the window in one
        // quadrilateral whose diagonal lies beyond every finite window, so it
        // accounts for one chord less than a full polygon triangulation.
        for (auto& t : tails_)
            if (t.kind == Tail::Kind::ZigToLimit) --expected;
        if (static_cast<long long>(r.chords.size()) != expected) {
            std::string witness;
            if (static_cast<long long>(r.chords.size()) < expected) {
                // find one addable chord as the missing-arc witness
                for (int i = 0; i < m && witness.empty(); ++i)
                    for (int j = i + 2; j < m && witness.empty(); ++j) {
                        if (i == 0 && j == m - 1) continue;
                        if (r.present(i, j)) continue;
                        bool ok = true;
                        for (auto& c : r.chords)
                            if (Realized::chords_cross(c, {i, j})) { ok = false; break; }
                        if (ok)
                            witness = "(" + r.poly[i].str() + "," + r.poly[j].str() + ")";
                    }
            }
            issues.push_back({"NotMaximal",
                              "window has " + std::to_string(r.chords.size()) + " arcs, expected " +
                                  std::to_string(expected) +
                                  (witness.empty() ? "" : ", e.g. missing " + witness)});
        }
        // declared limit arcs must be exactly the limits of the declared domains
        std::vector<Curve> gen = limit_pairs();
        if (declared_limits_) {
            for (auto& g : gen)
                if (std::find(declared_limits_->begin(), declared_limits_->end(), g) ==
                    declared_limits_->end())
                    issues.push_back({"BadLimitArc",
                                      "domain limit " + g.str() + " missing from declared limit arcs"});
            for (auto& d : *declared_limits_)
                if (std::find(gen.begin(), gen.end(), d) == gen.end())
                    issues.push_back({"BadLimitArc", d.str() + " is not the limit of any domain"});
        }
        return issues;
    }

    // --- crossing machinery --------------------------------------------------

    std::vector<PivotFamily> fan_families() const {
        std::vector<PivotFamily> fams;
        for (auto& t : tails_) {
            if (!t.is_fan()) continue;
            PivotFamily f;
            f.pivot = fan_pivot(t);
            f.seg = t.seg;
            f.from = t.from;
            f.incoming = t.kind == Tail::Kind::Incoming;
            f.key = direction_key(t.seg);
            fams.push_back(f);
        }
        return fams;
    }

    // Exact set {j > from : gamma crosses (pivot, (seg,j))}; always a
    // contiguous interval, possibly with an infinite tail.
    CrossInterval family_interval(const PivotFamily& f, const Curve& gamma) const {
        const Surface& S = surf_;
        PosKey pk = S.key(f.pivot);
        PosKey ga = S.key(gamma.a), gb = S.key(gamma.b);
        auto member_key = [&](long long j) { return S.key(MarkedPoint::pt(f.seg, j)); };
        auto crossed_at = [&](PosKey bj) {
            if (ga == pk || gb == pk || ga == bj || gb == bj) return false;
            return Surface::in_open(ga, pk, bj) != Surface::in_open(gb, pk, bj);
        };
        std::set<long long> cand = {f.from + 1};
        for (auto* e : {&gamma.a, &gamma.b})
            if (!e->is_acc && e->seg == f.seg) {
                for (long long d : {e->index - 1, e->index, e->index + 1})
                    if (d > f.from) cand.insert(d);
            }
        bool tail = crossed_at(S.virtual_deep(f.seg));
        CrossInterval iv;
        std::vector<long long> cs(cand.begin(), cand.end());
        for (size_t i = 0; i < cs.size(); ++i) {
            bool p = crossed_at(member_key(cs[i]));
            if (p && iv.empty) { iv.empty = false; iv.lo = cs[i]; }
            if (!p && !iv.empty && !iv.hi) iv.hi = cs[i] - 1;
        }
        if (!iv.empty && !iv.hi && !tail) iv.hi = cs.back();  // constant past last candidate
        if (iv.empty && tail) {
            // crossings only start beyond every candidate; cannot happen for a
            // nested family, but stay safe
            iv.empty = false;
            iv.lo = cs.back() + 1;
        }
        if (!iv.empty && iv.hi && *iv.hi < iv.lo) { iv.empty = true; iv.hi.reset(); }
        if (!iv.empty && !tail && !iv.hi) iv.hi = cs.back();
        if (tail) iv.hi.reset();
        return iv;
    }

    // Alternating arcs of a zig-zag domain with both base indices < N.
    std::vector<Curve> zig_arcs_in_window(const Tail& t, long long N) const {
        std::vector<Curve> out;
        auto b1 = [&](long long i) { return MarkedPoint::pt(t.seg, t.from + i); };
        auto b2 = [&](long long i) { return MarkedPoint::pt(t.seg2, t.from2 + i); };
        for (long long step = 1;; ++step) {
            long long k = (step + 1) / 2;  // leading-base index at odd steps
            Curve c;
            if (step % 2 == 1)
                c = t.start_first ? surf_.curve(b1(k), b2(k - 1)) : surf_.curve(b1(k - 1), b2(k));
            else
                c = surf_.curve(b1(k), b2(k));
            long long i1 = t.from + (step % 2 == 1 && !t.start_first ? k - 1 : k);
            long long i2 = t.from2 + (step % 2 == 1 && t.start_first ? k - 1 : k);
            if (i1 >= N || i2 >= N) break;
            out.push_back(c);
        }
        return out;
    }

    Curve zig_virtual_arc(const Tail& t) const {
        // deep member of the alternating family; only its position keys matter
        Curve c;
        c.a = MarkedPoint::pt(t.seg, 0);
        c.b = MarkedPoint::pt(t.seg2, 0);
        return c;  // combined with virtual keys by callers
    }

    bool zig_tail_crossed(const Tail& t, const Curve& gamma) const {
        PosKey v1 = surf_.virtual_deep(t.seg), v2 = surf_.virtual_deep(t.seg2);
        PosKey ga = surf_.key(gamma.a), gb = surf_.key(gamma.b);
        return Surface::in_open(ga, v1, v2) != Surface::in_open(gb, v1, v2);
    }

    // Number of crossings of gamma with the whole triangulation; nullopt = infinite.
    std::optional<long long> crossings_count(const Curve& gamma, long long window_hint = 0) const {
        long long total = 0;
        for (auto& c : singleton_arcs())
            total += surf_.cross(gamma, c);
        for (auto& f : fan_families()) {
            CrossInterval iv = family_interval(f, gamma);
            if (!iv.empty && !iv.hi) return std::nullopt;
            total += iv.size_or(0);
        }
        long long W = zig_window(gamma, window_hint);
        for (auto& t : tails_) {
            if (!t.is_zig()) continue;
            if (zig_tail_crossed(t, gamma)) return std::nullopt;
            for (auto& z : zig_arcs_in_window(t, W)) total += surf_.cross(gamma, z);
        }
        return total;
    }

    // Core chords plus internal limit arcs (the finitely many single arcs).
    std::vector<Curve> singleton_arcs() const {
        std::vector<Curve> out;
        for (auto& c : core_)
            if (surf_.classify(c) == CurveKind::Internal) out.push_back(c);
        for (auto& c : limit_pairs())
            if (surf_.classify(c) == CurveKind::Internal &&
                std::find(out.begin(), out.end(), c) == out.end())
                out.push_back(c);
        return out;
    }

    // --- domain of an arc ------------------------------------------------------

    DomainOfArc domain_of_arc(const Curve& gamma) const {
        if (!is_fan_triangulation())
            throw Error("ZigZagDomainPresent", "domain decomposition requires a fan triangulation");
        if (surf_.classify(gamma) == CurveKind::Boundary) return {};
        struct Item {
            Curve rep;              // representative for ordering
            bool run = false;
            PivotFamily fam;
            CrossInterval iv;
            Curve arc;              // single crossing
            bool limit = false;
        };
        std::vector<Item> items;
        for (auto& c : singleton_arcs()) {
            if (c == gamma) return {};  // gamma already in T
            if (surf_.cross(gamma, c)) {
                Item it; it.rep = c; it.arc = c; it.limit = is_limit_pair(c);
                items.push_back(it);
            }
        }
        for (auto& f : fan_families()) {
            CrossInterval iv = family_interval(f, gamma);
            if (iv.empty) continue;
            if (!iv.hi && !f.incoming)
                throw Error("Internal", "outgoing fan crossed infinitely");
            Item it;
            it.run = true;
            it.fam = f;
            it.iv = iv;
            it.rep = surf_.curve(f.pivot, MarkedPoint::pt(f.seg, iv.lo));
            items.push_back(it);
        }
        if (items.empty()) {
            // gamma may be a tail arc of T itself
            return {};
        }
        // order along gamma from endpoint gamma.a; pairwise-compatible crossed
        // arcs are linearly ordered by separation
        PosKey A = surf_.key(gamma.a);
        auto side_of = [&](const Curve& c, PosKey x) {
            return Surface::in_open(x, surf_.key(c.a), surf_.key(c.b));
        };
        auto before = [&](const Curve& c1, const Curve& c2) {
            // c1 separates gamma.a from c2
            bool sA = side_of(c1, A);
            for (auto* e : {&c2.a, &c2.b}) {
                PosKey k = surf_.key(*e);
                if (k == surf_.key(c1.a) || k == surf_.key(c1.b)) continue;
                if (side_of(c1, k) == sA) return false;
            }
            return true;
        };
        std::vector<Item> ordered;
        for (auto& it : items) {
            size_t pos = ordered.size();
            for (size_t i = 0; i < ordered.size(); ++i)
                if (before(it.rep, ordered[i].rep)) { pos = i; break; }
            ordered.insert(ordered.begin() + pos, it);
        }
        // expand finite intervals into individual crossings and group into
        // maximal common-pivot runs
        std::vector<std::pair<Curve, std::string>> seq;  // (arc, fan key) finite crossings
        std::vector<bool> seq_limit;
        DomainOfArc dom;
        auto flush_finite = [&]() {
            size_t i = 0;
            while (i < seq.size()) {
                // maximal stretch sharing a common endpoint (fan source)
                size_t j = i + 1;
                std::optional<MarkedPoint> pivot;
                if (j < seq.size()) {
                    const Curve& c1 = seq[i].first;
                    const Curve& c2 = seq[j].first;
                    for (auto* p : {&c1.a, &c1.b})
                        if (*p == c2.a || *p == c2.b) pivot = *p;
                    while (j < seq.size() && pivot) {
                        const Curve& c = seq[j].first;
                        if (c.a == *pivot || c.b == *pivot) ++j;
                        else break;
                    }
                    if (!pivot) j = i + 1;
                }
                CrossRun run;
                run.fan = seq[i].second;
                if (pivot && j > i + 1) { run.pivot = *pivot; run.has_pivot = true; }
                for (size_t k = i; k < j; ++k) {
                    run.arcs.push_back(seq[k].first);
                    run.limit_flags.push_back(seq_limit[k]);
                }
                dom.runs.push_back(run);
                i = j;
            }
            seq.clear();
            seq_limit.clear();
        };
        for (auto& it : ordered) {
            if (!it.run) {
                seq.push_back({it.arc, it.limit ? "limit" : "core"});
                seq_limit.push_back(it.limit);
                continue;
            }
            long long hi = it.iv.hi ? *it.iv.hi : -1;
            bool asc = true;
            if (hi != it.iv.lo && (hi == -1 || hi > it.iv.lo)) {
                Curve first = surf_.curve(it.fam.pivot, MarkedPoint::pt(it.fam.seg, it.iv.lo));
                Curve second = surf_.curve(it.fam.pivot, MarkedPoint::pt(it.fam.seg, it.iv.lo + 1));
                asc = before(first, second);
            }
            if (it.iv.hi) {
                for (long long j = 0; j <= hi - it.iv.lo; ++j) {
                    long long idx = asc ? it.iv.lo + j : hi - j;
                    seq.push_back({surf_.curve(it.fam.pivot, MarkedPoint::pt(it.fam.seg, idx)),
                                   it.fam.key});
                    seq_limit.push_back(false);
                }
                continue;
            }
            flush_finite();
            CrossRun run;
            run.fan = it.fam.key;
            run.pivot = it.fam.pivot;
            run.has_pivot = true;
            run.infinite = true;
            run.seg = it.fam.seg;
            run.lo = it.iv.lo;
            run.ascending = asc;
            dom.runs.push_back(run);
        }
        flush_finite();
        return dom;
    }

    // --- reachability ingredients ----------------------------------------------

    BadArcReport bad_arcs(const Triangulation& other, long long cap) const {
        // arcs of `other` that cross this triangulation infinitely often
        BadArcReport rep;
        auto check_arc = [&](const Curve& g) {
            auto n = crossings_count(g);
            if (!n) {
                rep.bad.push_back(g);
                return true;
            }
            return false;
        };
        for (auto& g : other.singleton_arcs()) check_arc(g);
        long long jmax = structure_bound() + other.structure_bound() + 4;
        for (auto& f : other.fan_families()) {
            Curve virt;  // deep member, via virtual keys
            bool deep_bad = virtual_fan_member_bad(f, other);
            if (deep_bad) {
                rep.infinite = true;
                rep.witness = witness_limit_arc(f, other);
                rep.detail = "infinitely many bad arcs in " + f.key;
                return rep;
            }
            for (long long j = f.from + 1; j <= jmax; ++j)
                check_arc(other.surface().curve(f.pivot, MarkedPoint::pt(f.seg, j)));
        }
        for (auto& t : other.tails_) {
            if (!t.is_zig()) continue;
            if (virtual_zig_member_bad(t, other)) {
                rep.infinite = true;
                rep.detail = "infinitely many bad arcs in zig-zag domain";
                return rep;
            }
            for (auto& z : other.zig_arcs_in_window(t, jmax)) check_arc(z);
        }
        // dedupe (limit pairs can coincide with core entries)
        std::vector<Curve> uniq;
        for (auto& c : rep.bad)
            if (std::find(uniq.begin(), uniq.end(), c) == uniq.end()) uniq.push_back(c);
        rep.bad = uniq;
        if (static_cast<long long>(rep.bad.size()) > cap) {
            rep.infinite = true;
            rep.detail = "more than cap bad arcs";
        }
        return rep;
    }

    // |T' cap T| = sum over arcs of T' of their crossing numbers with T.
    std::optional<long long> intersection_count(const Triangulation& other, long long cap) const {
        long long total = 0;
        auto add = [&](std::optional<long long> n) {
            if (!n) return false;
            total += *n;
            return true;
        };
        for (auto& g : other.singleton_arcs())
            if (!add(crossings_count(g))) return std::nullopt;
        long long jmax = structure_bound() + other.structure_bound() + 4;
        for (auto& f : other.fan_families()) {
            if (virtual_fan_member_crosses(f, other)) return std::nullopt;
            for (long long j = f.from + 1; j <= jmax; ++j) {
                if (!add(crossings_count(other.surface().curve(f.pivot,
                                                               MarkedPoint::pt(f.seg, j)))))
                    return std::nullopt;
                if (total > cap) return total;  // caller compares against cap
            }
        }
        for (auto& t : other.tails_) {
            if (!t.is_zig()) continue;
            if (virtual_zig_member_crosses(t, other)) return std::nullopt;
            for (auto& z : other.zig_arcs_in_window(t, jmax)) {
                if (!add(crossings_count(z))) return std::nullopt;
                if (total > cap) return total;
            }
        }
        return total;
    }

    // Def: the domain of this triangulation at `seg` is stronger than the
    // domain of `other` at the same one-sided accumulation.
    bool stronger_at(const Triangulation& other, int seg) const {
        DomainType d = type_at(seg), dp = other.type_at(seg);
        if (d == DomainType::Out) return false;
        if (dp == DomainType::Out) return true;  // case (a)
        // case (b): our limit arc crosses infinitely many arcs of the other domain
        const Tail& t = tail_at(seg);
        std::optional<Curve> lim;
        if (t.kind == Tail::Kind::Incoming)
            lim = surf_.curve(t.source, acc_point(t.seg));
        else if (t.kind == Tail::Kind::ZigToLimit)
            lim = surf_.curve(acc_point(t.seg), acc_point(t.seg2));
        else
            return false;  // zig around a point: vanishing limit crosses only
                           // arcs incident to the accumulation point; none in a
                           // non-outgoing domain beyond its own limit arc
        const Tail& ot = other.tail_at(seg);
        if (ot.is_fan()) {
            PivotFamily f;
            f.pivot = other.fan_pivot(ot);
            f.seg = ot.seg;
            f.from = ot.from;
            CrossInterval iv = other.family_interval(f, *lim);
            return !iv.empty && !iv.hi;
        }
        return other.zig_tail_crossed(ot, *lim);
    }

    long long structure_bound() const {
        long long b = 1;
        for (auto& c : core_)
            for (auto* p : {&c.a, &c.b})
                if (!p->is_acc) b = std::max(b, p->index);
        for (auto& t : tails_) {
            b = std::max(b, t.from);
            if (t.is_zig()) b = std::max(b, t.from2);
            if (t.kind == Tail::Kind::Incoming && !t.source.is_acc)
                b = std::max(b, t.source.index);
        }
        return b;
    }

    MarkedPoint fan_pivot(const Tail& t) const {
        return t.kind == Tail::Kind::Incoming ? t.source : acc_point(t.seg);
    }

    std::vector<int> tail_segments(const Tail& t) const {
        if (t.is_fan()) return {t.seg};
        return {t.seg, t.seg2};
    }

    bool same_realization(const Triangulation& other, long long N) const {
        long long W = std::max({N, min_window(), other.min_window()});
        Realized a = realize(W), b = other.realize(W);
        auto norm = [](Realized& r) {
            std::sort(r.chords.begin(), r.chords.end());
        };
        norm(a); norm(b);
        return a.poly.size() == b.poly.size() && a.chords == b.chords;
    }

    std::vector<Curve>& core_mut() { return core_; }
    std::vector<Tail>& tails_mut() { return tails_; }

private:
    Surface surf_;
    std::vector<Tail> tails_;
    std::vector<Curve> core_;
    std::optional<std::vector<Curve>> declared_limits_;

    void check_tail(const Tail& t) const {
        auto need_acc = [&](int s) {
            if (s < 0 || s >= surf_.segment_count() || !surf_.boundary()[s].infinite())
                throw Error("InvalidTriangulation",
                            "domain base must be an accumulating segment, got " + std::to_string(s));
        };
        need_acc(t.seg);
        if (t.kind == Tail::Kind::Incoming) {
            if (!surf_.valid_point(t.source))
                throw Error("InvalidTriangulation", "bad fan source");
            if (!t.source.is_acc && t.source.seg == t.seg && t.source.index > t.from)
                throw Error("InvalidTriangulation", "fan source cannot sit inside its own base");
        }
        if (t.is_zig()) {
            need_acc(t.seg2);
            const Segment& s1 = surf_.boundary()[t.seg];
            const Segment& s2 = surf_.boundary()[t.seg2];
            bool same_acc = s1.target == s2.target;
            if (t.kind == Tail::Kind::ZigAround && !same_acc)
                throw Error("InvalidTriangulation", "zig-zag around a point needs a two-sided point");
            if (t.kind == Tail::Kind::ZigToLimit && same_acc)
                throw Error("InvalidTriangulation",
                            "zig-zag to a limit arc needs two distinct accumulation points");
        }
    }

    bool virtual_fan_member_bad(const PivotFamily& f, const Triangulation& owner) const {
        return virtual_fan_member_count(f, owner, true);
    }
    bool virtual_fan_member_crosses(const PivotFamily& f, const Triangulation& owner) const {
        return virtual_fan_member_count(f, owner, false);
    }
    // Does the arbitrarily-deep member (pivot, virtual) of a family of `owner`
    // cross this triangulation [infinitely when `need_infinite`]?
    bool virtual_fan_member_count(const PivotFamily& f, const Triangulation& owner,
                                  bool need_infinite) const {
        PosKey p1 = owner.surface().key(f.pivot);
        PosKey p2 = owner.surface().virtual_deep(f.seg);
        return virtual_member_count(p1, p2, need_infinite);
    }
    bool virtual_zig_member_bad(const Tail& t, const Triangulation& owner) const {
        PosKey p1 = owner.surface().virtual_deep(t.seg);
        PosKey p2 = owner.surface().virtual_deep(t.seg2);
        return virtual_member_count(p1, p2, true);
    }
    bool virtual_zig_member_crosses(const Tail& t, const Triangulation& owner) const {
        PosKey p1 = owner.surface().virtual_deep(t.seg);
        PosKey p2 = owner.surface().virtual_deep(t.seg2);
        return virtual_member_count(p1, p2, false);
    }
    // The member (p1, p2) stands for a fixed but arbitrarily deep arc of the
    // other triangulation.  need_infinite asks "does it cross this
    // triangulation infinitely often" (only an unbounded family tail can cause
    // that); otherwise "does it cross at all".
    bool virtual_member_count(PosKey p1, PosKey p2, bool need_infinite) const {
        auto interleave_keys = [](PosKey a, PosKey b, PosKey c, PosKey d) {
            if (a == c || a == d || b == c || b == d) return false;
            return Surface::in_open(c, a, b) != Surface::in_open(d, a, b);
        };
        if (!need_infinite) {
            for (auto& c : singleton_arcs())
                if (interleave_keys(p1, p2, surf_.key(c.a), surf_.key(c.b))) return true;
        }
        for (auto& f : fan_families()) {
            PosKey piv = surf_.key(f.pivot);
            PosKey deep = surf_.virtual_deep(f.seg, 2);  // deeper than the fixed member
            if (interleave_keys(p1, p2, piv, deep)) return true;
            if (!need_infinite) {
                long long jmax = structure_bound() + 4;
                for (long long j = f.from + 1; j <= jmax; ++j)
                    if (interleave_keys(p1, p2, piv, surf_.key(MarkedPoint::pt(f.seg, j))))
                        return true;
            }
        }
        for (auto& t : tails_) {
            if (!t.is_zig()) continue;
            PosKey v1 = surf_.virtual_deep(t.seg, 2), v2 = surf_.virtual_deep(t.seg2, 2);
            if (interleave_keys(p1, p2, v1, v2)) return true;
            if (!need_infinite) {
                for (auto& z : zig_arcs_in_window(t, structure_bound() + 4))
                    if (interleave_keys(p1, p2, surf_.key(z.a), surf_.key(z.b))) return true;
            }
        }
        return false;
    }

    std::optional<Curve> witness_limit_arc(const PivotFamily& f, const Triangulation& owner) const {
        // prefer one of our limit arcs crossed by the deep members of f
        PosKey p1 = owner.surface().key(f.pivot);
        PosKey p2 = owner.surface().virtual_deep(f.seg);
        for (auto& lim : limit_pairs()) {
            PosKey u = surf_.key(lim.a), v = surf_.key(lim.b);
            if (u == p1 || u == p2 || v == p1 || v == p2) continue;
            if (Surface::in_open(u, p1, p2) != Surface::in_open(v, p1, p2)) return lim;
        }
        // otherwise any limit arc we carry at that accumulation point
        AccId acc = owner.surface().boundary()[f.seg].target;
        for (auto& lim : limit_pairs())
            if ((lim.a.is_acc && lim.a.acc == acc) || (lim.b.is_acc && lim.b.acc == acc)) return lim;
        return std::nullopt;
    }

    long long zig_window(const Curve& gamma, long long hint) const {
        long long w = structure_bound() + 4 + hint;
        for (auto* p : {&gamma.a, &gamma.b})
            if (!p->is_acc) w = std::max(w, p->index + 4);
        return w;
    }
};

}  // namespace infgon
