#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "infgon/triangulation.hpp"

namespace infgon {

struct Move {
    enum class Kind { Flip, ShiftFanSource, ZigZagToFans, OutgoingToIncoming, IncomingToOutgoing };
    Kind kind = Kind::Flip;
    Curve arc;               // Flip
    std::string target;      // generator target: direction key "acc:<id>:<side>"

    static Move flip(Curve c) { Move m; m.kind = Kind::Flip; m.arc = std::move(c); return m; }
    static Move shift(std::string dir) {
        Move m; m.kind = Kind::ShiftFanSource; m.target = std::move(dir); return m;
    }
    static Move zig_to_fans(std::string dir) {
        Move m; m.kind = Kind::ZigZagToFans; m.target = std::move(dir); return m;
    }
    static Move out_to_in(std::string dir) {
        Move m; m.kind = Kind::OutgoingToIncoming; m.target = std::move(dir); return m;
    }
    static Move in_to_out(std::string dir) {
        Move m; m.kind = Kind::IncomingToOutgoing; m.target = std::move(dir); return m;
    }
    std::string str() const {
        switch (kind) {
            case Kind::Flip: return "flip " + arc.str();
            case Kind::ShiftFanSource: return "shift_fan_source " + target;
            case Kind::ZigZagToFans: return "zigzag_to_fans " + target;
            case Kind::OutgoingToIncoming: return "outgoing_to_incoming " + target;
            default: return "incoming_to_outgoing " + target;
        }
    }
};

struct MutationProgram {
    std::vector<Move> moves;
};

// --- elementary flip ----------------------------------------------------------

namespace detail_mut {

// Move generated tail arcs with base index <= upto into the core so that local
// surgery only ever touches explicit chords.  The decomposition changes, the
// triangulation does not.
inline void absorb_fan(Triangulation& T, int seg, long long upto) {
    Tail& t = T.tail_at_mut(seg);
    if (!t.is_fan()) return;
    MarkedPoint piv = T.fan_pivot(t);
    for (long long j = t.from + 1; j <= upto; ++j) {
        Curve c = T.surface().curve(piv, MarkedPoint::pt(t.seg, j));
        if (std::find(T.core().begin(), T.core().end(), c) == T.core().end())
            T.core_mut().push_back(c);
    }
    if (upto > t.from) t.from = upto;
}

inline void absorb_zig_once(Triangulation& T, Tail& t) {
    Curve first = T.zig_arcs_in_window(t, t.from + t.from2 + 8).front();
    if (std::find(T.core().begin(), T.core().end(), first) == T.core().end())
        T.core_mut().push_back(first);
    if (t.start_first) { t.from += 1; t.start_first = false; }
    else { t.from2 += 1; t.start_first = true; }
}

}  // namespace detail_mut

inline Triangulation flip(const Triangulation& T0, const Curve& gamma) {
    Triangulation T = T0;
    const Surface& S = T.surface();
    for (auto& lim : T.limit_pairs())
        if (lim == S.curve(gamma.a, gamma.b))
            throw Error("LimitArcNotFlippable", "a limit arc cannot be flipped: " + gamma.str());
    Curve g = S.curve(gamma.a, gamma.b);
    if (S.classify(g) == CurveKind::Boundary)
        throw Error("NotInTriangulation", "boundary arcs are never flipped: " + g.str());

    bool found = std::find(T.core().begin(), T.core().end(), g) != T.core().end();
    if (!found) {
        // a generated tail arc?
        for (auto& t : T.tails()) {
            if (t.is_fan()) {
                MarkedPoint piv = T.fan_pivot(t);
                for (auto* e : {&g.a, &g.b}) {
                    MarkedPoint o = g.a == *e ? g.b : g.a;
                    if (*e == piv && !o.is_acc && o.seg == t.seg && o.index > t.from) {
                        detail_mut::absorb_fan(T, t.seg, o.index + 1);
                        found = true;
                        break;
                    }
                }
            } else {
                long long deep = t.from + t.from2 + 4;
                for (auto* e : {&g.a, &g.b})
                    if (!e->is_acc) deep = std::max(deep, e->index + 4);
                auto zw = T.zig_arcs_in_window(t, deep);
                if (std::find(zw.begin(), zw.end(), g) != zw.end()) {
                    Tail& tm = T.tail_at_mut(t.seg);
                    while (std::find(T.core().begin(), T.core().end(), g) == T.core().end())
                        detail_mut::absorb_zig_once(T, tm);
                    found = true;
                }
            }
            if (found) break;
        }
    }
    if (!found) throw Error("NotInTriangulation", g.str() + " is not an arc of the triangulation");

    // make sure the quadrilateral of g is visible
    for (auto& t : T.tails())
        if (t.is_fan()) {
            for (auto* e : {&g.a, &g.b})
                if (!e->is_acc && e->seg == t.seg && e->index >= t.from - 1)
                    detail_mut::absorb_fan(T, t.seg, e->index + 2);
        }

    Realized r = T.realize(T.min_window() + 2);
    int i = r.position(S, g.a), j = r.position(S, g.b);
    if (i > j) std::swap(i, j);
    int w1 = r.apex(i, j, true), w2 = r.apex(i, j, false);
    if (w1 < 0 || w2 < 0)
        throw Error("NotInTriangulation", "no quadrilateral around " + g.str());
    Curve repl = S.curve(r.poly[w1], r.poly[w2]);
    auto& core = T.core_mut();
    core.erase(std::remove(core.begin(), core.end(), g), core.end());
    core.push_back(repl);
    return T;
}

// --- canned infinite-mutation generators ---------------------------------------

inline Triangulation shift_fan_source(const Triangulation& T0, const std::string& dir) {
    Triangulation T = T0;
    auto seg = T.direction_of_key(dir);
    if (!seg) throw Error("NotAFan", "no such fan domain: " + dir);
    Tail& t = T.tail_at_mut(*seg);
    if (t.kind != Tail::Kind::Incoming)
        throw Error("NotAFan", dir + " is not an incoming fan with a shiftable source");
    Curve old_limit = T.surface().curve(t.source, T.acc_point(t.seg));
    T.core_mut().push_back(old_limit);  // the old limit becomes a regular arc
    t.source = MarkedPoint::pt(t.seg, t.from);
    t.from += 1;
    return T;
}

inline Triangulation outgoing_to_incoming(const Triangulation& T0, const std::string& dir) {
    Triangulation T = T0;
    auto seg = T.direction_of_key(dir);
    if (!seg) throw Error("NotAnOutgoingFan", "no such fan domain: " + dir);
    Tail& t = T.tail_at_mut(*seg);
    if (t.kind != Tail::Kind::Outgoing)
        throw Error("NotAnOutgoingFan", dir + " is not an outgoing fan");
    t.kind = Tail::Kind::Incoming;
    t.source = MarkedPoint::pt(t.seg, t.from);
    t.from += 1;  // limit arc (source, acc) appears by completion
    return T;
}

inline Triangulation incoming_to_outgoing(const Triangulation& T0, const std::string& dir) {
    Triangulation T = T0;
    auto seg = T.direction_of_key(dir);
    if (!seg) throw Error("NotAFan", "no such fan domain: " + dir);
    Tail& t = T.tail_at_mut(*seg);
    if (t.kind != Tail::Kind::Incoming) throw Error("NotAFan", dir + " is not an incoming fan");
    // orbit of every fan arc walks off toward the accumulation point; the
    // caller reports non-admissibility at any finite truncation
    Curve old_limit = T.surface().curve(t.source, T.acc_point(t.seg));
    auto& core = T.core_mut();
    core.erase(std::remove(core.begin(), core.end(), old_limit), core.end());
    t.kind = Tail::Kind::Outgoing;
    return T;
}

// Zig-zag domain replaced by two incoming fans from the outer point of its
// first base; the former limit arc survives as a regular arc.
inline Triangulation zigzag_to_fans(const Triangulation& T0, const std::string& dir) {
    Triangulation T = T0;
    auto seg = T.direction_of_key(dir);
    if (!seg) throw Error("NotAZigZag", "no such domain: " + dir);
    Tail t = T.tail_at(*seg);
    if (!t.is_zig()) throw Error("NotAZigZag", dir + " is not a zig-zag domain");
    MarkedPoint src = MarkedPoint::pt(t.seg, t.from);
    std::vector<Tail> tails;
    for (auto& u : T.tails()) {
        bool same = u.kind == t.kind && u.seg == t.seg && u.seg2 == t.seg2 && u.from == t.from;
        if (!same) tails.push_back(u);
    }
    tails.push_back(Tail::incoming(src, t.seg, t.from));
    tails.push_back(Tail::incoming(src, t.seg2, t.from2));
    std::vector<Curve> core = T.core();
    if (t.kind == Tail::Kind::ZigToLimit) {
        Curve old_limit = T.surface().curve(T.acc_point(t.seg), T.acc_point(t.seg2));
        if (std::find(core.begin(), core.end(), old_limit) == core.end())
            core.push_back(old_limit);
    }
    Triangulation out(T.surface(), tails, core);
    return out;
}

// --- program execution -----------------------------------------------------------

struct OrbitReport {
    // realized arcs of the window, with the step after which their membership
    // became constant (0 = present/settled from the start)
    std::vector<std::pair<Curve, int>> stabilized_after;
    bool admissible = true;
    std::optional<Curve> non_admissible_witness;
};

struct ProgramResult {
    Triangulation result;
    OrbitReport orbits;
};

inline ProgramResult apply_program(const Triangulation& T0, const MutationProgram& prog,
                                   long long N) {
    Triangulation cur = T0;
    std::vector<std::set<std::string>> snapshots;
    std::map<std::string, Curve> curves_seen;

    auto snapshot = [&](const Triangulation& T) {
        std::set<std::string> s;
        Realized r = T.realize(N);
        for (auto& c : r.chord_curves) {
            s.insert(c.str());
            curves_seen.emplace(c.str(), c);
        }
        return s;
    };
    snapshots.push_back(snapshot(cur));

    OrbitReport orbits;
    for (size_t i = 0; i < prog.moves.size(); ++i) {
        const Move& m = prog.moves[i];
        try {
            switch (m.kind) {
                case Move::Kind::Flip: cur = flip(cur, m.arc); break;
                case Move::Kind::ShiftFanSource: cur = shift_fan_source(cur, m.target); break;
                case Move::Kind::ZigZagToFans: cur = zigzag_to_fans(cur, m.target); break;
                case Move::Kind::OutgoingToIncoming: cur = outgoing_to_incoming(cur, m.target); break;
                case Move::Kind::IncomingToOutgoing: {
                    auto seg = cur.direction_of_key(m.target);
                    Curve witness;
                    if (seg) {
                        const Tail& t = cur.tail_at(*seg);
                        witness = cur.surface().curve(cur.fan_pivot(t),
                                                      MarkedPoint::pt(t.seg, t.from + 1));
                    }
                    cur = incoming_to_outgoing(cur, m.target);
                    orbits.admissible = false;
                    orbits.non_admissible_witness = witness;
                    break;
                }
            }
        } catch (const Error& e) {
            if (e.code == "NonAdmissibleAtTruncation") throw;
            throw Error("MoveInapplicable",
                        "move " + std::to_string(i) + " (" + m.str() + "): " + e.what());
        }
        snapshots.push_back(snapshot(cur));
    }
    // membership stabilization step per arc
    std::set<std::string> all;
    for (auto& s : snapshots) all.insert(s.begin(), s.end());
    for (auto& a : all) {
        int last_change = 0;
        for (size_t i = 1; i < snapshots.size(); ++i) {
            bool before = snapshots[i - 1].count(a) > 0;
            bool after = snapshots[i].count(a) > 0;
            if (before != after) last_change = static_cast<int>(i);
        }
        orbits.stabilized_after.push_back({curves_seen.at(a), last_change});
    }
    if (!orbits.admissible)
        throw Error("NonAdmissibleAtTruncation",
                    "orbit of " +
                        (orbits.non_admissible_witness ? orbits.non_admissible_witness->str()
                                                       : std::string("a fan arc")) +
                        " does not stabilize in the window");
    return {cur, orbits};
}

// Variant that reports instead of throwing, for inspecting non-admissible programs.
inline ProgramResult apply_program_report(const Triangulation& T0, const MutationProgram& prog,
                                          long long N) {
    try {
        return apply_program(T0, prog, N);
    } catch (const Error& e) {
        if (e.code != "NonAdmissibleAtTruncation") throw;
        // re-run move-by-move without the admissibility throw
        Triangulation cur = T0;
        OrbitReport orbits;
        orbits.admissible = false;
        for (auto& m : prog.moves) {
            switch (m.kind) {
                case Move::Kind::Flip: cur = flip(cur, m.arc); break;
                case Move::Kind::ShiftFanSource: cur = shift_fan_source(cur, m.target); break;
                case Move::Kind::ZigZagToFans: cur = zigzag_to_fans(cur, m.target); break;
                case Move::Kind::OutgoingToIncoming: cur = outgoing_to_incoming(cur, m.target); break;
                case Move::Kind::IncomingToOutgoing: cur = incoming_to_outgoing(cur, m.target); break;
            }
        }
        return {cur, orbits};
    }
}

// --- reachability classifier -------------------------------------------------------

struct ReachabilityClass {
    enum class Kind { Finite, FiniteSeqOfInfinite, RequiresInfiniteSeq, Unknown } kind;
    std::string detail;
    std::optional<MutationProgram> witness;
    long long bound = 0;  // upper bound on the number of infinite mutations

    std::string name() const {
        switch (kind) {
            case Kind::Finite: return "Finite";
            case Kind::FiniteSeqOfInfinite: return "FiniteSeqOfInfinite";
            case Kind::RequiresInfiniteSeq: return "RequiresInfiniteSeq";
            default: return "Unknown";
        }
    }
};

inline MutationProgram plan_finite_mutation(const Triangulation& T, const Triangulation& Tp);

inline ReachabilityClass classify_reachability(const Triangulation& T, const Triangulation& Tp,
                                               long long cap, long long N) {
    ReachabilityClass rc{ReachabilityClass::Kind::Unknown, "", std::nullopt, 0};
    auto ic = T.intersection_count(Tp, cap);
    if (ic && *ic <= cap) {
        rc.kind = ReachabilityClass::Kind::Finite;
        rc.detail = "|T cap T'| = " + std::to_string(*ic);
        try {
            rc.witness = plan_finite_mutation(T, Tp);
        } catch (const Error&) {
        }
        return rc;
    }
    for (int s = 0; s < T.surface().segment_count(); ++s) {
        if (!T.surface().boundary()[s].infinite()) continue;
        if (T.stronger_at(Tp, s)) {
            rc.kind = ReachabilityClass::Kind::RequiresInfiniteSeq;
            rc.detail = domain_type_str(T.type_at(s)) + " > " + domain_type_str(Tp.type_at(s)) +
                        " at " + T.direction_key(s);
            return rc;
        }
    }
    BadArcReport bad = T.bad_arcs(Tp, cap);
    if (!bad.infinite) {
        bool all_limit = true;
        auto lims = Tp.limit_pairs();
        for (auto& b : bad.bad)
            if (std::find(lims.begin(), lims.end(), b) == lims.end()) all_limit = false;
        if (all_limit) {
            rc.kind = ReachabilityClass::Kind::FiniteSeqOfInfinite;
            rc.bound = static_cast<long long>(bad.bad.size()) + 1;
            rc.detail = std::to_string(bad.bad.size()) + " bad arcs, all limit arcs of the target";
            // canned one-generator witness for outgoing -> incoming switches
            MutationProgram w;
            bool canned = true;
            for (int s = 0; s < T.surface().segment_count() && canned; ++s) {
                if (!T.surface().boundary()[s].infinite()) continue;
                DomainType a = T.type_at(s), b2 = Tp.type_at(s);
                if (a == b2) continue;
                if (a == DomainType::Out && b2 == DomainType::In)
                    w.moves.push_back(Move::out_to_in(T.direction_key(s)));
                else
                    canned = false;
            }
            if (canned && !w.moves.empty()) {
                try {
                    ProgramResult pr = apply_program(T, w, N);
                    if (pr.result.same_realization(Tp, N)) rc.witness = w;
                } catch (const Error&) {
                }
            }
            return rc;
        }
        rc.detail = "finite bad set contains a non-limit arc";
        return rc;  // Unknown
    }
    rc.detail = bad.detail;
    return rc;  // Unknown
}

// Flip program realizing a finitely-reachable target: resolve the crossings of
// each target arc one by one, nearest the endpoint first.
inline MutationProgram plan_finite_mutation(const Triangulation& T, const Triangulation& Tp) {
    long long cap = 1 << 20;
    auto ic = T.intersection_count(Tp, cap);
    if (!ic) throw Error("NotFinitelyReachable", "triangulations cross infinitely often");
    long long W = std::max(T.min_window(), Tp.min_window()) + 2;
    MutationProgram prog;
    Triangulation cur = T;
    Realized target = Tp.realize(W);
    const Surface& S = T.surface();
    for (auto& gp : target.chord_curves) {
        for (int guard = 0; guard < 1000; ++guard) {
            Realized r = cur.realize(W);
            std::vector<Curve> crossers;
            for (auto& c : r.chord_curves)
                if (S.cross(c, gp)) crossers.push_back(c);
            if (crossers.empty()) break;
            // order along gp from gp.a
            PosKey A = S.key(gp.a);
            auto before = [&](const Curve& c1, const Curve& c2) {
                bool sA = Surface::in_open(A, S.key(c1.a), S.key(c1.b));
                for (auto* e : {&c2.a, &c2.b}) {
                    PosKey k = S.key(*e);
                    if (k == S.key(c1.a) || k == S.key(c1.b)) continue;
                    if (Surface::in_open(k, S.key(c1.a), S.key(c1.b)) == sA) return false;
                }
                return true;
            };
            std::sort(crossers.begin(), crossers.end(),
                      [&](const Curve& x, const Curve& y) { return before(x, y); });
            bool flipped = false;
            for (auto& cand : crossers) {
                Triangulation next = flip(cur, cand);
                long long before_n = crossers.size();
                Realized rn = next.realize(W);
                long long after_n = 0;
                for (auto& c : rn.chord_curves)
                    if (S.cross(c, gp)) ++after_n;
                if (after_n < before_n) {
                    prog.moves.push_back(Move::flip(cand));
                    cur = next;
                    flipped = true;
                    break;
                }
            }
            if (!flipped)
                throw Error("NotFinitelyReachable", "no crossing-reducing flip for " + gp.str());
        }
    }
    if (!cur.same_realization(Tp, W))
        throw Error("NotFinitelyReachable", "flip planning did not reach the target");
    return prog;
}

}  // namespace infgon
