#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "infgon/errors.hpp"
#include "infgon/laurent.hpp"

namespace infgon {

using AccId = std::string;

enum class Side { Left, Right };

// One stretch of the disc boundary: either finitely many marked points, or a
// monotone infinite sequence of marked points converging to an accumulation
// point.  A Left segment approaches its target from the left (ascending index
// along the boundary orientation, target after the points); a Right segment
// has the target first and the points trailing away from it.
struct Segment {
    enum class Kind { Finite, Accumulating } kind = Kind::Finite;
    long long count = 0;  // Finite
    AccId target;         // Accumulating
    Side side = Side::Left;

    static Segment finite(long long n) {
        Segment s; s.kind = Kind::Finite; s.count = n; return s;
    }
    static Segment accumulating(AccId id, Side side) {
        Segment s; s.kind = Kind::Accumulating; s.target = std::move(id); s.side = side;
        return s;
    }
    bool infinite() const { return kind == Kind::Accumulating; }
};

// Address of a boundary marked point.  Accumulation points are marked points
// in their own right and are addressed by id.
struct MarkedPoint {
    bool is_acc = false;
    int seg = -1;          // segment index when !is_acc
    long long index = 0;   // index within segment
    AccId acc;             // when is_acc

    static MarkedPoint pt(int seg, long long index) {
        MarkedPoint p; p.seg = seg; p.index = index; return p;
    }
    static MarkedPoint accp(AccId id) {
        MarkedPoint p; p.is_acc = true; p.acc = std::move(id); return p;
    }
    friend bool operator==(const MarkedPoint& a, const MarkedPoint& b) {
        if (a.is_acc != b.is_acc) return false;
        return a.is_acc ? a.acc == b.acc : (a.seg == b.seg && a.index == b.index);
    }
    friend bool operator!=(const MarkedPoint& a, const MarkedPoint& b) { return !(a == b); }
    std::string str() const {
        return is_acc ? "acc:" + acc : "s" + std::to_string(seg) + ":" + std::to_string(index);
    }
};

// Unordered pair of distinct marked points; the shared field layout of Arc,
// BoundaryArc and GeneralizedArc.  Canonical endpoint order is fixed by the
// owning surface (see Surface::curve).
struct Curve {
    MarkedPoint a, b;
    friend bool operator==(const Curve& x, const Curve& y) {
        return x.a == y.a && x.b == y.b;
    }
    friend bool operator!=(const Curve& x, const Curve& y) { return !(x == y); }
    std::string str() const { return "(" + a.str() + "," + b.str() + ")"; }
};

enum class CurveKind { Internal, Boundary };

struct GeneralizedArc {
    Curve curve;
    CurveKind kind = CurveKind::Internal;
};

// Position key giving the total cyclic order of marked points.  rank 0 holds
// an accumulation point sitting at the head of a Right segment, rank 2 one at
// the tail of a Left segment; ordinary points are rank 1 with a value that
// ascends along the boundary orientation.
struct PosKey {
    int seg = 0;
    int rank = 1;
    long long v = 0;
    friend bool operator<(const PosKey& x, const PosKey& y) {
        if (x.seg != y.seg) return x.seg < y.seg;
        if (x.rank != y.rank) return x.rank < y.rank;
        return x.v < y.v;
    }
    friend bool operator==(const PosKey& x, const PosKey& y) {
        return x.seg == y.seg && x.rank == y.rank && x.v == y.v;
    }
};

class Surface {
public:
    static Surface polygon(long long n) {
        if (n < 4) throw Error("InvalidSurface", "polygon needs at least 4 points");
        return Surface({Segment::finite(n)});
    }

    explicit Surface(std::vector<Segment> boundary) : boundary_(std::move(boundary)) {
        if (boundary_.empty()) throw Error("InvalidSurface", "empty boundary");
        long long finite_total = 0;
        std::map<AccId, int> left_host, right_host;
        for (int i = 0; i < static_cast<int>(boundary_.size()); ++i) {
            const Segment& s = boundary_[i];
            if (s.infinite()) {
                auto& hosts = s.side == Side::Left ? left_host : right_host;
                if (hosts.count(s.target))
                    throw Error("InvalidSurface",
                                "duplicate accumulation target on one side: " + s.target);
                hosts[s.target] = i;
                ++acc_count_;
            } else {
                if (s.count < 1) throw Error("InvalidSurface", "finite segment needs >= 1 point");
                finite_total += s.count;
            }
        }
        if (acc_count_ == 0 && finite_total < 4)
            throw Error("InvalidSurface", "finite disc needs at least 4 marked points");
        // A two-sided accumulation point is a single boundary point, so its
        // Right segment must directly follow its Left segment.
        for (auto& [id, ri] : right_host) {
            auto li = left_host.find(id);
            if (li != left_host.end()) {
                int prev = (ri + static_cast<int>(boundary_.size()) - 1)
                           % static_cast<int>(boundary_.size());
                if (prev != li->second)
                    throw Error("InvalidSurface",
                                "two-sided accumulation point " + id + " must join adjacent segments");
            }
        }
        for (auto& [id, i] : left_host) acc_host_[id] = i;
        for (auto& [id, i] : right_host)
            if (!acc_host_.count(id)) acc_host_[id] = i;
        for (auto& [id, i] : left_host) acc_ids_.insert(id);
        for (auto& [id, i] : right_host) acc_ids_.insert(id);
    }

    const std::vector<Segment>& boundary() const { return boundary_; }
    int segment_count() const { return static_cast<int>(boundary_.size()); }
    int acc_count() const { return acc_count_; }
    const std::set<AccId>& acc_ids() const { return acc_ids_; }
    bool is_finite() const { return acc_count_ == 0; }

    bool valid_point(const MarkedPoint& p) const {
        if (p.is_acc) return acc_ids_.count(p.acc) > 0;
        if (p.seg < 0 || p.seg >= segment_count() || p.index < 0) return false;
        const Segment& s = boundary_[p.seg];
        return s.infinite() || p.index < s.count;
    }

    PosKey key(const MarkedPoint& p) const {
        require_point(p);
        if (p.is_acc) {
            int host = acc_host_.at(p.acc);
            return boundary_[host].side == Side::Left && boundary_[host].infinite()
                       ? PosKey{host, 2, 0}
                       : PosKey{host, 0, 0};
        }
        const Segment& s = boundary_[p.seg];
        if (s.infinite() && s.side == Side::Right) return PosKey{p.seg, 1, -p.index};
        return PosKey{p.seg, 1, p.index};
    }

    // A virtual position arbitrarily deep in an accumulating segment, strictly
    // between every real point of the segment and its target.  Used to decide
    // tail behaviour of infinite arc families exactly.  Higher levels are
    // strictly deeper; a level-2 point outruns any fixed level-1 point, which
    // resolves nested limits when two families live on one segment.
    PosKey virtual_deep(int seg, int level = 1) const {
        const Segment& s = boundary_.at(seg);
        if (!s.infinite()) throw Error("InvalidSurface", "virtual point needs accumulating segment");
        const long long big = std::numeric_limits<long long>::max() / 2 + level;
        return s.side == Side::Left ? PosKey{seg, 1, big} : PosKey{seg, 1, -big};
    }

    // --- cyclic order -------------------------------------------------------

    // x strictly inside the cyclic interval (u, v) walked along the boundary
    // orientation from u to v.
    static bool in_open(const PosKey& x, const PosKey& u, const PosKey& v) {
        if (u < v) return u < x && x < v;
        return u < x || x < v;
    }

    bool interleave(const Curve& c1, const Curve& c2) const {
        PosKey a = key(c1.a), b = key(c1.b), c = key(c2.a), d = key(c2.b);
        if (a == c || a == d || b == c || b == d) return false;
        return in_open(c, a, b) != in_open(d, a, b);
    }

    // Minimal crossing number of two chords of a disc: 0 or 1.
    int cross(const Curve& c1, const Curve& c2) const { return interleave(c1, c2) ? 1 : 0; }

    // --- adjacency / classification ----------------------------------------

    // Successor of p in the cyclic order, when an immediate successor exists.
    // Walking forward out of an accumulation point through its accumulating
    // side meets no first point, so there is none in that direction.
    std::optional<MarkedPoint> successor(const MarkedPoint& p) const {
        require_point(p);
        int n = segment_count();
        if (p.is_acc) {
            int host = acc_host_.at(p.acc);
            const Segment& hs = boundary_[host];
            if (hs.side == Side::Right && hs.infinite()) return std::nullopt;  // points descend to p
            // p sits at the tail of a Left segment.
            int nxt = (host + 1) % n;
            const Segment& s2 = boundary_[nxt];
            if (s2.infinite() && s2.side == Side::Right && s2.target == p.acc)
                return std::nullopt;  // two-sided accumulation
            return first_of(nxt);
        }
        const Segment& s = boundary_[p.seg];
        if (s.infinite()) {
            if (s.side == Side::Left) return MarkedPoint::pt(p.seg, p.index + 1);
            if (p.index > 0) return MarkedPoint::pt(p.seg, p.index - 1);
            return first_of((p.seg + 1) % n);
        }
        if (p.index + 1 < s.count) return MarkedPoint::pt(p.seg, p.index + 1);
        return first_of((p.seg + 1) % n);
    }

    // True iff p and q bound a boundary segment free of other marked points
    // (including adjacency through an accumulation point).
    bool boundary_adjacent(const MarkedPoint& p, const MarkedPoint& q) const {
        if (p == q) return false;
        auto sp = successor(p);
        if (sp && *sp == q) return true;
        auto sq = successor(q);
        return sq && *sq == p;
    }

    CurveKind classify(const Curve& c) const {
        if (c.a == c.b) throw Error("InvalidArc", "endpoints coincide: " + c.str());
        require_point(c.a);
        require_point(c.b);
        return boundary_adjacent(c.a, c.b) ? CurveKind::Boundary : CurveKind::Internal;
    }

    Curve curve(const MarkedPoint& p, const MarkedPoint& q) const {
        require_point(p);
        require_point(q);
        if (p == q) throw Error("InvalidArc", "endpoints coincide");
        Curve c{p, q};
        if (key(q) < key(p)) std::swap(c.a, c.b);
        return c;
    }

    Curve arc(const MarkedPoint& p, const MarkedPoint& q) const {
        Curve c = curve(p, q);
        if (classify(c) == CurveKind::Boundary)
            throw Error("InvalidArc", "boundary pair is not an internal arc: " + c.str());
        return c;
    }

    // Variable of the lambda length of a curve: x(...) for internal arcs,
    // b(...) for boundary arcs (boundary coefficients).
    VarId var_of(const Curve& c) const {
        Curve cc = curve(c.a, c.b);
        const char* tag = classify(cc) == CurveKind::Boundary ? "b" : "x";
        return std::string(tag) + "(" + cc.a.str() + "," + cc.b.str() + ")";
    }

    // --- smoothing ----------------------------------------------------------

    // The two ways of resolving a crossing: with endpoints interleaved as
    // w0 < w1 < w2 < w3 the smoothings are {(w0,w1),(w2,w3)} and
    // {(w0,w3),(w1,w2)}.
    std::array<std::array<GeneralizedArc, 2>, 2> smooth_crossing(const Curve& c1,
                                                                 const Curve& c2) const {
        if (!interleave(c1, c2))
            throw Error("NotCrossing", c1.str() + " does not cross " + c2.str());
        std::vector<MarkedPoint> w = {c1.a, c1.b, c2.a, c2.b};
        std::sort(w.begin(), w.end(),
                  [&](const MarkedPoint& x, const MarkedPoint& y) { return key(x) < key(y); });
        auto mk = [&](const MarkedPoint& p, const MarkedPoint& q) {
            Curve c = curve(p, q);
            return GeneralizedArc{c, classify(c)};
        };
        return {{{mk(w[0], w[1]), mk(w[2], w[3])}, {mk(w[0], w[3]), mk(w[1], w[2])}}};
    }

    // --- truncation ---------------------------------------------------------

    // Finite window onto the boundary: each accumulating segment contributes
    // its first N points; every accumulation point appears exactly once as a
    // terminal label.  Cyclic order is preserved.
    std::vector<MarkedPoint> truncate(long long N) const {
        if (N < 1) throw Error("InvalidTruncation", "window must be >= 1");
        std::vector<MarkedPoint> pts;
        int n = segment_count();
        for (int i = 0; i < n; ++i) {
            const Segment& s = boundary_[i];
            if (!s.infinite()) {
                for (long long j = 0; j < s.count; ++j) pts.push_back(MarkedPoint::pt(i, j));
                continue;
            }
            if (s.side == Side::Left) {
                for (long long j = 0; j < N; ++j) pts.push_back(MarkedPoint::pt(i, j));
                pts.push_back(MarkedPoint::accp(s.target));
            } else {
                int prev = (i + n - 1) % n;
                const Segment& ps = boundary_[prev];
                bool shared = ps.infinite() && ps.side == Side::Left && ps.target == s.target;
                if (!shared) pts.push_back(MarkedPoint::accp(s.target));
                for (long long j = N - 1; j >= 0; --j) pts.push_back(MarkedPoint::pt(i, j));
            }
        }
        return pts;
    }

    bool in_window(const MarkedPoint& p, long long N) const {
        if (p.is_acc) return true;
        return !boundary_[p.seg].infinite() || p.index < N;
    }

    // --- parsing ------------------------------------------------------------

    MarkedPoint parse_point(const std::string& text) const {
        if (text.rfind("acc:", 0) == 0) {
            MarkedPoint p = MarkedPoint::accp(text.substr(4));
            require_point(p);
            return p;
        }
        // allow a bare integer on single-segment surfaces ("3" == "s0:3")
        size_t colon = text.find(':');
        int seg = 0;
        long long idx = 0;
        try {
            if (colon == std::string::npos) {
                idx = std::stoll(text);
            } else {
                std::string st = text.substr(0, colon);
                if (st.empty() || st[0] != 's') throw std::invalid_argument(text);
                seg = std::stoi(st.substr(1));
                idx = std::stoll(text.substr(colon + 1));
            }
        } catch (const std::exception&) {
            throw Error("BadPointLiteral", "cannot parse marked point '" + text + "'");
        }
        MarkedPoint p = MarkedPoint::pt(seg, idx);
        require_point(p);
        return p;
    }

    Curve parse_curve(const std::string& text) const {
        size_t comma = text.find(',');
        if (comma == std::string::npos)
            throw Error("BadPointLiteral", "curve literal needs two comma-separated points");
        return curve(parse_point(text.substr(0, comma)), parse_point(text.substr(comma + 1)));
    }

    // Host segment of an accumulation point (Left segment when two-sided).
    int host_segment(const AccId& id) const { return acc_host_.at(id); }
    std::optional<int> left_segment(const AccId& id) const { return find_seg(id, Side::Left); }
    std::optional<int> right_segment(const AccId& id) const { return find_seg(id, Side::Right); }

private:
    std::vector<Segment> boundary_;
    int acc_count_ = 0;
    std::map<AccId, int> acc_host_;
    std::set<AccId> acc_ids_;

    void require_point(const MarkedPoint& p) const {
        if (!valid_point(p)) throw Error("InvalidPoint", "no such marked point: " + p.str());
    }
    MarkedPoint first_of(int seg) const {
        const Segment& s = boundary_[seg];
        if (s.infinite() && s.side == Side::Right) return MarkedPoint::accp(s.target);
        return MarkedPoint::pt(seg, 0);
    }
    std::optional<int> find_seg(const AccId& id, Side side) const {
        for (int i = 0; i < segment_count(); ++i)
            if (boundary_[i].infinite() && boundary_[i].target == id && boundary_[i].side == side)
                return i;
        return std::nullopt;
    }
};

inline Surface make_polygon(long long n) { return Surface::polygon(n); }
inline Surface make_infinity_gon(std::vector<Segment> spec) { return Surface(std::move(spec)); }

}  // namespace infgon
