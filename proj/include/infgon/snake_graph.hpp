#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "infgon/triangulation.hpp"

namespace infgon {

// Flat crossing sequence of an arc through a fan triangulation: finite
// crossings one by one, infinite pivot runs as single entries.
struct ChainElem {
    bool run = false;
    Curve arc;               // finite: the crossed arc
    bool limit_arc = false;  // finite: arc is a limit arc of T
    MarkedPoint pivot;       // run
    int seg = -1;            // run: base segment
    long long lo = 0;        // run: first crossed base index
    bool ascending = true;   // run: crossed toward the accumulation point
};

inline std::vector<ChainElem> crossing_chain(const Triangulation& T, const Curve& gamma) {
    std::vector<ChainElem> chain;
    DomainOfArc dom = T.domain_of_arc(gamma);
    for (auto& r : dom.runs) {
        if (r.infinite) {
            ChainElem e;
            e.run = true;
            e.pivot = r.pivot;
            e.seg = r.seg;
            e.lo = r.lo;
            e.ascending = r.ascending;
            chain.push_back(e);
        } else {
            for (size_t i = 0; i < r.arcs.size(); ++i) {
                ChainElem e;
                e.arc = r.arcs[i];
                e.limit_arc = r.limit_flags[i];
                chain.push_back(e);
            }
        }
    }
    return chain;
}

// One side of a tile: its two corner labels plus the lambda-length variable it
// carries (unit for the degenerate sides flanking a limit arc).
struct TileSide {
    std::string c1, c2;  // corner labels, distinct within the tile
    VarId var;
    bool unit = false;
    Curve curve;
    bool has_curve = false;
};

// A materialized tile.  sides: [0] prev-face non-shared, [1] prev-face shared
// with the previous tile, [2] next-face shared, [3] next-face non-shared.
struct TileData {
    Curve diag;
    VarId dvar;
    bool limit_tile = false;           // dashed tile; no face weight
    std::array<TileSide, 4> sides;
    bool prev_degenerate = false;
    bool next_degenerate = false;
};

namespace detail {

inline std::string lbl(const MarkedPoint& p) { return p.str(); }

inline MarkedPoint other_end(const Curve& c, const MarkedPoint& p) {
    return c.a == p ? c.b : c.a;
}

inline std::optional<MarkedPoint> common_end(const Curve& c1, const Curve& c2) {
    for (auto* p : {&c1.a, &c1.b})
        if (*p == c2.a || *p == c2.b) return *p;
    return std::nullopt;
}

}  // namespace detail

// Builds tiles of the finite chain elements.  Faces toward adjacent infinite
// runs come out degenerate (unit weights); the other faces are looked up in a
// realization window large enough to contain them.
class TileFactory {
public:
    TileFactory(const Triangulation& T, const Curve& gamma,
                const std::vector<ChainElem>& chain)
        : T_(T), S_(T.surface()), gamma_(gamma), chain_(chain) {
        long long W = T_.min_window();
        auto see = [&](const MarkedPoint& p) {
            if (!p.is_acc) W = std::max(W, p.index + 3);
        };
        see(gamma.a);
        see(gamma.b);
        for (auto& e : chain_) {
            if (e.run) W = std::max(W, e.lo + 3);
            else { see(e.arc.a); see(e.arc.b); }
        }
        R_ = T_.realize(W);
    }

    const Realized& realized() const { return R_; }

    // Tile of chain element `idx` (must be finite).
    TileData tile(int idx) const {
        const ChainElem& e = chain_[idx];
        TileData t;
        t.diag = e.arc;
        t.dvar = S_.var_of(e.arc);
        fill_face(t, idx, /*prev=*/true);
        fill_face(t, idx, /*prev=*/false);
        return t;
    }

    // Entry data of a run: the curve (pivot, base[lo-1]) whose variable heads
    // the height formulas.
    Curve run_entry_arc(const ChainElem& e) const {
        return S_.curve(e.pivot, MarkedPoint::pt(e.seg, e.lo - 1));
    }
    VarId run_d(const ChainElem& e, long long h) const {
        return S_.var_of(S_.curve(e.pivot, MarkedPoint::pt(e.seg, e.lo - 1 + h)));
    }
    VarId run_c(const ChainElem& e, long long h) const {
        return S_.var_of(S_.curve(MarkedPoint::pt(e.seg, e.lo - 1 + h),
                                  MarkedPoint::pt(e.seg, e.lo + h)));
    }
    VarId run_limit_var(const ChainElem& e) const {
        return S_.var_of(S_.curve(e.pivot, T_.acc_point(e.seg)));
    }
    // Materialized tile h (0-based) of a run, for display and sign functions.
    TileData run_tile(const ChainElem& e, long long h) const {
        TileData t;
        MarkedPoint b0 = MarkedPoint::pt(e.seg, e.lo - 1 + h);
        MarkedPoint b1 = MarkedPoint::pt(e.seg, e.lo + h);
        MarkedPoint b2 = MarkedPoint::pt(e.seg, e.lo + 1 + h);
        t.diag = S_.curve(e.pivot, b1);
        t.dvar = S_.var_of(t.diag);
        t.sides[0] = side(S_.curve(e.pivot, b0));
        t.sides[1] = side(S_.curve(b0, b1));
        t.sides[2] = side(S_.curve(b1, b2));
        t.sides[3] = side(S_.curve(e.pivot, b2));
        return t;
    }
    TileData run_limit_tile(const ChainElem& e, int ph_salt) const {
        TileData t;
        t.limit_tile = true;
        Curve lim = S_.curve(e.pivot, T_.acc_point(e.seg));
        t.diag = lim;
        t.dvar = "1";
        std::string ph = "ph_lim" + std::to_string(ph_salt);
        t.sides[0] = unit_side(detail::lbl(e.pivot), ph);
        t.sides[1] = unit_side(ph, detail::lbl(T_.acc_point(e.seg)));
        t.sides[2] = side(lim);  // the weighted limit edge
        t.sides[3] = unit_side(ph + "'", detail::lbl(e.pivot));
        return t;
    }

private:
    const Triangulation& T_;
    const Surface& S_;
    Curve gamma_;
    const std::vector<ChainElem>& chain_;
    Realized R_;
    mutable int phantom_ = 0;

    TileSide side(const Curve& c) const {
        TileSide s;
        s.c1 = detail::lbl(c.a);
        s.c2 = detail::lbl(c.b);
        s.var = S_.var_of(c);
        s.curve = c;
        s.has_curve = true;
        return s;
    }
    TileSide unit_side(std::string a, std::string b) const {
        TileSide s;
        s.c1 = std::move(a);
        s.c2 = std::move(b);
        s.var = "1";
        s.unit = true;
        return s;
    }

    void fill_face(TileData& t, int idx, bool prev) const {
        const ChainElem& e = chain_[idx];
        int nb_idx = prev ? idx - 1 : idx + 1;
        const ChainElem* nb =
            (nb_idx >= 0 && nb_idx < static_cast<int>(chain_.size())) ? &chain_[nb_idx] : nullptr;
        int base = prev ? 0 : 3;     // non-shared side slot
        int shared = prev ? 1 : 2;   // shared side slot

        if (nb && nb->run) {
            // the neighbouring element is an infinite run
            bool lim_iface = prev ? nb->ascending : !nb->ascending;
            if (lim_iface) {
                // this tile is the regular tile after/before a limit tile; the
                // face on that side is degenerate
                if (prev) t.prev_degenerate = true; else t.next_degenerate = true;
                std::string ph = "ph" + std::to_string(phantom_++);
                MarkedPoint pivot = nb->pivot;
                MarkedPoint acc = T_.acc_point(nb->seg);
                t.sides[shared] = unit_side(detail::lbl(pivot), ph);  // shared with limit tile
                t.sides[base] = unit_side(ph, detail::lbl(acc));
                return;
            }
            // base-side junction with the run: common face
            // (pivot, b_{lo-1}, b_lo) of this arc and the run's first arc
            Curve first = S_.curve(nb->pivot, MarkedPoint::pt(nb->seg, nb->lo));
            fill_real_face(t, base, shared, e.arc, first);
            return;
        }
        if (nb) {
            fill_real_face(t, base, shared, e.arc, nb->arc);
            return;
        }
        // terminal face: contains the corresponding endpoint of gamma
        const MarkedPoint& endp = prev ? gamma_.a : gamma_.b;
        int i = R_.position(S_, e.arc.a);
        int j = R_.position(S_, e.arc.b);
        if (i > j) std::swap(i, j);
        int pe = R_.position(S_, endp);
        bool between = i < pe && pe < j;
        int w = R_.apex(i, j, between);
        if (w < 0) throw Error("Internal", "no terminal face for " + e.arc.str());
        MarkedPoint apex = R_.poly[w];
        t.sides[base] = side(S_.curve(e.arc.a, apex));
        t.sides[shared] = side(S_.curve(apex, e.arc.b));
        return;
    }

    void fill_real_face(TileData& t, int base, int shared, const Curve& cur,
                        const Curve& neighbour) const {
        auto v = detail::common_end(cur, neighbour);
        if (!v) throw Error("Internal", "consecutive crossed arcs share no endpoint");
        MarkedPoint x = detail::other_end(neighbour, *v);  // apex of the common face
        // face sides are {cur, neighbour, third}; this tile contributes the
        // neighbour-weighted side and the third side (shared with the
        // neighbouring tile)
        MarkedPoint oc = detail::other_end(cur, *v);
        Curve third = S_.curve(oc, x);
        t.sides[shared] = side(third);
        t.sides[base] = side(neighbour);
    }
};

// --- materialized view ----------------------------------------------------------

// Piece structure of a snake graph: finite runs of tiles and one-sided
// infinite zig-zag pieces ending in a limit tile.
struct SGPiece {
    bool infinite = false;
    bool ascending = true;  // tiles run toward the limit along gamma
    int first_tile = 0;     // index range in SnakeGraph::tiles (materialized)
    int ntiles = 0;         // includes the limit tile for infinite pieces
};

struct SGTile {
    TileData data;
    bool clockwise = true;
    int attach_next = -1;  // 0 = right, 1 = up, -1 = last
    long long x = 0, y = 0;
    int piece = 0;
    // geometric position of each slot: 0 bottom, 1 right, 2 top, 3 left
    std::array<int, 4> slot_pos{0, 1, 2, 3};
};

// Finite window onto the snake graph of an arc, for drawing, sign functions
// and edge positions.  Infinite pieces materialize `depth` tiles plus their
// limit tile.
class SnakeGraph {
public:
    SnakeGraph(const Triangulation& T, const Curve& gamma, int depth = 6)
        : surf_(T.surface()) {
        if (!T.is_fan_triangulation())
            throw Error("NotFanTriangulation", "snake graphs need a fan triangulation");
        if (surf_.classify(gamma) == CurveKind::Boundary)
            throw Error("ArcInTriangulation", "boundary arcs have no snake graph");
        chain_ = crossing_chain(T, gamma);
        if (chain_.empty())
            throw Error("ArcInTriangulation", gamma.str() + " does not cross the triangulation");
        TileFactory factory(T, gamma, chain_);
        int salt = 0;
        int i = 0, n = static_cast<int>(chain_.size());
        while (i < n) {
            SGPiece piece;
            piece.first_tile = static_cast<int>(tiles_.size());
            if (chain_[i].run) {
                piece.infinite = true;
                piece.ascending = chain_[i].ascending;
                if (chain_[i].ascending) {
                    for (int h = 0; h < depth; ++h) push_tile(factory.run_tile(chain_[i], h));
                    push_tile(factory.run_limit_tile(chain_[i], salt++));
                } else {
                    push_tile(factory.run_limit_tile(chain_[i], salt++));
                    for (int h = depth - 1; h >= 0; --h) push_tile(factory.run_tile(chain_[i], h));
                }
                ++i;
            } else {
                for (; i < n && !chain_[i].run; ++i) push_tile(factory.tile(i));
            }
            piece.ntiles = static_cast<int>(tiles_.size()) - piece.first_tile;
            for (int t = piece.first_tile; t < piece.first_tile + piece.ntiles; ++t)
                tiles_[t].piece = static_cast<int>(pieces_.size());
            pieces_.push_back(piece);
        }
        layout();
    }

    const std::vector<SGTile>& tiles() const { return tiles_; }
    const std::vector<SGPiece>& pieces() const { return pieces_; }
    const std::vector<ChainElem>& chain() const { return chain_; }
    bool finite() const {
        for (auto& p : pieces_)
            if (p.infinite) return false;
        return true;
    }

    // Sign per tile per slot; bottom and right of a tile share the sign, top
    // and left carry the opposite one.  `seed` fixes the first tile's bottom.
    std::vector<std::array<int, 4>> sign_function(int seed) const {
        std::vector<std::array<int, 4>> out;
        int eps = seed >= 0 ? 1 : -1;
        for (size_t t = 0; t < tiles_.size(); ++t) {
            std::array<int, 4> s;
            for (int slot = 0; slot < 4; ++slot) {
                int pos = tiles_[t].slot_pos[slot];
                s[slot] = (pos == 0 || pos == 1) ? eps : -eps;
            }
            out.push_back(s);
            eps = -eps;
        }
        return out;
    }

    // Edge positions I..IV (= 1..4) per slot: walk the square in the direction
    // of the tile's orientation and start counting at the first "-" edge.
    std::vector<std::array<int, 4>> edge_positions(int seed = +1) const {
        auto signs = sign_function(seed);
        std::vector<std::array<int, 4>> out;
        for (size_t t = 0; t < tiles_.size(); ++t) {
            // cyclic walks by geometric position
            static const int cw[4] = {0, 3, 2, 1};   // bottom,left,top,right
            static const int ccw[4] = {0, 1, 2, 3};  // bottom,right,top,left
            const int* walk = tiles_[t].clockwise ? cw : ccw;
            std::array<int, 4> pos_of_slot{};
            std::array<int, 4> slot_at_pos{};
            for (int slot = 0; slot < 4; ++slot) slot_at_pos[tiles_[t].slot_pos[slot]] = slot;
            int start = 0;
            for (int k = 0; k < 4; ++k)
                if (signs[t][slot_at_pos[walk[k]]] < 0) { start = k; break; }
            for (int k = 0; k < 4; ++k) {
                int slot = slot_at_pos[walk[(start + k) % 4]];
                pos_of_slot[slot] = k + 1;
            }
            out.push_back(pos_of_slot);
        }
        return out;
    }

    // Product of the face weights of the first `upto` tiles (limit tiles
    // contribute 1).
    Laurent crossing_monomial(long long upto) const {
        Exponents m;
        long long taken = 0;
        for (auto& t : tiles_) {
            if (taken >= upto) break;
            if (t.data.limit_tile) continue;
            m[t.data.dvar] += 1;
            ++taken;
        }
        return Laurent::monomial(BigInt(1), m);
    }

    std::string to_dot() const {
        std::ostringstream os;
        os << "graph snake {\n  node [shape=box, fontsize=10];\n";
        for (size_t t = 0; t < tiles_.size(); ++t) {
            const SGTile& g = tiles_[t];
            os << "  t" << t << " [label=\"";
            if (g.data.limit_tile)
                os << "* " << surf_.var_of(g.data.diag);
            else
                os << g.data.dvar;
            os << "\", pos=\"" << g.x << "," << g.y << "!\"";
            if (g.data.limit_tile) os << ", style=dashed";
            os << "];\n";
        }
        for (size_t t = 0; t + 1 < tiles_.size(); ++t) {
            os << "  t" << t << " -- t" << t + 1;
            const TileSide& s = tiles_[t].data.sides[2];
            if (!tiles_[t].data.limit_tile && !s.unit) os << " [label=\"" << s.var << "\"]";
            os << ";\n";
        }
        os << "}\n";
        return os.str();
    }

private:
    const Surface& surf_;
    std::vector<ChainElem> chain_;
    std::vector<SGTile> tiles_;
    std::vector<SGPiece> pieces_;

    void push_tile(TileData d) {
        SGTile t;
        t.data = std::move(d);
        tiles_.push_back(std::move(t));
    }

    static std::optional<std::string> common_label(const TileData& a, const TileData& b) {
        for (auto& sa : a.sides)
            for (auto& sb : b.sides)
                if (!sa.unit && !sb.unit && sa.curve == sb.curve) return sa.var;
        return std::nullopt;
    }

    void layout() {
        // attach directions: first tile clockwise, second attached from the
        // right; the chain turns at every tile whose neighbours pivot around
        // the same marked point (fan crossings) and runs straight otherwise
        long long x = 0, y = 0;
        int dir = 0;  // 0 right, 1 up
        for (size_t t = 0; t < tiles_.size(); ++t) {
            tiles_[t].x = x;
            tiles_[t].y = y;
            tiles_[t].clockwise = t % 2 == 0;
            if (t + 1 < tiles_.size()) {
                if (t > 0) {
                    auto p1 = detail::common_end(tiles_[t - 1].data.diag, tiles_[t].data.diag);
                    auto p2 = detail::common_end(tiles_[t].data.diag, tiles_[t + 1].data.diag);
                    bool same_pivot = p1 && p2 && *p1 == *p2;
                    bool degenerate = tiles_[t].data.diag == tiles_[t + 1].data.diag ||
                                      (t > 0 && tiles_[t - 1].data.diag == tiles_[t].data.diag);
                    if (same_pivot || degenerate) dir = 1 - dir;  // keep zig-zagging
                } else {
                    dir = 0;
                }
                tiles_[t].attach_next = dir;
                if (dir == 0) ++x; else ++y;
            }
            // slot positions: shared-with-prev sits left/bottom, shared-with-next
            // right/top, partners fill the face pairs {left,bottom} and {top,right}
            int prev_pos = 3, next_pos = 1;  // defaults: left / right
            if (t > 0 && tiles_[t - 1].attach_next == 1) prev_pos = 0;
            if (tiles_[t].attach_next == 1) next_pos = 2;
            tiles_[t].slot_pos[1] = prev_pos;
            tiles_[t].slot_pos[0] = prev_pos == 3 ? 0 : 3;
            tiles_[t].slot_pos[2] = next_pos;
            tiles_[t].slot_pos[3] = next_pos == 1 ? 2 : 1;
        }
        if (!tiles_.empty()) tiles_.back().attach_next = -1;
    }
};

}  // namespace infgon
