#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "infgon/snake_graph.hpp"

namespace infgon {

// Height-graded truncated Laurent series.  Finite snake graphs produce the
// complete polynomial at grade 0 with exact = true.
struct Expansion {
    std::map<int, Laurent> graded;
    bool exact = false;
    int height_bound = 0;
    long long matching_count = 0;

    Laurent sum() const {
        Laurent s;
        for (auto& [h, p] : graded) s += p;
        return s;
    }
    static Expansion single(const VarId& v) {
        Expansion e;
        e.exact = true;
        e.graded[0] = Laurent::var(v);
        e.matching_count = 1;
        return e;
    }
};

// One perfect matching of a snake graph, finitely described: a height per
// infinite piece (-1 marks the staircase running through a limit tile into the
// following regular tile) plus the chosen edges of the finite blocks.
struct MatchingDesc {
    std::vector<long long> run_heights;
    std::vector<std::vector<int>> block_edges;
    Exponents ratio;  // x(P) / cross(gamma, T), reduced
    int grade = 0;
};

namespace detail {

struct Block {
    struct Edge {
        int v1, v2;
        VarId var;
        bool unit;
        bool sigma_entry = false;  // shared with the first tile of a zig-zag piece
    };
    std::vector<Edge> edges;
    int nverts = 0;
    Exponents diag_den;            // product of tile face weights
    std::vector<int> iface_edges;  // interface edge ids, in wiring order
    std::vector<char> iface_entry; // parallel: entry interface (tri-state key)

    struct Record {
        std::vector<int> chosen;
        Exponents mono;  // selected weights minus diag_den
        // per interface: entry edges take 0 (piece covers the shared
        // vertices), 1 (edge in the matching) or 2 (block covers them);
        // limit edges take 0/1
        std::vector<char> key;
    };
    std::vector<Record> records;

    void enumerate() {
        std::vector<char> sig_vertex(nverts, 0);
        for (auto& e : edges)
            if (e.sigma_entry) { sig_vertex[e.v1] = 1; sig_vertex[e.v2] = 1; }
        std::vector<std::vector<int>> incident(nverts);
        for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
            incident[edges[i].v1].push_back(i);
            incident[edges[i].v2].push_back(i);
        }
        std::vector<char> covered(nverts, 0);
        std::vector<char> chosen(edges.size(), 0);
        std::function<void(int)> rec = [&](int v) {
            while (v < nverts && covered[v]) ++v;
            if (v == nverts) {
                Record r;
                Exponents mono;
                for (size_t i = 0; i < edges.size(); ++i)
                    if (chosen[i]) {
                        r.chosen.push_back(static_cast<int>(i));
                        if (!edges[i].unit) mono[edges[i].var] += 1;
                    }
                for (auto& [var, k] : diag_den) {
                    mono[var] -= k;
                    if (mono[var] == 0) mono.erase(var);
                }
                r.mono = std::move(mono);
                for (size_t f = 0; f < iface_edges.size(); ++f) {
                    const Edge& e = edges[iface_edges[f]];
                    if (!iface_entry[f]) {
                        r.key.push_back(chosen[iface_edges[f]]);
                        continue;
                    }
                    char c1 = 0, c2 = 0;  // shared vertices covered by block edges
                    for (size_t i = 0; i < edges.size(); ++i) {
                        if (!chosen[i]) continue;
                        if (edges[i].v1 == e.v1 || edges[i].v2 == e.v1) c1 = 1;
                        if (edges[i].v1 == e.v2 || edges[i].v2 == e.v2) c2 = 1;
                    }
                    if (chosen[iface_edges[f]]) r.key.push_back(1);
                    else if (!c1 && !c2) r.key.push_back(0);
                    else if (c1 && c2) r.key.push_back(2);
                    else { r.key.clear(); break; }  // mixed coverage never matches a piece
                }
                if (r.key.size() == iface_edges.size() || iface_edges.empty())
                    records.push_back(std::move(r));
                return;
            }
            for (int ie : incident[v]) {
                const Edge& e = edges[ie];
                if (covered[e.v1] || covered[e.v2]) continue;
                covered[e.v1] = covered[e.v2] = 1;
                chosen[ie] = 1;
                rec(v + 1);
                covered[e.v1] = covered[e.v2] = 0;
                chosen[ie] = 0;
            }
            if (sig_vertex[v]) {  // may stay uncovered; the piece covers it
                covered[v] = 1;
                rec(v + 1);
                covered[v] = 0;
            }
        };
        rec(0);
    }
};

// The infinite tail of a crossed fan family, ending in a limit tile.  Its
// matchings restricted to the tail come in three shapes:
//   fam = h >= 0   height-h family of Lemma-style anchoring: the first fully
//                  matched tail tile is tile max(h,1); contributes
//                  d_0 c_h L / (d_h d_{h+1});
//   fam = -1       staircase through the limit tile into the following
//                  regular tile (the shared edge is in the matching);
//                  contributes d_0;
//   fam = -2       upward staircase with no fully matched tail tile: the
//                  fully matched tile lies among the same-pivot tiles before
//                  the tail, whose block then covers the shared entry
//                  vertices; contributes L / d_1.
// dcache[h]/ccache[h] are the diagonal and counter-side weights of tail tile
// h, with dcache[0] the entry-side weight.
struct RunSlot {
    int chain_idx = -1;
    ChainElem elem;
    VarId limit_var;
    std::vector<VarId> dcache, ccache;
    // entry interface: edge on the neighbouring finite tile, or absent
    int entry_block = -1, entry_edge = -1;
    bool entry_is_d = true;  // interface edge carries the entry-side weight
    // limit interface: shared edge with the regular tile beyond the limit tile
    int limit_block = -1, limit_edge = -1;

    bool allows_staircase_through() const { return limit_block >= 0; }
    // anchoring before the tail needs the neighbouring tile to continue the
    // pivot zig-zag, i.e. the shared edge is the counter side, not the entry
    // side (a pivot change starts a fresh piece)
    bool allows_anchor_before() const { return entry_block >= 0 && !entry_is_d; }

    // tri-state of the entry interface edge: 1 = edge in the matching,
    // 0 = the piece covers the shared vertices, 2 = the block covers them
    char entry_state(long long fam) const {
        if (fam == -2) return 2;
        bool in = entry_is_d ? fam != 0 : fam == 0;
        return in ? 1 : 0;
    }
    bool limit_status(long long fam) const { return fam == -1; }

    Exponents ratio(long long fam) const {
        Exponents m;
        auto mul = [&](const VarId& v, int k) {
            if (v == "1") return;
            m[v] += k;
            if (m[v] == 0) m.erase(v);
        };
        if (fam == -1) {  // staircase through the limit tile
            mul(dcache[0], 1);
            return m;
        }
        if (fam == -2) {  // anchored before the tail
            mul(limit_var, 1);
            mul(dcache[1], -1);
            return m;
        }
        mul(dcache[0], 1);
        mul(ccache[fam], 1);
        mul(limit_var, 1);
        mul(dcache[fam], -1);
        mul(dcache[fam + 1], -1);
        return m;
    }
    int grade(long long fam) const { return fam < 0 ? 0 : static_cast<int>(fam); }
};

// Shared assembly of the finite blocks and infinite runs of a snake graph.
struct Assembly {
    std::vector<ChainElem> chain;
    std::vector<Block> blocks;
    std::vector<RunSlot> runs;
    VarId trivial_var;  // when the arc has no crossings
    bool trivial = false;

    static Assembly build(const Triangulation& T, const Curve& gamma, int H) {
        Assembly A;
        const Surface& S = T.surface();
        if (S.classify(gamma) == CurveKind::Boundary) {
            A.trivial = true;
            A.trivial_var = S.var_of(gamma);
            return A;
        }
        A.chain = crossing_chain(T, gamma);
        if (A.chain.empty()) {
            A.trivial = true;
            A.trivial_var = S.var_of(gamma);
            return A;
        }
        TileFactory factory(T, gamma, A.chain);
        int n = static_cast<int>(A.chain.size());
        std::map<int, std::pair<int, int>> tile_pos;  // chain idx -> (block, tile position)
        std::map<int, std::vector<std::array<int, 4>>> layout;

        int i = 0;
        while (i < n) {
            if (A.chain[i].run) { ++i; continue; }
            Block blk;
            std::map<std::string, int> prev_side_verts;
            int first = i;
            int tpos = 0;
            for (; i < n && !A.chain[i].run; ++i, ++tpos) {
                TileData t = factory.tile(i);
                int b = static_cast<int>(A.blocks.size());
                tile_pos[i] = {b, tpos};
                blk.diag_den[t.dvar] += 1;
                std::map<std::string, int> corner;
                if (i > first) corner = prev_side_verts;
                auto vid = [&](const std::string& label) {
                    auto it = corner.find(label);
                    if (it != corner.end()) return it->second;
                    int id = blk.nverts++;
                    corner[label] = id;
                    return id;
                };
                auto add_edge = [&](const TileSide& s) {
                    Block::Edge e;
                    e.v1 = vid(s.c1);
                    e.v2 = vid(s.c2);
                    e.var = s.var;
                    e.unit = s.unit;
                    blk.edges.push_back(e);
                    return static_cast<int>(blk.edges.size()) - 1;
                };
                std::array<int, 4> ids{-1, -1, -1, -1};
                ids[0] = add_edge(t.sides[0]);
                if (i > first) {
                    vid(t.sides[1].c1);
                    vid(t.sides[1].c2);
                    ids[1] = layout[b].back()[2];
                } else {
                    ids[1] = add_edge(t.sides[1]);
                }
                ids[2] = add_edge(t.sides[2]);
                ids[3] = add_edge(t.sides[3]);
                layout[b].push_back(ids);
                prev_side_verts.clear();
                prev_side_verts[t.sides[2].c1] = blk.edges[ids[2]].v1;
                prev_side_verts[t.sides[2].c2] = blk.edges[ids[2]].v2;
            }
            A.blocks.push_back(std::move(blk));
        }

        for (int k = 0; k < n; ++k) {
            if (!A.chain[k].run) continue;
            const ChainElem& e = A.chain[k];
            RunSlot rs;
            rs.chain_idx = k;
            rs.elem = e;
            rs.limit_var = factory.run_limit_var(e);
            rs.dcache.push_back(S.var_of(factory.run_entry_arc(e)));
            rs.ccache.push_back(factory.run_c(e, 0));
            for (long long t = 1; t <= H + 1; ++t) {
                rs.dcache.push_back(factory.run_d(e, t));
                rs.ccache.push_back(factory.run_c(e, t));
            }
            int entry_nb = e.ascending ? k - 1 : k + 1;
            int limit_nb = e.ascending ? k + 1 : k - 1;
            if (entry_nb >= 0 && entry_nb < n && !A.chain[entry_nb].run) {
                auto [b, pos] = tile_pos.at(entry_nb);
                bool run_after = entry_nb < k;  // piece follows the tile in gamma order
                rs.entry_block = b;
                rs.entry_edge = layout[b][pos][run_after ? 2 : 1];
                Block::Edge& ed = A.blocks[b].edges[rs.entry_edge];
                ed.sigma_entry = true;
                rs.entry_is_d = ed.var == rs.dcache[0];
                ed.unit = true;  // the interface weight is owned by the piece ratio
                A.blocks[b].iface_edges.push_back(rs.entry_edge);
                A.blocks[b].iface_entry.push_back(1);
            }
            if (limit_nb >= 0 && limit_nb < n && !A.chain[limit_nb].run) {
                auto [b, pos] = tile_pos.at(limit_nb);
                bool run_before = limit_nb > k;
                rs.limit_block = b;
                rs.limit_edge = layout[b][pos][run_before ? 1 : 2];
                A.blocks[b].iface_edges.push_back(rs.limit_edge);
                A.blocks[b].iface_entry.push_back(0);
            }
            A.runs.push_back(rs);
        }
        for (auto& b : A.blocks) b.enumerate();
        return A;
    }

    // iterate over consistent (run family, block record) combinations
    void visit(int H,
               const std::function<void(const std::vector<long long>&, int, const Exponents&,
                                        const std::vector<const Block::Record*>&)>& fn) const {
        std::vector<long long> fams;
        std::function<void(size_t, int, Exponents)> rec = [&](size_t ri, int grade, Exponents acc) {
            if (ri == runs.size()) {
                std::vector<std::vector<const Block::Record*>> per_block(blocks.size());
                for (size_t bi = 0; bi < blocks.size(); ++bi) {
                    std::vector<char> key;
                    for (size_t f = 0; f < blocks[bi].iface_edges.size(); ++f) {
                        int ie = blocks[bi].iface_edges[f];
                        char want = 0;
                        for (size_t rj = 0; rj < runs.size(); ++rj) {
                            if (runs[rj].entry_block == static_cast<int>(bi) &&
                                runs[rj].entry_edge == ie && blocks[bi].iface_entry[f])
                                want = runs[rj].entry_state(fams[rj]);
                            if (runs[rj].limit_block == static_cast<int>(bi) &&
                                runs[rj].limit_edge == ie && !blocks[bi].iface_entry[f])
                                want = runs[rj].limit_status(fams[rj]) ? 1 : 0;
                        }
                        key.push_back(want);
                    }
                    for (auto& r : blocks[bi].records)
                        if (r.key == key) per_block[bi].push_back(&r);
                    if (per_block[bi].empty()) return;
                }
                // cartesian product over blocks
                std::vector<const Block::Record*> pick(blocks.size(), nullptr);
                std::function<void(size_t)> cart = [&](size_t bi) {
                    if (bi == blocks.size()) {
                        fn(fams, grade, acc, pick);
                        return;
                    }
                    for (auto* r : per_block[bi]) {
                        pick[bi] = r;
                        cart(bi + 1);
                    }
                };
                cart(0);
                return;
            }
            const RunSlot& rs = runs[ri];
            auto advance = [&](long long fam) {
                fams.push_back(fam);
                Exponents acc2 = acc;
                for (auto& [v, k] : rs.ratio(fam)) {
                    acc2[v] += k;
                    if (acc2[v] == 0) acc2.erase(v);
                }
                rec(ri + 1, grade + rs.grade(fam), acc2);
                fams.pop_back();
            };
            if (rs.allows_anchor_before()) advance(-2);
            if (rs.allows_staircase_through()) advance(-1);
            for (long long h = 0; h <= H; ++h) advance(h);
        };
        rec(0, 0, {});
    }
};

}  // namespace detail

// Snake-graph expansion of an arc as a height-graded Laurent series over the
// variables of a fan triangulation.  Arcs of T, boundary arcs and arcs
// compatible with T expand to their own variable.
inline Expansion expand(const Triangulation& T, const Curve& gamma, int H) {
    if (!T.is_fan_triangulation())
        throw Error("NotFanTriangulation", "expansion needs a fan triangulation");
    detail::Assembly A = detail::Assembly::build(T, gamma, H);
    if (A.trivial) return Expansion::single(A.trivial_var);
    Expansion out;
    out.height_bound = H;
    out.exact = A.runs.empty();
    A.visit(H, [&](const std::vector<long long>&, int grade, const Exponents& acc,
                   const std::vector<const detail::Block::Record*>& pick) {
        Exponents mono = acc;
        for (auto* r : pick)
            for (auto& [v, k] : r->mono) {
                mono[v] += k;
                if (mono[v] == 0) mono.erase(v);
            }
        out.graded[grade] += Laurent::monomial(BigInt(1), mono);
        out.matching_count += 1;
    });
    return out;
}

// All perfect matchings with every piece height at most H, in lexicographic
// (height vector, local choice) order.
inline std::vector<MatchingDesc> enumerate_matchings(const Triangulation& T, const Curve& gamma,
                                                     int H) {
    if (!T.is_fan_triangulation())
        throw Error("NotFanTriangulation", "matchings need a fan triangulation");
    detail::Assembly A = detail::Assembly::build(T, gamma, H);
    std::vector<MatchingDesc> out;
    if (A.trivial) return out;
    A.visit(H, [&](const std::vector<long long>& fams, int grade, const Exponents& acc,
                   const std::vector<const detail::Block::Record*>& pick) {
        MatchingDesc m;
        m.run_heights = fams;
        m.grade = grade;
        m.ratio = acc;
        for (auto* r : pick) {
            m.block_edges.push_back(r->chosen);
            for (auto& [v, k] : r->mono) {
                m.ratio[v] += k;
                if (m.ratio[v] == 0) m.ratio.erase(v);
            }
        }
        out.push_back(std::move(m));
    });
    std::sort(out.begin(), out.end(), [](const MatchingDesc& a, const MatchingDesc& b) {
        if (a.run_heights != b.run_heights) return a.run_heights < b.run_heights;
        return a.block_edges < b.block_edges;
    });
    return out;
}

// Height of a matching restricted to one infinite piece (-1 marks the
// staircase through the limit tile into the following regular tile).
inline long long matching_height(const MatchingDesc& m, size_t piece) {
    if (piece >= m.run_heights.size())
        throw Error("NotAMatching", "matching has no infinite piece with that index");
    return m.run_heights[piece];
}

// x(P): the product of the selected edge weights.  Finite graphs give the
// plain monomial; matchings with infinite pieces reduce to the cancelled form
// x(P)/cross(gamma,T) times the truncated crossing monomial.
inline Laurent weight_monomial(const Triangulation& T, const Curve& gamma,
                               const MatchingDesc& m) {
    detail::Assembly A = detail::Assembly::build(T, gamma, 0);
    if (m.run_heights.empty() && A.runs.empty()) {
        Exponents cross;
        for (auto& b : A.blocks)
            for (auto& [v, k] : b.diag_den) cross[v] += k;
        Exponents w = m.ratio;
        for (auto& [v, k] : cross) {
            w[v] += k;
            if (w[v] == 0) w.erase(v);
        }
        return Laurent::monomial(BigInt(1), w);
    }
    return Laurent::monomial(BigInt(1), m.ratio);
}

// Partial sums of the incoming-fan series x_s x_* sum_{i>=s} x_{i,i+1}/(x_i x_{i+1}).
struct FanLabels {
    std::function<VarId(long long)> x;   // fan arc x_i
    std::function<VarId(long long)> xb;  // base boundary arc x_{i,i+1}
    VarId xstar;
};

inline Expansion incoming_fan_closed_form(const FanLabels& L, long long s, int H) {
    if (H < s) throw Error("InvalidTruncation", "height bound below series start");
    Expansion out;
    out.height_bound = static_cast<int>(H - s);
    for (long long i = s; i <= H; ++i) {
        Exponents m;
        auto mul = [&](const VarId& v, int k) {
            m[v] += k;
            if (m[v] == 0) m.erase(v);
        };
        mul(L.x(s), 1);
        mul(L.xstar, 1);
        mul(L.xb(i), 1);
        mul(L.x(i), -1);
        mul(L.x(i + 1), -1);
        out.graded[static_cast<int>(i - s)] += Laurent::monomial(BigInt(1), m);
        out.matching_count += 1;
    }
    return out;
}

namespace detail {

inline std::map<int, Laurent> graded_product(const Expansion& A, const Expansion& B, int cap) {
    std::map<int, Laurent> out;
    for (auto& [ha, pa] : A.graded)
        for (auto& [hb, pb] : B.graded) {
            if (ha + hb > cap) continue;
            out[ha + hb] += pa * pb;
        }
    return out;
}

// Truncated-identity discipline: both sides are computed to height H+2; a
// monomial takes part in the comparison when its first appearance on either
// side has height <= H, and then its total coefficients must agree.  Exact
// expansions live entirely at height 0, so the comparison degenerates to
// equality there.
inline bool graded_sides_equal(const std::map<int, Laurent>& L, const std::map<int, Laurent>& R,
                               int H) {
    struct Acc {
        BigInt coeff;
        int min_h = 1 << 30;
    };
    std::map<Exponents, std::array<Acc, 2>, ExpOrder> table;
    auto feed = [&](const std::map<int, Laurent>& side, int which) {
        for (auto& [h, poly] : side)
            for (auto& [e, c] : poly.terms()) {
                auto& a = table[e][which];
                a.coeff += c;
                a.min_h = std::min(a.min_h, h);
            }
    };
    feed(L, 0);
    feed(R, 1);
    for (auto& [e, acc] : table) {
        int mh = std::min(acc[0].min_h, acc[1].min_h);
        if (mh > H) continue;
        if (!(acc[0].coeff == acc[1].coeff)) return false;
    }
    return true;
}

}  // namespace detail

namespace detail {

// Two sides of a truncated identity grade the same monomial at heights that
// differ by at most the index spread of the participating endpoints on each
// fan the curves traverse (a finite factor shifts which base index a given
// height reaches).  Computing both sides this much deeper makes the <=H
// comparison symmetric.
inline int height_slack(const std::vector<MarkedPoint>& pts) {
    std::map<int, std::pair<long long, long long>> span;  // segment -> (lo, hi)
    for (auto& p : pts) {
        if (p.is_acc) continue;
        auto it = span.find(p.seg);
        if (it == span.end()) span[p.seg] = {p.index, p.index};
        else {
            it->second.first = std::min(it->second.first, p.index);
            it->second.second = std::max(it->second.second, p.index);
        }
    }
    long long total = 4;
    // both factors of a product shift independently, so twice the spread
    for (auto& [s, lohi] : span) total += 2 * (lohi.second - lohi.first + 1);
    return static_cast<int>(total);
}

}  // namespace detail

// Memo for repeated expansions over one triangulation (identity sweeps expand
// the same curves for many quadrilaterals).
struct ExpansionCache {
    const Triangulation* owner = nullptr;
    std::map<std::string, Expansion> map;
    const Expansion& get(const Triangulation& T, const Curve& c, int H) {
        if (owner != &T) {
            map.clear();
            owner = &T;
        }
        std::string key = c.str() + "#" + std::to_string(H);
        auto it = map.find(key);
        if (it == map.end()) it = map.emplace(key, expand(T, c, H)).first;
        return it->second;
    }
};

// lambda_{pr} lambda_{qs} = lambda_{pq} lambda_{rs} + lambda_{qr} lambda_{ps}
// for a cyclically ordered quadruple of marked points.
inline bool ptolemy_check(const Triangulation& T, std::array<MarkedPoint, 4> quad, int H,
                          ExpansionCache* cache = nullptr) {
    const Surface& S = T.surface();
    std::sort(quad.begin(), quad.end(),
              [&](const MarkedPoint& x, const MarkedPoint& y) { return S.key(x) < S.key(y); });
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (quad[i] == quad[j]) throw Error("DegenerateQuad", "repeated quad point");
    auto [p, q, r, s] = quad;
    int cap = H + detail::height_slack({quad.begin(), quad.end()});
    auto E = [&](const MarkedPoint& u, const MarkedPoint& v) {
        Curve c = S.curve(u, v);
        return cache ? cache->get(T, c, cap) : expand(T, c, cap);
    };
    auto lhs = detail::graded_product(E(p, r), E(q, s), cap);
    auto rhs = detail::graded_product(E(p, q), E(r, s), cap);
    for (auto& [h, poly] : detail::graded_product(E(q, r), E(p, s), cap)) rhs[h] += poly;
    return detail::graded_sides_equal(lhs, rhs, H);
}

// Skein identity x1 x2 = x3 x4 + x5 x6 for a crossing pair and its smoothings.
inline bool skein_check(const Triangulation& T, const Curve& g1, const Curve& g2, int H) {
    const Surface& S = T.surface();
    if (!S.interleave(g1, g2)) throw Error("NotCrossing", "arcs do not cross");
    auto sm = S.smooth_crossing(g1, g2);
    int cap = H + detail::height_slack({g1.a, g1.b, g2.a, g2.b});
    auto E = [&](const Curve& c) { return expand(T, c, cap); };
    auto lhs = detail::graded_product(E(g1), E(g2), cap);
    auto rhs = detail::graded_product(E(sm[0][0].curve), E(sm[0][1].curve), cap);
    for (auto& [h, poly] : detail::graded_product(E(sm[1][0].curve), E(sm[1][1].curve), cap))
        rhs[h] += poly;
    return detail::graded_sides_equal(lhs, rhs, H);
}

}  // namespace infgon
