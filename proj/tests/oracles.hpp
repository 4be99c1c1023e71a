#pragma once

// Independent oracles for the test and acceptance suites.  Everything here is
// deliberately brute force and stays clear of the snake-graph expansion path
// it is used to check.

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "infgon/expansion.hpp"
#include "infgon/laurent.hpp"
#include "infgon/surface.hpp"

namespace oracles {

using namespace infgon;

// Cluster variable of an arc on a polygon by repeated Ptolemy exchange from
// the initial triangulation, never touching snake graphs.
inline Laurent ptolemy_recursion(const Surface& S, const std::vector<Curve>& T, const Curve& g,
                                 std::map<std::string, Laurent>& memo) {
    Curve c = S.curve(g.a, g.b);
    std::string key = c.str();
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    Laurent result;
    if (S.classify(c) == CurveKind::Boundary ||
        std::find(T.begin(), T.end(), c) != T.end()) {
        result = Laurent::var(S.var_of(c));
    } else {
        const Curve* tau = nullptr;
        for (auto& t : T)
            if (S.cross(c, t)) { tau = &t; break; }
        if (!tau) throw Error("OracleError", "arc compatible with T but not in it: " + c.str());
        // quad with interleaved endpoints w0 < w1 < w2 < w3
        std::vector<MarkedPoint> w = {c.a, c.b, tau->a, tau->b};
        std::sort(w.begin(), w.end(),
                  [&](const MarkedPoint& x, const MarkedPoint& y) { return S.key(x) < S.key(y); });
        Laurent lhs = ptolemy_recursion(S, T, S.curve(w[0], w[1]), memo) *
                          ptolemy_recursion(S, T, S.curve(w[2], w[3]), memo) +
                      ptolemy_recursion(S, T, S.curve(w[1], w[2]), memo) *
                          ptolemy_recursion(S, T, S.curve(w[0], w[3]), memo);
        result = lhs.div_by_var(S.var_of(*tau));
    }
    memo[key] = result;
    return result;
}

// All perfect matchings of an explicit graph.
inline long long brute_count_matchings(int nverts, const std::vector<std::pair<int, int>>& edges) {
    std::vector<char> covered(nverts, 0);
    long long count = 0;
    std::function<void(int)> rec = [&](int v) {
        while (v < nverts && covered[v]) ++v;
        if (v == nverts) {
            ++count;
            return;
        }
        for (auto& [a, b] : edges) {
            if (a != v && b != v) continue;
            if (covered[a] || covered[b]) continue;
            covered[a] = covered[b] = 1;
            rec(v + 1);
            covered[a] = covered[b] = 0;
        }
    };
    rec(0);
    return count;
}

// Vertex/edge graph of an abstract snake chain with the given attachment
// directions ('R' or 'U', length = tiles - 1).
inline std::pair<int, std::vector<std::pair<int, int>>> snake_chain_graph(
    const std::string& dirs) {
    std::map<std::pair<int, int>, int> vid;
    auto v = [&](int x, int y) {
        auto it = vid.find({x, y});
        if (it != vid.end()) return it->second;
        int id = static_cast<int>(vid.size());
        vid[{x, y}] = id;
        return id;
    };
    std::set<std::pair<int, int>> edges;
    int x = 0, y = 0;
    int n = static_cast<int>(dirs.size()) + 1;
    for (int t = 0; t < n; ++t) {
        int c[4] = {v(x, y), v(x + 1, y), v(x, y + 1), v(x + 1, y + 1)};
        auto add = [&](int a, int b) { edges.insert({std::min(a, b), std::max(a, b)}); };
        add(c[0], c[1]);
        add(c[0], c[2]);
        add(c[1], c[3]);
        add(c[2], c[3]);
        if (t < n - 1) (dirs[t] == 'R' ? x : y) += 1;
    }
    return {static_cast<int>(vid.size()), {edges.begin(), edges.end()}};
}

// All triangulations of the n-gon as chord sets over vertex indices, by
// choosing the apex of the triangle on every splitting edge.
inline std::vector<std::vector<std::pair<int, int>>> polygon_triangulations(int n) {
    std::function<std::vector<std::vector<std::pair<int, int>>>(int, int)> gen =
        [&](int a, int b) -> std::vector<std::vector<std::pair<int, int>>> {
        std::vector<std::vector<std::pair<int, int>>> res;
        if (b - a < 2) {
            res.push_back({});
            return res;
        }
        for (int m = a + 1; m < b; ++m) {
            auto L = gen(a, m);
            auto R = gen(m, b);
            for (auto& l : L)
                for (auto& r : R) {
                    std::vector<std::pair<int, int>> t;
                    if (m - a >= 2) t.push_back({a, m});
                    if (b - m >= 2) t.push_back({m, b});
                    t.insert(t.end(), l.begin(), l.end());
                    t.insert(t.end(), r.begin(), r.end());
                    res.push_back(t);
                }
        }
        return res;
    };
    auto out = gen(0, n - 1);
    for (auto& t : out) std::sort(t.begin(), t.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Flip distance between two polygon triangulations by breadth-first search
// over chord sets.
inline int flip_distance(int n, std::vector<std::pair<int, int>> from,
                         std::vector<std::pair<int, int>> to) {
    auto canon = [](std::vector<std::pair<int, int>> t) {
        std::sort(t.begin(), t.end());
        return t;
    };
    auto cross = [](std::pair<int, int> c, std::pair<int, int> d) {
        auto [a, b] = c;
        auto [x, y] = d;
        if (a == x || a == y || b == x || b == y) return false;
        bool xin = a < x && x < b, yin = a < y && y < b;
        return xin != yin;
    };
    from = canon(from);
    to = canon(to);
    std::map<std::vector<std::pair<int, int>>, int> dist;
    std::queue<std::vector<std::pair<int, int>>> q;
    dist[from] = 0;
    q.push(from);
    while (!q.empty()) {
        auto cur = q.front();
        q.pop();
        if (cur == to) return dist[cur];
        for (size_t i = 0; i < cur.size(); ++i) {
            // flip chord i: find the two apexes
            auto [a, b] = cur[i];
            auto present = [&](int x, int y) {
                if (x > y) std::swap(x, y);
                if (y - x == 1 || (x == 0 && y == n - 1)) return true;
                return std::find(cur.begin(), cur.end(), std::make_pair(x, y)) != cur.end();
            };
            std::vector<int> apex;
            for (int w = 0; w < n; ++w)
                if (w != a && w != b && present(a, w) && present(w, b)) apex.push_back(w);
            if (apex.size() != 2) continue;
            std::pair<int, int> repl{std::min(apex[0], apex[1]), std::max(apex[0], apex[1])};
            auto next = cur;
            next[i] = repl;
            next = canon(next);
            bool ok = true;
            for (size_t x = 0; x < next.size() && ok; ++x)
                for (size_t y = x + 1; y < next.size() && ok; ++y)
                    if (cross(next[x], next[y])) ok = false;
            if (!ok) continue;
            if (!dist.count(next)) {
                dist[next] = dist[cur] + 1;
                q.push(next);
            }
        }
    }
    return -1;
}

// Interleaving count of a chord against a chord set, computed on plain integer
// positions (independent of the PosKey machinery).
inline int interleave_count(int n, std::pair<int, int> g,
                            const std::vector<std::pair<int, int>>& arcs) {
    int count = 0;
    for (auto& [x, y] : arcs) {
        auto [a, b] = g;
        if (a == x || a == y || b == x || b == y) continue;
        bool xin = a < x && x < b, yin = a < y && y < b;
        if (xin != yin) ++count;
    }
    (void)n;
    return count;
}

}  // namespace oracles
