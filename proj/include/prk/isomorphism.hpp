// Gain-graph isomorphism for labelled multigraphs.
//
// Two notions are supported. Plain isomorphism relabels vertices and may
// reorient edges (an edge {u,v; m} equals {v,u; -m}); gains must then match
// class by class. Switched isomorphism additionally allows a global T-gain
// re-gauging, i.e. a potential phi on the vertices with every gain shifted by
// phi(tail) - phi(head). Certificates are compared with switching, since the
// reduction normalizes gains while preserving all cycle gains.
#pragma once

#include "prk/orbit_graph.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace prk {

namespace detail {

// Gains of the edges between x and y, oriented x -> y, sorted.
inline std::vector<Gain> oriented_class_gains(const OrbitGraph& g, int x, int y) {
    std::vector<Gain> gains;
    for (const Edge& e : g.edges()) {
        if (e.u == x && e.v == y && x != y) gains.push_back(e.gain);
        else if (e.u == y && e.v == x && x != y) gains.push_back(-e.gain);
    }
    std::sort(gains.begin(), gains.end());
    return gains;
}

// Loop gains at v, each normalized against sign flips, sorted.
inline std::vector<Gain> loop_class_gains(const OrbitGraph& g, int v) {
    std::vector<Gain> gains;
    for (const Edge& e : g.edges()) {
        if (e.u == v && e.v == v) {
            Gain neg = -e.gain;
            gains.push_back(e.gain < neg ? neg : e.gain);
        }
    }
    std::sort(gains.begin(), gains.end());
    return gains;
}

// Verifies one candidate vertex bijection. For switched comparison each
// nonempty class pins phi(u) - phi(v) to one value (sorted multisets match
// under a unique translation), and the pinned differences must be globally
// consistent; plain comparison demands equality class by class.
inline bool check_mapping(const OrbitGraph& a, const OrbitGraph& b, const std::vector<int>& map,
                          bool allow_switching) {
    const int n = a.n_vertices();
    for (int v = 0; v < n; ++v) {
        if (loop_class_gains(a, v) != loop_class_gains(b, map[static_cast<size_t>(v)]))
            return false;
    }
    std::vector<std::pair<std::pair<int, int>, Gain>> constraints;  // phi(u) - phi(v) = delta
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            auto ga = oriented_class_gains(a, u, v);
            auto gb = oriented_class_gains(b, map[static_cast<size_t>(u)],
                                           map[static_cast<size_t>(v)]);
            if (ga.size() != gb.size()) return false;
            if (ga.empty()) continue;
            Gain delta = gb[0] - ga[0];
            for (size_t i = 0; i < ga.size(); ++i) {
                if (ga[i] + delta != gb[i]) return false;
            }
            if (!allow_switching) {
                if (!delta.is_zero()) return false;
            } else {
                constraints.push_back({{u, v}, delta});
            }
        }
    }
    if (!allow_switching || constraints.empty()) return true;

    // Propagate phi over the constraint graph and check closures.
    std::vector<std::vector<std::pair<int, Gain>>> adj(static_cast<size_t>(n));
    for (const auto& [pair, delta] : constraints) {
        adj[static_cast<size_t>(pair.first)].push_back({pair.second, delta});
        adj[static_cast<size_t>(pair.second)].push_back({pair.first, -delta});
    }
    std::vector<std::optional<Gain>> phi(static_cast<size_t>(n));
    for (int s = 0; s < n; ++s) {
        if (phi[static_cast<size_t>(s)]) continue;
        phi[static_cast<size_t>(s)] = Gain();
        std::vector<int> stack{s};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (const auto& [w, delta] : adj[static_cast<size_t>(v)]) {
                // phi(v) - phi(w) = delta
                Gain expect = *phi[static_cast<size_t>(v)] - delta;
                if (phi[static_cast<size_t>(w)]) {
                    if (*phi[static_cast<size_t>(w)] != expect) return false;
                } else {
                    phi[static_cast<size_t>(w)] = expect;
                    stack.push_back(w);
                }
            }
        }
    }
    return true;
}

}  // namespace detail

// Backtracking search over vertex bijections with degree and class-size
// pruning. Intended for the small graphs that certificates describe.
inline bool gain_isomorphic(const OrbitGraph& a, const OrbitGraph& b, bool allow_switching) {
    const int n = a.n_vertices();
    if (n != b.n_vertices() || a.n_edges() != b.n_edges() || a.arity() != b.arity())
        return false;
    if (n == 0) return true;

    auto deg_a = a.degrees();
    auto deg_b = b.degrees();
    {
        auto sa = deg_a, sb = deg_b;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return false;
    }
    // Multiplicity tables for pruning partial maps.
    std::vector<std::vector<int>> mult_a(static_cast<size_t>(n),
                                         std::vector<int>(static_cast<size_t>(n), 0));
    std::vector<std::vector<int>> mult_b = mult_a;
    for (const Edge& e : a.edges()) {
        mult_a[static_cast<size_t>(e.u)][static_cast<size_t>(e.v)]++;
        if (!e.is_loop()) mult_a[static_cast<size_t>(e.v)][static_cast<size_t>(e.u)]++;
    }
    for (const Edge& e : b.edges()) {
        mult_b[static_cast<size_t>(e.u)][static_cast<size_t>(e.v)]++;
        if (!e.is_loop()) mult_b[static_cast<size_t>(e.v)][static_cast<size_t>(e.u)]++;
    }

    std::vector<int> map(static_cast<size_t>(n), -1);
    std::vector<bool> used(static_cast<size_t>(n), false);

    auto backtrack = [&](auto&& self, int v) -> bool {
        if (v == n) return detail::check_mapping(a, b, map, allow_switching);
        for (int w = 0; w < n; ++w) {
            if (used[static_cast<size_t>(w)]) continue;
            if (deg_a[static_cast<size_t>(v)] != deg_b[static_cast<size_t>(w)]) continue;
            if (mult_a[static_cast<size_t>(v)][static_cast<size_t>(v)] !=
                mult_b[static_cast<size_t>(w)][static_cast<size_t>(w)]) continue;
            bool compatible = true;
            for (int u = 0; u < v; ++u) {
                if (mult_a[static_cast<size_t>(v)][static_cast<size_t>(u)] !=
                    mult_b[static_cast<size_t>(w)][static_cast<size_t>(map[static_cast<size_t>(u)])]) {
                    compatible = false;
                    break;
                }
            }
            if (!compatible) continue;
            map[static_cast<size_t>(v)] = w;
            used[static_cast<size_t>(w)] = true;
            if (self(self, v + 1)) return true;
            map[static_cast<size_t>(v)] = -1;
            used[static_cast<size_t>(w)] = false;
        }
        return false;
    };
    return backtrack(backtrack, 0);
}

}  // namespace prk
