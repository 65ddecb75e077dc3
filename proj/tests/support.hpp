// Shared test fixtures: independent brute-force oracles and random samplers.
// The oracles here deliberately avoid the library's decision paths: sparsity
// is checked by exhaustive subset counting and isomorphism by full
// permutation search, so they can stand against the pebble game and the
// pruned matcher.
#pragma once

#include "prk/prk.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

namespace prktest {

using namespace prk;

// Exhaustive (2,ell)-sparsity: every nonempty subset obeys
// i(S) <= max(2|S| - ell, 0); the max(.,0) clause carries the usual
// convention that edgeless subgraphs impose nothing.
inline bool brute_force_sparse(const OrbitGraph& g, int ell) {
    const int n = g.n_vertices();
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        int size = static_cast<int>(std::popcount(mask));
        int count = g.induced_edge_count(mask);
        int limit = std::max(2 * size - ell, 0);
        if (count > limit) return false;
    }
    return true;
}

inline bool brute_force_tight(const OrbitGraph& g, int ell) {
    return g.n_edges() == 2 * g.n_vertices() - ell && brute_force_sparse(g, ell);
}

// Full-permutation switched isomorphism, written independently of the
// library's pruned matcher: for every bijection, the per-class translation
// constraints phi(u) - phi(v) = min(B) - min(A) are fed into a weighted
// union-find, which detects inconsistent closures regardless of the order
// the constraints arrive in.
inline bool brute_force_switched_iso(const OrbitGraph& a, const OrbitGraph& b) {
    const int n = a.n_vertices();
    if (n != b.n_vertices() || a.n_edges() != b.n_edges()) return false;
    std::vector<int> sigma(static_cast<size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 0);
    auto gains_between = [](const OrbitGraph& g, int x, int y) {
        std::vector<Gain> out;
        for (const Edge& e : g.edges()) {
            if (x == y) {
                if (e.u == x && e.v == x) {
                    Gain neg = -e.gain;
                    out.push_back(e.gain < neg ? neg : e.gain);
                }
            } else if (e.u == x && e.v == y) {
                out.push_back(e.gain);
            } else if (e.u == y && e.v == x) {
                out.push_back(-e.gain);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    struct WeightedUf {
        std::vector<int> parent;
        std::vector<Gain> to_parent;  // phi(v) - phi(parent(v))
        explicit WeightedUf(int size) : parent(static_cast<size_t>(size)),
                                        to_parent(static_cast<size_t>(size)) {
            std::iota(parent.begin(), parent.end(), 0);
        }
        std::pair<int, Gain> find(int v) {
            Gain offset;
            while (parent[static_cast<size_t>(v)] != v) {
                offset += to_parent[static_cast<size_t>(v)];
                v = parent[static_cast<size_t>(v)];
            }
            return {v, offset};
        }
        // enforce phi(u) - phi(v) = d; false on contradiction
        bool relate(int u, int v, const Gain& d) {
            auto [ru, ou] = find(u);
            auto [rv, ov] = find(v);
            if (ru == rv) return ou - ov == d;
            // phi(ru) = phi(u) - ou = phi(v) + d - ou = phi(rv) + ov + d - ou
            parent[static_cast<size_t>(ru)] = rv;
            to_parent[static_cast<size_t>(ru)] = ov + d - ou;
            return true;
        }
    };

    do {
        bool ok = true;
        WeightedUf uf(n);
        for (int u = 0; u < n && ok; ++u) {
            for (int v = u; v < n && ok; ++v) {
                auto ga = gains_between(a, u, v);
                auto gb = gains_between(b, sigma[static_cast<size_t>(u)],
                                        sigma[static_cast<size_t>(v)]);
                if (ga.size() != gb.size()) { ok = false; break; }
                if (ga.empty()) continue;
                if (u == v) {
                    if (ga != gb) ok = false;
                    continue;
                }
                Gain d = gb[0] - ga[0];
                for (size_t i = 0; i < ga.size(); ++i) {
                    if (ga[i] + d != gb[i]) { ok = false; break; }
                }
                if (ok) ok = uf.relate(u, v, d);
            }
        }
        if (ok) return true;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return false;
}

// Random multigraph with loops and parallel edges, gains in [-3, 3].
inline OrbitGraph random_multigraph(Rng& rng, int max_n = 6, int max_m = 11) {
    int n = 1 + static_cast<int>(rng.range(0, max_n - 1));
    int m = static_cast<int>(rng.range(0, max_m));
    std::vector<Edge> edges;
    for (int i = 0; i < m; ++i) {
        int u = static_cast<int>(rng.range(0, n - 1));
        int v = rng.chance(0.12) ? u : static_cast<int>(rng.range(0, n - 1));
        edges.push_back({u, v, Gain(rng.range(-3, 3), rng.range(-3, 3))});
    }
    return OrbitGraph(n, std::move(edges));
}

// Random (2,2)-tight multigraph grown by pebble-game insertion, with a gain
// mix that leaves constructive and non-constructive assignments both likely.
inline std::optional<OrbitGraph> random_22_tight(Rng& rng, int n) {
    const int target = 2 * n - 2;
    for (int restart = 0; restart < 40; ++restart) {
        detail::PebbleGame game(n, 2, 2);
        std::vector<Edge> edges;
        int stall = 0;
        while (static_cast<int>(edges.size()) < target && stall < 300) {
            int u = static_cast<int>(rng.range(0, n - 1));
            int v = static_cast<int>(rng.range(0, n - 1));
            if (u == v) { ++stall; continue; }
            if (!game.insert(u, v)) { ++stall; continue; }
            Gain gain = rng.chance(0.45) ? Gain(0, 0) : Gain(rng.range(-2, 2), rng.range(-2, 2));
            edges.push_back({u, v, gain});
        }
        if (static_cast<int>(edges.size()) == target) return OrbitGraph(n, std::move(edges));
    }
    return std::nullopt;
}

// Random 1-gain (cylinder) graph with |E| = 2|V| - 1.
inline OrbitGraph random_cylinder_graph(Rng& rng, int n) {
    std::vector<Edge> edges;
    for (int i = 0; i < 2 * n - 1; ++i) {
        int u = static_cast<int>(rng.range(0, n - 1));
        int v = rng.chance(0.15) ? u : static_cast<int>(rng.range(0, n - 1));
        edges.push_back({u, v, Gain(rng.range(-2, 2), 0)});
    }
    return OrbitGraph(n, std::move(edges), 1);
}

// Random perturbation preserving |E| = 2|V| - 1: re-gain or rewire a few
// edges. Gains are biased toward zero and y-only values so that perturbed
// graphs frequently lose x-constructivity, not just sparsity.
inline OrbitGraph perturb(const OrbitGraph& g, Rng& rng) {
    std::vector<Edge> edges = g.edges();
    int mutations = 2 + static_cast<int>(rng.range(0, 2));
    for (int k = 0; k < mutations; ++k) {
        int which = static_cast<int>(rng.range(0, static_cast<long long>(edges.size()) - 1));
        if (rng.chance(0.5)) {
            Gain gain;
            if (rng.chance(0.4)) gain = Gain(0, 0);
            else if (rng.chance(0.4)) gain = Gain(0, rng.range(-2, 2));
            else gain = Gain(rng.range(-2, 2), rng.range(-2, 2));
            edges[static_cast<size_t>(which)].gain = gain;
        } else {
            edges[static_cast<size_t>(which)].u =
                static_cast<int>(rng.range(0, g.n_vertices() - 1));
            edges[static_cast<size_t>(which)].v =
                static_cast<int>(rng.range(0, g.n_vertices() - 1));
        }
    }
    return OrbitGraph(g.n_vertices(), std::move(edges), g.arity());
}

}  // namespace prktest
