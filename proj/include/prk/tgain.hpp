// Net gains along walks, the T-gain procedure, and cycle-space gain groups.
//
// The T-gain procedure re-gauges edge gains via a spanning tree so that tree
// edges carry zero while every cycle keeps its net gain. The T-gains of the
// non-tree edges generate the group of cycle gains of a connected subgraph.
#pragma once

#include "prk/orbit_graph.hpp"

#include <bit>
#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

namespace prk {

struct WalkStep {
    int edge_id;
    bool forward;  // forward = tail to head, contributing +gain
};

// Signed gain sum along an edge-connected walk. Empty walks are allowed and
// yield zero.
inline Gain net_gain(const OrbitGraph& g, const std::vector<WalkStep>& walk) {
    Gain total;
    int at = -1;
    for (const WalkStep& step : walk) {
        if (step.edge_id < 0 || step.edge_id >= g.n_edges())
            throw std::invalid_argument("net_gain: edge id out of range");
        const Edge& e = g.edge(step.edge_id);
        int from = step.forward ? e.u : e.v;
        int to = step.forward ? e.v : e.u;
        if (at >= 0 && at != from)
            throw std::invalid_argument("net_gain: walk is not edge-connected");
        total += step.forward ? e.gain : -e.gain;
        at = to;
    }
    return total;
}

struct TGainTable {
    std::vector<int> tree_edges;      // sorted edge ids
    std::vector<int> roots;           // one root per connected component
    std::vector<Gain> potentials;     // m(v, T) per vertex
    std::vector<Gain> t_gains;        // m_T(e) per edge
};

namespace detail {

// BFS over tree edges only; fills potentials from each root. Returns false if
// some vertex is unreachable (tree does not span) or a tree edge closes a cycle.
inline bool propagate_potentials(const OrbitGraph& g, const std::vector<int>& tree,
                                 const std::vector<int>& roots,
                                 std::vector<Gain>& potentials) {
    const int n = g.n_vertices();
    std::vector<std::vector<int>> tree_inc(static_cast<size_t>(n));
    for (int id : tree) {
        const Edge& e = g.edge(id);
        if (e.is_loop()) return false;
        tree_inc[static_cast<size_t>(e.u)].push_back(id);
        tree_inc[static_cast<size_t>(e.v)].push_back(id);
    }
    std::vector<bool> seen(static_cast<size_t>(n), false);
    std::vector<bool> used(static_cast<size_t>(g.n_edges()), false);
    potentials.assign(static_cast<size_t>(n), Gain());
    std::queue<int> queue;
    for (int r : roots) {
        if (seen[static_cast<size_t>(r)]) return false;
        seen[static_cast<size_t>(r)] = true;
        queue.push(r);
    }
    int reached = static_cast<int>(roots.size());
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop();
        for (int id : tree_inc[static_cast<size_t>(v)]) {
            if (used[static_cast<size_t>(id)]) continue;
            used[static_cast<size_t>(id)] = true;
            const Edge& e = g.edge(id);
            int w = e.u == v ? e.v : e.u;
            if (seen[static_cast<size_t>(w)]) return false;  // tree edge closes a cycle
            seen[static_cast<size_t>(w)] = true;
            potentials[static_cast<size_t>(w)] =
                potentials[static_cast<size_t>(v)] + (e.u == v ? e.gain : -e.gain);
            queue.push(w);
            ++reached;
        }
    }
    return reached == n;
}

}  // namespace detail

// T-gain procedure for an explicit spanning tree of a connected graph.
// Postconditions: the root potential is zero, every tree edge has zero T-gain,
// and m_T(e) = m(tail,T) + m(e) - m(head,T) for every edge.
inline TGainTable t_gain_procedure(const OrbitGraph& g, std::vector<int> tree, int root) {
    if (root < 0 || root >= g.n_vertices())
        throw std::invalid_argument("t_gain_procedure: root out of range");
    if (!g.is_connected())
        throw std::invalid_argument("t_gain_procedure: graph is not connected");
    std::sort(tree.begin(), tree.end());
    if (std::adjacent_find(tree.begin(), tree.end()) != tree.end())
        throw std::invalid_argument("t_gain_procedure: duplicate tree edge");
    if (static_cast<int>(tree.size()) != g.n_vertices() - 1)
        throw std::invalid_argument("t_gain_procedure: tree has wrong edge count");

    TGainTable table;
    table.tree_edges = tree;
    table.roots = {root};
    if (!detail::propagate_potentials(g, tree, table.roots, table.potentials))
        throw std::invalid_argument("t_gain_procedure: not a spanning tree");

    table.t_gains.reserve(static_cast<size_t>(g.n_edges()));
    for (const Edge& e : g.edges()) {
        table.t_gains.push_back(table.potentials[static_cast<size_t>(e.u)] + e.gain -
                                table.potentials[static_cast<size_t>(e.v)]);
    }
    return table;
}

// Variant that picks a BFS tree per connected component, rooted at the
// smallest vertex id and tie-broken by edge id. Accepts disconnected graphs.
inline TGainTable t_gain_auto(const OrbitGraph& g) {
    const int n = g.n_vertices();
    auto inc = g.incidence();
    TGainTable table;
    std::vector<bool> seen(static_cast<size_t>(n), false);
    for (int s = 0; s < n; ++s) {
        if (seen[static_cast<size_t>(s)]) continue;
        table.roots.push_back(s);
        seen[static_cast<size_t>(s)] = true;
        std::queue<int> queue;
        queue.push(s);
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop();
            for (int id : inc[static_cast<size_t>(v)]) {
                const Edge& e = g.edge(id);
                if (e.is_loop()) continue;
                int w = e.u == v ? e.v : e.u;
                if (seen[static_cast<size_t>(w)]) continue;
                seen[static_cast<size_t>(w)] = true;
                table.tree_edges.push_back(id);
                queue.push(w);
            }
        }
    }
    std::sort(table.tree_edges.begin(), table.tree_edges.end());
    if (!detail::propagate_potentials(g, table.tree_edges, table.roots, table.potentials))
        throw std::logic_error("t_gain_auto: BFS tree failed to span");
    table.t_gains.reserve(static_cast<size_t>(g.n_edges()));
    for (const Edge& e : g.edges()) {
        table.t_gains.push_back(table.potentials[static_cast<size_t>(e.u)] + e.gain -
                                table.potentials[static_cast<size_t>(e.v)]);
    }
    return table;
}

inline OrbitGraph apply_t_gains(const OrbitGraph& g, const TGainTable& table) {
    std::vector<Edge> edges = g.edges();
    for (size_t i = 0; i < edges.size(); ++i) edges[i].gain = table.t_gains[i];
    return OrbitGraph(g.n_vertices(), std::move(edges), g.arity());
}

// Gains of the cycle space of one connected subgraph, represented by the
// T-gains of its non-tree edges.
struct GainGroup {
    std::vector<Gain> generators;

    bool nontrivial() const {
        return std::any_of(generators.begin(), generators.end(),
                           [](const Gain& g) { return !g.is_zero(); });
    }
    bool x_nontrivial() const {
        return std::any_of(generators.begin(), generators.end(),
                           [](const Gain& g) { return g.x != 0; });
    }
    bool y_nontrivial() const {
        return std::any_of(generators.begin(), generators.end(),
                           [](const Gain& g) { return g.y != 0; });
    }
    // Some group element has both coordinates nonzero. Generators with x != 0
    // and with y != 0 can always be combined into one such element.
    bool has_fully_nonzero_element() const { return x_nontrivial() && y_nontrivial(); }
};

namespace detail {

// Cycle gains of the subgraph induced on `vertices`, computed per connected
// component and pooled; a cycle in any component is a cycle of the subgraph.
inline GainGroup cycle_gains_of_subset(const OrbitGraph& g, std::uint32_t mask) {
    GainGroup group;
    const int n = g.n_vertices();
    std::vector<std::vector<int>> inc(static_cast<size_t>(n));
    for (int id = 0; id < g.n_edges(); ++id) {
        const Edge& e = g.edge(id);
        if (!(mask >> e.u & 1u) || !(mask >> e.v & 1u)) continue;
        inc[static_cast<size_t>(e.u)].push_back(id);
        if (!e.is_loop()) inc[static_cast<size_t>(e.v)].push_back(id);
    }
    std::vector<int> state(static_cast<size_t>(n), 0);  // 0 unseen, 1 seen
    std::vector<Gain> pot(static_cast<size_t>(n));
    std::vector<bool> tree_edge(static_cast<size_t>(g.n_edges()), false);
    std::vector<int> queue;
    for (int s = 0; s < n; ++s) {
        if (!(mask >> s & 1u) || state[static_cast<size_t>(s)]) continue;
        state[static_cast<size_t>(s)] = 1;
        pot[static_cast<size_t>(s)] = Gain();
        queue.assign(1, s);
        size_t qi = 0;
        while (qi < queue.size()) {
            int v = queue[qi++];
            for (int id : inc[static_cast<size_t>(v)]) {
                const Edge& e = g.edge(id);
                if (e.is_loop()) continue;
                int w = e.u == v ? e.v : e.u;
                if (state[static_cast<size_t>(w)]) continue;
                state[static_cast<size_t>(w)] = 1;
                tree_edge[static_cast<size_t>(id)] = true;
                pot[static_cast<size_t>(w)] =
                    pot[static_cast<size_t>(v)] + (e.u == v ? e.gain : -e.gain);
                queue.push_back(w);
            }
        }
    }
    for (int id = 0; id < g.n_edges(); ++id) {
        const Edge& e = g.edge(id);
        if (!(mask >> e.u & 1u) || !(mask >> e.v & 1u)) continue;
        if (tree_edge[static_cast<size_t>(id)]) continue;
        group.generators.push_back(pot[static_cast<size_t>(e.u)] + e.gain -
                                   pot[static_cast<size_t>(e.v)]);
    }
    return group;
}

inline std::uint32_t mask_of(const std::vector<int>& vertices, int n) {
    std::uint32_t mask = 0;
    for (int v : vertices) {
        if (v < 0 || v >= n) throw std::invalid_argument("vertex id out of range");
        mask |= 1u << v;
    }
    return mask;
}

}  // namespace detail

// Gain group of the subgraph induced on `vertices`, which must be connected.
inline GainGroup gain_group(const OrbitGraph& g, const std::vector<int>& vertices) {
    if (g.n_vertices() > 31)
        throw std::invalid_argument("gain_group: vertex count exceeds subset machinery");
    std::uint32_t mask = detail::mask_of(vertices, g.n_vertices());
    if (mask == 0) throw std::invalid_argument("gain_group: empty subset");

    // Connectivity of the induced subgraph.
    std::uint32_t seen = 0;
    int start = std::countr_zero(mask);
    seen |= 1u << start;
    std::vector<int> stack{start};
    auto inc = g.incidence();
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int id : inc[static_cast<size_t>(v)]) {
            const Edge& e = g.edge(id);
            int w = e.u == v ? e.v : e.u;
            if (!(mask >> w & 1u) || (seen >> w & 1u)) continue;
            seen |= 1u << w;
            stack.push_back(w);
        }
    }
    if (seen != mask)
        throw std::invalid_argument("gain_group: induced subgraph is disconnected");
    return detail::cycle_gains_of_subset(g, mask);
}

// Hermite normal form of the subgroup of Z^2 spanned by `gens`:
// basis [(d1, e), (0, d2)] with d1, d2 >= 0 and 0 <= e < d2 when d1, d2 > 0.
// Lets tests compare gain groups independent of tree and root choice.
inline std::vector<Gain> subgroup_normal_form(const std::vector<Gain>& gens) {
    // Fold generators into one row with x = gcd of all x-components, via the
    // extended Euclidean identity s*a + t*b = gcd(a, b).
    auto xgcd = [](Int a, Int b, Int& s, Int& t) {
        Int old_s = 1, cur_s = 0, old_t = 0, cur_t = 1;
        while (b != 0) {
            Int q = a / b;
            Int tmp = a - q * b; a = b; b = tmp;
            tmp = old_s - q * cur_s; old_s = cur_s; cur_s = tmp;
            tmp = old_t - q * cur_t; old_t = cur_t; cur_t = tmp;
        }
        s = old_s;
        t = old_t;
        return a;
    };
    Gain row1;
    Int d2 = 0;
    for (const Gain& g : gens) {
        if (g.x == 0) {
            d2 = boost::multiprecision::gcd(d2, abs(g.y));
            continue;
        }
        if (row1.x == 0) {
            d2 = boost::multiprecision::gcd(d2, abs(row1.y));
            row1 = g;
            continue;
        }
        Int s, t;
        Int d = xgcd(row1.x, g.x, s, t);
        Gain combined(d, s * row1.y + t * g.y);
        // Both originals minus multiples of `combined` have x = 0.
        d2 = boost::multiprecision::gcd(d2, abs(row1.y - (row1.x / d) * combined.y));
        d2 = boost::multiprecision::gcd(d2, abs(g.y - (g.x / d) * combined.y));
        row1 = combined;
    }
    std::vector<Gain> basis;
    if (row1.x != 0) {
        if (row1.x < 0) row1 = -row1;
        if (d2 > 0) {
            Int e = row1.y % d2;
            if (e < 0) e += d2;
            row1.y = e;
        }
        basis.push_back(row1);
    } else {
        d2 = boost::multiprecision::gcd(d2, abs(row1.y));
    }
    if (d2 > 0) basis.push_back(Gain(Int(0), d2));
    return basis;
}

}  // namespace prk
