// (2,l)-sparsity machinery: the Lee-Streinu pebble game, subset
// classification, P(2,1) recognition, and extraction of the unique minimal
// over-critical set (a (2,2)-circuit).
//
// Multigraph conventions: parallel edges always count separately and a loop
// adds one induced edge to its vertex. Loops are insertable only for l = 1;
// for l >= 2 the pebble requirement alone rules them out.
#pragma once

#include "prk/orbit_graph.hpp"

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace prk {

struct SparsityParams {
    int k{2};
    int ell{2};
};

inline void validate(const SparsityParams& p) {
    if (p.k != 2) throw std::invalid_argument("sparsity: only k = 2 is supported");
    if (p.ell < 1 || p.ell >= 2 * p.k)
        throw std::invalid_argument("sparsity: ell must lie in {1, 2, 3}");
}

// Vertex bound for the exhaustive subset enumerations. The environment
// variable PRK_BRUTE_FORCE_BOUND overrides the default of 14.
inline int brute_force_bound() {
    if (const char* env = std::getenv("PRK_BRUTE_FORCE_BOUND")) {
        int v = std::atoi(env);
        if (v > 0) return v < 31 ? v : 31;
    }
    return 14;
}

class BoundExceeded : public std::runtime_error {
public:
    explicit BoundExceeded(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Lee-Streinu (k,l) pebble game. Each vertex starts with k pebbles; an edge
// is insertable when l+1 pebbles sit on its endpoints, pulled in by reversing
// directed paths. Accepting every edge is equivalent to (k,l)-sparsity.
class PebbleGame {
public:
    PebbleGame(int n, int k, int ell) : k_(k), ell_(ell), pebbles_(static_cast<size_t>(n), k),
                                        out_(static_cast<size_t>(n)) {}

    bool insert(int u, int v) {
        if (u == v) {
            while (pebbles_[static_cast<size_t>(u)] < ell_ + 1) {
                if (!collect(u, u, u)) return false;
            }
            out_[static_cast<size_t>(u)].push_back(u);
            pebbles_[static_cast<size_t>(u)]--;
            return true;
        }
        while (pebbles_[static_cast<size_t>(u)] + pebbles_[static_cast<size_t>(v)] < ell_ + 1) {
            if (!collect(u, u, v) && !collect(v, u, v)) return false;
        }
        if (pebbles_[static_cast<size_t>(u)] == 0) std::swap(u, v);
        out_[static_cast<size_t>(u)].push_back(v);
        pebbles_[static_cast<size_t>(u)]--;
        return true;
    }

private:
    // DFS from root along directed edges for a pebble outside {f1, f2};
    // reverses the path so the pebble arrives at root.
    bool collect(int root, int f1, int f2) {
        const int n = static_cast<int>(pebbles_.size());
        std::vector<int> parent(static_cast<size_t>(n), -2);
        parent[static_cast<size_t>(root)] = -1;
        std::vector<int> stack{root};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : out_[static_cast<size_t>(v)]) {
                if (parent[static_cast<size_t>(w)] != -2) continue;
                parent[static_cast<size_t>(w)] = v;
                if (w != f1 && w != f2 && pebbles_[static_cast<size_t>(w)] > 0) {
                    reverse_path(parent, w);
                    pebbles_[static_cast<size_t>(w)]--;
                    pebbles_[static_cast<size_t>(root)]++;
                    return true;
                }
                stack.push_back(w);
            }
        }
        return false;
    }

    void reverse_path(const std::vector<int>& parent, int w) {
        while (parent[static_cast<size_t>(w)] >= 0) {
            int p = parent[static_cast<size_t>(w)];
            auto& po = out_[static_cast<size_t>(p)];
            for (size_t i = 0; i < po.size(); ++i) {
                if (po[i] == w) {
                    po[i] = po.back();
                    po.pop_back();
                    break;
                }
            }
            out_[static_cast<size_t>(w)].push_back(p);
            w = p;
        }
    }

    int k_;
    int ell_;
    std::vector<int> pebbles_;
    std::vector<std::vector<int>> out_;
};

}  // namespace detail

inline bool is_sparse(const OrbitGraph& g, const SparsityParams& params) {
    validate(params);
    detail::PebbleGame game(g.n_vertices(), params.k, params.ell);
    for (const Edge& e : g.edges()) {
        if (!game.insert(e.u, e.v)) return false;
    }
    return true;
}

inline bool is_tight(const OrbitGraph& g, const SparsityParams& params) {
    validate(params);
    if (g.n_edges() != params.k * g.n_vertices() - params.ell) return false;
    return is_sparse(g, params);
}

enum class SubsetClass {
    OverCritical,  // i(X) = 2|X| - 1
    Critical,      // i(X) = 2|X| - 2
    SemiCritical,  // i(X) = 2|X| - 3
    Slack,         // fewer edges
};

struct SubsetReport {
    std::vector<int> subset;
    int i_count;
    SubsetClass cls;
};

inline SubsetReport classify_subset(const OrbitGraph& g, const std::vector<int>& subset) {
    if (subset.empty()) throw std::invalid_argument("classify_subset: empty subset");
    if (g.n_vertices() > 31)
        throw BoundExceeded("classify_subset: vertex count exceeds subset machinery");
    std::uint32_t mask = 0;
    for (int v : subset) {
        if (v < 0 || v >= g.n_vertices())
            throw std::invalid_argument("classify_subset: vertex id out of range");
        mask |= 1u << v;
    }
    int size = static_cast<int>(std::popcount(mask));
    int i = g.induced_edge_count(mask);
    SubsetClass cls = SubsetClass::Slack;
    if (i >= 2 * size - 1) cls = SubsetClass::OverCritical;
    else if (i == 2 * size - 2) cls = SubsetClass::Critical;
    else if (i == 2 * size - 3) cls = SubsetClass::SemiCritical;
    SubsetReport report;
    report.subset = subset;
    report.i_count = i;
    report.cls = cls;
    return report;
}

namespace detail {

inline std::vector<int> mask_to_vertices(std::uint32_t mask) {
    std::vector<int> vs;
    while (mask) {
        int v = std::countr_zero(mask);
        vs.push_back(v);
        mask &= mask - 1;
    }
    return vs;
}

// Per-edge endpoint masks; lets subset counting run on bit operations.
inline std::vector<std::uint32_t> edge_masks(const OrbitGraph& g) {
    std::vector<std::uint32_t> masks;
    masks.reserve(static_cast<size_t>(g.n_edges()));
    for (const Edge& e : g.edges()) masks.push_back((1u << e.u) | (1u << e.v));
    return masks;
}

inline void check_bound(const OrbitGraph& g, const char* who, int bound) {
    if (bound > 31) bound = 31;  // subset masks are 32-bit
    if (g.n_vertices() > bound)
        throw BoundExceeded(std::string(who) + ": " + std::to_string(g.n_vertices()) +
                            " vertices exceed the brute-force bound " + std::to_string(bound) +
                            " (set PRK_BRUTE_FORCE_BOUND to raise it)");
}

}  // namespace detail

// All vertex subsets S with i(S) = 2|S| - ell, excluding subsets with a
// vertex isolated in G[S]. In a (2,1)-sparse ambient graph a subgraph that
// meets the count uses all induced edges of its support, so enumerating
// induced subgraphs is complete; isolated vertices only lower the count.
inline std::vector<std::vector<int>> tight_subgraphs(const OrbitGraph& g, int ell,
                                                     int bound = 0) {
    if (bound <= 0) bound = brute_force_bound();
    detail::check_bound(g, "tight_subgraphs", bound);
    const int n = g.n_vertices();
    auto masks = detail::edge_masks(g);
    std::vector<std::vector<int>> result;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        int size = static_cast<int>(std::popcount(mask));
        int count = 0;
        std::uint32_t touched = 0;
        for (size_t i = 0; i < masks.size(); ++i) {
            if ((masks[i] & mask) == masks[i]) {
                ++count;
                touched |= masks[i];
            }
        }
        if (count != 2 * size - ell) continue;
        if (touched != mask) continue;  // isolated vertex in G[S]
        result.push_back(detail::mask_to_vertices(mask));
    }
    return result;
}

// P(2,1)-graph: (2,1)-tight with some edge whose deletion leaves the graph
// (2,2)-tight. (2,1)-tightness forces connectivity, so disconnected inputs
// are rejected here without a separate check.
inline std::optional<int> p21_witness_edge(const OrbitGraph& g) {
    if (!is_tight(g, SparsityParams{2, 1})) return std::nullopt;
    for (int id = 0; id < g.n_edges(); ++id) {
        std::vector<Edge> edges;
        edges.reserve(static_cast<size_t>(g.n_edges() - 1));
        for (int j = 0; j < g.n_edges(); ++j) {
            if (j != id) edges.push_back(g.edge(j));
        }
        if (is_tight(OrbitGraph(g.n_vertices(), std::move(edges), g.arity()),
                     SparsityParams{2, 2}))
            return id;
    }
    return std::nullopt;
}

inline bool is_p21(const OrbitGraph& g) { return p21_witness_edge(g).has_value(); }

// First subset violating |E'| <= 2|V'| - ell, if any; nullopt when the graph
// is (2,ell)-sparse or too large to enumerate.
inline std::optional<std::vector<int>> sparsity_violation(const OrbitGraph& g, int ell,
                                                          int bound = 0) {
    if (bound <= 0) bound = brute_force_bound();
    if (bound > 31) bound = 31;
    if (g.n_vertices() > bound) return std::nullopt;
    auto masks = detail::edge_masks(g);
    const int n = g.n_vertices();
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        int size = static_cast<int>(std::popcount(mask));
        int count = 0;
        for (std::uint32_t m : masks) {
            if ((m & mask) == m) ++count;
        }
        if (count > 2 * size - ell) return detail::mask_to_vertices(mask);
    }
    return std::nullopt;
}

// Unique minimal over-critical vertex set of a P(2,1)-graph; the subgraph it
// induces is a (2,2)-circuit.
inline std::vector<int> find_circuit(const OrbitGraph& g, int bound = 0) {
    if (bound <= 0) bound = brute_force_bound();
    detail::check_bound(g, "find_circuit", bound);
    if (!is_p21(g)) throw std::invalid_argument("find_circuit: graph is not P(2,1)");
    const int n = g.n_vertices();
    auto masks = detail::edge_masks(g);
    std::uint32_t best = 0;
    int best_size = n + 1;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        int size = static_cast<int>(std::popcount(mask));
        if (size >= best_size) continue;
        int count = 0;
        for (std::uint32_t m : masks) {
            if ((m & mask) == m) ++count;
        }
        if (count == 2 * size - 1) {
            best = mask;
            best_size = size;
        }
    }
    if (best == 0) throw std::logic_error("find_circuit: P(2,1)-graph without over-critical set");
    return detail::mask_to_vertices(best);
}

}  // namespace prk
