// Gain-condition predicates per torus model.
//
// A gain assignment on a (2,2)-tight graph is constructive when every
// subgraph counting 2|V'|-2 edges contains a cycle with nontrivial net gain;
// the partially variable torus additionally needs every subgraph counting
// 2|V'|-1 edges to contain a cycle with nonzero x-gain. Subgraphs here means
// all subgraphs: in a (2,1)-tight ambient graph the ones that matter are the
// induced critical sets plus every over-critical set with one induced edge
// removed. (Checking induced sets alone would pass e.g. the three-edge
// multigraph on two vertices with gains (0,0), (0,0), (1,0), whose two equal
// rows are dependent at every placement.) Edgeless subgraphs impose nothing.
#pragma once

#include "prk/sparsity.hpp"
#include "prk/tgain.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace prk {

struct GainWitness {
    std::vector<int> subset;
    std::vector<Gain> generators;       // cycle gains of the offending subgraph
    std::optional<int> removed_edge;    // set when the subgraph is G[S] minus one edge
    std::string condition;              // which requirement failed
};

struct GainVerdict {
    bool satisfied{true};
    std::optional<GainWitness> witness;

    explicit operator bool() const { return satisfied; }
};

namespace detail {

enum class CycleNeed { Nontrivial, XNontrivial, FullyNonzero };

inline bool meets(const GainGroup& group, CycleNeed need) {
    switch (need) {
        case CycleNeed::Nontrivial: return group.nontrivial();
        case CycleNeed::XNontrivial: return group.x_nontrivial();
        case CycleNeed::FullyNonzero: return group.has_fully_nonzero_element();
    }
    return false;
}

inline const char* need_name(CycleNeed need) {
    switch (need) {
        case CycleNeed::Nontrivial: return "nontrivial cycle";
        case CycleNeed::XNontrivial: return "x-nontrivial cycle";
        case CycleNeed::FullyNonzero: return "cycle with both gain coordinates nonzero";
    }
    return "";
}

// Cycle-gain scanner for one induced subgraph, built once and reusable with
// any single edge skipped; the per-subset incidence is what makes scanning
// every over-critical-minus-edge subgraph affordable near the vertex bound.
class SubsetCycleScanner {
public:
    SubsetCycleScanner(const OrbitGraph& g, std::uint32_t mask) : g_(g), mask_(mask) {
        inc_.resize(static_cast<size_t>(g.n_vertices()));
        for (int id = 0; id < g.n_edges(); ++id) {
            const Edge& e = g.edge(id);
            if (!(mask >> e.u & 1u) || !(mask >> e.v & 1u)) continue;
            induced_.push_back(id);
            inc_[static_cast<size_t>(e.u)].push_back(id);
            if (!e.is_loop()) inc_[static_cast<size_t>(e.v)].push_back(id);
        }
    }

    const std::vector<int>& induced_edges() const { return induced_; }

    // Cycle gains of G[S] minus `skip`; also reports which induced edges
    // ended up in the BFS forest when the caller wants to split tree and
    // non-tree removals.
    GainGroup gains(int skip = -1, std::vector<int>* forest = nullptr) const {
        GainGroup group;
        const int n = g_.n_vertices();
        std::vector<char> seen(static_cast<size_t>(n), 0);
        std::vector<Gain> pot(static_cast<size_t>(n));
        std::vector<char> tree(static_cast<size_t>(g_.n_edges()), 0);
        std::vector<int> queue;
        for (int s = 0; s < n; ++s) {
            if (!(mask_ >> s & 1u) || seen[static_cast<size_t>(s)]) continue;
            seen[static_cast<size_t>(s)] = 1;
            pot[static_cast<size_t>(s)] = Gain();
            queue.assign(1, s);
            size_t qi = 0;
            while (qi < queue.size()) {
                int v = queue[qi++];
                for (int id : inc_[static_cast<size_t>(v)]) {
                    if (id == skip) continue;
                    const Edge& e = g_.edge(id);
                    if (e.is_loop()) continue;
                    int w = e.u == v ? e.v : e.u;
                    if (seen[static_cast<size_t>(w)]) continue;
                    seen[static_cast<size_t>(w)] = 1;
                    tree[static_cast<size_t>(id)] = 1;
                    pot[static_cast<size_t>(w)] =
                        pot[static_cast<size_t>(v)] + (e.u == v ? e.gain : -e.gain);
                    queue.push_back(w);
                }
            }
        }
        for (int id : induced_) {
            if (id == skip || tree[static_cast<size_t>(id)]) continue;
            const Edge& e = g_.edge(id);
            group.generators.push_back(pot[static_cast<size_t>(e.u)] + e.gain -
                                       pot[static_cast<size_t>(e.v)]);
        }
        if (forest) {
            forest->clear();
            for (int id : induced_) {
                if (tree[static_cast<size_t>(id)]) forest->push_back(id);
            }
        }
        return group;
    }

private:
    const OrbitGraph& g_;
    std::uint32_t mask_;
    std::vector<std::vector<int>> inc_;
    std::vector<int> induced_;
};

struct SubsetScan {
    std::vector<std::uint32_t> critical;       // i(S) = 2|S| - 2, no isolated vertex
    std::vector<std::uint32_t> over_critical;  // i(S) = 2|S| - 1
};

inline SubsetScan scan_subsets(const OrbitGraph& g, const char* who, int bound) {
    check_bound(g, who, bound);
    auto masks = edge_masks(g);
    SubsetScan scan;
    const int n = g.n_vertices();
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        int size = static_cast<int>(std::popcount(mask));
        int count = 0;
        std::uint32_t touched = 0;
        for (std::uint32_t m : masks) {
            if ((m & mask) == m) {
                ++count;
                touched |= m;
            }
        }
        if (touched != mask || count == 0) continue;
        if (count == 2 * size - 2) scan.critical.push_back(mask);
        else if (count == 2 * size - 1) scan.over_critical.push_back(mask);
    }
    return scan;
}

inline GainWitness make_witness(std::uint32_t mask, const GainGroup& group, CycleNeed need,
                                std::optional<int> removed_edge) {
    GainWitness w;
    w.subset = mask_to_vertices(mask);
    w.generators = group.generators;
    w.removed_edge = removed_edge;
    w.condition = std::string("subgraph lacks a ") + need_name(need);
    return w;
}

// Requires `need` on G[S] for every critical S, and on G[S] and each
// G[S] - e for every over-critical S when `minus_edge_need` is set.
inline GainVerdict check_counted_subgraphs(const OrbitGraph& g, const char* who, int bound,
                                           CycleNeed critical_need,
                                           std::optional<CycleNeed> over_need,
                                           std::optional<CycleNeed> minus_edge_need) {
    auto scan = scan_subsets(g, who, bound);
    for (std::uint32_t mask : scan.critical) {
        GainGroup group = cycle_gains_of_subset(g, mask);
        if (!meets(group, critical_need))
            return GainVerdict{false, make_witness(mask, group, critical_need, std::nullopt)};
    }
    if (over_need) {
        for (std::uint32_t mask : scan.over_critical) {
            GainGroup group = cycle_gains_of_subset(g, mask);
            if (!meets(group, *over_need))
                return GainVerdict{false, make_witness(mask, group, *over_need, std::nullopt)};
        }
    }
    if (minus_edge_need) {
        for (std::uint32_t mask : scan.over_critical) {
            SubsetCycleScanner scanner(g, mask);
            // An over-critical set has 2|S|-1 >= 1 induced edges, so the
            // remainder is never edgeless unless S is a lone loop vertex.
            if (scanner.induced_edges().size() == 1) continue;
            std::vector<int> forest;
            GainGroup base = scanner.gains(-1, &forest);
            // Removing a non-tree edge keeps the forest spanning, so the
            // remaining cycle gains are the other fundamental gains; only
            // forest removals need a fresh traversal.
            if (*minus_edge_need == CycleNeed::Nontrivial) {
                std::vector<char> in_forest(static_cast<size_t>(g.n_edges()), 0);
                for (int id : forest) in_forest[static_cast<size_t>(id)] = 1;
                int nonzero = 0;
                for (const Gain& gen : base.generators) nonzero += !gen.is_zero();
                size_t gen_at = 0;
                for (int id : scanner.induced_edges()) {
                    if (in_forest[static_cast<size_t>(id)]) continue;
                    bool this_nonzero = !base.generators[gen_at++].is_zero();
                    if (nonzero - (this_nonzero ? 1 : 0) == 0) {
                        GainGroup group = scanner.gains(id);
                        return GainVerdict{
                            false, make_witness(mask, group, *minus_edge_need, id)};
                    }
                }
                for (int id : forest) {
                    GainGroup group = scanner.gains(id);
                    if (!meets(group, *minus_edge_need))
                        return GainVerdict{
                            false, make_witness(mask, group, *minus_edge_need, id)};
                }
            } else {
                for (int id : scanner.induced_edges()) {
                    GainGroup group = scanner.gains(id);
                    if (!meets(group, *minus_edge_need))
                        return GainVerdict{
                            false, make_witness(mask, group, *minus_edge_need, id)};
                }
            }
        }
    }
    return GainVerdict{};
}

}  // namespace detail

// Fixed-torus condition: every (2,2)-counted subgraph has a nontrivial cycle.
// Expects a (2,2)-sparse graph, where those subgraphs are exactly the
// induced critical sets.
inline GainVerdict is_constructive(const OrbitGraph& g, int bound = 0) {
    if (bound <= 0) bound = brute_force_bound();
    if (!is_sparse(g, SparsityParams{2, 2}))
        throw std::invalid_argument("is_constructive: graph is not (2,2)-sparse");
    return detail::check_counted_subgraphs(g, "is_constructive", bound,
                                           detail::CycleNeed::Nontrivial, std::nullopt,
                                           std::nullopt);
}

// Does the induced (connected) subgraph contain a cycle with nonzero x-gain?
inline bool is_x_constructive(const OrbitGraph& g, const std::vector<int>& subset) {
    return gain_group(g, subset).x_nontrivial();
}

// Partially-variable-torus condition on a P(2,1)-graph: every (2,2)-counted
// subgraph has a nontrivial cycle and every (2,1)-counted subgraph an
// x-nontrivial one.
inline GainVerdict is_tx_constructive(const OrbitGraph& g, int bound = 0) {
    if (bound <= 0) bound = brute_force_bound();
    if (!is_p21(g))
        throw std::invalid_argument("is_tx_constructive: graph is not P(2,1)");
    return detail::check_counted_subgraphs(g, "is_tx_constructive", bound,
                                           detail::CycleNeed::Nontrivial,
                                           detail::CycleNeed::XNontrivial,
                                           detail::CycleNeed::Nontrivial);
}

// Lift a cylinder graph (integer gains) to the x-variable torus: m -> (m, 0).
inline OrbitGraph lift_cylinder(const OrbitGraph& g) {
    if (g.arity() != 1)
        throw std::invalid_argument("lift_cylinder: 1-component gains expected");
    std::vector<Edge> edges = g.edges();
    for (Edge& e : edges) e.gain.y = 0;
    return OrbitGraph(g.n_vertices(), std::move(edges), 2);
}

// Model dispatch for the gain-side rigidity condition. Preconditions follow
// the per-model predicates: fixed wants (2,2)-sparse, the variable-torus
// kinds want P(2,1). Circle kinds only need connectivity data.
inline GainVerdict model_condition(const OrbitGraph& g, TorusModel model, int bound = 0) {
    if (bound <= 0) bound = brute_force_bound();
    if (g.arity() != gain_arity(model))
        throw std::invalid_argument("model_condition: gain arity does not match model");
    switch (model) {
        case TorusModel::Fixed:
            return is_constructive(g, bound);
        case TorusModel::XVariable:
            return is_tx_constructive(g, bound);
        case TorusModel::YVariable: {
            GainVerdict v = is_tx_constructive(g.with_swapped_gains(), bound);
            if (v.witness) {
                for (Gain& gen : v.witness->generators) gen = gen.swapped();
                v.witness->condition += " (after x/y swap)";
            }
            return v;
        }
        case TorusModel::Angle:
            // Flexible-angle torus: stated in the source material only for the
            // critical subgraph; applied to every (2,1)-counted subgraph by
            // analogy with the x-variable condition. Experimental.
            if (!is_p21(g))
                throw std::invalid_argument("model_condition: angle model expects a P(2,1) graph");
            return detail::check_counted_subgraphs(g, "model_condition(angle)", bound,
                                                   detail::CycleNeed::Nontrivial,
                                                   detail::CycleNeed::FullyNonzero,
                                                   detail::CycleNeed::Nontrivial);
        case TorusModel::Cylinder:
            return model_condition(lift_cylinder(g), TorusModel::XVariable, bound);
        case TorusModel::CircleFixed: {
            if (g.is_connected()) return GainVerdict{};
            GainWitness w;
            w.condition = "graph is disconnected";
            return GainVerdict{false, std::move(w)};
        }
        case TorusModel::CircleFlexible: {
            if (!g.is_connected()) {
                GainWitness w;
                w.condition = "graph is disconnected";
                return GainVerdict{false, std::move(w)};
            }
            std::vector<int> all(static_cast<size_t>(g.n_vertices()));
            for (int v = 0; v < g.n_vertices(); ++v) all[static_cast<size_t>(v)] = v;
            GainGroup group = gain_group(g, all);
            if (group.nontrivial()) return GainVerdict{};
            GainWitness w;
            w.subset = all;
            w.generators = group.generators;
            w.condition = "no constructive cycle";
            return GainVerdict{false, std::move(w)};
        }
    }
    throw std::logic_error("model_condition: bad enum");
}

}  // namespace prk
