// Edge decomposition of a P(2,1)-graph into a spanning tree and a spanning
// connected map-graph (one cycle). The decomposition is built along a
// combinatorial Henneberg reduction: the terminal loop is the map cycle, and
// undoing each inverse move keeps the new vertex a leaf of both parts (H1) or
// routes the split edges into the side that held the split edge (H2).
#pragma once

#include "prk/henneberg.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>
#include <vector>

namespace prk {

struct TreeMapDecomposition {
    std::vector<int> tree_edges;
    std::vector<int> map_edges;
};

namespace detail {

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(static_cast<size_t>(n)) {
        for (int i = 0; i < n; ++i) parent_[static_cast<size_t>(i)] = i;
    }
    int find(int v) {
        while (parent_[static_cast<size_t>(v)] != v) {
            parent_[static_cast<size_t>(v)] = parent_[static_cast<size_t>(parent_[static_cast<size_t>(v)])];
            v = parent_[static_cast<size_t>(v)];
        }
        return v;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[static_cast<size_t>(a)] = b;
        return true;
    }

private:
    std::vector<int> parent_;
};

}  // namespace detail

inline bool valid_decomposition(const OrbitGraph& g, const TreeMapDecomposition& d) {
    const int n = g.n_vertices();
    if (static_cast<int>(d.tree_edges.size()) != std::max(n - 1, 0)) return false;
    if (static_cast<int>(d.map_edges.size()) != n) return false;
    std::vector<int> all = d.tree_edges;
    all.insert(all.end(), d.map_edges.begin(), d.map_edges.end());
    std::sort(all.begin(), all.end());
    if (static_cast<int>(all.size()) != g.n_edges()) return false;
    for (int i = 0; i < g.n_edges(); ++i) {
        if (all[static_cast<size_t>(i)] != i) return false;
    }
    detail::UnionFind tree_uf(n);
    for (int id : d.tree_edges) {
        const Edge& e = g.edge(id);
        if (e.is_loop() || !tree_uf.unite(e.u, e.v)) return false;  // cycle in tree
    }
    detail::UnionFind map_uf(n);
    int merges = 0;
    for (int id : d.map_edges) {
        const Edge& e = g.edge(id);
        if (!e.is_loop() && map_uf.unite(e.u, e.v)) ++merges;
    }
    return merges == n - 1;  // map part is spanning and connected
}

// Decomposition per the constructive bookkeeping of the induction; the
// reduction is combinatorial, so gains play no role here.
inline TreeMapDecomposition tree_map_decompose(const OrbitGraph& g) {
    ReduceOutcome outcome = reduce_combinatorial(g);
    if (!outcome.ok)
        throw std::invalid_argument("tree_map_decompose: graph is not P(2,1) (" +
                                    outcome.failure + ")");
    std::set<int> tree, map;
    map.insert(0);  // terminal single loop
    for (auto it = outcome.steps.rbegin(); it != outcome.steps.rend(); ++it) {
        const auto& cand = it->candidate;
        std::vector<int> survivors;
        survivors.reserve(static_cast<size_t>(it->pre_edges));
        {
            size_t next_removed = 0;
            for (int id = 0; id < it->pre_edges; ++id) {
                if (next_removed < cand.removed.size() && cand.removed[next_removed] == id) {
                    ++next_removed;
                    continue;
                }
                survivors.push_back(id);
            }
        }
        const int cand_id = static_cast<int>(survivors.size());
        std::set<int> new_tree, new_map;
        auto remap_into = [&](const std::set<int>& from, std::set<int>& into) {
            for (int id : from) {
                if (id == cand_id) continue;
                into.insert(survivors[static_cast<size_t>(id)]);
            }
        };
        remap_into(tree, new_tree);
        remap_into(map, new_map);
        switch (cand.forward.kind) {
            case MoveKind::H1a:
            case MoveKind::H1b:
                new_tree.insert(cand.role_tree);
                new_map.insert(cand.role_map);
                break;
            case MoveKind::H2a:
            case MoveKind::H2b: {
                // The two edges to the split endpoints replace the candidate
                // in its part; the third edge hangs the new vertex off the
                // other part as a leaf.
                bool cand_in_tree = tree.count(cand_id) > 0;
                if (!cand_in_tree && map.count(cand_id) == 0)
                    throw std::logic_error("tree_map_decompose: candidate edge untracked");
                if (cand_in_tree) {
                    new_tree.insert(cand.role_tree);
                    new_tree.insert(cand.role_map);
                    new_map.insert(cand.role_third);
                } else {
                    new_map.insert(cand.role_tree);
                    new_map.insert(cand.role_map);
                    new_tree.insert(cand.role_third);
                }
                break;
            }
            case MoveKind::H2c: {
                // Loops always sit in the map part; the parallel pair takes
                // over its cycle and the single edge joins the tree.
                if (map.count(cand_id) == 0)
                    throw std::logic_error("tree_map_decompose: loop missing from map part");
                new_map.insert(cand.role_map);
                new_map.insert(cand.role_third);
                new_tree.insert(cand.role_tree);
                break;
            }
        }
        tree = std::move(new_tree);
        map = std::move(new_map);
    }
    TreeMapDecomposition d;
    d.tree_edges.assign(tree.begin(), tree.end());
    d.map_edges.assign(map.begin(), map.end());
    if (!valid_decomposition(g, d))
        throw std::logic_error("tree_map_decompose: bookkeeping produced an invalid split");
    return d;
}

}  // namespace prk
