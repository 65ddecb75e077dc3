// Gain-preserving Henneberg operations on the partially variable torus:
// forward moves, random generation, the inverse reduction to a single loop,
// certificate verification, and the combinatorial rigidity decision.
//
// Move catalogue (new vertex v0, gains written from v0):
//   H1a  two edges to distinct vertices, any gains
//   H1b  two parallel edges to one vertex, gains m01 != m02
//   H2a  split edge {v1,v2; m_e} (v1 != v2): edges (0,0) to v1, m_e to v2,
//        m03 to a third vertex v3
//   H2b  split edge {v1,v2; m_e}: edge (0,0) to v1 and a parallel pair
//        m_e, m03 to v2 with m03 != m_e
//   H2c  split a loop {v2,v2; m1-m2}: edges m0 to v1, m1 and m2 to v2.
//        v1 = v2 is allowed; that case builds the three-parallel-edge graph
//        from the single loop, which no other move reaches.
//
// The reduction scans degree-2 vertices, then degree-3 edge-split candidates,
// then loop-adding H2c candidates, accepting the first inverse move whose
// result is again P(2,1) and Tx-constructive. Above the brute-force bound the
// per-step gain check is unavailable and a backtracking search stands in:
// legal inverse moves preserve the class forward, so reaching an x-nonzero
// loop is equivalent to membership.
#pragma once

#include "prk/gain_conditions.hpp"
#include "prk/isomorphism.hpp"
#include "prk/json_io.hpp"
#include "prk/sparsity.hpp"
#include "prk/tgain.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace prk {

enum class MoveKind { H1a, H1b, H2a, H2b, H2c };

inline const char* move_kind_name(MoveKind k) {
    switch (k) {
        case MoveKind::H1a: return "H1a";
        case MoveKind::H1b: return "H1b";
        case MoveKind::H2a: return "H2a";
        case MoveKind::H2b: return "H2b";
        case MoveKind::H2c: return "H2c";
    }
    return "";
}

inline std::optional<MoveKind> move_kind_from_name(const std::string& s) {
    if (s == "H1a") return MoveKind::H1a;
    if (s == "H1b") return MoveKind::H1b;
    if (s == "H2a") return MoveKind::H2a;
    if (s == "H2b") return MoveKind::H2b;
    if (s == "H2c") return MoveKind::H2c;
    return std::nullopt;
}

// Anchors reference ids in the pre-move graph. Gains per kind:
// H1a/H1b [m01, m02], H2a/H2b [m03], H2c [m0, m1, m2].
struct Move {
    MoveKind kind{MoveKind::H1a};
    int v1{-1};
    int v2{-1};
    int v3{-1};
    int edge{-1};
    std::vector<Gain> gains;
};

struct ConstructionCertificate {
    int base_vertex{0};
    Gain base_gain;
    std::vector<Move> moves;
};

inline OrbitGraph certificate_base_graph(const ConstructionCertificate& cert) {
    if (cert.base_vertex != 0)
        throw std::invalid_argument("certificate: base graph has a single vertex 0");
    return OrbitGraph(1, {Edge{0, 0, cert.base_gain}});
}

namespace detail {

inline void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

}  // namespace detail

// Applies a forward move. Edge removal compacts ids (later edges shift down
// by one); the new vertex is n and new edges are appended in catalogue order.
inline OrbitGraph apply_move(const OrbitGraph& g, const Move& move) {
    const int n = g.n_vertices();
    const int v0 = n;
    auto valid_vertex = [n](int v) { return v >= 0 && v < n; };
    auto valid_edge = [&g](int e) { return e >= 0 && e < g.n_edges(); };
    std::vector<Edge> edges = g.edges();

    switch (move.kind) {
        case MoveKind::H1a:
            detail::require(valid_vertex(move.v1) && valid_vertex(move.v2),
                            "H1a: anchor vertex out of range");
            detail::require(move.v1 != move.v2, "H1a: neighbours must be distinct");
            detail::require(move.gains.size() == 2, "H1a: two gains expected");
            edges.push_back(Edge{v0, move.v1, move.gains[0]});
            edges.push_back(Edge{v0, move.v2, move.gains[1]});
            break;
        case MoveKind::H1b:
            detail::require(valid_vertex(move.v1), "H1b: anchor vertex out of range");
            detail::require(move.gains.size() == 2, "H1b: two gains expected");
            detail::require(move.gains[0] != move.gains[1],
                            "H1b: parallel gains must differ");
            edges.push_back(Edge{v0, move.v1, move.gains[0]});
            edges.push_back(Edge{v0, move.v1, move.gains[1]});
            break;
        case MoveKind::H2a: {
            // v1 names the endpoint receiving the (0,0) edge; the preserved
            // gain m_e is read in the v1 -> v2 orientation, so the move does
            // not depend on how the split edge happens to be stored.
            detail::require(valid_edge(move.edge), "H2a: edge id out of range");
            Edge e = edges[static_cast<size_t>(move.edge)];
            detail::require(!e.is_loop(), "H2a: cannot split a loop");
            detail::require(move.v1 == e.u || move.v1 == e.v,
                            "H2a: v1 must be an endpoint of the split edge");
            int other = move.v1 == e.u ? e.v : e.u;
            Gain m_e = move.v1 == e.u ? e.gain : -e.gain;
            detail::require(valid_vertex(move.v3), "H2a: third vertex out of range");
            detail::require(move.v3 != e.u && move.v3 != e.v,
                            "H2a: third vertex must avoid the split edge");
            detail::require(move.gains.size() == 1, "H2a: one gain expected");
            edges.erase(edges.begin() + move.edge);
            edges.push_back(Edge{v0, move.v1, Gain()});
            edges.push_back(Edge{v0, other, m_e});
            edges.push_back(Edge{v0, move.v3, move.gains[0]});
            break;
        }
        case MoveKind::H2b: {
            // v2 names the endpoint that keeps the parallel pair.
            detail::require(valid_edge(move.edge), "H2b: edge id out of range");
            Edge e = edges[static_cast<size_t>(move.edge)];
            detail::require(!e.is_loop(), "H2b: cannot split a loop");
            detail::require(move.v2 == e.u || move.v2 == e.v,
                            "H2b: v2 must be an endpoint of the split edge");
            int v1 = move.v2 == e.u ? e.v : e.u;
            Gain m_e = move.v2 == e.v ? e.gain : -e.gain;
            detail::require(move.gains.size() == 1, "H2b: one gain expected");
            detail::require(move.gains[0] != m_e, "H2b: m03 must differ from m_e");
            edges.erase(edges.begin() + move.edge);
            edges.push_back(Edge{v0, v1, Gain()});
            edges.push_back(Edge{v0, move.v2, m_e});
            edges.push_back(Edge{v0, move.v2, move.gains[0]});
            break;
        }
        case MoveKind::H2c: {
            detail::require(valid_edge(move.edge), "H2c: loop edge id out of range");
            Edge loop = edges[static_cast<size_t>(move.edge)];
            detail::require(loop.is_loop(), "H2c: anchor edge must be a loop");
            detail::require(valid_vertex(move.v1) && valid_vertex(move.v2),
                            "H2c: anchor vertex out of range");
            detail::require(move.v2 == loop.u, "H2c: v2 must carry the loop");
            detail::require(move.gains.size() == 3, "H2c: three gains expected");
            Gain diff = move.gains[1] - move.gains[2];
            detail::require(diff == loop.gain || diff == -loop.gain,
                            "H2c: m1 - m2 must reproduce the loop gain");
            // With all three edges parallel, a repeated gain would create a
            // two-edge subgraph whose only cycle is trivial.
            detail::require(move.v1 != move.v2 ||
                                (move.gains[0] != move.gains[1] && move.gains[0] != move.gains[2]),
                            "H2c: parallel gains must be pairwise distinct");
            edges.erase(edges.begin() + move.edge);
            edges.push_back(Edge{v0, move.v1, move.gains[0]});
            edges.push_back(Edge{v0, move.v2, move.gains[1]});
            edges.push_back(Edge{v0, move.v2, move.gains[2]});
            break;
        }
    }
    return OrbitGraph(n + 1, std::move(edges), g.arity());
}

namespace detail {

// One inverse move: remove `v0`, optionally add `add` (candidate edge or
// loop). Role edge ids live in the pre-step graph and drive the tree/map
// bookkeeping of the decomposition.
struct InverseCandidate {
    Move forward;                 // anchors in the post-step graph, gains as reduced
    int v0{-1};
    std::optional<Edge> add;
    std::vector<int> removed;     // incident edge ids, ascending
    int role_tree{-1};            // H1/H2: edge whose forward copy joins the tree side
    int role_map{-1};
    int role_third{-1};
    Gain zero_gain;               // H2a/H2b: original gain of the forward (0,0) edge
};

struct OrientedIncidence {
    int edge_id;
    int other;
    Gain gain_from_v0;
};

struct RoleGains {
    Gain zero;   // H2a/H2b: gain of the edge that forwards to (0,0)
};

inline std::vector<OrientedIncidence> incident_from(const OrbitGraph& g, int v0) {
    std::vector<OrientedIncidence> result;
    for (int id = 0; id < g.n_edges(); ++id) {
        const Edge& e = g.edge(id);
        if (e.u == v0 && e.v == v0) {
            result.push_back({id, v0, e.gain});  // loop listed once
        } else if (e.u == v0) {
            result.push_back({id, e.v, e.gain});
        } else if (e.v == v0) {
            result.push_back({id, e.u, -e.gain});
        }
    }
    return result;
}

inline OrbitGraph apply_inverse(const OrbitGraph& g, const InverseCandidate& cand) {
    std::vector<Edge> edges;
    edges.reserve(static_cast<size_t>(g.n_edges()));
    auto compact = [&cand](int v) { return v > cand.v0 ? v - 1 : v; };
    size_t next_removed = 0;
    for (int id = 0; id < g.n_edges(); ++id) {
        if (next_removed < cand.removed.size() && cand.removed[next_removed] == id) {
            ++next_removed;
            continue;
        }
        const Edge& e = g.edge(id);
        edges.push_back(Edge{compact(e.u), compact(e.v), e.gain});
    }
    if (cand.add)
        edges.push_back(Edge{compact(cand.add->u), compact(cand.add->v), cand.add->gain});
    return OrbitGraph(g.n_vertices() - 1, std::move(edges), g.arity());
}

// All inverse moves in the deterministic scan order: degree-2 vertices,
// then degree-3 edge splits (candidate edges in (i, j, gain) order), then
// loop-adding H2c candidates. With `respect_gains` unset the gain-legality
// skips are dropped; the combinatorial reduction behind the tree/map
// decomposition never replays gains and must not be blocked by them.
inline std::vector<InverseCandidate> enumerate_inverse_moves(const OrbitGraph& g,
                                                             bool respect_gains = true) {
    std::vector<InverseCandidate> result;
    const int n = g.n_vertices();
    auto degrees = g.degrees();
    auto compact = [](int v, int v0) { return v > v0 ? v - 1 : v; };

    auto removed_ids = [](const std::vector<OrientedIncidence>& inc) {
        std::vector<int> ids;
        for (const auto& oi : inc) ids.push_back(oi.edge_id);
        std::sort(ids.begin(), ids.end());
        return ids;
    };
    auto has_loop_at = [&g](int v) {
        for (const Edge& e : g.edges()) {
            if (e.is_loop() && e.u == v) return true;
        }
        return false;
    };

    // Inverse H1.
    for (int v0 = 0; v0 < n; ++v0) {
        if (degrees[static_cast<size_t>(v0)] != 2 || has_loop_at(v0)) continue;
        auto inc = incident_from(g, v0);
        const auto& a = inc[0];
        const auto& b = inc[1];
        InverseCandidate cand;
        cand.v0 = v0;
        cand.removed = removed_ids(inc);
        cand.role_tree = a.edge_id;
        cand.role_map = b.edge_id;
        if (a.other != b.other) {
            cand.forward.kind = MoveKind::H1a;
            cand.forward.v1 = compact(a.other, v0);
            cand.forward.v2 = compact(b.other, v0);
            cand.forward.gains = {a.gain_from_v0, b.gain_from_v0};
        } else {
            if (respect_gains && a.gain_from_v0 == b.gain_from_v0) continue;  // illegal H1b
            cand.forward.kind = MoveKind::H1b;
            cand.forward.v1 = compact(a.other, v0);
            cand.forward.gains = {a.gain_from_v0, b.gain_from_v0};
        }
        result.push_back(std::move(cand));
    }

    // Inverse H2a / H2b. The candidate edge {v_i, v_j; m_j - m_i} re-gauges
    // v0 so that one incident edge carries (0,0) forward.
    for (int v0 = 0; v0 < n; ++v0) {
        if (degrees[static_cast<size_t>(v0)] != 3 || has_loop_at(v0)) continue;
        auto inc = incident_from(g, v0);
        std::vector<InverseCandidate> local;
        auto make_split = [&](size_t zero_i, size_t main_i, size_t third_i, bool h2b) {
            const auto& zero_role = inc[zero_i];
            const auto& main_role = inc[main_i];
            const auto& third = inc[third_i];
            InverseCandidate cand;
            cand.v0 = v0;
            cand.removed = removed_ids(inc);
            cand.add = Edge{zero_role.other, main_role.other,
                            main_role.gain_from_v0 - zero_role.gain_from_v0};
            cand.role_tree = zero_role.edge_id;
            cand.role_map = main_role.edge_id;
            cand.role_third = third.edge_id;
            cand.zero_gain = zero_role.gain_from_v0;
            cand.forward.kind = h2b ? MoveKind::H2b : MoveKind::H2a;
            cand.forward.edge = g.n_edges() - 3;  // appended candidate in the reduced graph
            if (h2b) cand.forward.v2 = compact(main_role.other, v0);
            else {
                cand.forward.v1 = compact(zero_role.other, v0);
                cand.forward.v3 = compact(third.other, v0);
            }
            cand.forward.gains = {third.gain_from_v0 - zero_role.gain_from_v0};
            if (respect_gains && h2b && cand.forward.gains[0] == cand.add->gain)
                return;  // m03 == m_e
            local.push_back(std::move(cand));
        };
        if (inc[0].other != inc[1].other && inc[1].other != inc[2].other &&
            inc[0].other != inc[2].other) {
            // Three distinct neighbours: one candidate per unordered pair
            // (the reversed orientation builds a T-gain equivalent graph).
            make_split(0, 1, 2, false);
            make_split(0, 2, 1, false);
            make_split(1, 2, 0, false);
        } else {
            // Parallel pair to one neighbour, single edge to another: the
            // single side takes the forward (0,0) edge, each pair member can
            // play the preserved-gain role. All equal: H2c territory only.
            size_t single = 3;
            if (inc[0].other == inc[1].other && inc[0].other != inc[2].other) single = 2;
            else if (inc[0].other == inc[2].other && inc[0].other != inc[1].other) single = 1;
            else if (inc[1].other == inc[2].other && inc[0].other != inc[1].other) single = 0;
            if (single < 3) {
                size_t p1 = (single + 1) % 3, p2 = (single + 2) % 3;
                if (p1 > p2) std::swap(p1, p2);
                make_split(single, p1, p2, true);
                make_split(single, p2, p1, true);
            }
        }
        std::sort(local.begin(), local.end(),
                  [](const InverseCandidate& lhs, const InverseCandidate& rhs) {
                      auto key = [](const InverseCandidate& c) {
                          int lo = std::min(c.add->u, c.add->v);
                          int hi = std::max(c.add->u, c.add->v);
                          return std::tuple<int, int, Gain>(lo, hi, c.add->gain);
                      };
                      return key(lhs) < key(rhs);
                  });
        for (auto& c : local) result.push_back(std::move(c));
    }

    // Inverse H2c: delete a three-valent vertex, add the loop.
    for (int v0 = 0; v0 < n; ++v0) {
        if (degrees[static_cast<size_t>(v0)] != 3 || has_loop_at(v0)) continue;
        auto inc = incident_from(g, v0);
        for (size_t i = 0; i < 3; ++i) {
            for (size_t j = i + 1; j < 3; ++j) {
                if (inc[i].other != inc[j].other) continue;  // need a parallel pair
                Gain loop_gain = inc[i].gain_from_v0 - inc[j].gain_from_v0;
                if (respect_gains && loop_gain.is_zero()) continue;  // zero-gain loop
                size_t k = 3 - i - j;
                const auto& single = inc[k];
                if (respect_gains && single.other == inc[i].other &&
                    (single.gain_from_v0 == inc[i].gain_from_v0 ||
                     single.gain_from_v0 == inc[j].gain_from_v0))
                    continue;  // three parallels need pairwise distinct gains
                InverseCandidate cand;
                cand.v0 = v0;
                cand.removed = removed_ids(inc);
                cand.add = Edge{inc[i].other, inc[j].other, loop_gain};
                cand.role_tree = single.edge_id;
                cand.role_map = inc[i].edge_id;
                cand.role_third = inc[j].edge_id;
                cand.forward.kind = MoveKind::H2c;
                cand.forward.v1 = compact(single.other, v0);
                cand.forward.v2 = compact(inc[i].other, v0);
                cand.forward.edge = g.n_edges() - 3;
                cand.forward.gains = {single.gain_from_v0, inc[i].gain_from_v0,
                                      inc[j].gain_from_v0};
                result.push_back(std::move(cand));
            }
        }
    }
    return result;
}

struct ReductionStep {
    InverseCandidate candidate;
    int pre_edges{0};
};

}  // namespace detail

struct ReduceOutcome {
    bool ok{false};
    ConstructionCertificate certificate;
    std::string failure;
    std::optional<GainWitness> witness;
    // Reduction trace, outermost first; consumed by the decomposition.
    std::vector<detail::ReductionStep> steps;
};

namespace detail {

inline bool terminal_loop(const OrbitGraph& g, bool need_x_gain) {
    if (g.n_vertices() != 1 || g.n_edges() != 1) return false;
    const Edge& e = g.edge(0);
    if (!e.is_loop()) return false;
    return !need_x_gain || e.gain.x != 0;
}

// Turns a reduction trace into a replayable certificate. The reduction's
// intermediate graphs and the replayed graphs drift apart in two ways:
// vertex/edge ids shift under removal-compaction, and every H2 split
// re-gauges the new vertex so its first edge carries (0,0). The builder
// walks the trace in forward order carrying the id maps and the accumulated
// switching function, rewriting each move into the replay frame. The final
// replayed graph then matches the input up to relabelling and switching.
inline ConstructionCertificate build_certificate(const std::vector<ReductionStep>& steps,
                                                 const Gain& terminal_gain) {
    ConstructionCertificate cert;
    cert.base_vertex = 0;
    cert.base_gain = terminal_gain;

    std::vector<int> vmap{0};        // reduction-graph vertex -> replay vertex
    std::vector<int> emap{0};        // reduction-graph edge -> replay edge
    std::vector<Gain> delta{Gain()}; // switching: replay gain = delta(tail)+gain-delta(head)

    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        const InverseCandidate& cand = it->candidate;
        const int v0 = cand.v0;
        auto compact = [v0](int v) { return v > v0 ? v - 1 : v; };
        const bool has_add = cand.add.has_value();
        const int post_edges = it->pre_edges - static_cast<int>(cand.removed.size()) +
                               (has_add ? 1 : 0);
        const int cand_id = has_add ? post_edges - 1 : -1;

        Move mv = cand.forward;
        Gain shift;  // switching value of the new replay vertex
        switch (mv.kind) {
            case MoveKind::H1a:
                mv.gains[0] -= delta[static_cast<size_t>(mv.v1)];
                mv.gains[1] -= delta[static_cast<size_t>(mv.v2)];
                mv.v1 = vmap[static_cast<size_t>(mv.v1)];
                mv.v2 = vmap[static_cast<size_t>(mv.v2)];
                break;
            case MoveKind::H1b:
                mv.gains[0] -= delta[static_cast<size_t>(mv.v1)];
                mv.gains[1] -= delta[static_cast<size_t>(mv.v1)];
                mv.v1 = vmap[static_cast<size_t>(mv.v1)];
                break;
            case MoveKind::H2a:
            case MoveKind::H2b: {
                // The (0,0) edge pins the new vertex's switching value.
                int zero_target = compact(cand.add->u);
                int third_target = mv.kind == MoveKind::H2a ? mv.v3 : compact(cand.add->v);
                shift = delta[static_cast<size_t>(zero_target)] - cand.zero_gain;
                mv.gains[0] += delta[static_cast<size_t>(zero_target)] -
                               delta[static_cast<size_t>(third_target)];
                mv.edge = emap[static_cast<size_t>(mv.edge)];
                if (mv.kind == MoveKind::H2a) {
                    mv.v1 = vmap[static_cast<size_t>(mv.v1)];
                    mv.v3 = vmap[static_cast<size_t>(mv.v3)];
                } else {
                    mv.v2 = vmap[static_cast<size_t>(mv.v2)];
                }
                break;
            }
            case MoveKind::H2c: {
                shift = delta[static_cast<size_t>(mv.v2)];
                mv.gains[0] += shift - delta[static_cast<size_t>(mv.v1)];
                mv.edge = emap[static_cast<size_t>(mv.edge)];
                mv.v1 = vmap[static_cast<size_t>(mv.v1)];
                mv.v2 = vmap[static_cast<size_t>(mv.v2)];
                break;
            }
        }
        cert.moves.push_back(mv);

        // Extend the maps to the pre-step (larger) graph.
        const int pre_n = static_cast<int>(vmap.size()) + 1;
        const int new_vertex = static_cast<int>(vmap.size());
        std::vector<int> next_vmap(static_cast<size_t>(pre_n));
        std::vector<Gain> next_delta(static_cast<size_t>(pre_n));
        for (int v = 0; v < pre_n; ++v) {
            if (v == v0) {
                next_vmap[static_cast<size_t>(v)] = new_vertex;
                next_delta[static_cast<size_t>(v)] = shift;
            } else {
                next_vmap[static_cast<size_t>(v)] = vmap[static_cast<size_t>(compact(v))];
                next_delta[static_cast<size_t>(v)] = delta[static_cast<size_t>(compact(v))];
            }
        }

        const int removed_replay = has_add ? emap[static_cast<size_t>(cand_id)] : -1;
        const int new_edge_count = mv.kind == MoveKind::H1a || mv.kind == MoveKind::H1b ? 2 : 3;
        const int replay_edges_after = static_cast<int>(emap.size()) - (has_add ? 1 : 0) +
                                       new_edge_count;
        std::vector<int> next_emap(static_cast<size_t>(it->pre_edges), -1);
        {
            std::vector<int> survivors;
            survivors.reserve(static_cast<size_t>(it->pre_edges));
            size_t next_removed = 0;
            for (int id = 0; id < it->pre_edges; ++id) {
                if (next_removed < cand.removed.size() && cand.removed[next_removed] == id) {
                    ++next_removed;
                    continue;
                }
                survivors.push_back(id);
            }
            for (size_t j = 0; j < survivors.size(); ++j) {
                int replay_id = emap[j];
                if (has_add && replay_id > removed_replay) --replay_id;
                next_emap[static_cast<size_t>(survivors[j])] = replay_id;
            }
        }
        if (new_edge_count == 2) {
            next_emap[static_cast<size_t>(cand.role_tree)] = replay_edges_after - 2;
            next_emap[static_cast<size_t>(cand.role_map)] = replay_edges_after - 1;
        } else {
            next_emap[static_cast<size_t>(cand.role_tree)] = replay_edges_after - 3;
            next_emap[static_cast<size_t>(cand.role_map)] = replay_edges_after - 2;
            next_emap[static_cast<size_t>(cand.role_third)] = replay_edges_after - 1;
        }
        vmap = std::move(next_vmap);
        delta = std::move(next_delta);
        emap = std::move(next_emap);
    }
    return cert;
}

// Greedy reduction: accept the first inverse move whose result satisfies
// `in_class`. Complete because every in-class graph with more than one
// vertex admits some admissible inverse move, so no backtracking is needed.
inline bool greedy_reduce(OrbitGraph g, const std::function<bool(const OrbitGraph&)>& in_class,
                          bool need_x_gain, ReduceOutcome& out, bool respect_gains = true) {
    while (g.n_vertices() > 1) {
        bool advanced = false;
        for (auto& cand : enumerate_inverse_moves(g, respect_gains)) {
            OrbitGraph next = apply_inverse(g, cand);
            if (!in_class(next)) continue;
            ReductionStep step;
            step.candidate = cand;
            step.pre_edges = g.n_edges();
            out.steps.push_back(std::move(step));
            g = std::move(next);
            advanced = true;
            break;
        }
        if (!advanced) {
            out.failure = "no admissible inverse move at " + std::to_string(g.n_vertices()) +
                          " vertices";
            return false;
        }
    }
    if (!terminal_loop(g, need_x_gain)) {
        out.failure = "terminal graph is not a single loop with nonzero x-gain";
        return false;
    }
    out.certificate = build_certificate(out.steps, g.edge(0).gain);
    return true;
}

// Backtracking variant for graphs above the brute-force bound: P(2,1) is the
// only per-step prune (polynomial via the pebble game); success means an
// x-nonzero loop was reached, which forward preservation turns into a
// membership certificate.
inline bool dfs_reduce(const OrbitGraph& g, ReduceOutcome& out, Gain& terminal_gain) {
    if (terminal_loop(g, true)) {
        terminal_gain = g.edge(0).gain;
        return true;
    }
    if (g.n_vertices() <= 1) return false;
    for (auto& cand : enumerate_inverse_moves(g)) {
        OrbitGraph next = apply_inverse(g, cand);
        if (!is_p21(next)) continue;
        ReductionStep step;
        step.candidate = cand;
        step.pre_edges = g.n_edges();
        out.steps.push_back(std::move(step));
        if (dfs_reduce(next, out, terminal_gain)) return true;
        out.steps.pop_back();
    }
    return false;
}

}  // namespace detail

// Inverse reduction of an x-variable-torus gain graph to a single loop.
inline ReduceOutcome reduce(const OrbitGraph& g, int bound = 0) {
    if (bound <= 0) bound = brute_force_bound();
    ReduceOutcome out;
    if (g.arity() != 2) {
        out.failure = "reduce expects 2-component gains (lift cylinder graphs first)";
        return out;
    }
    if (g.n_vertices() <= bound) {
        if (!is_p21(g)) {
            out.failure = "graph is not P(2,1)";
            if (auto subset = sparsity_violation(g, 1, bound)) {
                GainWitness w;
                w.subset = *subset;
                w.condition = "subset violates the (2,1) count";
                out.witness = std::move(w);
            }
            return out;
        }
        GainVerdict verdict = is_tx_constructive(g, bound);
        if (!verdict.satisfied) {
            out.failure = "gain assignment is not Tx-constructive";
            out.witness = verdict.witness;
            return out;
        }
        auto in_class = [bound](const OrbitGraph& h) {
            return is_p21(h) && is_tx_constructive(h, bound).satisfied;
        };
        out.ok = detail::greedy_reduce(g, in_class, /*need_x_gain=*/true, out);
        return out;
    }
    // Above the bound: backtracking reduction decides membership outright.
    if (!is_p21(g)) {
        out.failure = "graph is not P(2,1)";
        return out;
    }
    Gain terminal_gain;
    if (detail::dfs_reduce(g, out, terminal_gain)) {
        out.ok = true;
        out.certificate = detail::build_certificate(out.steps, terminal_gain);
    } else {
        out.failure = "no reduction to a single x-nonzero loop exists";
    }
    return out;
}

// Purely combinatorial reduction (gains ignored except for move legality):
// every P(2,1)-graph reduces to a single loop once H2c handles the
// three-parallel-edge base. Used by the tree/map decomposition.
inline ReduceOutcome reduce_combinatorial(const OrbitGraph& g) {
    ReduceOutcome out;
    if (!is_p21(g)) {
        out.failure = "graph is not P(2,1)";
        return out;
    }
    out.ok = detail::greedy_reduce(
        g, [](const OrbitGraph& h) { return is_p21(h); }, /*need_x_gain=*/false, out,
        /*respect_gains=*/false);
    return out;
}

struct GenerateResult {
    OrbitGraph graph;
    ConstructionCertificate certificate;
};

// Random gain-preserving construction from a single loop. Every proposed
// move is re-verified against the class invariant while the graph is inside
// the brute-force bound; H1 moves are provably safe, so a verified fallback
// always exists and generation cannot stall.
inline GenerateResult generate(int n, std::uint64_t seed,
                               TorusModel model = TorusModel::XVariable, int bound = 0) {
    if (n < 1) throw std::invalid_argument("generate: n must be positive");
    if (bound <= 0) bound = brute_force_bound();
    if (model != TorusModel::XVariable && model != TorusModel::YVariable &&
        model != TorusModel::Cylinder)
        throw std::invalid_argument("generate: model must be x-variable, y-variable or cylinder");
    const bool cylinder = model == TorusModel::Cylinder;

    Rng rng(seed);
    auto random_gain = [&rng, cylinder]() {
        return Gain(rng.range(-2, 2), cylinder ? 0 : rng.range(-2, 2));
    };
    Gain base(rng.chance(0.5) ? 1 : 2, cylinder ? 0 : rng.range(-2, 2));
    if (rng.chance(0.5)) base.x = -base.x;

    OrbitGraph g(1, {Edge{0, 0, base}});
    ConstructionCertificate cert;
    cert.base_gain = base;

    auto in_class = [bound](const OrbitGraph& h) {
        if (h.n_vertices() > bound) return true;  // trust the move constraints
        return is_p21(h) && is_tx_constructive(h, bound).satisfied;
    };

    while (g.n_vertices() < n) {
        const int nv = g.n_vertices();
        std::vector<int> split_edges;
        int loop_id = -1;
        for (int id = 0; id < g.n_edges(); ++id) {
            if (g.edge(id).is_loop()) loop_id = id;
            else split_edges.push_back(id);
        }
        bool accepted = false;
        for (int attempt = 0; attempt < 60 && !accepted; ++attempt) {
            Move mv;
            int pick = static_cast<int>(rng.range(0, 9));
            if (pick <= 2 && nv >= 2) {
                mv.kind = MoveKind::H1a;
                mv.v1 = static_cast<int>(rng.range(0, nv - 1));
                do {
                    mv.v2 = static_cast<int>(rng.range(0, nv - 1));
                } while (mv.v2 == mv.v1);
                mv.gains = {random_gain(), random_gain()};
            } else if (pick <= 4) {
                mv.kind = MoveKind::H1b;
                mv.v1 = static_cast<int>(rng.range(0, nv - 1));
                mv.gains = {random_gain(), random_gain()};
                while (mv.gains[1] == mv.gains[0]) mv.gains[1] = random_gain();
            } else if (pick <= 6 && !split_edges.empty() && nv >= 3) {
                mv.kind = MoveKind::H2a;
                mv.edge = split_edges[static_cast<size_t>(
                    rng.range(0, static_cast<long long>(split_edges.size()) - 1))];
                const Edge& e = g.edge(mv.edge);
                mv.v1 = rng.chance(0.5) ? e.u : e.v;
                do {
                    mv.v3 = static_cast<int>(rng.range(0, nv - 1));
                } while (mv.v3 == e.u || mv.v3 == e.v);
                mv.gains = {random_gain()};
            } else if (pick <= 8 && !split_edges.empty()) {
                mv.kind = MoveKind::H2b;
                mv.edge = split_edges[static_cast<size_t>(
                    rng.range(0, static_cast<long long>(split_edges.size()) - 1))];
                const Edge& e = g.edge(mv.edge);
                mv.v2 = rng.chance(0.5) ? e.u : e.v;
                Gain m_e = mv.v2 == e.v ? e.gain : -e.gain;
                mv.gains = {random_gain()};
                while (mv.gains[0] == m_e) mv.gains[0] = random_gain();
            } else if (loop_id >= 0) {
                mv.kind = MoveKind::H2c;
                mv.edge = loop_id;
                mv.v2 = g.edge(loop_id).u;
                mv.v1 = static_cast<int>(rng.range(0, nv - 1));
                Gain m1 = random_gain();
                Gain m2 = m1 - g.edge(loop_id).gain;
                Gain m0 = random_gain();
                while (mv.v1 == mv.v2 && (m0 == m1 || m0 == m2)) m0 = random_gain();
                mv.gains = {m0, m1, m2};
            } else {
                continue;
            }
            OrbitGraph next = apply_move(g, mv);
            if (!in_class(next)) continue;
            g = std::move(next);
            cert.moves.push_back(std::move(mv));
            accepted = true;
        }
        if (!accepted) {
            // H1b with distinct gains always stays in class.
            Move mv;
            mv.kind = MoveKind::H1b;
            mv.v1 = static_cast<int>(rng.range(0, nv - 1));
            mv.gains = {Gain(0, 0), Gain(1, 0)};
            g = apply_move(g, mv);
            cert.moves.push_back(std::move(mv));
        }
    }

    if (model == TorusModel::YVariable) {
        g = g.with_swapped_gains();
        cert.base_gain = cert.base_gain.swapped();
        for (Move& mv : cert.moves)
            for (Gain& gn : mv.gains) gn = gn.swapped();
    } else if (cylinder) {
        std::vector<Edge> edges = g.edges();
        g = OrbitGraph(g.n_vertices(), std::move(edges), 1);
    }
    return GenerateResult{std::move(g), std::move(cert)};
}

struct VerifyResult {
    bool ok{false};
    int failed_step{-1};  // -1: base or target mismatch
    std::string reason;
    bool invariants_checked{true};

    explicit operator bool() const { return ok; }
};

// Replays a certificate and compares the outcome with `target` up to vertex
// relabelling, edge reorientation and global T-gain equivalence. Certificates
// live in the x-variable gain convention; y-variable targets are compared
// after swapping coordinates and cylinder targets after lifting.
inline VerifyResult verify_certificate(const OrbitGraph& target,
                                       const ConstructionCertificate& cert,
                                       TorusModel model = TorusModel::XVariable, int bound = 0) {
    if (bound <= 0) bound = brute_force_bound();
    VerifyResult result;
    OrbitGraph normalized = target;
    if (model == TorusModel::YVariable) normalized = target.with_swapped_gains();
    else if (model == TorusModel::Cylinder) normalized = lift_cylinder(target);
    else if (model != TorusModel::XVariable) {
        result.reason = "certificates exist for x-variable, y-variable and cylinder models";
        return result;
    }

    OrbitGraph g = [&]() -> OrbitGraph {
        try {
            return certificate_base_graph(cert);
        } catch (const std::exception&) {
            return OrbitGraph(0, {});
        }
    }();
    if (g.n_vertices() != 1) {
        result.reason = "malformed base";
        return result;
    }
    if (cert.base_gain.x == 0) {
        result.reason = "base loop must have nonzero x-gain";
        return result;
    }
    auto check_class = [&](const OrbitGraph& h) {
        if (h.n_vertices() > bound) {
            result.invariants_checked = false;
            return true;
        }
        return is_p21(h) && is_tx_constructive(h, bound).satisfied;
    };
    if (!check_class(g)) {
        result.reason = "base graph fails the class invariant";
        return result;
    }
    for (size_t i = 0; i < cert.moves.size(); ++i) {
        try {
            g = apply_move(g, cert.moves[i]);
        } catch (const std::exception& e) {
            result.failed_step = static_cast<int>(i);
            result.reason = e.what();
            return result;
        }
        if (!check_class(g)) {
            result.failed_step = static_cast<int>(i);
            result.reason = "intermediate graph fails the class invariant";
            return result;
        }
    }
    if (!gain_isomorphic(g, normalized, /*allow_switching=*/true)) {
        result.reason = "replayed graph is not gain-isomorphic to the target";
        return result;
    }
    result.ok = true;
    return result;
}

enum class Rigidity { Rigid, Flexible, CountMismatch };

struct DecideResult {
    Rigidity status{Rigidity::Flexible};
    std::string detail;
    std::optional<ConstructionCertificate> certificate;
    std::optional<GainWitness> witness;

    bool rigid() const { return status == Rigidity::Rigid; }
};

// Combinatorial minimal-rigidity decision per model. The x-variable family
// (including y-variable and the cylinder) decides by inverse reduction and
// returns a construction certificate; the fixed torus uses the tightness +
// constructive characterization; circle models only need connectivity data.
inline DecideResult decide(const OrbitGraph& g, TorusModel model, int bound = 0) {
    if (bound <= 0) bound = brute_force_bound();
    if (g.arity() != gain_arity(model))
        throw std::invalid_argument("decide: gain arity does not match model");
    DecideResult result;
    const int n = g.n_vertices();
    const int edges = g.n_edges();

    auto count_mismatch = [&](int expected) {
        result.status = Rigidity::CountMismatch;
        result.detail = "expected " + std::to_string(expected) + " edges for minimal rigidity, got " +
                        std::to_string(edges);
        return result;
    };

    switch (model) {
        case TorusModel::XVariable:
        case TorusModel::YVariable:
        case TorusModel::Cylinder: {
            if (edges != 2 * n - 1) return count_mismatch(2 * n - 1);
            OrbitGraph normalized = g;
            if (model == TorusModel::YVariable) normalized = g.with_swapped_gains();
            else if (model == TorusModel::Cylinder) normalized = lift_cylinder(g);
            ReduceOutcome outcome = reduce(normalized, bound);
            if (outcome.ok) {
                result.status = Rigidity::Rigid;
                result.detail = "reduces to a single loop in " +
                                std::to_string(outcome.certificate.moves.size()) + " moves";
                result.certificate = std::move(outcome.certificate);
            } else {
                result.status = Rigidity::Flexible;
                result.detail = outcome.failure;
                result.witness = std::move(outcome.witness);
                if (result.witness && model == TorusModel::YVariable) {
                    for (Gain& gn : result.witness->generators) gn = gn.swapped();
                    result.witness->condition += " (after x/y swap)";
                }
            }
            return result;
        }
        case TorusModel::Fixed: {
            if (edges != 2 * n - 2) return count_mismatch(2 * n - 2);
            if (!is_tight(g, SparsityParams{2, 2})) {
                result.status = Rigidity::Flexible;
                result.detail = "graph is not (2,2)-tight";
                if (auto subset = sparsity_violation(g, 2, bound)) {
                    GainWitness w;
                    w.subset = *subset;
                    w.condition = "subset violates the (2,2) count";
                    result.witness = std::move(w);
                }
                return result;
            }
            GainVerdict verdict = is_constructive(g, bound);
            if (verdict.satisfied) {
                result.status = Rigidity::Rigid;
                result.detail = "(2,2)-tight with a constructive gain assignment";
            } else {
                result.status = Rigidity::Flexible;
                result.detail = "gain assignment is not constructive";
                result.witness = verdict.witness;
            }
            return result;
        }
        case TorusModel::Angle: {
            if (edges != 2 * n - 1) return count_mismatch(2 * n - 1);
            if (!is_p21(g)) {
                result.status = Rigidity::Flexible;
                result.detail = "graph is not P(2,1)";
                return result;
            }
            GainVerdict verdict = model_condition(g, TorusModel::Angle, bound);
            result.status = verdict.satisfied ? Rigidity::Rigid : Rigidity::Flexible;
            result.detail = verdict.satisfied
                                ? "P(2,1) with the flexible-angle gain condition (experimental)"
                                : "flexible-angle gain condition fails (experimental)";
            result.witness = verdict.witness;
            return result;
        }
        case TorusModel::CircleFixed: {
            if (edges != n - 1) return count_mismatch(n - 1);
            if (g.is_connected()) {
                result.status = Rigidity::Rigid;
                result.detail = "spanning tree";
            } else {
                result.status = Rigidity::Flexible;
                result.detail = "graph is disconnected";
            }
            return result;
        }
        case TorusModel::CircleFlexible: {
            if (edges != n) return count_mismatch(n);
            GainVerdict verdict = model_condition(g, TorusModel::CircleFlexible, bound);
            result.status = verdict.satisfied ? Rigidity::Rigid : Rigidity::Flexible;
            result.detail = verdict.satisfied ? "connected with a constructive cycle"
                                              : verdict.witness ? verdict.witness->condition
                                                                : "condition fails";
            result.witness = verdict.witness;
            return result;
        }
    }
    throw std::logic_error("decide: bad enum");
}

// --- certificate JSON -------------------------------------------------------

inline nlohmann::ordered_json certificate_to_json(const ConstructionCertificate& cert) {
    auto gain_json = [](const Gain& g) {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        a.push_back(detail::int64_or_throw(g.x, "certificate"));
        a.push_back(detail::int64_or_throw(g.y, "certificate"));
        return a;
    };
    nlohmann::ordered_json doc;
    doc["base"] = {{"vertex", cert.base_vertex}, {"gain", gain_json(cert.base_gain)}};
    auto& moves = doc["moves"] = nlohmann::ordered_json::array();
    for (const Move& mv : cert.moves) {
        nlohmann::ordered_json mj;
        mj["kind"] = move_kind_name(mv.kind);
        nlohmann::ordered_json anchors;
        switch (mv.kind) {
            case MoveKind::H1a: anchors = {{"v1", mv.v1}, {"v2", mv.v2}}; break;
            case MoveKind::H1b: anchors = {{"v1", mv.v1}}; break;
            case MoveKind::H2a:
                anchors = {{"edge", mv.edge}, {"v1", mv.v1}, {"v3", mv.v3}};
                break;
            case MoveKind::H2b: anchors = {{"edge", mv.edge}, {"v2", mv.v2}}; break;
            case MoveKind::H2c:
                anchors = {{"v1", mv.v1}, {"v2", mv.v2}, {"loop", mv.edge}};
                break;
        }
        mj["anchors"] = std::move(anchors);
        auto& gains = mj["gains"] = nlohmann::ordered_json::array();
        for (const Gain& gn : mv.gains) gains.push_back(gain_json(gn));
        moves.push_back(std::move(mj));
    }
    return doc;
}

inline ConstructionCertificate certificate_from_json(const nlohmann::json& doc) {
    auto gain_from = [](const nlohmann::json& a) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer() ||
            !a[1].is_number_integer())
            throw ParseError("certificate: gain pair expected");
        return Gain(a[0].get<long long>(), a[1].get<long long>());
    };
    auto anchor = [](const nlohmann::json& j, const char* key) {
        if (!j.contains(key) || !j[key].is_number_integer())
            throw ParseError(std::string("certificate: anchor ") + key + " expected");
        return j[key].get<int>();
    };
    if (!doc.is_object() || !doc.contains("base") || !doc.contains("moves"))
        throw ParseError("certificate: base and moves expected");
    ConstructionCertificate cert;
    cert.base_vertex = anchor(doc["base"], "vertex");
    cert.base_gain = gain_from(doc["base"].at("gain"));
    for (const auto& mj : doc["moves"]) {
        if (!mj.contains("kind") || !mj["kind"].is_string())
            throw ParseError("certificate: move kind expected");
        auto kind = move_kind_from_name(mj["kind"].get<std::string>());
        if (!kind) throw ParseError("certificate: unknown move kind");
        Move mv;
        mv.kind = *kind;
        const auto& anchors = mj.at("anchors");
        switch (mv.kind) {
            case MoveKind::H1a:
                mv.v1 = anchor(anchors, "v1");
                mv.v2 = anchor(anchors, "v2");
                break;
            case MoveKind::H1b:
                mv.v1 = anchor(anchors, "v1");
                break;
            case MoveKind::H2a:
                mv.edge = anchor(anchors, "edge");
                mv.v1 = anchor(anchors, "v1");
                mv.v3 = anchor(anchors, "v3");
                break;
            case MoveKind::H2b:
                mv.edge = anchor(anchors, "edge");
                mv.v2 = anchor(anchors, "v2");
                break;
            case MoveKind::H2c:
                mv.v1 = anchor(anchors, "v1");
                mv.v2 = anchor(anchors, "v2");
                mv.edge = anchor(anchors, "loop");
                break;
        }
        if (!mj.contains("gains") || !mj["gains"].is_array())
            throw ParseError("certificate: gains array expected");
        for (const auto& gj : mj["gains"]) mv.gains.push_back(gain_from(gj));
        cert.moves.push_back(std::move(mv));
    }
    return cert;
}

}  // namespace prk
