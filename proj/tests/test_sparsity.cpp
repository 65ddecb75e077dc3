#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace prk;
using prktest::brute_force_sparse;
using prktest::brute_force_tight;
using prktest::random_multigraph;

namespace {

OrbitGraph k23() {
    return OrbitGraph(2, {{0, 1, Gain(0, 0)}, {0, 1, Gain(1, 0)}, {0, 1, Gain(0, 1)}});
}

// Five-edge graph whose three-valent vertices each see one neighbour twice.
OrbitGraph bunny_ears() {
    return OrbitGraph(3, {{0, 1, Gain(0, 0)},
                          {0, 2, Gain(0, 0)},
                          {0, 2, Gain(1, 0)},
                          {1, 2, Gain(0, 0)},
                          {1, 2, Gain(0, 1)}});
}

OrbitGraph remove_edge(const OrbitGraph& g, int id) {
    std::vector<Edge> edges;
    for (int i = 0; i < g.n_edges(); ++i)
        if (i != id) edges.push_back(g.edge(i));
    return OrbitGraph(g.n_vertices(), std::move(edges), g.arity());
}

}  // namespace

TEST_CASE("tightness of the base graphs") {
    REQUIRE(is_tight(k23(), SparsityParams{2, 1}));
    OrbitGraph k11(1, {{0, 0, Gain(1, 0)}});
    REQUIRE(is_tight(k11, SparsityParams{2, 1}));
    OrbitGraph triangle(3, {{0, 1, Gain(0, 0)}, {1, 2, Gain(0, 0)}, {2, 0, Gain(0, 0)}});
    REQUIRE_FALSE(is_tight(triangle, SparsityParams{2, 2}));  // 3 != 2*3-2
    REQUIRE(is_sparse(triangle, SparsityParams{2, 2}));
}

TEST_CASE("loops are legal only for ell = 1") {
    OrbitGraph loop(1, {{0, 0, Gain(1, 0)}});
    REQUIRE(is_sparse(loop, SparsityParams{2, 1}));
    REQUIRE_FALSE(is_sparse(loop, SparsityParams{2, 2}));
    REQUIRE_FALSE(is_sparse(loop, SparsityParams{2, 3}));
    OrbitGraph two_loops(1, {{0, 0, Gain(1, 0)}, {0, 0, Gain(0, 1)}});
    REQUIRE_FALSE(is_sparse(two_loops, SparsityParams{2, 1}));
}

TEST_CASE("pebble game agrees with exhaustive subset counting") {
    Rng rng(2025);
    for (int t = 0; t < 600; ++t) {
        OrbitGraph g = random_multigraph(rng);
        for (int ell = 1; ell <= 3; ++ell) {
            CAPTURE(t, ell, g.n_vertices(), g.n_edges());
            REQUIRE(is_sparse(g, SparsityParams{2, ell}) == brute_force_sparse(g, ell));
            REQUIRE(is_tight(g, SparsityParams{2, ell}) == brute_force_tight(g, ell));
        }
    }
}

TEST_CASE("subset classification thresholds") {
    OrbitGraph bunny = bunny_ears();
    auto all = classify_subset(bunny, {0, 1, 2});
    REQUIRE(all.i_count == 5);
    REQUIRE(all.cls == SubsetClass::OverCritical);

    auto single = classify_subset(bunny, {0});
    REQUIRE(single.i_count == 0);
    REQUIRE(single.cls == SubsetClass::Critical);  // 0 = 2*1-2

    auto both = classify_subset(k23(), {0, 1});
    REQUIRE(both.cls == SubsetClass::OverCritical);

    auto pair = classify_subset(bunny, {0, 1});
    REQUIRE(pair.i_count == 1);
    REQUIRE(pair.cls == SubsetClass::SemiCritical);

    REQUIRE_THROWS_AS(classify_subset(bunny, {}), std::invalid_argument);
}

TEST_CASE("P(2,1) recognition") {
    REQUIRE(is_p21(bunny_ears()));
    OrbitGraph k11(1, {{0, 0, Gain(2, 1)}});
    REQUIRE(is_p21(k11));
    OrbitGraph disjoint_loops(2, {{0, 0, Gain(1, 0)}, {1, 1, Gain(1, 0)}});
    REQUIRE_FALSE(is_p21(disjoint_loops));
    // (2,1)-tight but with two loops: no single removal fixes both
    OrbitGraph double_loops(2, {{0, 0, Gain(1, 0)}, {1, 1, Gain(1, 0)}, {0, 1, Gain(0, 0)}});
    REQUIRE(double_loops.n_edges() == 2 * 2 - 1);
    REQUIRE_FALSE(is_p21(double_loops));
}

TEST_CASE("find_circuit returns the unique minimal over-critical set") {
    OrbitGraph with_loop(2, {{0, 0, Gain(1, 0)}, {0, 1, Gain(0, 0)}, {0, 1, Gain(0, 1)}});
    REQUIRE(is_p21(with_loop));
    REQUIRE(find_circuit(with_loop) == std::vector<int>{0});

    REQUIRE(find_circuit(k23()) == std::vector<int>{0, 1});
    REQUIRE(find_circuit(bunny_ears()) == std::vector<int>{0, 1, 2});

    OrbitGraph triangle(3, {{0, 1, Gain(0, 0)}, {1, 2, Gain(0, 0)}, {2, 0, Gain(0, 0)}});
    REQUIRE_THROWS_AS(find_circuit(triangle), std::invalid_argument);
}

TEST_CASE("the circuit really is a (2,2)-circuit") {
    // deleting any induced edge of G[X] leaves a (2,2)-tight graph
    for (const OrbitGraph& g : {k23(), bunny_ears()}) {
        auto circuit = find_circuit(g);
        std::uint32_t mask = 0;
        for (int v : circuit) mask |= 1u << v;
        OrbitGraph induced = [&] {
            std::vector<Edge> edges;
            for (const Edge& e : g.edges())
                if ((mask >> e.u & 1u) && (mask >> e.v & 1u)) edges.push_back(e);
            // relabel onto 0..k-1
            std::vector<int> remap(static_cast<size_t>(g.n_vertices()), -1);
            int next = 0;
            for (int v : circuit) remap[static_cast<size_t>(v)] = next++;
            for (Edge& e : edges) {
                e.u = remap[static_cast<size_t>(e.u)];
                e.v = remap[static_cast<size_t>(e.v)];
            }
            return OrbitGraph(next, std::move(edges));
        }();
        for (int id = 0; id < induced.n_edges(); ++id) {
            REQUIRE(brute_force_tight(remove_edge(induced, id), 2));
        }
    }
}

TEST_CASE("tight subgraph enumeration") {
    OrbitGraph loop(1, {{0, 0, Gain(1, 0)}});
    auto subsets = tight_subgraphs(loop, 1);
    REQUIRE(subsets == std::vector<std::vector<int>>{{0}});

    OrbitGraph worked(3, {{0, 1, Gain(1, 2)}, {1, 2, Gain(0, 1)}, {0, 2, Gain(3, 1)},
                          {2, 0, Gain(1, -1)}});
    auto tight22 = tight_subgraphs(worked, 2);
    bool has_full = false;
    for (const auto& s : tight22)
        if (s == std::vector<int>{0, 1, 2}) has_full = true;
    REQUIRE(has_full);

    REQUIRE(tight_subgraphs(k23(), 1) == std::vector<std::vector<int>>{{0, 1}});
}

TEST_CASE("tree/map decomposition of the named graphs") {
    OrbitGraph loop(1, {{0, 0, Gain(1, 0)}});
    auto d = tree_map_decompose(loop);
    REQUIRE(d.tree_edges.empty());
    REQUIRE(d.map_edges == std::vector<int>{0});

    auto dk = tree_map_decompose(k23());
    REQUIRE(dk.tree_edges.size() == 1);
    REQUIRE(dk.map_edges.size() == 2);
    REQUIRE(valid_decomposition(k23(), dk));

    auto db = tree_map_decompose(bunny_ears());
    REQUIRE(valid_decomposition(bunny_ears(), db));

    OrbitGraph triangle(3, {{0, 1, Gain(0, 0)}, {1, 2, Gain(0, 0)}, {2, 0, Gain(0, 0)}});
    REQUIRE_THROWS_AS(tree_map_decompose(triangle), std::invalid_argument);
}

TEST_CASE("subset enumerations respect the brute-force bound") {
    OrbitGraph big(20, {});
    REQUIRE_THROWS_AS(tight_subgraphs(big, 2), BoundExceeded);
    REQUIRE(tight_subgraphs(big, 2, 25).empty());  // raised bound admits the graph
    REQUIRE(tight_subgraphs(OrbitGraph(3, {}), 2, 5).empty());
    REQUIRE_THROWS_AS(generic_rank(big, TorusModel::XVariable, 0), std::invalid_argument);
}

TEST_CASE("structural lemmas hold on generated P(2,1) graphs") {
    Rng rng(5150);
    for (int t = 0; t < 120; ++t) {
        int n = 1 + static_cast<int>(rng.range(0, 6));
        auto gen = generate(n, 40000 + static_cast<std::uint64_t>(t));
        const OrbitGraph& g = gen.graph;
        REQUIRE(is_p21(g));

        // unique minimal over-critical set
        auto masks = [&] {
            std::vector<std::uint32_t> over;
            for (std::uint32_t mask = 1; mask < (1u << g.n_vertices()); ++mask) {
                int size = static_cast<int>(std::popcount(mask));
                if (g.induced_edge_count(mask) == 2 * size - 1) over.push_back(mask);
            }
            return over;
        }();
        REQUIRE_FALSE(masks.empty());
        int min_size = g.n_vertices() + 1;
        int min_count = 0;
        for (auto m : masks) {
            int size = static_cast<int>(std::popcount(m));
            if (size < min_size) {
                min_size = size;
                min_count = 1;
            } else if (size == min_size) {
                ++min_count;
            }
        }
        REQUIRE(min_count == 1);

        // 2-edge-connectivity
        REQUIRE(g.bridges().empty());

        // decomposition exists and is valid
        REQUIRE(valid_decomposition(g, tree_map_decompose(g)));

        // the circuit has a degree-3 vertex or is a single loop
        auto circuit = find_circuit(g);
        if (circuit.size() == 1) {
            bool loop_found = false;
            for (const Edge& e : g.edges())
                if (e.is_loop() && e.u == circuit[0]) loop_found = true;
            REQUIRE(loop_found);
        } else {
            std::uint32_t mask = 0;
            for (int v : circuit) mask |= 1u << v;
            bool has_degree3 = false;
            for (int v : circuit) {
                int deg = 0;
                for (const Edge& e : g.edges()) {
                    if (!(mask >> e.u & 1u) || !(mask >> e.v & 1u)) continue;
                    if (e.u == v) ++deg;
                    if (e.v == v) ++deg;
                }
                if (deg == 3) has_degree3 = true;
            }
            REQUIRE(has_degree3);
        }
    }
}

TEST_CASE("decomposition existence matches P(2,1) on counted graphs") {
    Rng rng(808);
    int p21_seen = 0, non_p21_seen = 0;
    for (int t = 0; t < 400 && (p21_seen < 40 || non_p21_seen < 40); ++t) {
        int n = 2 + static_cast<int>(rng.range(0, 4));
        std::vector<Edge> edges;
        for (int i = 0; i < 2 * n - 1; ++i) {
            int u = static_cast<int>(rng.range(0, n - 1));
            int v = rng.chance(0.15) ? u : static_cast<int>(rng.range(0, n - 1));
            edges.push_back({u, v, Gain(0, 0)});
        }
        OrbitGraph g(n, std::move(edges));
        bool p21 = is_p21(g);
        if (p21) {
            ++p21_seen;
            REQUIRE(valid_decomposition(g, tree_map_decompose(g)));
        } else {
            ++non_p21_seen;
            REQUIRE_THROWS_AS(tree_map_decompose(g), std::invalid_argument);
        }
    }
    REQUIRE(p21_seen >= 40);
    REQUIRE(non_p21_seen >= 40);
}
