// Acceptance suite. Each criterion is one test case; a listener prints one
// PASS/FAIL line per criterion. All comparisons are exact: the arithmetic is
// rational or integer throughout, so there are no tolerances to tune.
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <iostream>

using namespace prk;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

class CriterionListener : public Catch::EventListenerBase {
public:
    using Catch::EventListenerBase::EventListenerBase;
    void testCaseEnded(const Catch::TestCaseStats& stats) override {
        const std::string& name = stats.testInfo->name;
        if (name.rfind("criterion", 0) == 0)
            std::cout << (stats.totals.assertions.allOk() ? "PASS" : "FAIL") << " " << name
                      << std::endl;
    }
};
CATCH_REGISTER_LISTENER(CriterionListener)

OrbitGraph worked_example() {
    return OrbitGraph(3, {{0, 1, Gain(1, 2)},
                          {1, 2, Gain(0, 1)},
                          {0, 2, Gain(3, 1)},
                          {2, 0, Gain(1, -1)}});
}

OrbitGraph blocked_bunny() {
    return OrbitGraph(3, {{0, 1, Gain(0, 0)},
                          {0, 2, Gain(0, 0)},
                          {0, 2, Gain(1, 0)},
                          {1, 2, Gain(0, 0)},
                          {1, 2, Gain(1, 0)}});
}

}  // namespace

TEST_CASE("criterion 1: published T-gain table reproduced exactly") {
    OrbitGraph g = worked_example();
    TGainTable table = t_gain_procedure(g, {0, 3}, 2);  // warm-up

    double best = 1e9;
    for (int run = 0; run < 5; ++run) {
        auto start = Clock::now();
        table = t_gain_procedure(g, {0, 3}, 2);
        best = std::min(best, seconds_since(start));
    }
    REQUIRE(table.potentials[2] == Gain(0, 0));
    REQUIRE(table.potentials[0] == Gain(1, -1));
    REQUIRE(table.potentials[1] == Gain(2, 1));
    REQUIRE(table.t_gains == std::vector<Gain>{Gain(0, 0), Gain(2, 2), Gain(4, 0), Gain(0, 0)});
    REQUIRE(best < 0.001);  // < 1 ms
}

TEST_CASE("criterion 2: reduction decision equals the rank oracle") {
    auto start = Clock::now();
    Rng rng(20260811);
    int disagreements = 0;
    int total = 0;
    int rigid_count = 0;
    for (int t = 0; t < 500; ++t) {
        int n = t % 10 == 9 ? 1 : 2 + t % 7;
        auto gen = generate(n, 90000 + static_cast<std::uint64_t>(t));
        OrbitGraph g = t % 2 ? prktest::perturb(gen.graph, rng) : gen.graph;
        REQUIRE(g.n_edges() == 2 * g.n_vertices() - 1);
        bool combinatorial = decide(g, TorusModel::XVariable).rigid();
        bool oracle = is_inf_rigid(g, TorusModel::XVariable, 3, 777 + static_cast<std::uint64_t>(t));
        if (combinatorial != oracle) ++disagreements;
        rigid_count += combinatorial;
        ++total;
    }
    CAPTURE(total, rigid_count);
    REQUIRE(total >= 500);
    REQUIRE(disagreements == 0);
    REQUIRE(rigid_count > 100);          // the mix really is mixed
    REQUIRE(total - rigid_count > 100);
    REQUIRE(seconds_since(start) < 120.0);
}

TEST_CASE("criterion 3: fixed-torus characterization") {
    Rng rng(333);
    int tested = 0;
    int disagreements = 0;
    while (tested < 200) {
        int n = 2 + static_cast<int>(rng.range(0, 5));
        auto g = prktest::random_22_tight(rng, n);
        if (!g) continue;
        bool combinatorial = is_constructive(*g).satisfied;
        bool oracle = is_inf_rigid(*g, TorusModel::Fixed, 3, 31 + static_cast<std::uint64_t>(tested));
        if (combinatorial != oracle) ++disagreements;
        ++tested;
    }
    REQUIRE(tested >= 200);
    REQUIRE(disagreements == 0);
}

TEST_CASE("criterion 4: t-gain transform preserves rank") {
    Rng rng(444);
    int tested = 0;
    while (tested < 100) {
        OrbitGraph g = prktest::random_multigraph(rng);
        TGainTable table = t_gain_auto(g);
        OrbitGraph tg = apply_t_gains(g, table);
        Rng prng(6000 + static_cast<std::uint64_t>(tested));
        for (int attempt = 0; attempt < 16; ++attempt) {
            try {
                Placement p = random_placement(g, TorusModel::XVariable, prng);
                int r1 = matrix_rank(build_matrix(g, p, TorusModel::XVariable, true).rows);
                Placement shifted = t_gain_shifted_placement(g, table, p);
                int r2 = matrix_rank(build_matrix(tg, shifted, TorusModel::XVariable, true).rows);
                REQUIRE(r1 == r2);
                ++tested;
                break;
            } catch (const ZeroLengthEdge&) {
            }
        }
    }
    REQUIRE(tested >= 100);
}

TEST_CASE("criterion 5: certificate round trip with rank growth") {
    int verified = 0;
    for (int n = 1; n <= 8; ++n) {
        for (int seed = 0; seed < 63; ++seed) {
            auto gen = generate(n, static_cast<std::uint64_t>(1000 * n + seed));
            ReduceOutcome red = reduce(gen.graph);
            CAPTURE(n, seed);
            REQUIRE(red.ok);
            REQUIRE(verify_certificate(gen.graph, red.certificate).ok);
            // each forward move adds exactly 2 to the generic rank
            OrbitGraph h = certificate_base_graph(red.certificate);
            int rank = generic_rank(h, TorusModel::XVariable, 2, 11);
            REQUIRE(rank == 1);
            for (const Move& mv : red.certificate.moves) {
                h = apply_move(h, mv);
                int next = generic_rank(h, TorusModel::XVariable, 2, 11);
                REQUIRE(next == rank + 2);
                rank = next;
            }
            ++verified;
        }
    }
    REQUIRE(verified >= 500);
}

TEST_CASE("criterion 6: bunny ears needs the loop move") {
    auto start = Clock::now();
    OrbitGraph bunny = blocked_bunny();

    DecideResult dec = decide(bunny, TorusModel::XVariable);
    REQUIRE(dec.rigid());
    REQUIRE(dec.certificate);
    bool has_h2c = false;
    for (const Move& mv : dec.certificate->moves) has_h2c |= mv.kind == MoveKind::H2c;
    REQUIRE(has_h2c);
    REQUIRE(is_inf_rigid(bunny, TorusModel::XVariable));

    // exhaustive first-step search: every inverse H1/H2a/H2b lands outside
    // the class, so only the loop-adding move can start a reduction
    for (const auto& cand : detail::enumerate_inverse_moves(bunny)) {
        if (cand.forward.kind == MoveKind::H2c) continue;
        OrbitGraph next = detail::apply_inverse(bunny, cand);
        REQUIRE_FALSE((is_p21(next) && is_tx_constructive(next).satisfied));
    }
    REQUIRE(seconds_since(start) < 1.0);
}

TEST_CASE("criterion 7: pebble game against exhaustive counting") {
    Rng rng(77777);
    int tested = 0;
    int disagreements = 0;
    for (int t = 0; t < 1000; ++t) {
        OrbitGraph g = prktest::random_multigraph(rng, 6, 11);
        for (int ell = 1; ell <= 3; ++ell) {
            if (is_sparse(g, SparsityParams{2, ell}) != prktest::brute_force_sparse(g, ell))
                ++disagreements;
            if (is_tight(g, SparsityParams{2, ell}) != prktest::brute_force_tight(g, ell))
                ++disagreements;
        }
        ++tested;
    }
    REQUIRE(tested >= 1000);
    REQUIRE(disagreements == 0);
}

TEST_CASE("criterion 8: cylinder decisions match the lifted torus") {
    Rng rng(88);
    int tested = 0;
    int disagreements = 0;
    while (tested < 100) {
        int n = 1 + static_cast<int>(rng.range(0, 4));
        OrbitGraph g = tested % 3 == 0
                           ? generate(n, 70000 + static_cast<std::uint64_t>(tested),
                                      TorusModel::Cylinder)
                                 .graph
                           : prktest::random_cylinder_graph(rng, n);
        OrbitGraph lifted = lift_cylinder(g);
        // gain-condition level
        if (decide(g, TorusModel::Cylinder).rigid() !=
            decide(lifted, TorusModel::XVariable).rigid())
            ++disagreements;
        // rank level: direct cylinder matrix vs lifted torus matrix
        if (is_inf_rigid(g, TorusModel::Cylinder, 3, 500 + static_cast<std::uint64_t>(tested)) !=
            is_inf_rigid(lifted, TorusModel::XVariable, 3, 600 + static_cast<std::uint64_t>(tested)))
            ++disagreements;
        ++tested;
    }
    REQUIRE(tested >= 100);
    REQUIRE(disagreements == 0);
}

TEST_CASE("criterion 9: structural lemmas on generated graphs") {
    Rng rng(99);
    int tested = 0;
    for (int t = 0; t < 150; ++t) {
        int n = 1 + t % 8;
        auto gen = generate(n, 50000 + static_cast<std::uint64_t>(t));
        // gain perturbations keep the combinatorial structure
        OrbitGraph g = gen.graph;
        if (t % 3 == 0 && g.n_edges() > 0) {
            std::vector<Edge> edges = g.edges();
            int which = static_cast<int>(rng.range(0, g.n_edges() - 1));
            edges[static_cast<size_t>(which)].gain = Gain(rng.range(-2, 2), rng.range(-2, 2));
            g = OrbitGraph(g.n_vertices(), std::move(edges));
        }
        REQUIRE(is_p21(g));

        // unique minimal over-critical set
        int min_size = g.n_vertices() + 1;
        int min_count = 0;
        for (std::uint32_t mask = 1; mask < (1u << g.n_vertices()); ++mask) {
            int size = static_cast<int>(std::popcount(mask));
            if (g.induced_edge_count(mask) != 2 * size - 1) continue;
            if (size < min_size) {
                min_size = size;
                min_count = 1;
            } else if (size == min_size) {
                ++min_count;
            }
        }
        REQUIRE(min_count == 1);

        // bridge-free
        REQUIRE(g.bridges().empty());

        // tree + connected map decomposition
        REQUIRE(valid_decomposition(g, tree_map_decompose(g)));
        ++tested;
    }
    REQUIRE(tested >= 150);
}
