// Exact-arithmetic rigidity matrices and rank oracles.
//
// Row for an edge {v_i, v_j; m}: the edge vector d = p_i - p_j - m L under
// v_i, its negation under v_j (loop contributions cancel by summation), and
// for variable models one lattice column with entry (m Ldot) . d. With
// Ldot = [[1,0],[0,0]] this reduces to the x-variable entry
// (m)_x [p_i - (p_j + m L)]_x; the y-variable, flexible-angle and cylinder
// columns come from the matching Ldot. Generic rank is the maximum of exact
// ranks over seeded random rational placements.
#pragma once

#include "prk/numeric.hpp"
#include "prk/orbit_graph.hpp"
#include "prk/tgain.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace prk {

struct Placement {
    // Positions per vertex; circle models use only the first coordinate.
    std::vector<std::array<Rational, 2>> positions;
    // Lattice rows are the period generators. Torus models use the full
    // 2x2 matrix with lattice[0][1] = 0; cylinder and circle models use the
    // single entry lattice[0][0] > 0.
    std::array<std::array<Rational, 2>, 2> lattice{};
    // Derivative of the lattice in its one variable parameter (zero for the
    // fixed models).
    std::array<std::array<Rational, 2>, 2> lattice_velocity{};
};

struct RigidityMatrix {
    Matrix rows;
    int vertex_cols{0};   // 2|V| for torus/cylinder models, |V| for circles
    bool has_lattice_col{false};
    TorusModel model{TorusModel::XVariable};

    int cols() const { return vertex_cols + (has_lattice_col ? 1 : 0); }
};

class ZeroLengthEdge : public std::runtime_error {
public:
    explicit ZeroLengthEdge(int edge_id)
        : std::runtime_error("zero-length edge " + std::to_string(edge_id)), edge(edge_id) {}
    int edge;
};

namespace detail {

inline bool is_circle(TorusModel m) {
    return m == TorusModel::CircleFixed || m == TorusModel::CircleFlexible;
}

inline bool has_lattice_column(TorusModel m) {
    switch (m) {
        case TorusModel::XVariable:
        case TorusModel::YVariable:
        case TorusModel::Angle:
        case TorusModel::Cylinder:
        case TorusModel::CircleFlexible:
            return true;
        default:
            return false;
    }
}

inline std::array<Rational, 2> gain_times(const Gain& m,
                                          const std::array<std::array<Rational, 2>, 2>& L) {
    Rational mx(m.x), my(m.y);
    return {mx * L[0][0] + my * L[1][0], mx * L[0][1] + my * L[1][1]};
}

}  // namespace detail

// Full-rank threshold for infinitesimal rigidity: translations (and nothing
// else) must span the kernel.
inline int rigidity_rank_threshold(TorusModel model, int n_vertices) {
    switch (model) {
        case TorusModel::Fixed: return 2 * n_vertices - 2;
        case TorusModel::XVariable:
        case TorusModel::YVariable:
        case TorusModel::Angle:
        case TorusModel::Cylinder: return 2 * n_vertices - 1;
        case TorusModel::CircleFixed: return n_vertices - 1;
        case TorusModel::CircleFlexible: return n_vertices;
    }
    throw std::logic_error("rigidity_rank_threshold: bad enum");
}

// `allow_degenerate_loops` admits zero rows for loops whose gain is zero;
// those edges have zero length at every placement, so resampling can never
// help and the rank oracle treats them as identically dependent rows.
inline RigidityMatrix build_matrix(const OrbitGraph& g, const Placement& placement,
                                   TorusModel model, bool allow_degenerate_loops = false) {
    if (g.arity() != gain_arity(model))
        throw std::invalid_argument("build_matrix: gain arity does not match model");
    if (static_cast<int>(placement.positions.size()) != g.n_vertices())
        throw std::invalid_argument("build_matrix: placement size mismatch");

    const bool circle = detail::is_circle(model);
    RigidityMatrix rm;
    rm.model = model;
    rm.vertex_cols = circle ? g.n_vertices() : 2 * g.n_vertices();
    rm.has_lattice_col = detail::has_lattice_column(model);
    rm.rows.reserve(static_cast<size_t>(g.n_edges()));

    for (int id = 0; id < g.n_edges(); ++id) {
        const Edge& e = g.edge(id);
        std::vector<Rational> row(static_cast<size_t>(rm.cols()), Rational(0));
        if (circle) {
            Rational d = placement.positions[static_cast<size_t>(e.u)][0] -
                         placement.positions[static_cast<size_t>(e.v)][0] -
                         Rational(e.gain.x) * placement.lattice[0][0];
            if (d == 0 && !(allow_degenerate_loops && e.is_loop() && e.gain.is_zero()))
                throw ZeroLengthEdge(id);
            row[static_cast<size_t>(e.u)] += d;
            row[static_cast<size_t>(e.v)] -= d;
            if (rm.has_lattice_col)
                row[static_cast<size_t>(rm.vertex_cols)] = Rational(e.gain.x) * d;
        } else {
            std::array<Rational, 2> mL;
            std::array<Rational, 2> mLdot;
            if (model == TorusModel::Cylinder) {
                // One circumference generator; gains never touch the second
                // lattice row.
                mL = {Rational(e.gain.x) * placement.lattice[0][0], Rational(0)};
                mLdot = {Rational(e.gain.x), Rational(0)};
            } else {
                mL = detail::gain_times(e.gain, placement.lattice);
                mLdot = detail::gain_times(e.gain, placement.lattice_velocity);
            }
            std::array<Rational, 2> d{
                placement.positions[static_cast<size_t>(e.u)][0] -
                    placement.positions[static_cast<size_t>(e.v)][0] - mL[0],
                placement.positions[static_cast<size_t>(e.u)][1] -
                    placement.positions[static_cast<size_t>(e.v)][1] - mL[1]};
            if (d[0] == 0 && d[1] == 0 &&
                !(allow_degenerate_loops && e.is_loop() && e.gain.is_zero()))
                throw ZeroLengthEdge(id);
            row[static_cast<size_t>(2 * e.u)] += d[0];
            row[static_cast<size_t>(2 * e.u + 1)] += d[1];
            row[static_cast<size_t>(2 * e.v)] -= d[0];
            row[static_cast<size_t>(2 * e.v + 1)] -= d[1];
            if (rm.has_lattice_col)
                row[static_cast<size_t>(rm.vertex_cols)] = mLdot[0] * d[0] + mLdot[1] * d[1];
        }
        rm.rows.push_back(std::move(row));
    }
    return rm;
}

// Random rational with numerator and denominator in [1, 10^6]; optional sign.
inline Rational random_rational(Rng& rng, bool signed_value = false) {
    long long num = rng.range(1, 1000000);
    long long den = rng.range(1, 1000000);
    Rational r(num, den);
    if (signed_value && rng.chance(0.5)) r = -r;
    return r;
}

inline Placement random_placement(const OrbitGraph& g, TorusModel model, Rng& rng) {
    Placement p;
    p.positions.resize(static_cast<size_t>(g.n_vertices()));
    for (auto& pos : p.positions) {
        pos[0] = random_rational(rng);
        pos[1] = detail::is_circle(model) ? Rational(0) : random_rational(rng);
    }
    switch (model) {
        case TorusModel::Fixed:
        case TorusModel::XVariable:
        case TorusModel::YVariable: {
            p.lattice[0][0] = random_rational(rng);           // x > 0
            p.lattice[0][1] = 0;
            p.lattice[1][0] = random_rational(rng, true);     // y1
            p.lattice[1][1] = random_rational(rng);           // y2 > 0
            if (model == TorusModel::XVariable) p.lattice_velocity[0][0] = 1;
            if (model == TorusModel::YVariable) p.lattice_velocity[1][1] = 1;
            break;
        }
        case TorusModel::Angle: {
            // Rational point on the unit circle via the tangent half-angle
            // map, scaled by the fixed generator lengths a and b. The lattice
            // column is a positive multiple of the true theta-derivative,
            // which leaves the rank unchanged.
            Rational a = random_rational(rng);
            Rational b = random_rational(rng);
            Rational t = random_rational(rng, true);
            Rational den = 1 + t * t;
            Rational c = (1 - t * t) / den;
            Rational s = 2 * t / den;
            p.lattice[0][0] = a;
            p.lattice[0][1] = 0;
            p.lattice[1][0] = b * c;
            p.lattice[1][1] = b * s;
            p.lattice_velocity[1][0] = -b * s;
            p.lattice_velocity[1][1] = b * c;
            break;
        }
        case TorusModel::Cylinder:
        case TorusModel::CircleFixed:
        case TorusModel::CircleFlexible: {
            p.lattice[0][0] = random_rational(rng);           // circumference > 0
            break;
        }
    }
    return p;
}

// Exact rank at `trials` random placements, keeping the maximum. Placements
// that collide into a removable zero-length edge are resampled.
inline int generic_rank(const OrbitGraph& g, TorusModel model, int trials = 3,
                        std::uint64_t seed = 1) {
    if (trials < 1) throw std::invalid_argument("generic_rank: trials must be positive");
    int best = 0;
    for (int t = 0; t < trials; ++t) {
        Rng rng(seed * 1000003ULL + static_cast<std::uint64_t>(t));
        for (int attempt = 0; attempt < 64; ++attempt) {
            try {
                Placement p = random_placement(g, model, rng);
                RigidityMatrix rm = build_matrix(g, p, model, /*allow_degenerate_loops=*/true);
                int r = matrix_rank(rm.rows);
                if (r > best) best = r;
                break;
            } catch (const ZeroLengthEdge&) {
                // resample
            }
        }
    }
    return best;
}

inline bool is_inf_rigid(const OrbitGraph& g, TorusModel model, int trials = 3,
                         std::uint64_t seed = 1) {
    return generic_rank(g, model, trials, seed) == rigidity_rank_threshold(model, g.n_vertices());
}

struct MotionSpace {
    int dimension{0};
    std::vector<std::vector<Rational>> basis;  // length = matrix cols
};

// Exact kernel of the rigidity matrix: the space of infinitesimal motions.
inline MotionSpace motion_space(const OrbitGraph& g, const Placement& placement,
                                TorusModel model) {
    RigidityMatrix rm = build_matrix(g, placement, model);
    MotionSpace ms;
    if (rm.rows.empty()) {
        // No constraints: every velocity assignment is a motion.
        rm.rows.push_back(std::vector<Rational>(static_cast<size_t>(rm.cols()), Rational(0)));
    }
    ms.basis = matrix_kernel(rm.rows, rm.cols());
    ms.dimension = static_cast<int>(ms.basis.size());
    return ms;
}

// Placement for the T-gain equivalent graph: p'_i = p_i + m(v_i, T) L, with
// the potential read in lattice coordinates and the lattice unchanged.
inline Placement t_gain_shifted_placement(const OrbitGraph& g, const TGainTable& table,
                                          const Placement& placement) {
    if (static_cast<int>(table.potentials.size()) != g.n_vertices())
        throw std::invalid_argument("t_gain_shifted_placement: table size mismatch");
    for (size_t i = 0; i < table.t_gains.size(); ++i) {
        const Edge& e = g.edge(static_cast<int>(i));
        Gain expect = table.potentials[static_cast<size_t>(e.u)] + e.gain -
                      table.potentials[static_cast<size_t>(e.v)];
        if (expect != table.t_gains[i])
            throw std::invalid_argument("t_gain_shifted_placement: inconsistent table");
    }
    Placement shifted = placement;
    for (int v = 0; v < g.n_vertices(); ++v) {
        auto mL = detail::gain_times(table.potentials[static_cast<size_t>(v)], placement.lattice);
        shifted.positions[static_cast<size_t>(v)][0] += mL[0];
        shifted.positions[static_cast<size_t>(v)][1] += mL[1];
    }
    return shifted;
}

}  // namespace prk
