// Periodic orbit graphs: directed multigraphs with integer-vector gains.
// An edge {u, v; m} traversed head-to-tail contributes gain -m. Edge identity
// is positional: parallel edges with equal gains are distinct objects, and
// certificates reference edges by index.
#pragma once

#include "prk/numeric.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace prk {

// Ambient space for a periodic framework. Torus kinds carry Z^2 gains,
// cylinder and circle kinds carry Z gains.
enum class TorusModel {
    Fixed,
    XVariable,
    YVariable,
    Angle,
    Cylinder,
    CircleFixed,
    CircleFlexible,
};

inline int gain_arity(TorusModel m) {
    switch (m) {
        case TorusModel::Cylinder:
        case TorusModel::CircleFixed:
        case TorusModel::CircleFlexible:
            return 1;
        default:
            return 2;
    }
}

inline std::string model_name(TorusModel m) {
    switch (m) {
        case TorusModel::Fixed: return "fixed";
        case TorusModel::XVariable: return "x-variable";
        case TorusModel::YVariable: return "y-variable";
        case TorusModel::Angle: return "angle";
        case TorusModel::Cylinder: return "cylinder";
        case TorusModel::CircleFixed: return "circle-fixed";
        case TorusModel::CircleFlexible: return "circle-flexible";
    }
    throw std::logic_error("model_name: bad enum");
}

inline std::optional<TorusModel> model_from_name(const std::string& s) {
    if (s == "fixed") return TorusModel::Fixed;
    if (s == "x-variable") return TorusModel::XVariable;
    if (s == "y-variable") return TorusModel::YVariable;
    if (s == "angle") return TorusModel::Angle;
    if (s == "cylinder") return TorusModel::Cylinder;
    if (s == "circle-fixed") return TorusModel::CircleFixed;
    if (s == "circle-flexible") return TorusModel::CircleFlexible;
    return std::nullopt;
}

struct Gain {
    Int x{0};
    Int y{0};

    Gain() = default;
    Gain(Int gx, Int gy) : x(std::move(gx)), y(std::move(gy)) {}
    Gain(long long gx, long long gy) : x(gx), y(gy) {}
    explicit Gain(long long gx) : x(gx), y(0) {}  // 1-component models

    bool is_zero() const { return x == 0 && y == 0; }

    Gain operator+(const Gain& o) const { return Gain(x + o.x, y + o.y); }
    Gain operator-(const Gain& o) const { return Gain(x - o.x, y - o.y); }
    Gain operator-() const { return Gain(-x, -y); }
    Gain& operator+=(const Gain& o) { x += o.x; y += o.y; return *this; }
    Gain& operator-=(const Gain& o) { x -= o.x; y -= o.y; return *this; }
    bool operator==(const Gain& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Gain& o) const { return !(*this == o); }
    bool operator<(const Gain& o) const {
        if (x != o.x) return x < o.x;
        return y < o.y;
    }

    Gain swapped() const { return Gain(y, x); }
};

inline std::string to_string(const Gain& g) {
    return "(" + g.x.str() + "," + g.y.str() + ")";
}

struct Edge {
    int u{0};  // tail
    int v{0};  // head
    Gain gain;

    bool is_loop() const { return u == v; }
};

class OrbitGraph {
public:
    OrbitGraph() = default;
    OrbitGraph(int n_vertices, std::vector<Edge> edges, int arity = 2)
        : n_(n_vertices), edges_(std::move(edges)), arity_(arity) {
        if (n_ < 0) throw std::invalid_argument("OrbitGraph: negative vertex count");
        if (arity_ != 1 && arity_ != 2)
            throw std::invalid_argument("OrbitGraph: gain arity must be 1 or 2");
        for (const Edge& e : edges_) {
            if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
                throw std::invalid_argument("OrbitGraph: vertex id out of range");
            if (arity_ == 1 && e.gain.y != 0)
                throw std::invalid_argument("OrbitGraph: 1-component gain expected");
        }
    }

    int n_vertices() const { return n_; }
    int n_edges() const { return static_cast<int>(edges_.size()); }
    int arity() const { return arity_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int id) const { return edges_.at(static_cast<size_t>(id)); }

    // Loop contributes 2 to the degree of its vertex.
    std::vector<int> degrees() const {
        std::vector<int> d(static_cast<size_t>(n_), 0);
        for (const Edge& e : edges_) {
            d[static_cast<size_t>(e.u)]++;
            d[static_cast<size_t>(e.v)]++;
        }
        return d;
    }

    std::vector<std::vector<int>> incidence() const {
        std::vector<std::vector<int>> inc(static_cast<size_t>(n_));
        for (int id = 0; id < n_edges(); ++id) {
            inc[static_cast<size_t>(edges_[static_cast<size_t>(id)].u)].push_back(id);
            if (!edges_[static_cast<size_t>(id)].is_loop())
                inc[static_cast<size_t>(edges_[static_cast<size_t>(id)].v)].push_back(id);
        }
        return inc;
    }

    bool is_connected() const {
        if (n_ <= 1) return true;
        auto comp = components();
        return *std::max_element(comp.begin(), comp.end()) == 0;
    }

    // Component index per vertex, numbered by first appearance.
    std::vector<int> components() const {
        std::vector<int> comp(static_cast<size_t>(n_), -1);
        auto inc = incidence();
        int next = 0;
        std::vector<int> stack;
        for (int s = 0; s < n_; ++s) {
            if (comp[static_cast<size_t>(s)] >= 0) continue;
            comp[static_cast<size_t>(s)] = next;
            stack.push_back(s);
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (int id : inc[static_cast<size_t>(v)]) {
                    const Edge& e = edges_[static_cast<size_t>(id)];
                    int w = e.u == v ? e.v : e.u;
                    if (comp[static_cast<size_t>(w)] < 0) {
                        comp[static_cast<size_t>(w)] = next;
                        stack.push_back(w);
                    }
                }
            }
            ++next;
        }
        return comp;
    }

    // Bridge = edge whose removal disconnects its component. Loops and edges
    // with a parallel twin are never bridges.
    std::vector<int> bridges() const {
        std::vector<int> result;
        std::vector<int> disc(static_cast<size_t>(n_), -1), low(static_cast<size_t>(n_), 0);
        auto inc = incidence();
        int timer = 0;
        // Iterative DFS; skips the arriving edge by id so parallel copies count.
        struct Frame { int v; int parent_edge; size_t it; };
        for (int s = 0; s < n_; ++s) {
            if (disc[static_cast<size_t>(s)] >= 0) continue;
            std::vector<Frame> stack{{s, -1, 0}};
            disc[static_cast<size_t>(s)] = low[static_cast<size_t>(s)] = timer++;
            while (!stack.empty()) {
                Frame& f = stack.back();
                auto& adj = inc[static_cast<size_t>(f.v)];
                if (f.it < adj.size()) {
                    int id = adj[f.it++];
                    const Edge& e = edges_[static_cast<size_t>(id)];
                    if (e.is_loop() || id == f.parent_edge) continue;
                    int w = e.u == f.v ? e.v : e.u;
                    if (disc[static_cast<size_t>(w)] < 0) {
                        disc[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] = timer++;
                        stack.push_back({w, id, 0});
                    } else {
                        low[static_cast<size_t>(f.v)] =
                            std::min(low[static_cast<size_t>(f.v)], disc[static_cast<size_t>(w)]);
                    }
                } else {
                    int v = f.v;
                    int pe = f.parent_edge;
                    stack.pop_back();
                    if (!stack.empty()) {
                        int p = stack.back().v;
                        low[static_cast<size_t>(p)] =
                            std::min(low[static_cast<size_t>(p)], low[static_cast<size_t>(v)]);
                        if (low[static_cast<size_t>(v)] > disc[static_cast<size_t>(p)])
                            result.push_back(pe);
                    }
                }
            }
        }
        std::sort(result.begin(), result.end());
        return result;
    }

    // Number of edges with both endpoints inside the subset mask (loops count once).
    int induced_edge_count(std::uint32_t mask) const {
        int count = 0;
        for (const Edge& e : edges_) {
            if ((mask >> e.u & 1u) && (mask >> e.v & 1u)) ++count;
        }
        return count;
    }

    OrbitGraph with_swapped_gains() const {
        std::vector<Edge> es = edges_;
        for (Edge& e : es) e.gain = e.gain.swapped();
        return OrbitGraph(n_, std::move(es), arity_);
    }

private:
    int n_{0};
    std::vector<Edge> edges_;
    int arity_{2};
};

}  // namespace prk
