// Finite fragments of the derived periodic graph G^m. The full derived graph
// has vertex set V x Z^2; a fragment restricts the translation coordinates to
// a finite window and keeps exactly the edges whose both endpoints land inside.
#pragma once

#include "prk/orbit_graph.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

namespace prk {

struct DerivedVertex {
    int orbit_vertex;
    std::array<long long, 2> z;
};

struct DerivedEdge {
    int orbit_edge;
    std::array<long long, 2> z;  // tail cell; head cell is z + gain
};

struct DerivedFragment {
    std::vector<std::array<long long, 2>> window;
    std::vector<DerivedVertex> vertices;
    std::vector<DerivedEdge> edges;
};

// Enumerates V x window and every edge (e, z) with z and z + m_e in the window.
inline DerivedFragment derive(const OrbitGraph& g,
                              std::vector<std::array<long long, 2>> window) {
    if (window.empty()) throw std::invalid_argument("derive: empty window");
    std::sort(window.begin(), window.end());
    window.erase(std::unique(window.begin(), window.end()), window.end());

    DerivedFragment frag;
    frag.window = window;
    frag.vertices.reserve(window.size() * static_cast<size_t>(g.n_vertices()));
    for (int v = 0; v < g.n_vertices(); ++v)
        for (const auto& z : window) frag.vertices.push_back({v, z});

    auto in_window = [&window](const std::array<long long, 2>& z) {
        return std::binary_search(window.begin(), window.end(), z);
    };
    for (int id = 0; id < g.n_edges(); ++id) {
        const Edge& e = g.edge(id);
        // Window coordinates stay in int64; gains this large are rejected
        // rather than wrapped.
        if (e.gain.x < -(1LL << 40) || e.gain.x > (1LL << 40) ||
            e.gain.y < -(1LL << 40) || e.gain.y > (1LL << 40))
            throw std::invalid_argument("derive: gain too large for window arithmetic");
        long long mx = e.gain.x.convert_to<long long>();
        long long my = e.gain.y.convert_to<long long>();
        for (const auto& z : window) {
            std::array<long long, 2> head{z[0] + mx, z[1] + my};
            if (in_window(head)) frag.edges.push_back({id, z});
        }
    }
    return frag;
}

// Rectangular window {0..w-1} x {0..h-1}.
inline std::vector<std::array<long long, 2>> box_window(int w, int h) {
    if (w < 1 || h < 1) throw std::invalid_argument("box_window: dimensions must be positive");
    std::vector<std::array<long long, 2>> window;
    window.reserve(static_cast<size_t>(w) * static_cast<size_t>(h));
    for (int i = 0; i < w; ++i)
        for (int j = 0; j < h; ++j) window.push_back({i, j});
    return window;
}

}  // namespace prk
