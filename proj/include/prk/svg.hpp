// SVG rendering of a derived framework fragment: the orbit placement is
// translated through the window cells p(v) + z L, vertices drawn as circles,
// edges as segments, and the unit lattice cell outlined.
#pragma once

#include "prk/derived.hpp"
#include "prk/rigidity.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <string>
#include <vector>

namespace prk {

inline std::string render_svg(const OrbitGraph& g, const Placement& placement,
                              const DerivedFragment& frag) {
    auto pos_of = [&](int v, const std::array<long long, 2>& z) {
        double x = placement.positions[static_cast<size_t>(v)][0].convert_to<double>() +
                   static_cast<double>(z[0]) * placement.lattice[0][0].convert_to<double>() +
                   static_cast<double>(z[1]) * placement.lattice[1][0].convert_to<double>();
        double y = placement.positions[static_cast<size_t>(v)][1].convert_to<double>() +
                   static_cast<double>(z[0]) * placement.lattice[0][1].convert_to<double>() +
                   static_cast<double>(z[1]) * placement.lattice[1][1].convert_to<double>();
        return std::array<double, 2>{x, y};
    };

    double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
    bool first = true;
    std::vector<std::array<double, 2>> lattice_cell{
        {0, 0},
        {placement.lattice[0][0].convert_to<double>(), placement.lattice[0][1].convert_to<double>()},
        {placement.lattice[0][0].convert_to<double>() + placement.lattice[1][0].convert_to<double>(),
         placement.lattice[0][1].convert_to<double>() + placement.lattice[1][1].convert_to<double>()},
        {placement.lattice[1][0].convert_to<double>(), placement.lattice[1][1].convert_to<double>()}};
    auto track = [&](const std::array<double, 2>& p) {
        if (first) {
            min_x = max_x = p[0];
            min_y = max_y = p[1];
            first = false;
        } else {
            min_x = std::min(min_x, p[0]);
            max_x = std::max(max_x, p[0]);
            min_y = std::min(min_y, p[1]);
            max_y = std::max(max_y, p[1]);
        }
    };
    for (const auto& dv : frag.vertices) track(pos_of(dv.orbit_vertex, dv.z));
    for (const auto& c : lattice_cell) track(c);

    const double scale = 80.0;
    const double margin = 24.0;
    auto tx = [&](double x) { return margin + (x - min_x) * scale; };
    auto ty = [&](double y) { return margin + (max_y - y) * scale; };  // flip y for svg

    std::ostringstream svg;
    svg.setf(std::ios::fixed);
    svg.precision(2);
    double width = (max_x - min_x) * scale + 2 * margin;
    double height = (max_y - min_y) * scale + 2 * margin;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    svg << "  <polygon points=\"";
    for (size_t i = 0; i < lattice_cell.size(); ++i) {
        if (i) svg << ' ';
        svg << tx(lattice_cell[i][0]) << ',' << ty(lattice_cell[i][1]);
    }
    svg << "\" fill=\"none\" stroke=\"#4444cc\" stroke-dasharray=\"6 4\" stroke-width=\"1.2\"/>\n";

    for (const auto& de : frag.edges) {
        const Edge& e = g.edge(de.orbit_edge);
        std::array<long long, 2> head_z{
            de.z[0] + e.gain.x.convert_to<long long>(),
            de.z[1] + e.gain.y.convert_to<long long>()};
        auto a = pos_of(e.u, de.z);
        auto b = pos_of(e.v, head_z);
        svg << "  <line x1=\"" << tx(a[0]) << "\" y1=\"" << ty(a[1]) << "\" x2=\"" << tx(b[0])
            << "\" y2=\"" << ty(b[1]) << "\" stroke=\"#333\" stroke-width=\"1.5\"/>\n";
    }
    for (const auto& dv : frag.vertices) {
        auto p = pos_of(dv.orbit_vertex, dv.z);
        svg << "  <circle cx=\"" << tx(p[0]) << "\" cy=\"" << ty(p[1])
            << "\" r=\"4\" fill=\"#cc5500\" stroke=\"#222\" stroke-width=\"0.8\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace prk
