// Orbit-graph document I/O.
//
// Schema: {"model": <name>, "n": <int>, "edges": [{"u", "v", "gain"}...]}
// with gain a pair of integers, or a single integer for 1-dimensional models
// (cylinder, circle-fixed, circle-flexible). Serialization is canonical: keys
// in that order, edges in id order. Unknown extra keys are tolerated on read
// (export-svg stores optional positions next to the graph) and never written.
#pragma once

#include "prk/orbit_graph.hpp"

#include <json.hpp>

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace prk {

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct Document {
    TorusModel model{TorusModel::XVariable};
    OrbitGraph graph;
};

namespace detail {

inline Int int_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_number_integer())
        throw ParseError(std::string(what) + ": integer expected");
    if (j.is_number_unsigned() &&
        j.get<unsigned long long>() >
            static_cast<unsigned long long>(std::numeric_limits<long long>::max()))
        throw ParseError(std::string(what) + ": integer out of range");
    return Int(j.get<long long>());
}

inline long long int64_or_throw(const Int& v, const char* what) {
    if (v < std::numeric_limits<long long>::min() || v > std::numeric_limits<long long>::max())
        throw std::invalid_argument(std::string(what) + ": gain exceeds the JSON integer range");
    return v.convert_to<long long>();
}

}  // namespace detail

inline Document parse_document_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ParseError("document: object expected");
    if (!doc.contains("model") || !doc["model"].is_string())
        throw ParseError("document: missing model string");
    auto model = model_from_name(doc["model"].get<std::string>());
    if (!model) throw ParseError("document: unknown model \"" + doc["model"].get<std::string>() + "\"");
    if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long long>() < 0)
        throw ParseError("document: n must be a non-negative integer");
    long long n = doc["n"].get<long long>();
    if (n > 1000000) throw ParseError("document: n out of range");
    if (!doc.contains("edges") || !doc["edges"].is_array())
        throw ParseError("document: edges array expected");

    const int arity = gain_arity(*model);
    std::vector<Edge> edges;
    edges.reserve(doc["edges"].size());
    for (const auto& ej : doc["edges"]) {
        if (!ej.is_object()) throw ParseError("edge: object expected");
        if (!ej.contains("u") || !ej.contains("v") || !ej.contains("gain"))
            throw ParseError("edge: u, v and gain required");
        if (!ej["u"].is_number_integer() || !ej["v"].is_number_integer())
            throw ParseError("edge: integer endpoints expected");
        long long u = ej["u"].get<long long>();
        long long v = ej["v"].get<long long>();
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw ParseError("edge: vertex id out of range");
        const auto& gj = ej["gain"];
        if (!gj.is_array() || static_cast<int>(gj.size()) != arity)
            throw ParseError("edge: gain must be an array of " + std::to_string(arity));
        Gain gain;
        gain.x = detail::int_from_json(gj[0], "gain");
        if (arity == 2) gain.y = detail::int_from_json(gj[1], "gain");
        edges.push_back(Edge{static_cast<int>(u), static_cast<int>(v), std::move(gain)});
    }
    return Document{*model, OrbitGraph(static_cast<int>(n), std::move(edges), arity)};
}

inline Document parse_document(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("document: ") + e.what());
    }
    return parse_document_json(doc);
}

inline nlohmann::ordered_json serialize_document_json(const Document& d) {
    nlohmann::ordered_json doc;
    doc["model"] = model_name(d.model);
    doc["n"] = d.graph.n_vertices();
    auto& edges = doc["edges"] = nlohmann::ordered_json::array();
    for (const Edge& e : d.graph.edges()) {
        nlohmann::ordered_json ej;
        ej["u"] = e.u;
        ej["v"] = e.v;
        ej["gain"] = nlohmann::ordered_json::array();
        ej["gain"].push_back(detail::int64_or_throw(e.gain.x, "serialize"));
        if (d.graph.arity() == 2)
            ej["gain"].push_back(detail::int64_or_throw(e.gain.y, "serialize"));
        edges.push_back(std::move(ej));
    }
    return doc;
}

inline std::string serialize_document(const Document& d, int indent = -1) {
    return serialize_document_json(d).dump(indent);
}

}  // namespace prk
