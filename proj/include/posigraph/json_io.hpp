#pragma once

#include "posigraph/hypergraph.hpp"
#include "posigraph/rational.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace posigraph::io {

using Json = nlohmann::ordered_json; // insertion order keeps output byte-stable

inline Rational rational_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(Int(j.get<long long>()));
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    throw ParseError(where + ": expected a rational as \"p/q\" or integer");
}

inline Json rational_to_json(const Rational& q) { return format_rational(q); }

// ---------------------------------------------------------------------------
// Hypergraph format:
//   {"r": int, "n": int, "edges": [[int,...],...],
//    "weights": ["p/q",...]?, "edge_types": ["h"|"v",...]?, "n_left": int?}
// "n_left" marks a 2-graph as bipartite with left vertices 0..n_left-1.
// ---------------------------------------------------------------------------

inline Json to_json(const Hypergraph& h) {
    Json j;
    j["r"] = h.r();
    j["n"] = h.n_vertices();
    j["edges"] = Json::array();
    for (const auto& e : h.edges()) j["edges"].push_back(e);
    if (h.edge_types()) {
        Json types = Json::array();
        for (EdgeType t : *h.edge_types()) types.push_back(std::string(1, static_cast<char>(t)));
        j["edge_types"] = std::move(types);
    }
    return j;
}

inline Json to_json(const WeightedHypergraph& wh) {
    Json j = to_json(wh.base);
    Json w = Json::array();
    for (const auto& q : wh.weights) w.push_back(rational_to_json(q));
    j["weights"] = std::move(w);
    return j;
}

inline Json to_json(const BipartiteGraph& g) {
    Json j = to_json(to_hypergraph(g));
    j["n_left"] = g.n_left();
    return j;
}

inline Hypergraph hypergraph_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("r") || !j.contains("n") || !j.contains("edges"))
        throw ParseError("hypergraph: need keys r, n, edges");
    const unsigned r = j.at("r").get<unsigned>();
    const Vertex n = j.at("n").get<Vertex>();
    std::vector<Edge> edges;
    std::size_t idx = 0;
    for (const auto& ej : j.at("edges")) {
        if (!ej.is_array() || ej.size() != r)
            throw ParseError("edges[" + std::to_string(idx) + "]: expected " + std::to_string(r) + " vertices");
        Edge e;
        for (const auto& vj : ej) {
            if (!vj.is_number_unsigned() && !vj.is_number_integer())
                throw ParseError("edges[" + std::to_string(idx) + "]: vertex must be an integer");
            const long long v = vj.get<long long>();
            if (v < 0 || static_cast<Vertex>(v) >= n)
                throw ParseError("edges[" + std::to_string(idx) + "]: vertex " + std::to_string(v) +
                                 " out of range [0, " + std::to_string(n) + ")");
            e.push_back(static_cast<Vertex>(v));
        }
        edges.push_back(std::move(e));
        ++idx;
    }
    std::optional<std::vector<EdgeType>> types;
    if (j.contains("edge_types")) {
        std::vector<EdgeType> ts;
        for (const auto& tj : j.at("edge_types")) {
            const auto s = tj.get<std::string>();
            if (s != "h" && s != "v") throw ParseError("edge_types: expected \"h\" or \"v\"");
            ts.push_back(s == "h" ? EdgeType::horizontal : EdgeType::vertical);
        }
        types = std::move(ts);
    }
    try {
        return Hypergraph(r, n, std::move(edges), std::move(types));
    } catch (const PreconditionError& err) {
        throw ParseError(std::string("hypergraph: ") + err.what());
    }
}

inline std::variant<Hypergraph, WeightedHypergraph> parse_hypergraph(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        throw ParseError(std::string("invalid JSON at byte ") + std::to_string(err.byte) + ": " + err.what());
    }
    Hypergraph h = hypergraph_from_json(j);
    if (!j.contains("weights")) return h;
    std::vector<Rational> weights;
    std::size_t idx = 0;
    for (const auto& wj : j.at("weights"))
        weights.push_back(rational_from_json(wj, "weights[" + std::to_string(idx++) + "]"));
    if (weights.size() != h.n_edges()) throw ParseError("weights: length differs from edge count");
    return WeightedHypergraph(std::move(h), std::move(weights));
}

inline std::string serialize(const Hypergraph& h) { return to_json(h).dump(); }
inline std::string serialize(const WeightedHypergraph& wh) { return to_json(wh).dump(); }

inline BipartiteGraph bipartite_from_json(const Json& j) {
    const Hypergraph h = hypergraph_from_json(j);
    if (h.r() != 2 || !j.contains("n_left")) throw ParseError("bipartite graph: need r = 2 and n_left");
    const Vertex n_left = j.at("n_left").get<Vertex>();
    if (n_left > h.n_vertices()) throw ParseError("bipartite graph: n_left exceeds n");
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (const auto& e : h.edges()) {
        if (e[0] >= n_left || e[1] < n_left) throw ParseError("bipartite graph: edge not across the bipartition");
        edges.emplace_back(e[0], e[1] - n_left);
    }
    return BipartiteGraph(n_left, h.n_vertices() - n_left, std::move(edges));
}

} // namespace posigraph::io
