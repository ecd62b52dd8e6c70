#pragma once

#include "posigraph/certificates.hpp"
#include "posigraph/decomposition.hpp"
#include "posigraph/density.hpp"
#include "posigraph/json_io.hpp"

#include <optional>
#include <string>

namespace posigraph::io {

// Pipeline targets above this edge count are not embedded literally; they are
// reconstructed from the generator graph on load.
constexpr std::size_t kTargetEmbedCap = 20000;

// ---------------------------------------------------------------------------
// Step functions
//   sym:  {"r":int,"n":int,"entries":["p/q"... n^r row-major],"measures":[...]?}
//   bip:  {"n":int,"N":int,"mode":"exact"|"real","entries":[...]}
//         real entries are ["lo","hi"] pairs
// ---------------------------------------------------------------------------

inline Json to_json(const SymStepFunction& h) {
    Json j;
    j["r"] = h.r();
    j["n"] = h.n();
    Json entries = Json::array();
    for (const auto& q : h.to_dense()) entries.push_back(rational_to_json(q));
    j["entries"] = std::move(entries);
    if (h.has_custom_measures()) {
        Json m = Json::array();
        for (const auto& q : h.measures()) m.push_back(rational_to_json(q));
        j["measures"] = std::move(m);
    }
    return j;
}

inline SymStepFunction sym_step_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("r") || !j.contains("n") || !j.contains("entries"))
        throw ParseError("step function: need keys r, n, entries");
    const unsigned r = j.at("r").get<unsigned>();
    const Vertex n = j.at("n").get<Vertex>();
    std::vector<Rational> dense;
    std::size_t idx = 0;
    for (const auto& e : j.at("entries"))
        dense.push_back(rational_from_json(e, "entries[" + std::to_string(idx++) + "]"));
    SymStepFunction h = SymStepFunction::from_dense(r, n, dense);
    if (j.contains("measures")) {
        std::vector<Rational> m;
        idx = 0;
        for (const auto& e : j.at("measures"))
            m.push_back(rational_from_json(e, "measures[" + std::to_string(idx++) + "]"));
        h.set_measures(std::move(m));
    }
    return h;
}

inline Json to_json(const BipStepFunction& f) {
    Json j;
    j["n"] = f.n();
    j["N"] = f.N();
    j["mode"] = f.is_exact() ? "exact" : "real";
    Json entries = Json::array();
    if (f.is_exact()) {
        for (const auto& q : f.exact_entries()) entries.push_back(rational_to_json(q));
    } else {
        for (const auto& iv : f.real_entries())
            entries.push_back(Json::array({rational_to_json(iv.lo), rational_to_json(iv.hi)}));
    }
    j["entries"] = std::move(entries);
    return j;
}

inline BipStepFunction bip_step_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("N") || !j.contains("entries"))
        throw ParseError("step function: need keys n, N, entries");
    const Vertex n = j.at("n").get<Vertex>();
    const Vertex N = j.at("N").get<Vertex>();
    const std::string mode = j.value("mode", "exact");
    std::size_t idx = 0;
    if (mode == "exact") {
        std::vector<Rational> entries;
        for (const auto& e : j.at("entries"))
            entries.push_back(rational_from_json(e, "entries[" + std::to_string(idx++) + "]"));
        return BipStepFunction::exact(n, N, std::move(entries));
    }
    if (mode != "real") throw ParseError("step function: mode must be \"exact\" or \"real\"");
    std::vector<RationalInterval> entries;
    for (const auto& e : j.at("entries")) {
        if (!e.is_array() || e.size() != 2)
            throw ParseError("entries[" + std::to_string(idx) + "]: real entries are [lo, hi]");
        entries.emplace_back(rational_from_json(e[0], "entries lo"), rational_from_json(e[1], "entries hi"));
        ++idx;
    }
    return BipStepFunction::real(n, N, std::move(entries));
}

// ---------------------------------------------------------------------------
// Decompositions: {"n","r","N","lambda":[...],"B":[[row]... n rows of N]}
// ---------------------------------------------------------------------------

inline Json to_json(const Decomposition& d) {
    Json j;
    j["n"] = d.n;
    j["r"] = d.r;
    j["N"] = d.N;
    Json lambda = Json::array();
    for (const auto& q : d.lambda) lambda.push_back(rational_to_json(q));
    j["lambda"] = std::move(lambda);
    Json rows = Json::array();
    for (Vertex i = 0; i < d.n; ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < d.N; ++k) row.push_back(rational_to_json(d.b(i, k)));
        rows.push_back(std::move(row));
    }
    j["B"] = std::move(rows);
    return j;
}

inline Decomposition decomposition_from_json(const Json& j) {
    Decomposition d;
    d.n = j.at("n").get<Vertex>();
    d.r = j.at("r").get<unsigned>();
    d.N = j.at("N").get<std::size_t>();
    for (const auto& e : j.at("lambda")) d.lambda.push_back(rational_from_json(e, "lambda"));
    if (d.lambda.size() != d.N) throw ParseError("decomposition: lambda length differs from N");
    d.B.reserve(static_cast<std::size_t>(d.n) * d.N);
    for (const auto& row : j.at("B")) {
        if (row.size() != d.N) throw ParseError("decomposition: B row length differs from N");
        for (const auto& e : row) d.B.push_back(rational_from_json(e, "B"));
    }
    if (d.B.size() != static_cast<std::size_t>(d.n) * d.N)
        throw ParseError("decomposition: B must have n rows");
    return d;
}

// ---------------------------------------------------------------------------
// Involutions and certificates
// ---------------------------------------------------------------------------

inline Json to_json(const StableInvolution& s) {
    Json j;
    j["fixed"] = s.fixed;
    Json pairs = Json::array();
    for (const auto& [p, m] : s.pairs) pairs.push_back(Json::array({p, m}));
    j["pairs"] = std::move(pairs);
    return j;
}

inline StableInvolution involution_from_json(const Json& j) {
    StableInvolution s;
    for (const auto& v : j.at("fixed")) s.fixed.push_back(v.get<Vertex>());
    for (const auto& p : j.at("pairs")) {
        if (!p.is_array() || p.size() != 2) throw ParseError("involution: pairs are [plus, minus]");
        s.pairs.emplace_back(p[0].get<Vertex>(), p[1].get<Vertex>());
    }
    return s;
}

inline Json to_json(const NegativityCertificate& cert) {
    Json j;
    j["kind"] = "negativity-certificate";
    j["provenance"] = to_string(cert.provenance);
    j["pattern"] = to_json(cert.pattern);
    if (cert.target.base.n_edges() <= kTargetEmbedCap)
        j["target"] = to_json(cert.target);
    else
        j["target"] = nullptr; // reconstructed from the pipeline base on load
    j["sum"] = rational_to_json(cert.sum);
    if (cert.odd_edge_index) j["odd_edge_index"] = *cert.odd_edge_index;
    if (cert.pipeline_base) {
        Json p;
        p["base"] = to_json(*cert.pipeline_base);
        if (cert.pipeline_seed) p["seed"] = *cert.pipeline_seed;
        p["c_r"] = cert.c_r.str();
        p["C_r"] = cert.C_r.str();
        j["pipeline"] = std::move(p);
    }
    return j;
}

inline NegativityCertificate certificate_from_json(const Json& j) {
    const std::string prov = j.at("provenance").get<std::string>();
    Provenance provenance;
    if (prov == "odd-edge") provenance = Provenance::odd_edge;
    else if (prov == "grid-pipeline") provenance = Provenance::grid_pipeline;
    else if (prov == "custom") provenance = Provenance::custom;
    else throw ParseError("certificate: unknown provenance '" + prov + "'");

    Hypergraph pattern = hypergraph_from_json(j.at("pattern"));
    std::optional<Hypergraph> base;
    if (j.contains("pipeline") && j.at("pipeline").contains("base"))
        base = hypergraph_from_json(j.at("pipeline").at("base"));

    std::optional<WeightedHypergraph> target;
    if (j.contains("target") && !j.at("target").is_null()) {
        auto parsed = parse_hypergraph(j.at("target").dump());
        if (!std::holds_alternative<WeightedHypergraph>(parsed))
            throw ParseError("certificate: target must carry weights");
        target = std::get<WeightedHypergraph>(std::move(parsed));
    } else if (base) {
        Hypergraph boxed = box_product(*base, *base);
        std::vector<Rational> weights;
        for (EdgeType t : *boxed.edge_types())
            weights.emplace_back(t == EdgeType::horizontal ? 1 : -1);
        target = WeightedHypergraph(std::move(boxed), std::move(weights));
    } else {
        throw ParseError("certificate: neither target nor pipeline base present");
    }

    NegativityCertificate cert{std::move(pattern), std::move(*target),
                               rational_from_json(j.at("sum"), "sum"), provenance};
    if (j.contains("odd_edge_index")) cert.odd_edge_index = j.at("odd_edge_index").get<std::size_t>();
    if (base) cert.pipeline_base = std::move(base);
    if (j.contains("pipeline")) {
        const auto& p = j.at("pipeline");
        if (p.contains("seed")) cert.pipeline_seed = p.at("seed").get<std::uint64_t>();
        if (p.contains("c_r")) cert.c_r = Int(p.at("c_r").get<std::string>());
        if (p.contains("C_r")) cert.C_r = Int(p.at("C_r").get<std::string>());
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Transfer results. The witness is re-derivable from (source, precision,
// seed); f itself is embedded only when reasonably small.
// ---------------------------------------------------------------------------

struct TransferRecord {
    std::optional<NegativityCertificate> certificate; // source, or:
    std::optional<Hypergraph> pattern;                // pattern + step pair
    std::optional<SymStepFunction> step;
    unsigned precision_bits = 0;
    std::uint64_t seed = 0;
    RationalInterval interval;
    Rational pattern_density;
    std::optional<BipStepFunction> witness;

    const Hypergraph& source_pattern() const {
        if (certificate) return certificate->pattern;
        if (pattern) return *pattern;
        throw ParseError("transfer record carries no pattern");
    }
    SymStepFunction source_step() const {
        if (certificate) return certificate->step_function();
        if (step) return *step;
        throw ParseError("transfer record carries no step function");
    }
};

inline Json to_json(const TransferRecord& rec) {
    Json j;
    j["kind"] = "transfer";
    if (rec.certificate) j["certificate"] = to_json(*rec.certificate);
    if (rec.pattern) j["pattern"] = to_json(*rec.pattern);
    if (rec.step) j["step"] = to_json(*rec.step);
    j["precision"] = rec.precision_bits;
    j["seed"] = rec.seed;
    j["interval"] = Json::array({rational_to_json(rec.interval.lo), rational_to_json(rec.interval.hi)});
    j["pattern_density"] = rational_to_json(rec.pattern_density);
    if (rec.witness) j["f"] = to_json(*rec.witness);
    else j["f"] = nullptr;
    return j;
}

inline TransferRecord transfer_from_json(const Json& j) {
    TransferRecord rec;
    if (j.contains("certificate")) rec.certificate = certificate_from_json(j.at("certificate"));
    if (j.contains("pattern")) rec.pattern = hypergraph_from_json(j.at("pattern"));
    if (j.contains("step")) rec.step = sym_step_from_json(j.at("step"));
    rec.precision_bits = j.at("precision").get<unsigned>();
    rec.seed = j.value("seed", std::uint64_t{0});
    const auto& iv = j.at("interval");
    rec.interval = RationalInterval(rational_from_json(iv.at(0), "interval lo"),
                                    rational_from_json(iv.at(1), "interval hi"));
    rec.pattern_density = rational_from_json(j.at("pattern_density"), "pattern_density");
    if (j.contains("f") && !j.at("f").is_null()) rec.witness = bip_step_from_json(j.at("f"));
    return rec;
}

} // namespace posigraph::io
