#pragma once

// Seeded property suites comparing the engines against the reference
// implementations; backs the `check` CLI verb.

#include "posigraph/certificates.hpp"
#include "posigraph/decomposition.hpp"
#include "posigraph/density.hpp"
#include "posigraph/homomorphism.hpp"
#include "posigraph/json_io.hpp"
#include "posigraph/oracles.hpp"
#include "posigraph/prng.hpp"

#include <string>
#include <vector>

namespace posigraph {

struct CheckResult {
    std::string name;
    std::size_t cases = 0;
    bool passed = true;
    std::string detail;
};

namespace detail {

inline Hypergraph random_hypergraph(Prng& rng, unsigned max_r, Vertex max_n) {
    const unsigned r = static_cast<unsigned>(rng.next_int(1, max_r));
    const Vertex n = static_cast<Vertex>(rng.next_int(r, max_n));
    const std::size_t e = static_cast<std::size_t>(rng.next_int(0, 2 * n >= 16 ? 16 : 2 * n));
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < e; ++k) {
        std::set<Vertex> pick;
        while (pick.size() < r) pick.insert(static_cast<Vertex>(rng.next_below(n)));
        edges.emplace_back(pick.begin(), pick.end());
    }
    return Hypergraph(r, n, std::move(edges));
}

inline SymStepFunction random_sym_step(Prng& rng, unsigned r, Vertex n) {
    SymStepFunction h(r, n);
    for (const auto& tuple : multiset_basis(n, r)) h.set(tuple, rng.next_rational());
    return h;
}

inline BipStepFunction random_bip_step(Prng& rng, Vertex n, Vertex N) {
    std::vector<Rational> entries;
    for (std::size_t k = 0; k < static_cast<std::size_t>(n) * N; ++k)
        entries.push_back(rng.next_rational());
    return BipStepFunction::exact(n, N, std::move(entries));
}

} // namespace detail

/// Engine vs naive enumeration on random instances with at most `map_budget`
/// candidate maps.
inline CheckResult check_hom_engine_vs_naive(std::uint64_t seed, std::size_t cases,
                                             double map_budget = 1e6) {
    CheckResult res{"hom-engine-vs-naive"};
    Prng rng(seed);
    while (res.cases < cases) {
        Hypergraph h = detail::random_hypergraph(rng, 3, 5);
        Hypergraph g = detail::random_hypergraph(rng, 3, 6);
        if (h.r() != g.r()) continue;
        double maps = 1;
        for (Vertex v = 0; v < h.n_vertices(); ++v) maps *= std::max<Vertex>(g.n_vertices(), 1);
        if (maps > map_budget) continue;
        const auto expect = oracle::naive_homomorphisms(h, g);
        const auto got = enumerate_homs(h, g);
        ++res.cases;
        if (expect.size() != got.size() || !std::equal(expect.begin(), expect.end(), got.begin())) {
            res.passed = false;
            res.detail = "mismatch at case " + std::to_string(res.cases);
            break;
        }
    }
    return res;
}

/// weighted_hom_sum with all weights +1 equals the hom count (simple targets;
/// parallel copies add their weights and inflate the factor instead).
inline CheckResult check_unit_weights_count(std::uint64_t seed, std::size_t cases) {
    CheckResult res{"unit-weight-sum-equals-count"};
    Prng rng(seed + 1);
    while (res.cases < cases) {
        Hypergraph h = detail::random_hypergraph(rng, 3, 4);
        Hypergraph raw = detail::random_hypergraph(rng, 3, 6);
        if (h.r() != raw.r()) continue;
        std::set<Edge> dedup(raw.edges().begin(), raw.edges().end());
        Hypergraph g(raw.r(), raw.n_vertices(), {dedup.begin(), dedup.end()});
        WeightedHypergraph t(g, std::vector<Rational>(g.n_edges(), Rational(1)));
        const HomSum s = weighted_hom_sum(h, t);
        ++res.cases;
        if (s.value != Rational(s.hom_count) || s.hom_count != count_homs(h, g)) {
            res.passed = false;
            res.detail = "mismatch at case " + std::to_string(res.cases);
            break;
        }
    }
    return res;
}

/// serialize ∘ parse is the identity on random hypergraphs (r <= 5, n <= 30).
inline CheckResult check_serialization_roundtrip(std::uint64_t seed, std::size_t cases) {
    CheckResult res{"serialize-parse-roundtrip"};
    Prng rng(seed + 2);
    for (; res.cases < cases; ++res.cases) {
        Hypergraph h = detail::random_hypergraph(rng, 5, 30);
        const auto parsed = io::parse_hypergraph(io::serialize(h));
        if (!std::holds_alternative<Hypergraph>(parsed) || !(std::get<Hypergraph>(parsed) == h)) {
            res.passed = false;
            res.detail = "round-trip changed the hypergraph";
            break;
        }
        std::vector<Rational> w;
        for (std::size_t k = 0; k < h.n_edges(); ++k) w.push_back(rng.next_rational());
        WeightedHypergraph wh(h, w);
        const auto parsed_w = io::parse_hypergraph(io::serialize(wh));
        if (!std::holds_alternative<WeightedHypergraph>(parsed_w)) {
            res.passed = false;
            res.detail = "weights dropped in round-trip";
            break;
        }
        const auto& back = std::get<WeightedHypergraph>(parsed_w);
        if (!(back.base == h) || back.weights != w) {
            res.passed = false;
            res.detail = "weighted round-trip changed the data";
            break;
        }
    }
    return res;
}

/// density_bip(levi(H), f) == density_sym(H, induced_sym(f)) exactly.
inline CheckResult check_transfer_identity(std::uint64_t seed, std::size_t cases) {
    CheckResult res{"levi-transfer-identity"};
    Prng rng(seed + 3);
    const std::vector<Hypergraph> patterns{single_edge(3), grid(3), fano_plane()};
    for (; res.cases < cases; ++res.cases) {
        const Hypergraph& h = patterns[res.cases % patterns.size()];
        const Vertex n = static_cast<Vertex>(rng.next_int(1, 3));
        const Vertex N = static_cast<Vertex>(rng.next_int(1, 4));
        BipStepFunction f = detail::random_bip_step(rng, n, N);
        if (density_bip(levi(h), f) != density_sym(h, induced_sym(f, h.r()))) {
            res.passed = false;
            res.detail = "transfer identity failed";
            break;
        }
    }
    return res;
}

/// density engines vs the defining sums on small random instances.
inline CheckResult check_density_vs_naive(std::uint64_t seed, std::size_t cases) {
    CheckResult res{"density-vs-naive"};
    Prng rng(seed + 4);
    while (res.cases < cases) {
        Hypergraph h = detail::random_hypergraph(rng, 3, 4);
        if (h.n_vertices() > 6) continue;
        const Vertex n = static_cast<Vertex>(rng.next_int(1, 3));
        SymStepFunction f = detail::random_sym_step(rng, h.r(), n);
        ++res.cases;
        if (density_sym(h, f) != oracle::naive_density_sym(h, f)) {
            res.passed = false;
            res.detail = "density_sym mismatch";
            break;
        }
    }
    return res;
}

/// Composition of homomorphisms is a homomorphism.
inline CheckResult check_composition(std::uint64_t seed, std::size_t cases) {
    CheckResult res{"hom-composition"};
    Prng rng(seed + 5);
    while (res.cases < cases) {
        Hypergraph h = detail::random_hypergraph(rng, 2, 4);
        Hypergraph g = detail::random_hypergraph(rng, 2, 5);
        Hypergraph k = detail::random_hypergraph(rng, 2, 5);
        if (h.r() != g.r() || g.r() != k.r()) continue;
        const auto hg = enumerate_homs(h, g);
        const auto gk = enumerate_homs(g, k);
        if (hg.empty() || gk.empty()) continue;
        ++res.cases;
        const auto& pi = hg[rng.next_below(hg.size())];
        const auto& sigma = gk[rng.next_below(gk.size())];
        if (!is_homomorphism(h, k, compose(sigma, pi))) {
            res.passed = false;
            res.detail = "composition rejected";
            break;
        }
    }
    return res;
}

/// Automorphisms form a group: closed under composition, contain the identity,
/// and every element has an inverse in the set.
inline CheckResult check_automorphism_group(std::uint64_t seed, std::size_t cases) {
    CheckResult res{"automorphism-group"};
    Prng rng(seed + 6);
    while (res.cases < cases) {
        Hypergraph h = detail::random_hypergraph(rng, 2, 5);
        if (h.n_vertices() > 6) continue;
        const auto auts = automorphisms(h);
        ++res.cases;
        std::set<std::vector<Vertex>> members;
        for (const auto& a : auts) members.insert(a.image);
        VertexMap identity{h.n_vertices(), h.n_vertices(), {}};
        for (Vertex v = 0; v < h.n_vertices(); ++v) identity.image.push_back(v);
        bool ok = members.count(identity.image) > 0;
        for (const auto& a : auts)
            for (const auto& b : auts)
                if (!members.count(compose(a, b).image)) ok = false;
        for (const auto& a : auts) {
            VertexMap inv{h.n_vertices(), h.n_vertices(), std::vector<Vertex>(h.n_vertices())};
            for (Vertex v = 0; v < h.n_vertices(); ++v) inv.image[a.image[v]] = v;
            if (!members.count(inv.image)) ok = false;
        }
        if (!ok) {
            res.passed = false;
            res.detail = "group axioms failed";
            break;
        }
    }
    return res;
}

/// Bipartite density vs the naive double sum.
inline CheckResult check_bip_density_vs_naive(std::uint64_t seed, std::size_t cases) {
    CheckResult res{"bip-density-vs-naive"};
    Prng rng(seed + 7);
    while (res.cases < cases) {
        const Vertex l = static_cast<Vertex>(rng.next_int(1, 4)), rgt = static_cast<Vertex>(rng.next_int(1, 4));
        std::vector<std::pair<Vertex, Vertex>> edges;
        for (Vertex a = 0; a < l; ++a)
            for (Vertex b = 0; b < rgt; ++b)
                if (rng.next_bool()) edges.emplace_back(a, b);
        BipartiteGraph g(l, rgt, std::move(edges));
        BipStepFunction f = detail::random_bip_step(rng, static_cast<Vertex>(rng.next_int(1, 3)),
                                                    static_cast<Vertex>(rng.next_int(1, 3)));
        ++res.cases;
        if (density_bip(g, f) != oracle::naive_density_bip(g, f)) {
            res.passed = false;
            res.detail = "density_bip mismatch";
            break;
        }
    }
    return res;
}

/// The whole battery, sized by a budget knob.
inline std::vector<CheckResult> run_property_checks(std::uint64_t seed, std::size_t budget) {
    const std::size_t cases = std::max<std::size_t>(4, budget);
    return {
        check_hom_engine_vs_naive(seed, cases),
        check_unit_weights_count(seed, cases),
        check_serialization_roundtrip(seed, cases),
        check_transfer_identity(seed, cases),
        check_density_vs_naive(seed, cases),
        check_composition(seed, cases),
        check_automorphism_group(seed, std::max<std::size_t>(2, cases / 4)),
        check_bip_density_vs_naive(seed, cases),
    };
}

} // namespace posigraph
