#pragma once

#include "posigraph/decomposition.hpp"
#include "posigraph/density.hpp"
#include "posigraph/homomorphism.hpp"
#include "posigraph/hypergraph.hpp"
#include "posigraph/prng.hpp"
#include "posigraph/rational.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace posigraph {

// ---------------------------------------------------------------------------
// Stable involutions
// ---------------------------------------------------------------------------

/// An involution of V(H) with fixed set V0 and oriented swapped pairs
/// (v+, v-). Stability: the map preserves the edge multiset, no edge lies
/// entirely inside V0, and no edge meets both V+ and V-.
struct StableInvolution {
    std::vector<Vertex> fixed;
    std::vector<std::pair<Vertex, Vertex>> pairs;

    std::vector<Vertex> as_permutation(Vertex n) const {
        std::vector<Vertex> pi(n, n);
        for (Vertex v : fixed) pi.at(v) = v;
        for (const auto& [p, m] : pairs) {
            pi.at(p) = m;
            pi.at(m) = p;
        }
        for (Vertex v = 0; v < n; ++v)
            if (pi[v] == n) throw PreconditionError("involution does not cover every vertex");
        return pi;
    }
};

inline bool verify_stable_involution(const Hypergraph& h, const StableInvolution& s) {
    const Vertex n = h.n_vertices();
    std::vector<int> side(n, 2); // 0 fixed, +1, -1, 2 unassigned
    for (Vertex v : s.fixed) {
        if (v >= n || side[v] != 2) return false;
        side[v] = 0;
    }
    for (const auto& [p, m] : s.pairs) {
        if (p >= n || m >= n || p == m || side[p] != 2 || side[m] != 2) return false;
        side[p] = 1;
        side[m] = -1;
    }
    for (Vertex v = 0; v < n; ++v)
        if (side[v] == 2) return false;

    std::vector<Vertex> pi;
    try {
        pi = s.as_permutation(n);
    } catch (const PreconditionError&) {
        return false;
    }
    std::map<Edge, std::size_t> image_mult;
    for (const auto& e : h.edges()) {
        bool all_fixed = true, plus = false, minus = false;
        Edge im;
        for (Vertex v : e) {
            if (side[v] != 0) all_fixed = false;
            if (side[v] == 1) plus = true;
            if (side[v] == -1) minus = true;
            im.push_back(pi[v]);
        }
        if (all_fixed || (plus && minus)) return false;
        std::sort(im.begin(), im.end());
        if (std::adjacent_find(im.begin(), im.end()) != im.end()) return false;
        ++image_mult[im];
    }
    return image_mult == h.edge_multiset();
}

/// Exhaustive search for a stable involution; returns the one whose
/// permutation array is lexicographically least, or nothing. Backtracks over
/// fix/pair decisions with incremental edge checks, so absence is a complete
/// search result.
inline std::optional<StableInvolution> find_stable_involution(const Hypergraph& h) {
    const Vertex n = h.n_vertices();
    const auto& edges = h.edges();
    const auto multiset = h.edge_multiset();
    std::set<Edge> present;
    for (const auto& e : edges) present.insert(e);

    std::vector<std::vector<std::size_t>> at_vertex(n);
    for (std::size_t k = 0; k < edges.size(); ++k)
        for (Vertex v : edges[k]) at_vertex[v].push_back(k);

    std::vector<int> side(n, 2);
    std::vector<Vertex> pi(n, n);
    bool pinned_orientation = false; // first pair fixed to (+,-) since a global swap is a symmetry

    // checks every constraint decidable from the edges touching v
    auto consistent_at = [&](Vertex v) {
        for (std::size_t k : at_vertex[v]) {
            const Edge& e = edges[k];
            bool all_assigned = true, all_fixed = true, plus = false, minus = false;
            for (Vertex u : e) {
                if (side[u] == 2) {
                    all_assigned = false;
                    all_fixed = false;
                    continue;
                }
                if (side[u] != 0) all_fixed = false;
                if (side[u] == 1) plus = true;
                if (side[u] == -1) minus = true;
            }
            if (plus && minus) return false;
            if (all_assigned) {
                if (all_fixed) return false;
                Edge im;
                for (Vertex u : e) im.push_back(pi[u]);
                std::sort(im.begin(), im.end());
                if (std::adjacent_find(im.begin(), im.end()) != im.end() || !present.count(im))
                    return false;
            }
        }
        return true;
    };

    auto rec = [&](auto&& self, Vertex from) -> bool {
        Vertex v = from;
        while (v < n && side[v] != 2) ++v;
        if (v == n) {
            // full map: edge-multiset preservation
            std::map<Edge, std::size_t> image_mult;
            for (const auto& e : edges) {
                Edge im;
                for (Vertex u : e) im.push_back(pi[u]);
                std::sort(im.begin(), im.end());
                ++image_mult[im];
            }
            return image_mult == multiset;
        }
        // fix v
        side[v] = 0;
        pi[v] = v;
        if (consistent_at(v) && self(self, v + 1)) return true;
        side[v] = 2;
        pi[v] = n;
        // pair v with a later vertex, trying both orientations
        for (Vertex u = v + 1; u < n; ++u) {
            if (side[u] != 2) continue;
            const bool was_pinned = pinned_orientation;
            const int n_orients = was_pinned ? 2 : 1;
            for (int orient = 0; orient < n_orients; ++orient) {
                side[v] = orient == 0 ? 1 : -1;
                side[u] = orient == 0 ? -1 : 1;
                pi[v] = u;
                pi[u] = v;
                pinned_orientation = true;
                if (consistent_at(v) && consistent_at(u) && self(self, v + 1)) return true;
                side[v] = 2;
                side[u] = 2;
                pi[v] = n;
                pi[u] = n;
                pinned_orientation = was_pinned;
            }
        }
        return false;
    };

    if (!rec(rec, 0)) return std::nullopt;
    StableInvolution out;
    for (Vertex v = 0; v < n; ++v) {
        if (side[v] == 0) out.fixed.push_back(v);
        else if (side[v] == 1) out.pairs.emplace_back(v, pi[v]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Negativity certificates
// ---------------------------------------------------------------------------

enum class Provenance { odd_edge, grid_pipeline, custom };

inline std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::odd_edge: return "odd-edge";
        case Provenance::grid_pipeline: return "grid-pipeline";
        case Provenance::custom: return "custom";
    }
    throw PreconditionError("unknown provenance");
}

/// A weighted target whose total homomorphism weight from the pattern is
/// negative; by the step-function translation this witnesses that the pattern
/// is not positive.
struct NegativityCertificate {
    Hypergraph pattern;
    WeightedHypergraph target;
    Rational sum; // == weighted_hom_sum(pattern, target).value, < 0
    Provenance provenance = Provenance::custom;

    std::optional<std::size_t> odd_edge_index;       // odd-edge provenance
    std::optional<Hypergraph> pipeline_base;         // grid-pipeline provenance
    std::optional<std::uint64_t> pipeline_seed;
    Int c_r = 0, C_r = 0;                            // validated constants (pipeline)

    /// The step-function view of the target: density_sym(pattern, ·) < 0.
    SymStepFunction step_function() const;
};

/// Symmetric tensor of a weighted hypergraph: w(e) on every permutation of
/// each edge's index tuple, zero elsewhere. Weights of edges on the same
/// vertex set add (which departs from homomorphism counting on non-linear
/// targets; linear targets match it exactly).
inline SymStepFunction tensorize(const WeightedHypergraph& t) {
    SymStepFunction h(t.base.r(), t.base.n_vertices());
    for (std::size_t k = 0; k < t.base.n_edges(); ++k) {
        const Edge& e = t.base.edge(k);
        h.set(e, h.at(e) + t.weights[k]);
    }
    return h;
}

inline SymStepFunction NegativityCertificate::step_function() const { return tensorize(target); }

/// Scans for an odd edge; on success returns the ±1 certificate whose sum is
/// exactly -|End(H)|.
inline std::optional<NegativityCertificate> odd_edge_certificate(const Hypergraph& h) {
    for (std::size_t k = 0; k < h.n_edges(); ++k) {
        if (!is_odd_edge(h, k)) continue;
        std::vector<Rational> weights(h.n_edges(), Rational(1));
        weights[k] = Rational(-1);
        WeightedHypergraph target(h, std::move(weights));
        const HomSum s = weighted_hom_sum(h, target);
        if (s.value != -Rational(s.hom_count) || !(s.value < 0))
            throw InconclusiveError("odd edge certificate failed its own identity; this is a bug");
        NegativityCertificate cert{h, std::move(target), s.value, Provenance::odd_edge};
        cert.odd_edge_index = k;
        return cert;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Necessary / sufficient condition battery
// ---------------------------------------------------------------------------

enum class PositivityClass { positive_certified, non_positive_certified, unknown };

struct ConditionReport {
    bool even_degree_vertex_exists = false;
    bool even_degree_test_applies = false; // graphs and odd-uniformity hypergraphs
    std::optional<std::size_t> odd_edge;
    std::optional<StableInvolution> involution;
    PositivityClass classification = PositivityClass::unknown;
};

inline ConditionReport necessary_conditions(const Hypergraph& h) {
    ConditionReport rep;
    rep.even_degree_test_applies = (h.r() == 2) || (h.r() % 2 == 1);
    for (std::size_t d : h.degrees())
        if (d % 2 == 0) {
            rep.even_degree_vertex_exists = true;
            break;
        }
    if (h.n_vertices() == 0) rep.even_degree_vertex_exists = true; // vacuous
    for (std::size_t k = 0; k < h.n_edges(); ++k)
        if (is_odd_edge(h, k)) {
            rep.odd_edge = k;
            break;
        }
    rep.involution = find_stable_involution(h);

    if (rep.involution) {
        rep.classification = PositivityClass::positive_certified;
        if (rep.odd_edge || (rep.even_degree_test_applies && !rep.even_degree_vertex_exists))
            throw InconclusiveError("contradictory positivity certificates; this is a bug");
    } else if (rep.odd_edge || (rep.even_degree_test_applies && !rep.even_degree_vertex_exists)) {
        rep.classification = PositivityClass::non_positive_certified;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// The grid-image classifier
// ---------------------------------------------------------------------------

struct ClassificationStats {
    Int iso_to_grid = 0;
    Int single_edge = 0;
    Int contains_triangle = 0;
    Int violations = 0;
    Int total() const { return iso_to_grid + single_edge + contains_triangle + violations; }
};

/// Classifies the homomorphic image of every map grid(r) -> g. For linear g
/// the image must be a single edge, a grid copy, or contain a triangle;
/// anything else is counted as a violation (and is a genuine failure).
inline ClassificationStats grid_classifier(const Hypergraph& g, unsigned r) {
    if (!is_linear(g)) throw PreconditionError("grid_classifier: target must be linear");
    const Hypergraph pattern = grid(r);
    ClassificationStats stats;
    for_each_hom(pattern, g, [&](const VertexMap& m) {
        const ImageSubgraph image = image_subgraph(pattern, g, m);
        if (image.image.n_edges() == 1)
            ++stats.single_edge;
        else if (posigraph::contains_triangle(image.image))
            ++stats.contains_triangle;
        else if (isomorphic(image.image, pattern))
            ++stats.iso_to_grid;
        else
            ++stats.violations;
        return true;
    });
    return stats;
}

// ---------------------------------------------------------------------------
// Greedy generator (the desk-scale surrogate for the extremal construction)
// ---------------------------------------------------------------------------

/// Randomized greedy insertion of r-subsets, rejecting anything that breaks
/// linearity, creates a triangle, or completes a grid(r) subgraph. Stops at
/// max_edges (default 3n, comfortably past the pipeline threshold) so the
/// final full verification stays cheap. The output is re-verified: linear,
/// triangle-free, and no injective grid homomorphism.
inline Hypergraph greedy_linear_generator(unsigned r, Vertex n, std::uint64_t seed,
                                          std::size_t max_edges = 0) {
    if (r < 3) throw PreconditionError("greedy_linear_generator: r must be >= 3");
    if (n < r) throw PreconditionError("greedy_linear_generator: n must be >= r");
    if (max_edges == 0) max_edges = static_cast<std::size_t>(3) * n;
    Prng rng(seed ^ 0x9e3779b9ULL);
    const Hypergraph pattern = grid(r);

    std::vector<Edge> edges;
    std::set<std::pair<Vertex, Vertex>> pairs_used;

    auto breaks_linearity = [&](const Edge& e) {
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::size_t j = i + 1; j < e.size(); ++j)
                if (pairs_used.count({e[i], e[j]})) return true;
        return false;
    };
    auto creates_triangle = [&](const Edge& e) {
        // some f, g meeting e at distinct single vertices with |f ∩ g| = 1
        std::vector<std::pair<std::size_t, Vertex>> meet;
        for (std::size_t k = 0; k < edges.size(); ++k) {
            if (intersection_size(edges[k], e) != 1) continue;
            Vertex point = 0;
            for (Vertex v : e)
                if (std::binary_search(edges[k].begin(), edges[k].end(), v)) point = v;
            meet.emplace_back(k, point);
        }
        for (std::size_t a = 0; a < meet.size(); ++a)
            for (std::size_t b = a + 1; b < meet.size(); ++b)
                if (meet[a].second != meet[b].second &&
                    intersection_size(edges[meet[a].first], edges[meet[b].first]) == 1)
                    return true;
        return false;
    };
    auto completes_grid = [&](const Edge& e) {
        edges.push_back(e);
        Hypergraph candidate(r, n, edges);
        edges.pop_back();
        return has_injective_hom(pattern, candidate);
    };
    auto try_insert = [&](Edge e) {
        if (breaks_linearity(e) || creates_triangle(e) || completes_grid(e)) return;
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::size_t j = i + 1; j < e.size(); ++j) pairs_used.insert({e[i], e[j]});
        edges.push_back(std::move(e));
    };

    // Small vertex sets: one pass over all r-subsets in seeded random order.
    // Large ones: a sampled attempt budget; the accepted count saturates far
    // above the pipeline threshold long before the budget runs out.
    Int total_subsets = 1;
    for (unsigned i = 0; i < r; ++i) total_subsets = total_subsets * (Int(n) - i) / (i + 1);
    if (total_subsets <= 200000) {
        auto all = detail::subsets_of_size(n, r);
        rng.shuffle(all);
        for (const auto& e : all) {
            if (edges.size() >= max_edges) break;
            try_insert(e);
        }
    } else {
        const std::size_t attempts = static_cast<std::size_t>(60) * n;
        for (std::size_t t = 0; t < attempts && edges.size() < max_edges; ++t) {
            std::set<Vertex> pick;
            while (pick.size() < r) pick.insert(static_cast<Vertex>(rng.next_below(n)));
            try_insert(Edge(pick.begin(), pick.end()));
        }
    }

    Hypergraph out(r, n, std::move(edges));
    if (!is_linear(out) || contains_triangle(out) || has_injective_hom(pattern, out))
        throw InconclusiveError("greedy generator output failed verification; this is a bug");
    return out;
}

// ---------------------------------------------------------------------------
// The homomorphism-count constants and the pipeline
// ---------------------------------------------------------------------------

struct HomConstants {
    Int c_r; // homomorphisms grid(r) -> single r-edge
    Int C_r; // type-2 homomorphisms into a box product, per ordered edge pair
};

/// Brute-force derivation of both constants. c_r is a direct count. C_r is
/// read off the single-edge box product (type-2 maps are the vertex-bijective
/// ones there). For r >= 3, where the image classification holds, type 1 and
/// type 2 must exactly exhaust all homomorphisms on both validation
/// instances; any leak is a hard failure, never a silently adjusted constant.
inline HomConstants hom_constants(unsigned r) {
    if (r < 2 || r > 5) throw PreconditionError("hom_constants: supported for 2 <= r <= 5");
    const Hypergraph pattern = grid(r);
    const Int c_r = count_homs(pattern, single_edge(r));

    const Hypergraph one = single_edge(r);
    const Hypergraph box1 = box_product(one, one);
    Int bijective = 0;
    for_each_hom(pattern, box1, [&](const VertexMap& m) {
        if (m.is_bijective()) ++bijective;
        return true;
    });
    const Int C_r = bijective; // e(G) = 1, so type-2 count equals C_r

    if (r >= 3) {
        const Int total1 = count_homs(pattern, box1);
        if (total1 != c_r * Int(box1.n_edges()) + C_r)
            throw InconclusiveError("hom_constants: single-edge box classification leaks; this is a bug");
        if (r <= 4) { // the r = 5 instance is large; validation still exact where run
            const Hypergraph two = disjoint_union(one, one);
            const Hypergraph box2 = box_product(two, two);
            const Int total2 = count_homs(pattern, box2);
            if (total2 != c_r * Int(box2.n_edges()) + C_r * 4)
                throw InconclusiveError("hom_constants: C_r failed the two-edge validation; this is a bug");
        }
    }
    return HomConstants{c_r, C_r};
}

struct GridPipelineOptions {
    std::size_t max_retries = 4;       // n doubles on each retry
    std::size_t direct_check_edge_cap = 400; // run the full enumeration cross-check below this
};

/// The full negativity pipeline for the grid hypergraph at odd r: generate a
/// linear triangle-free grid-free G with enough edges, weight its box product
/// +1 horizontal / -1 vertical, and certify the weighted sum
///   2 c_r n e(G) - C_r e(G)^2 < 0,
/// with the sum recomputed by direct enumeration whenever the target is small
/// enough. Constants are brute-force validated on every run.
inline NegativityCertificate grid_pipeline(unsigned r, Vertex n, std::uint64_t seed,
                                           const GridPipelineOptions& opts = {}) {
    if (r % 2 == 0 || r < 3) throw PreconditionError("grid_pipeline: odd r >= 3 required");
    const HomConstants k = hom_constants(r);

    std::optional<Hypergraph> g;
    Vertex n_cur = n;
    for (std::size_t attempt = 0; attempt <= opts.max_retries; ++attempt) {
        Hypergraph candidate = greedy_linear_generator(r, n_cur, seed);
        if (Int(candidate.n_edges()) * k.C_r > 2 * k.c_r * Int(n_cur)) {
            g = std::move(candidate);
            break;
        }
        if (n_cur > (Vertex(1) << 24)) break;
        n_cur *= 2;
    }
    if (!g)
        throw InconclusiveError("grid_pipeline: generator fell short of the edge threshold after retries");

    const Int e = Int(g->n_edges());
    Hypergraph boxed = box_product(*g, *g);
    std::vector<Rational> weights;
    for (EdgeType t : *boxed.edge_types())
        weights.emplace_back(t == EdgeType::horizontal ? 1 : -1);
    WeightedHypergraph target(std::move(boxed), std::move(weights));

    const Rational closed_form = Rational(2 * k.c_r * Int(n_cur) * e - k.C_r * e * e);
    if (target.base.n_edges() <= opts.direct_check_edge_cap) {
        const HomSum direct = weighted_hom_sum(grid(r), target);
        if (direct.value != closed_form)
            throw InconclusiveError("grid_pipeline: direct enumeration disagrees with the closed form; this is a bug");
    }
    if (!(closed_form < 0))
        throw InconclusiveError("grid_pipeline: certificate sum is not negative");

    NegativityCertificate cert{grid(r), std::move(target), closed_form, Provenance::grid_pipeline};
    cert.pipeline_base = std::move(*g);
    cert.pipeline_seed = seed;
    cert.c_r = k.c_r;
    cert.C_r = k.C_r;
    return cert;
}

/// Re-derives everything a certificate claims from its own data: structure,
/// weights, the stated sum, and negativity. Used by the verify command.
inline bool verify_negativity_certificate(const NegativityCertificate& cert,
                                          std::size_t direct_cap = 400) {
    if (!(cert.sum < 0)) return false;
    switch (cert.provenance) {
        case Provenance::odd_edge: {
            if (!cert.odd_edge_index || *cert.odd_edge_index >= cert.pattern.n_edges()) return false;
            if (cert.target.base != cert.pattern) return false;
            for (std::size_t i = 0; i < cert.target.weights.size(); ++i)
                if (cert.target.weights[i] != (i == *cert.odd_edge_index ? Rational(-1) : Rational(1)))
                    return false;
            if (!is_odd_edge(cert.pattern, *cert.odd_edge_index)) return false;
            const HomSum s = weighted_hom_sum(cert.pattern, cert.target);
            return s.value == cert.sum && s.value == -Rational(s.hom_count);
        }
        case Provenance::grid_pipeline: {
            if (!cert.pipeline_base) return false;
            const Hypergraph& g = *cert.pipeline_base;
            const unsigned r = g.r();
            if (cert.pattern != grid(r)) return false;
            if (!is_linear(g) || contains_triangle(g) || has_injective_hom(grid(r), g)) return false;
            const HomConstants k = hom_constants(r);
            if (k.c_r != cert.c_r || k.C_r != cert.C_r) return false;
            const Int e = Int(g.n_edges());
            if (!(e * k.C_r > 2 * k.c_r * Int(g.n_vertices()))) return false;
            if (cert.sum != Rational(2 * k.c_r * Int(g.n_vertices()) * e - k.C_r * e * e)) return false;
            // target must be exactly the ±1-weighted box product
            const Hypergraph expect = box_product(g, g);
            if (cert.target.base.edges() != expect.edges() ||
                cert.target.base.n_vertices() != expect.n_vertices())
                return false;
            const auto& types = *expect.edge_types();
            for (std::size_t i = 0; i < types.size(); ++i)
                if (cert.target.weights[i] != (types[i] == EdgeType::horizontal ? Rational(1) : Rational(-1)))
                    return false;
            if (cert.target.base.n_edges() <= direct_cap) {
                const HomSum s = weighted_hom_sum(cert.pattern, cert.target);
                if (s.value != cert.sum) return false;
            }
            return true;
        }
        case Provenance::custom: {
            const HomSum s = weighted_hom_sum(cert.pattern, cert.target);
            return s.value == cert.sum;
        }
    }
    return false;
}

} // namespace posigraph
