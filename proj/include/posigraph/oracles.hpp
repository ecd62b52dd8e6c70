#pragma once

// Reference implementations for verification only: direct translations of the
// defining sums with no pruning, no indexing and no elimination. The engines
// are checked against these on every instance small enough to enumerate.

#include "posigraph/density.hpp"
#include "posigraph/homomorphism.hpp"
#include "posigraph/hypergraph.hpp"

#include <set>
#include <vector>

namespace posigraph::oracle {

/// Every map [n_H] -> [n_G], tested edge by edge. O(n_G^{n_H}).
inline std::vector<VertexMap> naive_homomorphisms(const Hypergraph& h, const Hypergraph& g) {
    std::vector<VertexMap> out;
    const Vertex nh = h.n_vertices(), ng = g.n_vertices();
    if (ng == 0) {
        if (nh == 0) out.push_back(VertexMap{0, 0, {}});
        return out;
    }
    std::set<Edge> present(g.edges().begin(), g.edges().end());
    std::vector<Vertex> image(nh, 0);
    while (true) {
        bool ok = true;
        for (const auto& e : h.edges()) {
            Edge im;
            for (Vertex v : e) im.push_back(image[v]);
            std::sort(im.begin(), im.end());
            if (std::adjacent_find(im.begin(), im.end()) != im.end() || !present.count(im)) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(VertexMap{nh, ng, image});
        std::size_t k = nh;
        while (k > 0) {
            --k;
            if (++image[k] < ng) break;
            image[k] = 0;
            if (k == 0) return out;
        }
        if (nh == 0) return out;
    }
}

/// The defining sum of the symmetric density over all n^v assignments.
inline Rational naive_density_sym(const Hypergraph& h, const SymStepFunction& f) {
    if (h.r() != f.r()) throw PreconditionError("naive_density_sym: arity mismatch");
    const Vertex nv = h.n_vertices();
    const auto measures = f.measures();
    std::vector<Vertex> assign(nv, 0);
    Rational total(0);
    while (true) {
        Rational term(1);
        for (Vertex v = 0; v < nv; ++v) term *= measures[assign[v]];
        for (const auto& e : h.edges()) {
            std::vector<Vertex> tuple;
            for (Vertex v : e) tuple.push_back(assign[v]);
            term *= f.at(tuple);
        }
        total += term;
        std::size_t k = nv;
        while (k > 0) {
            --k;
            if (++assign[k] < f.n()) break;
            assign[k] = 0;
            if (k == 0) return total;
        }
        if (nv == 0) return total;
    }
}

/// The defining double sum of the bipartite density.
inline Rational naive_density_bip(const BipartiteGraph& g, const BipStepFunction& f) {
    if (!f.is_exact()) throw PreconditionError("naive_density_bip: exact mode required");
    const Vertex L = g.n_left(), R = g.n_right();
    std::vector<Vertex> left(L, 0), right(R, 0);
    Rational total(0);
    const auto advance = [](std::vector<Vertex>& a, Vertex bound) {
        std::size_t k = a.size();
        while (k > 0) {
            --k;
            if (++a[k] < bound) return true;
            a[k] = 0;
            if (k == 0) return false;
        }
        return false;
    };
    while (true) {
        std::fill(right.begin(), right.end(), 0);
        while (true) {
            Rational term(1);
            for (const auto& [u, v] : g.edges()) term *= f.at(left[u], right[v]);
            total += term;
            if (R == 0 || !advance(right, f.N())) break;
        }
        if (L == 0 || !advance(left, f.n())) break;
    }
    Rational scale = pow_rational(Rational(1, f.n()), L) * pow_rational(Rational(1, f.N()), R);
    return total * scale;
}

} // namespace posigraph::oracle
