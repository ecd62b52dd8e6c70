#pragma once

#include "posigraph/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace posigraph {

using Vertex = std::uint32_t;
using Edge = std::vector<Vertex>; // always kept sorted ascending

enum class EdgeType : char { horizontal = 'h', vertical = 'v' };

/// r-uniform hypergraph with vertices 0..n-1. Edges are stored with their
/// vertices sorted; the edge *list* keeps construction order and may contain
/// repeats (parallel edges are tracked by position). Graphs are the r = 2 case.
/// Immutable after construction.
class Hypergraph {
public:
    Hypergraph(unsigned r, Vertex n_vertices, std::vector<Edge> edges,
               std::optional<std::vector<EdgeType>> edge_types = std::nullopt)
        : r_(r), n_(n_vertices), edges_(std::move(edges)), edge_types_(std::move(edge_types)) {
        if (r_ < 1) throw PreconditionError("hypergraph uniformity must be >= 1");
        for (auto& e : edges_) {
            std::sort(e.begin(), e.end());
            if (e.size() != r_) throw PreconditionError("edge arity differs from uniformity");
            if (std::adjacent_find(e.begin(), e.end()) != e.end())
                throw PreconditionError("edge has a repeated vertex");
            if (!e.empty() && e.back() >= n_) throw PreconditionError("vertex index out of range");
        }
        if (edge_types_ && edge_types_->size() != edges_.size())
            throw PreconditionError("edge_types length differs from edge count");
    }

    unsigned r() const { return r_; }
    Vertex n_vertices() const { return n_; }
    std::size_t n_edges() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(std::size_t i) const { return edges_.at(i); }
    const std::optional<std::vector<EdgeType>>& edge_types() const { return edge_types_; }

    std::vector<std::size_t> degrees() const {
        std::vector<std::size_t> deg(n_, 0);
        for (const auto& e : edges_)
            for (Vertex v : e) ++deg[v];
        return deg;
    }

    /// Edge multiset as sorted (edge, multiplicity) pairs; label-independent identity helper.
    std::map<Edge, std::size_t> edge_multiset() const {
        std::map<Edge, std::size_t> m;
        for (const auto& e : edges_) ++m[e];
        return m;
    }

    bool operator==(const Hypergraph& o) const {
        return r_ == o.r_ && n_ == o.n_ && edges_ == o.edges_;
    }

private:
    unsigned r_;
    Vertex n_;
    std::vector<Edge> edges_;
    std::optional<std::vector<EdgeType>> edge_types_;
};

/// Bipartite graph on disjoint left/right vertex sets, edges as (left, right) pairs.
class BipartiteGraph {
public:
    BipartiteGraph(Vertex n_left, Vertex n_right, std::vector<std::pair<Vertex, Vertex>> edges)
        : n_left_(n_left), n_right_(n_right), edges_(std::move(edges)) {
        std::set<std::pair<Vertex, Vertex>> seen;
        for (const auto& [l, r] : edges_) {
            if (l >= n_left_ || r >= n_right_) throw PreconditionError("bipartite edge out of range");
            if (!seen.insert({l, r}).second) throw PreconditionError("duplicate bipartite edge");
        }
    }

    Vertex n_left() const { return n_left_; }
    Vertex n_right() const { return n_right_; }
    std::size_t n_edges() const { return edges_.size(); }
    const std::vector<std::pair<Vertex, Vertex>>& edges() const { return edges_; }

private:
    Vertex n_left_;
    Vertex n_right_;
    std::vector<std::pair<Vertex, Vertex>> edges_;
};

/// Hypergraph plus one exact rational weight per edge position.
struct WeightedHypergraph {
    Hypergraph base;
    std::vector<Rational> weights;

    WeightedHypergraph(Hypergraph b, std::vector<Rational> w) : base(std::move(b)), weights(std::move(w)) {
        if (weights.size() != base.n_edges())
            throw PreconditionError("weight count differs from edge count");
    }
};

// ---------------------------------------------------------------------------
// Named constructors
// ---------------------------------------------------------------------------

/// The grid hypergraph H_r: r^2 vertices indexed (i,j) -> i*r + j (row-major),
/// edges are the r rows followed by the r columns. This ordering is canonical:
/// the homomorphism engine and the pipeline tests rely on it.
inline Hypergraph grid(unsigned r) {
    if (r < 2) throw PreconditionError("grid: r must be >= 2");
    std::vector<Edge> edges;
    for (Vertex i = 0; i < r; ++i) {
        Edge row;
        for (Vertex j = 0; j < r; ++j) row.push_back(i * r + j);
        edges.push_back(std::move(row));
    }
    for (Vertex j = 0; j < r; ++j) {
        Edge col;
        for (Vertex i = 0; i < r; ++i) col.push_back(i * r + j);
        edges.push_back(std::move(col));
    }
    return Hypergraph(r, r * r, std::move(edges));
}

/// Levi (incidence) graph: left side = vertices of H, right side = edge
/// positions of H (each copy of a repeated edge gets its own right vertex).
inline BipartiteGraph levi(const Hypergraph& h) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (std::size_t k = 0; k < h.n_edges(); ++k)
        for (Vertex v : h.edge(k)) edges.emplace_back(v, static_cast<Vertex>(k));
    return BipartiteGraph(h.n_vertices(), static_cast<Vertex>(h.n_edges()), std::move(edges));
}

/// Box product: vertex (x,y) -> x*n(g2) + y; horizontal edges (edge of g1 x
/// vertex of g2) listed first, then vertical ones, with the type labeling
/// carried on the result.
inline Hypergraph box_product(const Hypergraph& g1, const Hypergraph& g2) {
    if (g1.r() != g2.r()) throw PreconditionError("box_product: uniformity mismatch");
    const Vertex n2 = g2.n_vertices();
    std::vector<Edge> edges;
    std::vector<EdgeType> types;
    for (const auto& e : g1.edges())
        for (Vertex y = 0; y < n2; ++y) {
            Edge out;
            for (Vertex x : e) out.push_back(x * n2 + y);
            edges.push_back(std::move(out));
            types.push_back(EdgeType::horizontal);
        }
    for (Vertex x = 0; x < g1.n_vertices(); ++x)
        for (const auto& e : g2.edges()) {
            Edge out;
            for (Vertex y : e) out.push_back(x * n2 + y);
            edges.push_back(std::move(out));
            types.push_back(EdgeType::vertical);
        }
    return Hypergraph(g1.r(), g1.n_vertices() * n2, std::move(edges), std::move(types));
}

namespace detail {
inline std::vector<std::vector<Vertex>> subsets_of_size(Vertex n, unsigned k) {
    std::vector<std::vector<Vertex>> out;
    std::vector<Vertex> cur;
    auto rec = [&](auto&& self, Vertex start) -> void {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (Vertex v = start; v < n; ++v) {
            if (n - v < k - cur.size()) break;
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out; // lexicographic order
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
    return result;
}
} // namespace detail

/// The r-graph whose Levi graph is the set-inclusion graph I(n,m,k):
/// vertices are the k-subsets of [n] in lexicographic rank order, one edge per
/// m-subset X consisting of all k-subsets of X, so r = binomial(m,k).
inline Hypergraph set_inclusion_rgraph(unsigned n, unsigned m, unsigned k) {
    if (k < 1 || m < 2 * k || n < m) throw PreconditionError("set_inclusion_rgraph: need n >= m >= 2k, k >= 1");
    const auto k_subsets = detail::subsets_of_size(n, k);
    std::map<std::vector<Vertex>, Vertex> rank;
    for (Vertex i = 0; i < k_subsets.size(); ++i) rank[k_subsets[i]] = i;
    std::vector<Edge> edges;
    for (const auto& big : detail::subsets_of_size(n, m)) {
        Edge e;
        for (const auto& sub : detail::subsets_of_size(static_cast<Vertex>(m), k)) {
            std::vector<Vertex> pick;
            for (Vertex idx : sub) pick.push_back(big[idx]);
            e.push_back(rank.at(pick));
        }
        edges.push_back(std::move(e));
    }
    const auto r = static_cast<unsigned>(detail::binomial(m, k));
    return Hypergraph(r, static_cast<Vertex>(k_subsets.size()), std::move(edges));
}

/// The Fano plane as a 3-graph: 7 points, 7 lines, every pair of points covered.
inline Hypergraph fano_plane() {
    return Hypergraph(3, 7,
                      {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}});
}

inline Hypergraph single_edge(unsigned r) {
    Edge e;
    for (Vertex v = 0; v < r; ++v) e.push_back(v);
    return Hypergraph(r, r, {e});
}

inline Hypergraph cycle_graph(Vertex k) {
    if (k < 3) throw PreconditionError("cycle_graph: need k >= 3");
    std::vector<Edge> edges;
    for (Vertex i = 0; i < k; ++i) edges.push_back({i, (i + 1) % k});
    return Hypergraph(2, k, std::move(edges));
}

inline Hypergraph star_graph(Vertex leaves) {
    std::vector<Edge> edges;
    for (Vertex i = 1; i <= leaves; ++i) edges.push_back({0, i});
    return Hypergraph(2, leaves + 1, std::move(edges));
}

inline Hypergraph empty_hypergraph(unsigned r, Vertex n) { return Hypergraph(r, n, {}); }

/// Disjoint union; the second graph's vertices are shifted past the first's.
inline Hypergraph disjoint_union(const Hypergraph& a, const Hypergraph& b) {
    if (a.r() != b.r()) throw PreconditionError("disjoint_union: uniformity mismatch");
    std::vector<Edge> edges = a.edges();
    for (const auto& e : b.edges()) {
        Edge shifted;
        for (Vertex v : e) shifted.push_back(v + a.n_vertices());
        edges.push_back(std::move(shifted));
    }
    return Hypergraph(a.r(), a.n_vertices() + b.n_vertices(), std::move(edges));
}

/// Views a bipartite graph as a 2-graph: left vertices keep their indices,
/// right vertex j becomes n_left + j.
inline Hypergraph to_hypergraph(const BipartiteGraph& g) {
    std::vector<Edge> edges;
    for (const auto& [l, r] : g.edges()) edges.push_back({l, g.n_left() + r});
    return Hypergraph(2, g.n_left() + g.n_right(), std::move(edges));
}

/// The 1-subdivision of K_{r,r}, i.e. the Levi graph of the grid hypergraph.
inline BipartiteGraph subdivision_krr(unsigned r) { return levi(grid(r)); }

// ---------------------------------------------------------------------------
// Structural predicates
// ---------------------------------------------------------------------------

inline std::size_t intersection_size(const Edge& a, const Edge& b) {
    std::size_t count = 0, i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (a[i] > b[j]) ++j;
        else { ++count; ++i; ++j; }
    }
    return count;
}

/// True iff every pair of distinct edge positions shares at most one vertex.
inline bool is_linear(const Hypergraph& h) {
    // Any repeated pair of vertices across positions breaks linearity (a
    // parallel edge shares r >= 2... for r == 1 edges have no pairs).
    std::set<std::pair<Vertex, Vertex>> used;
    for (const auto& e : h.edges())
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::size_t j = i + 1; j < e.size(); ++j)
                if (!used.insert({e[i], e[j]}).second) return false;
    return true;
}

/// True iff some 3 edges pairwise intersect in exactly one vertex each, with
/// the three intersection points distinct (equivalently, empty triple
/// intersection). Scans pairs of intersecting edges and closes them through
/// the pair -> edges index rather than scanning all edge triples.
inline bool contains_triangle(const Hypergraph& h) {
    const auto& edges = h.edges();
    std::map<std::pair<Vertex, Vertex>, std::vector<std::size_t>> pair_index;
    for (std::size_t k = 0; k < edges.size(); ++k)
        for (std::size_t i = 0; i < edges[k].size(); ++i)
            for (std::size_t j = i + 1; j < edges[k].size(); ++j)
                pair_index[{edges[k][i], edges[k][j]}].push_back(k);

    std::vector<std::vector<std::size_t>> at_vertex(h.n_vertices());
    for (std::size_t k = 0; k < edges.size(); ++k)
        for (Vertex v : edges[k]) at_vertex[v].push_back(k);

    for (std::size_t f = 0; f < edges.size(); ++f) {
        // candidate partners meeting f in exactly one vertex
        for (Vertex p : edges[f]) {
            for (std::size_t g : at_vertex[p]) {
                if (g <= f || intersection_size(edges[f], edges[g]) != 1) continue;
                // third edge through x in f-p and y in g-p
                for (Vertex x : edges[f]) {
                    if (x == p) continue;
                    for (Vertex y : edges[g]) {
                        if (y == p) continue;
                        const auto it = pair_index.find({std::min(x, y), std::max(x, y)});
                        if (it == pair_index.end()) continue;
                        for (std::size_t t : it->second) {
                            if (t == f || t == g) continue;
                            if (intersection_size(edges[t], edges[f]) == 1 &&
                                intersection_size(edges[t], edges[g]) == 1)
                                return true; // triple intersection empty: t misses p by choice of x,y
                        }
                    }
                }
            }
        }
    }
    return false;
}

} // namespace posigraph
