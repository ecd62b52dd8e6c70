#pragma once

#include "posigraph/hypergraph.hpp"
#include "posigraph/rational.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <future>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace posigraph {

/// Total map between vertex sets; asserted as a homomorphism where required.
struct VertexMap {
    Vertex source_size = 0;
    Vertex target_size = 0;
    std::vector<Vertex> image;

    bool is_bijective() const {
        if (source_size != target_size) return false;
        std::vector<bool> hit(target_size, false);
        for (Vertex t : image) {
            if (hit[t]) return false;
            hit[t] = true;
        }
        return true;
    }

    bool operator==(const VertexMap& o) const = default;
};

inline bool is_homomorphism(const Hypergraph& h, const Hypergraph& g, const VertexMap& m) {
    if (m.source_size != h.n_vertices() || m.target_size != g.n_vertices() ||
        m.image.size() != h.n_vertices() || h.r() != g.r())
        return false;
    std::set<Edge> present(g.edges().begin(), g.edges().end());
    for (const auto& e : h.edges()) {
        Edge im;
        for (Vertex v : e) im.push_back(m.image[v]);
        std::sort(im.begin(), im.end());
        if (std::adjacent_find(im.begin(), im.end()) != im.end() || !present.count(im)) return false;
    }
    return true;
}

/// Composition outer ∘ inner (apply inner first).
inline VertexMap compose(const VertexMap& outer, const VertexMap& inner) {
    if (inner.target_size != outer.source_size) throw PreconditionError("compose: size mismatch");
    VertexMap out{inner.source_size, outer.target_size, {}};
    out.image.reserve(inner.image.size());
    for (Vertex v : inner.image) out.image.push_back(outer.image[v]);
    return out;
}

/// Result of a weighted homomorphism sum: the exact value together with the
/// number of homomorphisms it ranges over.
struct HomSum {
    Rational value;
    Int hom_count;
};

/// Worker-count cap taken from POSIGRAPH_THREADS (default 1).
inline unsigned thread_budget() {
    const char* env = std::getenv("POSIGRAPH_THREADS");
    if (!env) return 1;
    const long v = std::atol(env);
    if (v <= 1) return 1;
    return static_cast<unsigned>(std::min<long>(v, 64));
}

namespace detail {

/// Target-side lookup structures for the backtracking engine.
struct TargetModel {
    Vertex n = 0;
    std::set<Edge> present;
    std::map<Edge, Rational> weight_by_edge;           // parallel copies summed
    std::map<Edge, std::vector<Vertex>> completions;   // (r-1)-subset -> completing vertices
    std::vector<std::vector<std::uint64_t>> co_neighbor; // bitsets; empty when target too large
    std::size_t words = 0;

    explicit TargetModel(const Hypergraph& g, const std::vector<Rational>* weights = nullptr) : n(g.n_vertices()) {
        for (std::size_t k = 0; k < g.n_edges(); ++k) {
            const Edge& e = g.edge(k);
            present.insert(e);
            if (weights) weight_by_edge[e] += (*weights)[k];
            Edge key;
            key.reserve(e.size());
            for (std::size_t drop = 0; drop < e.size(); ++drop) {
                key.clear();
                for (std::size_t i = 0; i < e.size(); ++i)
                    if (i != drop) key.push_back(e[i]);
                completions[key].push_back(e[drop]);
            }
        }
        for (auto& [key, verts] : completions) {
            std::sort(verts.begin(), verts.end());
            verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        }
        if (n > 0 && n <= 8192) {
            words = (n + 63) / 64;
            co_neighbor.assign(n, std::vector<std::uint64_t>(words, 0));
            for (const auto& e : g.edges())
                for (Vertex a : e)
                    for (Vertex b : e)
                        if (a != b) co_neighbor[a][b / 64] |= (std::uint64_t{1} << (b % 64));
        }
    }

    bool co_occur(Vertex a, Vertex b) const {
        return (co_neighbor[a][b / 64] >> (b % 64)) & 1;
    }
};

/// Pattern-side plan: vertex assignment order (breadth-first from the vertex of
/// maximum degree, which front-loads edge constraints), plus per-position lists
/// of edges that complete there and earlier co-occurrence constraints.
struct PatternPlan {
    std::vector<Vertex> order;
    std::vector<std::size_t> pos_of;
    std::vector<std::vector<std::vector<std::size_t>>> completing; // [pos] -> list of earlier-position tuples (r-1 each)
    std::vector<std::vector<std::size_t>> co_constraints;          // [pos] -> earlier positions sharing an incomplete edge

    explicit PatternPlan(const Hypergraph& h) {
        const Vertex n = h.n_vertices();
        const auto deg = h.degrees();
        std::vector<std::set<Vertex>> adj(n);
        for (const auto& e : h.edges())
            for (Vertex a : e)
                for (Vertex b : e)
                    if (a != b) adj[a].insert(b);

        std::vector<bool> seen(n, false);
        while (order.size() < n) {
            Vertex best = 0;
            bool found = false;
            for (Vertex v = 0; v < n; ++v)
                if (!seen[v] && (!found || deg[v] > deg[best])) { best = v; found = true; }
            std::vector<Vertex> queue{best};
            seen[best] = true;
            for (std::size_t head = 0; head < queue.size(); ++head) {
                const Vertex u = queue[head];
                order.push_back(u);
                for (Vertex w : adj[u])
                    if (!seen[w]) { seen[w] = true; queue.push_back(w); }
            }
        }
        pos_of.assign(n, 0);
        for (std::size_t i = 0; i < order.size(); ++i) pos_of[order[i]] = i;

        completing.assign(n, {});
        co_constraints.assign(n, {});
        std::vector<std::set<std::size_t>> co(n);
        for (const auto& e : h.edges()) {
            std::vector<std::size_t> positions;
            for (Vertex v : e) positions.push_back(pos_of[v]);
            std::sort(positions.begin(), positions.end());
            const std::size_t last = positions.back();
            completing[last].push_back({positions.begin(), positions.end() - 1});
            // every non-final vertex of the edge constrains later ones pairwise
            for (std::size_t i = 0; i < positions.size(); ++i)
                for (std::size_t j = 0; j < i; ++j)
                    if (positions[i] != last) co[positions[i]].insert(positions[j]);
            // the final position is constrained only through `completing`
        }
        for (Vertex i = 0; i < n; ++i)
            co_constraints[i].assign(co[i].begin(), co[i].end());
    }
};

/// Backtracking homomorphism search over a fixed pattern plan and target model.
/// Modes: plain visiting/counting, injectivity, exact weighted sums with
/// optional per-target-vertex multipliers (used by the density bridge).
class HomSearch {
public:
    using Visitor = std::function<bool(const std::vector<Vertex>&)>; // return false to stop

    HomSearch(const Hypergraph& pattern, const TargetModel& model, const PatternPlan& plan)
        : pattern_(pattern), model_(model), plan_(plan) {
        image_.assign(pattern.n_vertices(), 0);
        used_.assign(model.n, false);
    }

    bool injective = false;
    const std::vector<Rational>* vertex_weights = nullptr; // per target vertex
    bool weighted = false;

    /// Runs the full search; visitor may be null (count/sum only).
    void run(const Visitor& visit) {
        stop_ = false;
        hom_count = 0;
        value = 0;
        products_.assign(pattern_.n_vertices() + 1, Rational(1));
        recurse(0, visit);
    }

    /// Parallel count/sum over first-position branches; no visitor.
    void run_parallel(unsigned threads);

    Int hom_count;
    Rational value;

private:
    void recurse(std::size_t pos, const Visitor& visit) {
        if (stop_) return;
        const Vertex n_pat = pattern_.n_vertices();
        if (pos == n_pat) {
            ++hom_count;
            if (weighted) value += products_[pos];
            if (visit && !visit(image_)) stop_ = true;
            return;
        }
        const Vertex v = plan_.order[pos];
        const auto& comps = plan_.completing[pos];

        scratch_.clear();
        if (!comps.empty()) {
            // candidates come from the (r-1)-subset index of the first completing edge
            key_.clear();
            for (std::size_t p : comps[0]) key_.push_back(image_[plan_.order[p]]);
            std::sort(key_.begin(), key_.end());
            if (std::adjacent_find(key_.begin(), key_.end()) != key_.end()) return;
            const auto it = model_.completions.find(key_);
            if (it == model_.completions.end()) return;
            scratch_ = it->second;
        } else if (!plan_.co_constraints[pos].empty() && !model_.co_neighbor.empty()) {
            bits_.assign(model_.words, ~std::uint64_t{0});
            for (std::size_t p : plan_.co_constraints[pos]) {
                const auto& row = model_.co_neighbor[image_[plan_.order[p]]];
                for (std::size_t w = 0; w < model_.words; ++w) bits_[w] &= row[w];
            }
            for (std::size_t w = 0; w < model_.words; ++w) {
                std::uint64_t word = bits_[w];
                while (word) {
                    const unsigned bit = static_cast<unsigned>(std::countr_zero(word));
                    const Vertex c = static_cast<Vertex>(w * 64 + bit);
                    if (c < model_.n) scratch_.push_back(c);
                    word &= word - 1;
                }
            }
        } else {
            for (Vertex c = 0; c < model_.n; ++c) scratch_.push_back(c);
        }

        const std::vector<Vertex> candidates = std::move(scratch_); // recursion reuses scratch_
        for (Vertex c : candidates) {
            if (stop_) return;
            if (injective && used_[c]) continue;
            if (!accept(pos, v, c, comps)) continue;
            image_[v] = c;
            if (injective) used_[c] = true;
            recurse(pos + 1, visit);
            if (injective) used_[c] = false;
        }
    }

    bool accept(std::size_t pos, Vertex v, Vertex c, const std::vector<std::vector<std::size_t>>& comps) {
        // remaining completing edges must land on present edges
        Rational product;
        if (weighted) product = products_[pos];
        image_[v] = c;
        for (std::size_t k = comps.empty() ? 0 : 1; k < comps.size(); ++k) {
            key_.clear();
            for (std::size_t p : comps[k]) key_.push_back(image_[plan_.order[p]]);
            key_.push_back(c);
            std::sort(key_.begin(), key_.end());
            if (std::adjacent_find(key_.begin(), key_.end()) != key_.end()) return false;
            if (!model_.present.count(key_)) return false;
        }
        if (!model_.co_neighbor.empty())
            for (std::size_t p : plan_.co_constraints[pos])
                if (!model_.co_occur(image_[plan_.order[p]], c)) return false;
        if (weighted) {
            for (const auto& comp : comps) {
                key_.clear();
                for (std::size_t p : comp) key_.push_back(image_[plan_.order[p]]);
                key_.push_back(c);
                std::sort(key_.begin(), key_.end());
                product *= model_.weight_by_edge.at(key_);
            }
            if (vertex_weights) product *= (*vertex_weights)[c];
            products_[pos + 1] = product;
        }
        return true;
    }

    const Hypergraph& pattern_;
    const TargetModel& model_;
    const PatternPlan& plan_;
    std::vector<Vertex> image_;
    std::vector<bool> used_;
    std::vector<Rational> products_;
    std::vector<Vertex> scratch_, key_;
    std::vector<std::uint64_t> bits_;
    bool stop_ = false;
};

inline void HomSearch::run_parallel(unsigned threads) {
    const Vertex n_pat = pattern_.n_vertices();
    // An edge completing at position 0 (r = 1 patterns) would bypass the
    // index-derived candidate guarantee the driver relies on.
    if (threads <= 1 || n_pat == 0 || model_.n == 0 || !plan_.completing[0].empty()) {
        run(nullptr);
        return;
    }
    std::vector<std::future<std::pair<Int, Rational>>> futures;
    const std::size_t chunk = (model_.n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const Vertex begin = static_cast<Vertex>(std::min<std::size_t>(t * chunk, model_.n));
        const Vertex end = static_cast<Vertex>(std::min<std::size_t>(begin + chunk, model_.n));
        if (begin >= end) break;
        futures.push_back(std::async(std::launch::async, [this, begin, end]() {
            HomSearch worker(pattern_, model_, plan_);
            worker.injective = injective;
            worker.weighted = weighted;
            worker.vertex_weights = vertex_weights;
            worker.hom_count = 0;
            worker.value = 0;
            worker.products_.assign(pattern_.n_vertices() + 1, Rational(1));
            const Vertex v0 = worker.plan_.order[0];
            for (Vertex c = begin; c < end; ++c) {
                if (!worker.accept(0, v0, c, worker.plan_.completing[0])) continue;
                worker.image_[v0] = c;
                if (worker.injective) worker.used_[c] = true;
                worker.recurse(1, nullptr);
                if (worker.injective) worker.used_[c] = false;
            }
            return std::make_pair(worker.hom_count, worker.value);
        }));
    }
    hom_count = 0;
    value = 0;
    for (auto& f : futures) {
        auto [cnt, val] = f.get();
        hom_count += cnt;
        value += val;
    }
}

} // namespace detail

namespace detail {
inline void require_same_uniformity(const Hypergraph& h, const Hypergraph& g) {
    if (h.r() != g.r()) throw PreconditionError("homomorphism: uniformity mismatch");
}
} // namespace detail

/// Visits every homomorphism from h to g in the engine's deterministic search
/// order; the visitor returns false to stop early.
inline void for_each_hom(const Hypergraph& h, const Hypergraph& g,
                         const std::function<bool(const VertexMap&)>& visit, bool injective = false) {
    detail::require_same_uniformity(h, g);
    const detail::TargetModel model(g);
    const detail::PatternPlan plan(h);
    detail::HomSearch search(h, model, plan);
    search.injective = injective;
    search.run([&](const std::vector<Vertex>& image) {
        return visit(VertexMap{h.n_vertices(), g.n_vertices(), image});
    });
}

/// All homomorphisms from h to g, sorted lexicographically by image array.
inline std::vector<VertexMap> enumerate_homs(const Hypergraph& h, const Hypergraph& g) {
    std::vector<VertexMap> out;
    for_each_hom(h, g, [&](const VertexMap& m) {
        out.push_back(m);
        return true;
    });
    std::sort(out.begin(), out.end(),
              [](const VertexMap& a, const VertexMap& b) { return a.image < b.image; });
    return out;
}

inline Int count_homs(const Hypergraph& h, const Hypergraph& g) {
    detail::require_same_uniformity(h, g);
    const detail::TargetModel model(g);
    const detail::PatternPlan plan(h);
    detail::HomSearch search(h, model, plan);
    search.run_parallel(thread_budget());
    return search.hom_count;
}

inline bool has_injective_hom(const Hypergraph& h, const Hypergraph& g) {
    bool found = false;
    for_each_hom(h, g, [&](const VertexMap&) {
        found = true;
        return false;
    }, /*injective=*/true);
    return found;
}

/// Exact Σ over homomorphisms of Π over pattern edges of the image edge's
/// weight. Pattern edge multiplicities multiply their factor; weights of
/// parallel *target* copies add before entering the product. On simple
/// targets with unit weights the value equals the homomorphism count; a
/// parallel copy inflates its edge's factor by the summed weight instead.
inline HomSum weighted_hom_sum(const Hypergraph& h, const WeightedHypergraph& t) {
    detail::require_same_uniformity(h, t.base);
    const detail::TargetModel model(t.base, &t.weights);
    const detail::PatternPlan plan(h);
    detail::HomSearch search(h, model, plan);
    search.weighted = true;
    search.run_parallel(thread_budget());
    return HomSum{search.value, search.hom_count};
}

/// Density bridge: Σ over homomorphisms of Π edge weights · Π per-vertex
/// multipliers of the image (the step-function measures).
inline Rational weighted_hom_sum_with_measures(const Hypergraph& h, const WeightedHypergraph& t,
                                               const std::vector<Rational>& measures) {
    detail::require_same_uniformity(h, t.base);
    if (measures.size() != t.base.n_vertices())
        throw PreconditionError("measure vector length differs from target size");
    const detail::TargetModel model(t.base, &t.weights);
    const detail::PatternPlan plan(h);
    detail::HomSearch search(h, model, plan);
    search.weighted = true;
    search.vertex_weights = &measures;
    search.run_parallel(thread_budget());
    return search.value;
}

inline std::vector<VertexMap> endomorphisms(const Hypergraph& h) { return enumerate_homs(h, h); }

inline std::vector<VertexMap> automorphisms(const Hypergraph& h) {
    std::vector<VertexMap> out;
    const auto mult = h.edge_multiset();
    for_each_hom(h, h, [&](const VertexMap& m) {
        if (m.is_bijective()) {
            std::map<Edge, std::size_t> image_mult;
            for (const auto& e : h.edges()) {
                Edge im;
                for (Vertex v : e) im.push_back(m.image[v]);
                std::sort(im.begin(), im.end());
                ++image_mult[im];
            }
            if (image_mult == mult) out.push_back(m);
        }
        return true;
    });
    std::sort(out.begin(), out.end(),
              [](const VertexMap& a, const VertexMap& b) { return a.image < b.image; });
    return out;
}

/// True iff every endomorphism maps exactly one edge position onto the edge at
/// `position` (as edge sets). Streams endomorphisms and stops at the first
/// violation.
inline bool is_odd_edge(const Hypergraph& h, std::size_t position) {
    if (position >= h.n_edges()) throw PreconditionError("is_odd_edge: edge position out of range");
    const Edge target = h.edge(position);
    bool odd = true;
    for_each_hom(h, h, [&](const VertexMap& m) {
        std::size_t preimages = 0;
        for (const auto& e : h.edges()) {
            Edge im;
            for (Vertex v : e) im.push_back(m.image[v]);
            std::sort(im.begin(), im.end());
            if (im == target) ++preimages;
        }
        if (preimages != 1) {
            odd = false;
            return false;
        }
        return true;
    });
    return odd;
}

/// Homomorphic image: the subgraph of g on the image vertices with the
/// deduplicated image edges, relabeled to 0..k-1, plus the map back to g.
struct ImageSubgraph {
    Hypergraph image;
    std::vector<Vertex> to_target; // image vertex -> vertex of g
};

inline ImageSubgraph image_subgraph(const Hypergraph& h, const Hypergraph& g, const VertexMap& m) {
    if (!is_homomorphism(h, g, m)) throw PreconditionError("image_subgraph: map is not a homomorphism");
    std::vector<Vertex> verts(m.image.begin(), m.image.end());
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    std::map<Vertex, Vertex> relabel;
    for (Vertex i = 0; i < verts.size(); ++i) relabel[verts[i]] = i;
    std::set<Edge> image_edges;
    for (const auto& e : h.edges()) {
        Edge im;
        for (Vertex v : e) im.push_back(relabel.at(m.image[v]));
        std::sort(im.begin(), im.end());
        image_edges.insert(im);
    }
    return ImageSubgraph{
        Hypergraph(h.r(), static_cast<Vertex>(verts.size()), {image_edges.begin(), image_edges.end()}),
        std::move(verts)};
}

/// Small-instance isomorphism: degree/edge-profile pruning, then a search for
/// an edge-multiset-preserving bijection.
inline bool isomorphic(const Hypergraph& h1, const Hypergraph& h2) {
    if (h1.r() != h2.r() || h1.n_vertices() != h2.n_vertices() || h1.n_edges() != h2.n_edges())
        return false;
    auto d1 = h1.degrees(), d2 = h2.degrees();
    {
        auto s1 = d1, s2 = d2;
        std::sort(s1.begin(), s1.end());
        std::sort(s2.begin(), s2.end());
        if (s1 != s2) return false;
    }
    // per-edge profile: sorted vertex degrees
    auto profile = [](const Hypergraph& h, const std::vector<std::size_t>& deg) {
        std::vector<std::vector<std::size_t>> p;
        for (const auto& e : h.edges()) {
            std::vector<std::size_t> q;
            for (Vertex v : e) q.push_back(deg[v]);
            std::sort(q.begin(), q.end());
            p.push_back(std::move(q));
        }
        std::sort(p.begin(), p.end());
        return p;
    };
    if (profile(h1, d1) != profile(h2, d2)) return false;

    const auto mult2 = h2.edge_multiset();
    bool found = false;
    for_each_hom(h1, h2, [&](const VertexMap& m) {
        std::map<Edge, std::size_t> image_mult;
        for (const auto& e : h1.edges()) {
            Edge im;
            for (Vertex v : e) im.push_back(m.image[v]);
            std::sort(im.begin(), im.end());
            ++image_mult[im];
        }
        if (image_mult == mult2) {
            found = true;
            return false;
        }
        return true;
    }, /*injective=*/true);
    if (found) return true;
    // injective homomorphism search needs every h1 edge present in h2; an
    // isolated-vertex-only difference is already excluded by the degree check
    return false;
}

} // namespace posigraph
