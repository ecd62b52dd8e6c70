#pragma once

#include "posigraph/homomorphism.hpp"
#include "posigraph/hypergraph.hpp"
#include "posigraph/interval.hpp"
#include "posigraph/rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

namespace posigraph {

/// Symmetric r-dimensional rational tensor of size n, i.e. a step function on
/// an n-part partition of [0,1]. Entries are stored on canonical (sorted)
/// index tuples, so symmetry holds by construction; absent tuples are zero.
/// Parts have measure 1/n unless an explicit measure vector is attached
/// (needed by the doubling construction, whose halves are scaled differently).
class SymStepFunction {
public:
    SymStepFunction(unsigned r, Vertex n) : r_(r), n_(n) {
        if (r_ < 1 || n_ < 1) throw PreconditionError("step function needs r >= 1, n >= 1");
    }

    unsigned r() const { return r_; }
    Vertex n() const { return n_; }

    void set(std::vector<Vertex> tuple, const Rational& value) {
        canonicalize(tuple);
        if (value == 0)
            entries_.erase(tuple);
        else
            entries_[std::move(tuple)] = value;
    }

    Rational at(std::vector<Vertex> tuple) const {
        canonicalize(tuple);
        const auto it = entries_.find(tuple);
        return it == entries_.end() ? Rational(0) : it->second;
    }

    const std::map<std::vector<Vertex>, Rational>& support() const { return entries_; }

    bool has_diagonal_support() const {
        for (const auto& [tuple, value] : entries_)
            if (std::adjacent_find(tuple.begin(), tuple.end()) != tuple.end()) return true;
        return false;
    }

    Rational max_abs() const {
        Rational m(0);
        for (const auto& [tuple, value] : entries_) m = std::max(m, abs(value));
        return m;
    }

    void set_measures(std::vector<Rational> measures) {
        if (measures.size() != n_) throw PreconditionError("measure vector length differs from size");
        Rational total(0);
        for (const auto& m : measures) {
            if (m <= 0) throw PreconditionError("measures must be positive");
            total += m;
        }
        if (total != 1) throw PreconditionError("measures must sum to 1");
        measures_ = std::move(measures);
    }

    bool has_custom_measures() const { return measures_.has_value(); }

    std::vector<Rational> measures() const {
        if (measures_) return *measures_;
        return std::vector<Rational>(n_, Rational(1, n_));
    }

    /// Dense row-major entries; the serialization layout.
    std::vector<Rational> to_dense() const {
        std::size_t total = 1;
        for (unsigned i = 0; i < r_; ++i) {
            total *= n_;
            if (total > (1u << 26)) throw PreconditionError("step function too large to densify");
        }
        std::vector<Rational> dense(total, Rational(0));
        std::vector<Vertex> tuple(r_, 0);
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::size_t rest = idx;
            for (unsigned k = r_; k-- > 0;) {
                tuple[k] = static_cast<Vertex>(rest % n_);
                rest /= n_;
            }
            dense[idx] = at(tuple);
        }
        return dense;
    }

    static SymStepFunction from_dense(unsigned r, Vertex n, const std::vector<Rational>& dense) {
        SymStepFunction h(r, n);
        std::size_t total = 1;
        for (unsigned i = 0; i < r; ++i) total *= n;
        if (dense.size() != total) throw PreconditionError("dense entry count differs from n^r");
        std::vector<Vertex> tuple(r, 0);
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::size_t rest = idx;
            for (unsigned k = r; k-- > 0;) {
                tuple[k] = static_cast<Vertex>(rest % n);
                rest /= n;
            }
            std::vector<Vertex> sorted = tuple;
            std::sort(sorted.begin(), sorted.end());
            const auto it = h.entries_.find(sorted);
            if (it == h.entries_.end()) {
                if (dense[idx] != 0) h.entries_[sorted] = dense[idx];
            } else if (it->second != dense[idx]) {
                throw PreconditionError("dense entries are not symmetric");
            }
        }
        // a zero stored later must not contradict an earlier nonzero
        for (const auto& [sorted, value] : h.entries_) {
            std::size_t idx = 0;
            for (Vertex v : sorted) idx = idx * n + v;
            if (dense[idx] != value) throw PreconditionError("dense entries are not symmetric");
        }
        return h;
    }

    bool operator==(const SymStepFunction& o) const {
        return r_ == o.r_ && n_ == o.n_ && entries_ == o.entries_ && measures() == o.measures();
    }

private:
    void canonicalize(std::vector<Vertex>& tuple) const {
        if (tuple.size() != r_) throw PreconditionError("index tuple arity differs from r");
        for (Vertex v : tuple)
            if (v >= n_) throw PreconditionError("index out of range");
        std::sort(tuple.begin(), tuple.end());
    }

    unsigned r_;
    Vertex n_;
    std::map<std::vector<Vertex>, Rational> entries_;
    std::optional<std::vector<Rational>> measures_;
};

/// Asymmetric two-variable step function: an n x N block matrix, exact
/// rational or real (interval-enclosed) entries depending on mode.
class BipStepFunction {
public:
    enum class Mode { exact, real };

    static BipStepFunction exact(Vertex n, Vertex N, std::vector<Rational> entries) {
        BipStepFunction f(n, N, Mode::exact);
        if (entries.size() != static_cast<std::size_t>(n) * N)
            throw PreconditionError("entry count differs from n*N");
        f.exact_ = std::move(entries);
        return f;
    }

    static BipStepFunction real(Vertex n, Vertex N, std::vector<RationalInterval> entries) {
        BipStepFunction f(n, N, Mode::real);
        if (entries.size() != static_cast<std::size_t>(n) * N)
            throw PreconditionError("entry count differs from n*N");
        f.real_ = std::move(entries);
        return f;
    }

    Vertex n() const { return n_; }
    Vertex N() const { return N_; }
    Mode mode() const { return mode_; }
    bool is_exact() const { return mode_ == Mode::exact; }

    const Rational& at(Vertex i, Vertex j) const {
        require(Mode::exact);
        return exact_[static_cast<std::size_t>(i) * N_ + j];
    }
    const RationalInterval& at_interval(Vertex i, Vertex j) const {
        require(Mode::real);
        return real_[static_cast<std::size_t>(i) * N_ + j];
    }
    const std::vector<Rational>& exact_entries() const {
        require(Mode::exact);
        return exact_;
    }
    const std::vector<RationalInterval>& real_entries() const {
        require(Mode::real);
        return real_;
    }

    bool operator==(const BipStepFunction& o) const {
        if (n_ != o.n_ || N_ != o.N_ || mode_ != o.mode_) return false;
        if (mode_ == Mode::exact) return exact_ == o.exact_;
        for (std::size_t k = 0; k < real_.size(); ++k)
            if (real_[k].lo != o.real_[k].lo || real_[k].hi != o.real_[k].hi) return false;
        return true;
    }

private:
    BipStepFunction(Vertex n, Vertex N, Mode mode) : n_(n), N_(N), mode_(mode) {
        if (n_ < 1 || N_ < 1) throw PreconditionError("step function dimensions must be positive");
    }
    void require(Mode m) const {
        if (mode_ != m) throw PreconditionError("step function is in the wrong mode for this operation");
    }

    Vertex n_, N_;
    Mode mode_;
    std::vector<Rational> exact_;
    std::vector<RationalInterval> real_;
};

/// f^T(x,y) := f(y,x); involutive.
inline BipStepFunction transpose(const BipStepFunction& f) {
    if (f.is_exact()) {
        std::vector<Rational> t(static_cast<std::size_t>(f.n()) * f.N());
        for (Vertex i = 0; i < f.n(); ++i)
            for (Vertex j = 0; j < f.N(); ++j) t[static_cast<std::size_t>(j) * f.n() + i] = f.at(i, j);
        return BipStepFunction::exact(f.N(), f.n(), std::move(t));
    }
    std::vector<RationalInterval> t(static_cast<std::size_t>(f.n()) * f.N());
    for (Vertex i = 0; i < f.n(); ++i)
        for (Vertex j = 0; j < f.N(); ++j) t[static_cast<std::size_t>(j) * f.n() + i] = f.at_interval(i, j);
    return BipStepFunction::real(f.N(), f.n(), std::move(t));
}

// ---------------------------------------------------------------------------
// Exact sum-product evaluation by variable elimination. Densities are sums
// over all index assignments of products of local factors; eliminating one
// variable at a time keeps every computation that appears in the tests and
// the pipeline polynomial instead of n^v.
// ---------------------------------------------------------------------------

namespace detail {

template <typename V>
struct Factor {
    std::vector<std::size_t> vars;  // strictly ascending
    std::vector<V> table;           // row-major, last variable fastest
};

template <typename V>
V eliminate_all(const std::vector<std::size_t>& domains, std::vector<Factor<V>> factors) {
    constexpr std::size_t table_cap = std::size_t{1} << 24;
    std::vector<bool> remaining(domains.size(), false);
    for (const auto& f : factors)
        for (std::size_t v : f.vars) remaining[v] = true;

    while (true) {
        // pick the remaining variable whose neighborhood joint table is smallest
        std::size_t best_var = domains.size();
        std::size_t best_cost = 0;
        for (std::size_t v = 0; v < domains.size(); ++v) {
            if (!remaining[v]) continue;
            std::vector<bool> in_union(domains.size(), false);
            for (const auto& f : factors)
                if (std::find(f.vars.begin(), f.vars.end(), v) != f.vars.end())
                    for (std::size_t u : f.vars) in_union[u] = true;
            std::size_t cost = 1;
            for (std::size_t u = 0; u < domains.size(); ++u)
                if (in_union[u]) cost = std::min(table_cap, cost * domains[u]);
            if (best_var == domains.size() || cost < best_cost) {
                best_var = v;
                best_cost = cost;
            }
        }
        if (best_var == domains.size()) break;

        std::vector<Factor<V>> touching, rest;
        for (auto& f : factors) {
            if (std::find(f.vars.begin(), f.vars.end(), best_var) != f.vars.end())
                touching.push_back(std::move(f));
            else
                rest.push_back(std::move(f));
        }
        std::vector<std::size_t> uni;
        for (const auto& f : touching)
            for (std::size_t u : f.vars) uni.push_back(u);
        std::sort(uni.begin(), uni.end());
        uni.erase(std::unique(uni.begin(), uni.end()), uni.end());

        std::size_t joint_size = 1;
        for (std::size_t u : uni) {
            joint_size *= domains[u];
            if (joint_size > table_cap) throw PreconditionError("density evaluation exceeds the table cap");
        }
        // strides of each factor's variables inside the union odometer
        std::vector<std::vector<std::pair<std::size_t, std::size_t>>> proj; // (pos in uni, stride in factor)
        for (const auto& f : touching) {
            std::vector<std::pair<std::size_t, std::size_t>> p;
            std::size_t stride = 1;
            std::vector<std::size_t> strides(f.vars.size());
            for (std::size_t k = f.vars.size(); k-- > 0;) {
                strides[k] = stride;
                stride *= domains[f.vars[k]];
            }
            for (std::size_t k = 0; k < f.vars.size(); ++k) {
                const auto pos = static_cast<std::size_t>(
                    std::find(uni.begin(), uni.end(), f.vars[k]) - uni.begin());
                p.emplace_back(pos, strides[k]);
            }
            proj.push_back(std::move(p));
        }

        const std::size_t elim_pos = static_cast<std::size_t>(
            std::find(uni.begin(), uni.end(), best_var) - uni.begin());
        std::vector<std::size_t> out_vars;
        std::size_t out_size = 1;
        for (std::size_t u : uni)
            if (u != best_var) {
                out_vars.push_back(u);
                out_size *= domains[u];
            }
        std::vector<V> out_table(out_size, V(Rational(0)));

        std::vector<std::size_t> assign(uni.size(), 0);
        for (std::size_t idx = 0;; ++idx) {
            V prod = V(Rational(1));
            for (std::size_t fi = 0; fi < touching.size(); ++fi) {
                std::size_t fidx = 0;
                for (const auto& [pos, stride] : proj[fi]) fidx += assign[pos] * stride;
                prod *= touching[fi].table[fidx];
            }
            std::size_t oidx = 0;
            for (std::size_t k = 0; k < uni.size(); ++k)
                if (k != elim_pos) oidx = oidx * domains[uni[k]] + assign[k];
            out_table[oidx] += prod;
            // odometer
            std::size_t k = uni.size();
            while (k > 0) {
                --k;
                if (++assign[k] < domains[uni[k]]) break;
                assign[k] = 0;
                if (k == 0) goto done;
            }
            if (uni.empty()) break;
        }
    done:
        rest.push_back(Factor<V>{std::move(out_vars), std::move(out_table)});
        factors = std::move(rest);
        remaining[best_var] = false;
    }

    V result = V(Rational(1));
    for (const auto& f : factors) {
        if (!f.vars.empty()) throw PreconditionError("internal: uneliminated factor");
        result *= f.table.at(0);
    }
    return result;
}

/// Converts nonzero entries on distinct-index tuples into a weighted
/// hypergraph; the inverse of tensorize on linear targets.
inline WeightedHypergraph support_hypergraph(const SymStepFunction& h) {
    std::vector<Edge> edges;
    std::vector<Rational> weights;
    for (const auto& [tuple, value] : h.support()) {
        edges.push_back(tuple);
        weights.push_back(value);
    }
    return WeightedHypergraph(Hypergraph(h.r(), h.n(), std::move(edges)), std::move(weights));
}

inline Factor<Rational> edge_factor(const SymStepFunction& h, const Edge& e) {
    std::size_t size = 1;
    for (unsigned k = 0; k < h.r(); ++k) size *= h.n();
    std::vector<Rational> table(size);
    std::vector<Vertex> tuple(h.r(), 0);
    for (std::size_t idx = 0; idx < size; ++idx) {
        std::size_t rest = idx;
        for (unsigned k = h.r(); k-- > 0;) {
            tuple[k] = static_cast<Vertex>(rest % h.n());
            rest /= h.n();
        }
        table[idx] = h.at(tuple);
    }
    return Factor<Rational>{{e.begin(), e.end()}, std::move(table)};
}

} // namespace detail

/// Exact homomorphism density of the r-graph H against a symmetric step
/// function: Σ over all vertex assignments of Π over edges of the entry,
/// weighted by the part measures. Evaluated by variable elimination when the
/// dense n^r tables fit; past that, tensors supported on distinct-index
/// tuples (the tensorize case) route through the homomorphism engine, which
/// keeps sparse large-n instances feasible.
inline Rational density_sym(const Hypergraph& h, const SymStepFunction& f) {
    if (h.r() != f.r()) throw PreconditionError("density_sym: arity mismatch");
    const auto measures = f.measures();

    double table = 1;
    for (unsigned k = 0; k < f.r(); ++k) table *= f.n();
    if (table > double(1 << 20)) {
        if (f.has_diagonal_support())
            throw PreconditionError("density_sym: dense step function too large to evaluate");
        if (h.n_edges() == 0) return Rational(1); // measures sum to 1 per vertex
        return weighted_hom_sum_with_measures(h, detail::support_hypergraph(f), measures);
    }

    std::vector<std::size_t> domains(h.n_vertices(), f.n());
    std::vector<detail::Factor<Rational>> factors;
    for (Vertex v = 0; v < h.n_vertices(); ++v)
        factors.push_back(detail::Factor<Rational>{{v}, measures});
    for (const auto& e : h.edges()) factors.push_back(detail::edge_factor(f, e));
    return detail::eliminate_all(domains, std::move(factors));
}

namespace detail {

template <typename V, typename At>
V density_bip_impl(const BipartiteGraph& g, Vertex n, Vertex N, const At& entry) {
    const std::size_t L = g.n_left(), R = g.n_right();
    std::vector<std::size_t> domains(L + R);
    for (std::size_t v = 0; v < L; ++v) domains[v] = n;
    for (std::size_t v = 0; v < R; ++v) domains[L + v] = N;
    std::vector<Factor<V>> factors;
    for (std::size_t v = 0; v < L; ++v)
        factors.push_back(Factor<V>{{v}, std::vector<V>(n, V(Rational(1, n)))});
    for (std::size_t v = 0; v < R; ++v)
        factors.push_back(Factor<V>{{L + v}, std::vector<V>(N, V(Rational(1, N)))});
    for (const auto& [l, rgt] : g.edges()) {
        std::vector<V> table;
        table.reserve(static_cast<std::size_t>(n) * N);
        for (Vertex i = 0; i < n; ++i)
            for (Vertex j = 0; j < N; ++j) table.push_back(entry(i, j));
        factors.push_back(Factor<V>{{l, L + rgt}, std::move(table)});
    }
    return eliminate_all(domains, std::move(factors));
}

} // namespace detail

/// Exact bipartite density: left vertices range over the n row blocks, right
/// vertices over the N column blocks.
inline Rational density_bip(const BipartiteGraph& g, const BipStepFunction& f) {
    if (!f.is_exact()) throw PreconditionError("density_bip: exact mode required (use density_bip_interval)");
    return detail::density_bip_impl<Rational>(g, f.n(), f.N(),
                                              [&](Vertex i, Vertex j) { return f.at(i, j); });
}

/// Rigorous enclosure of the bipartite density of a real-mode step function.
inline RationalInterval density_bip_interval(const BipartiteGraph& g, const BipStepFunction& f) {
    if (f.is_exact())
        return RationalInterval(density_bip(g, f));
    return detail::density_bip_impl<RationalInterval>(
        g, f.n(), f.N(), [&](Vertex i, Vertex j) { return f.at_interval(i, j); });
}

/// The symmetrization used in the first half of the positivity-transfer proof:
/// a block step function of size n+N that is zero on the (X,X) and (Y,Y)
/// blocks and carries f across. Part measures are 1/(2n) on the X half and
/// 1/(2N) on the Y half, so for connected bipartite G,
///   2^v(G) · t_G(doubling(f)) = t_G(f) + t_G(f^T).
inline SymStepFunction doubling(const BipStepFunction& f) {
    if (!f.is_exact()) throw PreconditionError("doubling: exact mode required");
    const Vertex n = f.n(), N = f.N();
    SymStepFunction g(2, n + N);
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = 0; j < N; ++j) g.set({i, static_cast<Vertex>(n + j)}, f.at(i, j));
    std::vector<Rational> measures;
    for (Vertex i = 0; i < n; ++i) measures.emplace_back(1, 2 * static_cast<long long>(n));
    for (Vertex j = 0; j < N; ++j) measures.emplace_back(1, 2 * static_cast<long long>(N));
    g.set_measures(std::move(measures));
    return g;
}

/// The product construction from the same proof, at step-function level: parts
/// are pairs (i,j) -> i*N + j and h_{(i,j),(k,l)} = c_{i,l} c_{k,j}. Symmetric
/// by construction and t_G(h) = t_G(f) · t_G(f^T) for bipartite G.
inline SymStepFunction tensor_square(const BipStepFunction& f) {
    if (!f.is_exact()) throw PreconditionError("tensor_square: exact mode required");
    const Vertex n = f.n(), N = f.N();
    SymStepFunction h(2, n * N);
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = 0; j < N; ++j)
            for (Vertex k = 0; k < n; ++k)
                for (Vertex l = 0; l < N; ++l) {
                    const Vertex p = i * N + j, q = k * N + l;
                    if (p <= q) h.set({p, q}, f.at(i, l) * f.at(k, j));
                }
    return h;
}

} // namespace posigraph
