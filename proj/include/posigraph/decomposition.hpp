#pragma once

#include "posigraph/density.hpp"
#include "posigraph/hypergraph.hpp"
#include "posigraph/interval.hpp"
#include "posigraph/prng.hpp"
#include "posigraph/rational.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace posigraph {

/// Symmetric decomposition a = Σ_j λ_j b_j^{⊗r} with exact rational data.
struct Decomposition {
    Vertex n = 0;
    unsigned r = 0;
    std::size_t N = 0;
    std::vector<Rational> lambda;  // size N
    std::vector<Rational> B;       // n x N, row-major

    const Rational& b(Vertex i, std::size_t j) const { return B[static_cast<std::size_t>(i) * N + j]; }
};

/// Odd-order rescaling c_ij = (N λ_j)^{1/r} b_ij with interval-certified
/// entries; reconstruction error is bounded by the interval widths.
struct RescaledDecomposition {
    Vertex n = 0;
    unsigned r = 0;
    std::size_t N = 0;
    unsigned precision_bits = 0;
    std::vector<RationalInterval> C; // n x N, row-major

    const RationalInterval& c(Vertex i, std::size_t j) const {
        return C[static_cast<std::size_t>(i) * N + j];
    }
};

namespace detail {

/// Multisets of size r over {0..n-1}, ascending tuples in lexicographic order;
/// the monomial basis of symmetric r-tensors of size n.
inline std::vector<std::vector<Vertex>> multiset_basis(Vertex n, unsigned r) {
    std::vector<std::vector<Vertex>> out;
    std::vector<Vertex> cur;
    auto rec = [&](auto&& self, Vertex start) -> void {
        if (cur.size() == r) {
            out.push_back(cur);
            return;
        }
        for (Vertex v = start; v < n; ++v) {
            cur.push_back(v);
            self(self, v);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

inline Int symmetric_dimension(Vertex n, unsigned r) {
    // binomial(n + r - 1, r)
    Int num = 1, den = 1;
    for (unsigned i = 1; i <= r; ++i) {
        num *= Int(n) + i - 1;
        den *= i;
    }
    return num / den;
}

/// Number of distinct permutations of a sorted tuple: r! / Π mult_i!.
inline Int permutation_count(const std::vector<Vertex>& sorted_tuple) {
    Int count = 1;
    for (std::size_t i = 1; i <= sorted_tuple.size(); ++i) count *= i;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= sorted_tuple.size(); ++i) {
        if (i < sorted_tuple.size() && sorted_tuple[i] == sorted_tuple[i - 1]) {
            ++run;
        } else {
            Int fact = 1;
            for (std::size_t k = 2; k <= run; ++k) fact *= k;
            count /= fact;
            run = 1;
        }
    }
    return count;
}

/// Generic construction: sample D = binomial(n+r-1, r) integer vectors whose
/// r-th symmetric powers span the space (rank maintained by exact incremental
/// elimination, deficient samples redrawn), then solve for λ.
inline Decomposition decompose_generic(const SymStepFunction& a, std::uint64_t seed) {
    const Vertex n = a.n();
    const unsigned r = a.r();
    const auto basis = multiset_basis(n, r);
    const std::size_t D = basis.size();

    Prng rng(seed ^ 0x5b1dllu);
    const std::int64_t range = static_cast<std::int64_t>(r) * n;

    // Echelon rows over the monomial basis for the incremental rank check.
    std::vector<std::vector<Rational>> echelon;
    std::vector<std::size_t> pivot_col;
    std::vector<std::vector<Rational>> accepted_powers;
    std::vector<std::vector<Rational>> vectors;

    unsigned resamples = 0;
    while (vectors.size() < D) {
        std::vector<Rational> v(n);
        for (Vertex i = 0; i < n; ++i) v[i] = Rational(Int(rng.next_int(-range, range)));
        std::vector<Rational> power(D);
        for (std::size_t t = 0; t < D; ++t) {
            Rational prod(1);
            for (Vertex idx : basis[t]) prod *= v[idx];
            power[t] = prod;
        }
        std::vector<Rational> reduced = power;
        for (std::size_t row = 0; row < echelon.size(); ++row) {
            const Rational& lead = reduced[pivot_col[row]];
            if (lead == 0) continue;
            const Rational factor = lead / echelon[row][pivot_col[row]];
            for (std::size_t col = 0; col < D; ++col) reduced[col] -= factor * echelon[row][col];
        }
        std::size_t pc = D;
        for (std::size_t col = 0; col < D; ++col)
            if (reduced[col] != 0) { pc = col; break; }
        if (pc == D) {
            if (++resamples > 100)
                throw InconclusiveError("decompose: sampler failed to reach full rank within 100 resamples");
            continue;
        }
        echelon.push_back(std::move(reduced));
        pivot_col.push_back(pc);
        accepted_powers.push_back(std::move(power));
        vectors.push_back(std::move(v));
    }

    // Solve Σ_j λ_j power_j = a over the monomial basis (columns of M are the powers).
    std::vector<std::vector<Rational>> m(D, std::vector<Rational>(D + 1));
    for (std::size_t t = 0; t < D; ++t) {
        for (std::size_t j = 0; j < D; ++j) m[t][j] = accepted_powers[j][t];
        m[t][D] = a.at(basis[t]);
    }
    for (std::size_t col = 0; col < D; ++col) {
        std::size_t pivot = col;
        while (pivot < D && m[pivot][col] == 0) ++pivot;
        if (pivot == D) throw InconclusiveError("decompose: singular system despite rank check");
        std::swap(m[col], m[pivot]);
        for (std::size_t row = 0; row < D; ++row) {
            if (row == col || m[row][col] == 0) continue;
            const Rational factor = m[row][col] / m[col][col];
            for (std::size_t k = col; k <= D; ++k) m[row][k] -= factor * m[col][k];
        }
    }

    Decomposition d;
    d.n = n;
    d.r = r;
    d.N = D;
    d.lambda.resize(D);
    for (std::size_t j = 0; j < D; ++j) d.lambda[j] = m[j][D] / m[j][j];
    d.B.assign(static_cast<std::size_t>(n) * D, Rational(0));
    for (std::size_t j = 0; j < D; ++j)
        for (Vertex i = 0; i < n; ++i) d.B[static_cast<std::size_t>(i) * D + j] = vectors[j][i];
    return d;
}

/// Polarization construction for tensors whose dense dimension is out of
/// reach: each supported monomial Π x_{t_i} expands into 2^{r-1} r-th powers
/// of signed indicator forms, so N = |support| · 2^{r-1} and everything stays
/// sparse and exact.
inline Decomposition decompose_polarization(const SymStepFunction& a) {
    const Vertex n = a.n();
    const unsigned r = a.r();
    if (r >= 62) throw PreconditionError("decompose: order too large for polarization");
    const std::size_t signs = std::size_t{1} << (r - 1);

    Int two_pow_rm1_rfact = 1; // 2^{r-1} r!
    for (unsigned i = 0; i < r - 1; ++i) two_pow_rm1_rfact *= 2;
    for (unsigned i = 2; i <= r; ++i) two_pow_rm1_rfact *= i;

    Decomposition d;
    d.n = n;
    d.r = r;
    d.N = a.support().size() * signs;
    if (d.N == 0) { // zero tensor: one zero term keeps N positive downstream
        d.N = 1;
        d.lambda.assign(1, Rational(0));
        d.B.assign(n, Rational(0));
        return d;
    }
    d.lambda.reserve(d.N);
    d.B.assign(static_cast<std::size_t>(n) * d.N, Rational(0));

    std::size_t j = 0;
    for (const auto& [tuple, value] : a.support()) {
        const Int perms = permutation_count(tuple);
        for (std::size_t mask = 0; mask < signs; ++mask, ++j) {
            // epsilon_1 = +1, epsilon_{k+1} = sign of bit k
            int sign_product = 1;
            std::vector<Rational> w(n, Rational(0));
            for (unsigned k = 0; k < r; ++k) {
                const int eps = (k == 0 || !((mask >> (k - 1)) & 1)) ? 1 : -1;
                if (k > 0 && eps < 0) sign_product = -sign_product;
                w[tuple[k]] += eps;
            }
            d.lambda.push_back(value * Rational(perms * sign_product, two_pow_rm1_rfact));
            for (Vertex i = 0; i < n; ++i)
                if (w[i] != 0) d.B[static_cast<std::size_t>(i) * d.N + j] = w[i];
        }
    }
    return d;
}

} // namespace detail

/// Symmetric decomposition of an exact uniform-measure tensor. Small tensors
/// use the sampled-basis construction with N = binomial(n+r-1, r); tensors
/// whose dense dimension exceeds the solver cap use the polarization expansion
/// instead. Both reconstruct exactly.
inline Decomposition decompose(const SymStepFunction& a, std::uint64_t seed = 0) {
    if (a.has_custom_measures())
        throw PreconditionError("decompose: uniform part measures required");
    if (detail::symmetric_dimension(a.n(), a.r()) <= 256)
        return detail::decompose_generic(a, seed);
    return detail::decompose_polarization(a);
}

/// Exact evaluation of Σ_j λ_j b_j^{⊗r}. Works column by column over each
/// column's support, so sparse decompositions reconstruct in time proportional
/// to their size rather than n^r.
inline SymStepFunction reconstruct(const Decomposition& d) {
    SymStepFunction a(d.r, d.n);
    std::map<std::vector<Vertex>, Rational> acc;
    for (std::size_t j = 0; j < d.N; ++j) {
        if (d.lambda[j] == 0) continue;
        std::vector<Vertex> supp;
        for (Vertex i = 0; i < d.n; ++i)
            if (d.b(i, j) != 0) supp.push_back(i);
        if (supp.empty()) continue;
        std::vector<Vertex> tuple;
        auto rec = [&](auto&& self, std::size_t start, const Rational& prod) -> void {
            if (tuple.size() == d.r) {
                acc[tuple] += d.lambda[j] * prod;
                return;
            }
            for (std::size_t k = start; k < supp.size(); ++k) {
                tuple.push_back(supp[k]);
                self(self, k, prod * d.b(supp[k], j));
                tuple.pop_back();
            }
        };
        rec(rec, 0, Rational(1));
    }
    for (auto& [tuple, value] : acc) a.set(tuple, value);
    return a;
}

/// Absorbs the coefficients for odd r: c_ij = (N λ_j)^{1/r} b_ij, each root
/// enclosed to the requested precision (exact rational roots collapse to
/// points). Zero-λ columns stay zero so the 1/N normalization is unchanged.
inline RescaledDecomposition rescale_odd(const Decomposition& d, unsigned precision_bits = 128) {
    if (d.r % 2 == 0)
        throw PreconditionError("rescale_odd: order must be odd (a single even edge is the standard counterexample)");
    RescaledDecomposition out;
    out.n = d.n;
    out.r = d.r;
    out.N = d.N;
    out.precision_bits = precision_bits;
    out.C.assign(static_cast<std::size_t>(d.n) * d.N, RationalInterval(Rational(0)));
    for (std::size_t j = 0; j < d.N; ++j) {
        if (d.lambda[j] == 0) continue;
        const RationalInterval root =
            kth_root_enclosure(Rational(Int(d.N)) * d.lambda[j], d.r, precision_bits);
        for (Vertex i = 0; i < d.n; ++i) {
            const Rational& b = d.b(i, j);
            if (b != 0) out.C[static_cast<std::size_t>(i) * d.N + j] = b * root;
        }
    }
    return out;
}

/// View of a rescaled decomposition as an asymmetric real-mode step function.
inline BipStepFunction as_bip_step_function(const RescaledDecomposition& rd) {
    return BipStepFunction::real(rd.n, static_cast<Vertex>(rd.N), rd.C);
}

/// h(x_1,...,x_r) = ∫ f(x_1,y)···f(x_r,y) dy at step-function level:
/// a_t = (1/N) Σ_j Π_i c_{t_i j}, exact for exact f.
inline SymStepFunction induced_sym(const BipStepFunction& f, unsigned r) {
    if (!f.is_exact()) throw PreconditionError("induced_sym: exact mode required");
    const Vertex n = f.n(), N = f.N();
    SymStepFunction a(r, n);
    for (const auto& tuple : detail::multiset_basis(n, r)) {
        Rational sum(0);
        for (Vertex j = 0; j < N; ++j) {
            Rational prod(1);
            for (Vertex idx : tuple) prod *= f.at(idx, j);
            sum += prod;
        }
        a.set(tuple, sum / N);
    }
    return a;
}

/// Result of the negativity transfer: the asymmetric witness together with a
/// rigorous enclosure of the Levi-graph density it certifies.
struct TransferWitness {
    BipStepFunction f;
    RationalInterval levi_density;   // certified: density_bip(levi(H), f)
    Rational pattern_density;        // exact density_sym(H, h) < 0
    unsigned precision_bits = 0;
};

/// Negativity transfer from an r-graph (odd r) to its Levi graph. The exact
/// pattern density is carried through the decomposition-rescaling pipeline;
/// the enclosure combines the interval widths of the rescaled entries with a
/// multilinear perturbation bound of total degree e(H), and precision doubles
/// until the enclosure separates from zero (capped; cap exhaustion is an
/// inconclusive error, never a certificate).
inline TransferWitness transfer_witness(const Hypergraph& h, const SymStepFunction& step,
                                        unsigned precision_bits = 128, std::uint64_t seed = 0) {
    if (h.r() % 2 == 0) throw PreconditionError("transfer_witness: odd uniformity required");
    if (h.r() != step.r()) throw PreconditionError("transfer_witness: arity mismatch");
    if (step.has_custom_measures())
        throw PreconditionError("transfer_witness: uniform part measures required");

    const Rational pattern_density = density_sym(h, step);
    if (!(pattern_density < 0))
        throw PreconditionError("transfer_witness: pattern density is not negative");

    const Decomposition d = decompose(step, seed);
    const Rational A = step.max_abs();
    const std::size_t m_edges = h.n_edges();
    const unsigned cap = std::max(precision_bits * 32, 4096u);

    for (unsigned p = precision_bits;; p *= 2) {
        const RescaledDecomposition rd = rescale_odd(d, p);
        // per-column width/magnitude bounds -> entrywise bound on the induced tensor
        Rational delta(0);
        for (std::size_t j = 0; j < rd.N; ++j) {
            Rational w(0), M(0);
            for (Vertex i = 0; i < rd.n; ++i) {
                const RationalInterval& c = rd.c(i, j);
                w = std::max(w, c.width());
                M = std::max(M, c.mag());
            }
            if (w == 0) continue;
            delta += Rational(h.r()) * w * pow_rational(M, h.r() - 1);
        }
        delta /= Int(rd.N);
        // |t(h') - t(h)| <= (A+δ)^e - A^e for any selection from the enclosure
        const Rational spread = pow_rational(A + delta, m_edges) - pow_rational(A, m_edges);
        const RationalInterval enclosure(pattern_density - spread, pattern_density + spread);
        if (enclosure.strictly_negative())
            return TransferWitness{as_bip_step_function(rd), enclosure, pattern_density, p};
        if (p >= cap)
            throw InconclusiveError("transfer_witness: enclosure straddles zero at the precision cap");
    }
}

} // namespace posigraph
