#pragma once

#include "posigraph/rational.hpp"

#include <cstdint>
#include <vector>

namespace posigraph {

/// Deterministic splitmix64 generator. Implemented by hand (rather than
/// <random> distributions) so that streams are bit-identical across platforms
/// and standard library versions; reproducibility from a seed is part of the
/// tool's contract.
class Prng {
public:
    explicit Prng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, bound), bound > 0. Rejection sampling, no modulo bias.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0) throw PreconditionError("next_below: zero bound");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % bound;
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw PreconditionError("next_int: empty range");
        return lo + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool next_bool() { return (next_u64() & 1) != 0; }

    /// Random rational with numerator in [-max_num, max_num] and denominator in [1, max_den].
    Rational next_rational(std::int64_t max_num = 9, std::int64_t max_den = 9) {
        return Rational(Int(next_int(-max_num, max_num)), Int(next_int(1, max_den)));
    }

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t state_;
};

} // namespace posigraph
