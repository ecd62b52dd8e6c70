#pragma once

#include "posigraph/rational.hpp"

#include <algorithm>
#include <initializer_list>

namespace posigraph {

/// Closed interval with exact rational endpoints. Used as the "real number with
/// a stated error bound" representation everywhere real (irrational) values
/// appear: every arithmetic operation returns a rigorous enclosure.
struct RationalInterval {
    Rational lo;
    Rational hi;

    RationalInterval() = default;
    explicit RationalInterval(Rational point) : lo(point), hi(std::move(point)) {}
    RationalInterval(Rational low, Rational high) : lo(std::move(low)), hi(std::move(high)) {
        if (lo > hi) throw PreconditionError("interval endpoints out of order");
    }

    bool is_point() const { return lo == hi; }
    Rational width() const { return hi - lo; }
    Rational mid() const { return (lo + hi) / 2; }
    /// sup |x| over the interval.
    Rational mag() const { return std::max(abs(lo), abs(hi)); }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    bool strictly_negative() const { return hi < 0; }
    bool strictly_positive() const { return lo > 0; }

    RationalInterval operator-() const { return {-hi, -lo}; }

    RationalInterval& operator+=(const RationalInterval& o) {
        lo += o.lo;
        hi += o.hi;
        return *this;
    }
    friend RationalInterval operator+(RationalInterval a, const RationalInterval& b) { return a += b; }

    friend RationalInterval operator*(const RationalInterval& a, const RationalInterval& b) {
        const Rational p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
        return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
    }
    RationalInterval& operator*=(const RationalInterval& o) { return *this = *this * o; }

    friend RationalInterval operator*(const Rational& c, const RationalInterval& a) {
        return c >= 0 ? RationalInterval{c * a.lo, c * a.hi} : RationalInterval{c * a.hi, c * a.lo};
    }
};

/// Encloses x^(1/k) for rational x in an interval of width <= 2^-precision_bits.
/// k odd permits negative x (real odd root); k even requires x >= 0.
/// Perfect rational powers are detected and returned as point intervals.
inline RationalInterval kth_root_enclosure(const Rational& x, unsigned k, unsigned precision_bits) {
    if (k == 0) throw PreconditionError("kth_root_enclosure: k must be positive");
    if (x == 0) return RationalInterval(Rational(0));
    if (x < 0) {
        if (k % 2 == 0) throw PreconditionError("kth_root_enclosure: even root of negative value");
        const RationalInterval pos = kth_root_enclosure(-x, k, precision_bits);
        return -pos;
    }
    const Int p = numerator(x), q = denominator(x);
    // Exact root fast path: x = (a/b)^k.
    {
        const Int a = floor_kth_root(p, k), b = floor_kth_root(q, k);
        if (pow_int(a, k) == p && pow_int(b, k) == q) return RationalInterval(Rational(a, b));
    }
    // (p/q)^(1/k) = (p q^{k-1})^(1/k) / q; enclose the integer root at scale 2^s.
    const Int y = p * pow_int(q, k - 1);
    const unsigned s = precision_bits;
    const Int scaled = y << (static_cast<unsigned long long>(s) * k);
    const Int m = floor_kth_root(scaled, k);
    const Int denom = q << s;
    return {Rational(m, denom), Rational(m + 1, denom)};
}

} // namespace posigraph
