#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace posigraph {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Error thrown on malformed external input (JSON, CLI arguments, text formats).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Error thrown when an operation's precondition is violated.
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Error thrown when an iterative procedure exhausts its precision or retry budget.
class InconclusiveError : public std::runtime_error {
public:
    explicit InconclusiveError(const std::string& what) : std::runtime_error(what) {}
};

/// Parses "p/q" or a plain integer string (optionally signed) into an exact rational.
inline Rational parse_rational(std::string_view text) {
    const auto bad = [&] { return ParseError("malformed rational: '" + std::string(text) + "'"); };
    if (text.empty()) throw bad();
    // Accept a single unicode minus as a convenience for hand-written files.
    std::string s(text);
    if (s.rfind("−", 0) == 0) s.replace(0, 3, "-");
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Int(s));
        const Int num(s.substr(0, slash));
        const Int den(s.substr(slash + 1));
        if (den == 0) throw bad();
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw bad();
    }
}

/// Formats a rational as "p/q", or just "p" when the denominator is 1.
inline std::string format_rational(const Rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

inline Int pow_int(Int base, std::uint64_t exp) {
    Int result = 1;
    while (exp != 0) {
        if (exp & 1) result *= base;
        base *= base;
        exp >>= 1;
    }
    return result;
}

inline Rational pow_rational(const Rational& base, std::uint64_t exp) {
    return Rational(pow_int(numerator(base), exp), pow_int(denominator(base), exp));
}

/// floor(x^(1/k)) for x >= 0, exact integer arithmetic (Newton iteration).
inline Int floor_kth_root(const Int& x, unsigned k) {
    if (k == 0) throw PreconditionError("floor_kth_root: k must be positive");
    if (x < 0) throw PreconditionError("floor_kth_root: negative radicand");
    if (x == 0 || x == 1 || k == 1) return x;
    const unsigned bits = static_cast<unsigned>(msb(x)) + 1;
    Int guess = Int(1) << (bits / k + 1);
    while (true) {
        // Newton step for t^k - x, landing on floor from above.
        Int next = ((k - 1) * guess + x / pow_int(guess, k - 1)) / k;
        if (next >= guess) break;
        guess = next;
    }
    while (pow_int(guess, k) > x) --guess;
    while (pow_int(guess + 1, k) <= x) ++guess;
    return guess;
}

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline int sign(const Rational& q) { return q < 0 ? -1 : (q > 0 ? 1 : 0); }

} // namespace posigraph
