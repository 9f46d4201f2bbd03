#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace valdist {

// Exact arbitrary-precision arithmetic. cpp_rational keeps values canonical
// (reduced, positive denominator), which the comparison and membership code
// relies on throughout.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Int denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return denominator_of(q) == 1; }

// True iff the reduced denominator is a (possibly trivial) power of p.
bool has_p_power_denominator(const Rational& q, unsigned p);

// Least e >= 0 with q * p^e integral; requires a p-power denominator.
int p_denominator_level(const Rational& q, unsigned p);

// Exact p-adic valuation of a nonzero rational (throws on zero).
long long p_adic_valuation(const Rational& q, unsigned p);

Rational pow_rational(unsigned base, int exp);  // base^exp, exp may be negative

std::string render_rational(const Rational& q);

// Accepts "n", "-n", "n/d" with optional surrounding spaces.
Rational parse_rational(std::string_view text);

}  // namespace valdist
