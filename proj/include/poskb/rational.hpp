#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace poskb {

/// Arbitrary-precision integer (model counts can exceed 2^64).
using BigInt = boost::multiprecision::cpp_int;

/// Exact rational. All weights, densities and probabilities are exact;
/// no floating point anywhere in the library.
using Rational = boost::multiprecision::cpp_rational;

/// 2^n as a BigInt.
BigInt pow2(unsigned n);

/// Parses "1", "0.9375" or "15/16" (optionally signed). Throws
/// InvalidWeightError on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Shortest exact decimal if the denominator is of the form 2^a*5^b
/// ("0.8125", "1"), otherwise "n/d" ("1/3").
std::string format_rational(const Rational& r);

/// Always fractional: "n/d", or just "n" when the denominator is 1.
std::string format_fraction(const Rational& r);

/// r*100 rendered like format_rational, with a trailing '%'.
std::string format_percent(const Rational& r);

}  // namespace poskb
