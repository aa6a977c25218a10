#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace eopt {

/// Arbitrary precision rational used wherever results must be exact.
using Rational = boost::multiprecision::cpp_rational;

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string to_string(const Rational& q);

/// Parses "p", "p/q", or a decimal literal such as "-0.125" or "1e-3".
/// Decimal literals are read as the exact decimal fraction they spell.
Rational parse_rational(std::string_view text);

/// The exact dyadic value of a finite double.
Rational exact_from_double(double x);

/// Reads a double through its shortest round-trip decimal spelling, so 0.3
/// becomes 3/10 rather than the nearest dyadic.
Rational decimal_from_double(double x);

double to_double(const Rational& q);

}  // namespace eopt
