#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace tropjac {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", an integer, or a decimal literal with optional exponent
/// ("-0.125", "3e-4") into an exact rational. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Exact rational of the shortest decimal that round-trips to `value`, so
/// 0.1 becomes 1/10 rather than the binary expansion of the double.
Rational rational_from_double(double value);

double to_double(const Rational& r);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

/// Decimal text with 15 significant digits.
std::string format_decimal(double value);

}  // namespace tropjac
