#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace hartogs {

/// Exact rational used for every threshold decision.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "3", "-6/5", "1.25" or "2.5e-1" into an exact rational.
/// Decimal input is read digit by digit, so "1.2" is exactly 6/5.
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

/// "num/den", or just "num" when the denominator is one.
std::string to_string(const Rational& r);

} // namespace hartogs
