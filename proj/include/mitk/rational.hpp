#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace mitk {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact floor of a rational (rounds toward -infinity).
BigInt floor(const Rational& x);

/// max(floor(x), 0)
BigInt floor_plus(const Rational& x);

bool is_integer(const Rational& x);

/// Parses "p", "p/q" or "-p/q". Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& x);

double to_double(const Rational& x);

}  // namespace mitk
