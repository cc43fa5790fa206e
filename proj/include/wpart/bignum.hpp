#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace wpart {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Natural log of a positive integer without converting it to double.
double log_of(const BigInt& x);

/// log(p/q) for a positive rational.
double log_of(const Rational& x);

/// The exact dyadic rational equal to a finite double.
Rational exact_rational(double x);

/// Parses "12", "-3", "0.125", "1e-3", "2.5E+2" or "7/3" exactly.
/// Throws ConfigError on malformed input.
Rational parse_rational(std::string_view text);

bool is_integer(const Rational& x);

/// "42" for integers, "13/6" otherwise.
std::string to_string(const Rational& x);
std::string to_string(const BigInt& x);

}  // namespace wpart
