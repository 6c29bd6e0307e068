#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace loja {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// "p/q" or "p" in lowest terms, sign on the numerator.
std::string to_string(const Rational& q);

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed input
/// or a zero denominator.
Rational parse_rational(std::string_view text);

double to_double(const Rational& q);

/// q^e for a non-negative integer exponent.
Rational pow(const Rational& q, unsigned e);

inline Rational make_rational(long long num, long long den = 1) { return Rational(num, den); }

}  // namespace loja
