#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace chowforge {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

inline Integer numerator(const Rational& q) {
  return Integer(boost::multiprecision::numerator(q));
}

inline Integer denominator(const Rational& q) {
  return Integer(boost::multiprecision::denominator(q));
}

inline bool is_integral(const Rational& q) { return denominator(q) == 1; }

// Requires is_integral(q).
Integer to_integer(const Rational& q);

// Canonical rendering: "p" when the denominator is 1, otherwise "p/q".
std::string rational_to_string(const Rational& q);

// Accepts optional sign, "p" or "p/q". Throws Error(Parse) on anything else.
Rational rational_from_string(std::string_view text);

Integer binomial(long n, long k);
Integer factorial(long n);

}  // namespace chowforge
