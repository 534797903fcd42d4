#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace tautrel {

// mpq_class keeps num/den reduced as long as every construction path
// goes through make_rational or canonicalize.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long num, long den = 1);

// "p/q", or "p" when q == 1.
std::string to_string(const Rational& q);

// Accepts "p", "-p", "p/q"; result is canonical.
Rational parse_rational(std::string_view s);

Integer factorial(int n);
Integer double_factorial(int n);  // (-1)!! = 1

}  // namespace tautrel
