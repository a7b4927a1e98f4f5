#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace aqolab {

using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p", "p/q", and plain decimal or scientific notation ("0.25",
// "-3e-7"). Decimal input is converted exactly, never through a double.
Rational parse_rational(std::string_view text);

// Canonical form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);
std::string to_string(const Integer& value);

double to_double(const Rational& value);

Integer pow2(unsigned exponent);
Integer to_integer(std::uint64_t value);

// Throws if the value does not fit.
std::uint64_t to_uint64(const Integer& value);

// Short scientific rendering for diagnostics.
std::string to_scientific(const Rational& value, int digits = 6);

}  // namespace aqolab
