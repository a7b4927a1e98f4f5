#include "aqolab/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "aqolab/errors.hpp"

namespace aqolab {

namespace {

Rational parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long scale = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char ch = text[pos];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      seen_digit = true;
      if (seen_point) --scale;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw ParseError("malformed number '" + std::string(text) + "'");
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') {
      throw ParseError("malformed number '" + std::string(text) + "'");
    }
    ++pos;
    std::string exponent(text.substr(pos));
    if (exponent.empty()) throw ParseError("malformed exponent in '" + std::string(text) + "'");
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(exponent, &used);
    } catch (const std::exception&) {
      throw ParseError("malformed exponent in '" + std::string(text) + "'");
    }
    if (used != exponent.size() || std::labs(e) > 100000) {
      throw ParseError("malformed exponent in '" + std::string(text) + "'");
    }
    scale += e;
  }
  Integer mantissa(digits, 10);
  Integer ten_power;
  mpz_ui_pow_ui(ten_power.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  Rational out = scale >= 0 ? Rational(mantissa * ten_power) : Rational(mantissa, ten_power);
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty rational");

  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    const bool integral = text.find_first_of(".eE") == std::string_view::npos;
    if (!integral) return parse_decimal(text);
  }
  Rational out;
  if (out.set_str(std::string(text), 10) != 0) {
    throw ParseError("malformed rational '" + std::string(text) + "'");
  }
  if (out.get_den() == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  out.canonicalize();
  return out;
}

std::string to_string(const Rational& value) {
  Rational canonical = value;
  canonical.canonicalize();
  return canonical.get_str(10);
}
std::string to_string(const Integer& value) { return value.get_str(10); }

double to_double(const Rational& value) {
  // mpq_get_d truncates; good enough for conversion at call time, but keep
  // huge numerators and denominators from overflowing through mpz_get_d.
  return mpq_get_d(value.get_mpq_t());
}

Integer pow2(unsigned exponent) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), 2, exponent);
  return out;
}

Integer to_integer(std::uint64_t value) {
  Integer out;
  mpz_import(out.get_mpz_t(), 1, 1, sizeof(value), 0, 0, &value);
  return out;
}

std::uint64_t to_uint64(const Integer& value) {
  if (sgn(value) < 0 || mpz_sizeinbase(value.get_mpz_t(), 2) > 64) {
    throw SizeError("integer " + value.get_str() + " does not fit in 64 bits");
  }
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, value.get_mpz_t());
  return out;
}

std::string to_scientific(const Rational& value, int digits) {
  if (sgn(value) == 0) return "0";
  mpf_class f(value, 256);
  long exp10 = 0;
  char* raw = mpf_get_str(nullptr, &exp10, 10, static_cast<std::size_t>(digits), f.get_mpf_t());
  std::string mant(raw);
  void (*freefunc)(void*, std::size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(raw, std::strlen(raw) + 1);
  std::string sign;
  if (!mant.empty() && mant[0] == '-') {
    sign = "-";
    mant.erase(0, 1);
  }
  std::string out = sign + mant.substr(0, 1);
  if (mant.size() > 1) out += "." + mant.substr(1);
  out += "e" + std::to_string(exp10 - 1);
  return out;
}

}  // namespace aqolab
