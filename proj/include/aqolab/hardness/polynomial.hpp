#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "aqolab/rational.hpp"

namespace aqolab {

// Dense polynomial over the rationals, coefficients lowest degree first.
// Trailing zeros are trimmed so equality is coefficient-exact.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coefficients);

  // -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }
  const std::vector<Rational>& coefficients() const noexcept { return coefficients_; }
  Rational coefficient(std::size_t power) const;
  Rational operator()(const Rational& x) const;

  static Polynomial interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys);

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coefficients_ == b.coefficients_; }

 private:
  std::vector<Rational> coefficients_;
};

struct PolynomialDivision {
  Polynomial quotient;
  Polynomial remainder;
};

PolynomialDivision divide(const Polynomial& numerator, const Polynomial& denominator);

// L_i(x) for the Lagrange basis on distinct nodes xs.
std::vector<Rational> lagrange_weights(const std::vector<Rational>& xs, const Rational& x);

struct SamplePoint {
  Rational x;
  Rational y;
};

struct DecodeResult {
  Polynomial polynomial;
  std::vector<std::size_t> error_positions;  // indices into the input points
};

// Recovers the degree <= `degree` polynomial agreeing with all but at most
// `errors` points. Needs points.size() >= degree + 2*errors + 1.
// Throws DecodeFailure when no such polynomial exists.
DecodeResult berlekamp_welch(const std::vector<SamplePoint>& points, int degree, int errors);

}  // namespace aqolab
