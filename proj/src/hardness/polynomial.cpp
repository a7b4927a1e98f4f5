#include "aqolab/hardness/polynomial.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>

#include "aqolab/errors.hpp"

namespace aqolab {

namespace {

void trim(std::vector<Rational>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

// Exact Gauss-Jordan elimination. Free variables are set to zero.
std::optional<std::vector<Rational>> solve(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    std::swap(b[p], b[r]);
    const Rational inv = 1 / a[r][c];
    for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
    b[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i) {
    if (b[i] != 0) return std::nullopt;
  }
  std::vector<Rational> x(cols, Rational(0));
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  return x;
}

}  // namespace

Polynomial::Polynomial(std::vector<Rational> coefficients) : coefficients_(std::move(coefficients)) {
  for (auto& c : coefficients_) c.canonicalize();
  trim(coefficients_);
}

Rational Polynomial::coefficient(std::size_t power) const {
  return power < coefficients_.size() ? coefficients_[power] : Rational(0);
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.coefficients_.empty() || b.coefficients_.empty()) return {};
  std::vector<Rational> c(a.coefficients_.size() + b.coefficients_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coefficients_.size(); ++i) {
    for (std::size_t j = 0; j < b.coefficients_.size(); ++j) c[i + j] += a.coefficients_[i] * b.coefficients_[j];
  }
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> c(std::max(a.coefficients_.size(), b.coefficients_.size()), Rational(0));
  for (std::size_t i = 0; i < a.coefficients_.size(); ++i) c[i] += a.coefficients_[i];
  for (std::size_t i = 0; i < b.coefficients_.size(); ++i) c[i] -= b.coefficients_[i];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  if (xs.size() != ys.size() || xs.empty()) throw PreconditionError("interpolation needs matching, nonempty nodes");
  std::vector<Rational> result(xs.size(), Rational(0));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Polynomial basis(std::vector<Rational>{Rational(1)});
    Rational denom = 1;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (j == i) continue;
      if (xs[j] == xs[i]) throw PreconditionError("interpolation nodes must be distinct");
      basis = basis * Polynomial(std::vector<Rational>{-xs[j], Rational(1)});
      denom *= xs[i] - xs[j];
    }
    const Rational scale = ys[i] / denom;
    for (std::size_t p = 0; p < basis.coefficients().size(); ++p) result[p] += scale * basis.coefficients()[p];
  }
  return Polynomial(std::move(result));
}

PolynomialDivision divide(const Polynomial& numerator, const Polynomial& denominator) {
  if (denominator.degree() < 0) throw DomainError("division by the zero polynomial");
  std::vector<Rational> rem = numerator.coefficients();
  const auto& d = denominator.coefficients();
  const int dd = denominator.degree();
  if (numerator.degree() < dd) return {Polynomial{}, numerator};
  std::vector<Rational> quo(static_cast<std::size_t>(numerator.degree() - dd + 1), Rational(0));
  for (int k = numerator.degree() - dd; k >= 0; --k) {
    const auto top = static_cast<std::size_t>(k + dd);
    const Rational f = rem[top] / d.back();
    quo[static_cast<std::size_t>(k)] = f;
    for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(k + j)] -= f * d[static_cast<std::size_t>(j)];
  }
  return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
}

std::vector<Rational> lagrange_weights(const std::vector<Rational>& xs, const Rational& x) {
  std::vector<Rational> w(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Rational acc = 1;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (j != i) acc *= (x - xs[j]) / (xs[i] - xs[j]);
    }
    w[i] = acc;
  }
  return w;
}

DecodeResult berlekamp_welch(const std::vector<SamplePoint>& points, int degree, int errors) {
  if (degree < 0 || errors < 0) throw PreconditionError("degree and error budget must be nonnegative");
  const std::size_t k = points.size();
  const auto d = static_cast<std::size_t>(degree);
  const auto t = static_cast<std::size_t>(errors);
  if (k < d + 2 * t + 1) {
    throw PreconditionError("Berlekamp-Welch needs at least degree + 2*errors + 1 points");
  }
  {
    std::set<Rational> seen;
    for (const auto& p : points) {
      if (!seen.insert(p.x).second) throw PreconditionError("sample abscissae must be distinct");
    }
  }

  // Unknowns: q_0..q_{d+t}, then e_0..e_{t-1}; E is monic of degree t.
  // Q(x_i) - y_i E(x_i) = 0  =>  sum q_j x^j - y sum e_j x^j = y x^t
  const std::size_t nq = d + t + 1;
  std::vector<std::vector<Rational>> a(k, std::vector<Rational>(nq + t));
  std::vector<Rational> b(k);
  for (std::size_t i = 0; i < k; ++i) {
    Rational power = 1;
    for (std::size_t j = 0; j < nq; ++j) {
      a[i][j] = power;
      if (j < t) a[i][nq + j] = -points[i].y * power;
      if (j == t) b[i] = points[i].y * power;
      power *= points[i].x;
    }
  }
  const auto sol = solve(std::move(a), std::move(b));
  if (!sol) throw DecodeFailure("Berlekamp-Welch system is inconsistent: more corruptions than the budget");

  std::vector<Rational> qc(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(nq));
  std::vector<Rational> ec(sol->begin() + static_cast<std::ptrdiff_t>(nq), sol->end());
  ec.emplace_back(1);
  const auto [quotient, remainder] = divide(Polynomial(std::move(qc)), Polynomial(std::move(ec)));
  if (remainder.degree() >= 0 || quotient.degree() > degree) {
    throw DecodeFailure("error locator does not divide the numerator");
  }

  DecodeResult out{quotient, {}};
  for (std::size_t i = 0; i < k; ++i) {
    if (quotient(points[i].x) != points[i].y) out.error_positions.push_back(i);
  }
  if (out.error_positions.size() > t) {
    throw DecodeFailure("decoded polynomial disagrees with " + std::to_string(out.error_positions.size()) +
                        " points, budget " + std::to_string(t));
  }
  return out;
}

}  // namespace aqolab
