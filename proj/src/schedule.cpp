#include "aqolab/schedule.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "aqolab/errors.hpp"

namespace aqolab {

UniformSchedule::UniformSchedule(double total_time) : total_(total_time) {
  if (!(total_time >= 0) || !std::isfinite(total_time)) throw PreconditionError("total time must be finite and >= 0");
}

HamiltonianNorms HamiltonianNorms::for_linear_path(const DegeneracySpectrum& spec) {
  const auto u = symmetric_state_overlap(spec);
  const auto m = static_cast<Eigen::Index>(spec.size());
  Eigen::MatrixXd dh = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) dh(i, j) = u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(j)];
    dh(i, i) += spec.energies()[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dh, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed on the path derivative");
  const auto& ev = solver.eigenvalues();
  HamiltonianNorms out;
  out.first = std::max(std::fabs(ev(0)), std::fabs(ev(m - 1)));
  out.second = 0;
  out.linear_interpolation = true;
  if (out.first > 2 + 1e-12) {
    throw PreconditionError("derivative norm " + std::to_string(out.first) + " exceeds 2 for a normalized spectrum");
  }
  return out;
}

double piece_power_integral(const CertificatePiece& piece, double q, double lo, double hi) {
  if (hi <= lo) return 0.0;
  if (piece.slope == 0) return std::pow(piece.constant, q) * (hi - lo);
  const double g_lo = piece.value(lo);
  // log(g_hi / g_lo) via log1p keeps short spans accurate.
  const double log_ratio = std::log1p(piece.slope * (hi - lo) / g_lo);
  if (std::fabs(q + 1) < 1e-14) return log_ratio / piece.slope;
  return std::pow(g_lo, q + 1) * std::expm1((q + 1) * log_ratio) / (piece.slope * (q + 1));
}

namespace {

// Adaptive Gauss-Kronrod over bands in which g changes by at most a factor
// of two, so that a steep piece does not drive the recursion deep.
double piece_quadrature(const CertificatePiece& piece, double q) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [&](double s) { return std::pow(piece.value(s), q); };
  std::vector<double> cuts{piece.begin};
  if (piece.slope != 0) {
    const double g_a = piece.value(piece.begin);
    const double g_b = piece.value(piece.end);
    const double factor = g_b > g_a ? 2.0 : 0.5;
    for (double g = g_a * factor; (g_b > g_a) ? g < g_b : g > g_b; g *= factor) {
      cuts.push_back(piece.begin + (g - g_a) / piece.slope);
    }
  }
  cuts.push_back(piece.end);
  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double error = 0;
    total += gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 8, 1e-13, &error);
  }
  return total;
}

void check_exponent(double p) {
  if (!(p > 1 && p <= 2)) throw PreconditionError("rate exponent p must lie in (1, 2]");
}

}  // namespace

IntegralBounds integral_bounds(const GapCertificate& cert, double p) {
  check_exponent(p);
  IntegralBounds out;
  for (const auto& piece : cert.pieces()) {
    out.integral_rate += piece_power_integral(piece, -p, piece.begin, piece.end);
    out.integral_comp += piece_power_integral(piece, p - 3, piece.begin, piece.end);
    out.quadrature_rate += piece_quadrature(piece, -p);
    out.quadrature_comp += piece_quadrature(piece, p - 3);
  }
  auto mismatch = [](double exact, double quad) { return std::fabs(exact - quad) > 1e-6 * std::fabs(exact); };
  if (mismatch(out.integral_rate, out.quadrature_rate) || mismatch(out.integral_comp, out.quadrature_comp)) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "closed-form certificate integrals disagree with quadrature: " << out.integral_rate << " vs "
        << out.quadrature_rate << ", " << out.integral_comp << " vs " << out.quadrature_comp;
    throw NumericalError(msg.str());
  }
  const double g = cert.g_min();
  out.b1 = out.integral_rate * std::pow(g, p - 1);
  out.b2 = out.integral_comp * std::pow(g, 2 - p);
  return out;
}

double rate_constant(double b2, double p, double max_slope, const HamiltonianNorms& norms) {
  if (!(norms.first >= 0 && norms.second >= 0) || !std::isfinite(norms.first) || !std::isfinite(norms.second)) {
    throw PreconditionError("Hamiltonian derivative norms must be finite and nonnegative");
  }
  if (norms.linear_interpolation && (norms.first > 2 + 1e-12 || norms.second != 0)) {
    throw PreconditionError("linear path requires sup||H'|| <= 2 and H'' = 0");
  }
  const double h1 = norms.first;
  return 4 * h1 + 40 * h1 * h1 * b2 + 4 * norms.second + 6 * p * max_slope * h1 * b2;
}

double rate_constant(const GapCertificate& cert, double p, const HamiltonianNorms& norms) {
  const auto bounds = integral_bounds(cert, p);
  return rate_constant(bounds.b2, p, cert.max_slope(), norms);
}

// ---------------------------------------------------------------- plan

SchedulePlan::SchedulePlan(const GapCertificate& cert, double p, double eps, const HamiltonianNorms& norms,
                           const ScheduleOptions& options)
    : cert_(cert), p_(p), eps_(eps), norms_(norms), table_points_(options.table_points) {
  check_exponent(p);
  if (!(eps > 0 && eps < 1)) throw PreconditionError("target infidelity eps must lie in (0, 1)");
  if (!options.allow_outside_regime && !cert.within_regime()) {
    throw SpectralConditionError("refusing to synthesize a schedule outside the spectral condition");
  }
  if (table_points_ < 2) throw PreconditionError("schedule table needs at least two points");
  bounds_ = integral_bounds(cert_, p_);
  c_const_ = rate_constant(bounds_.b2, p_, cert_.max_slope(), norms_);
  build(table_points_);
}

void SchedulePlan::build(std::size_t table_points) {
  prefactor_ = c_const_ / (eps_ * std::pow(cert_.g_min(), 2 - p_));
  piece_start_time_.clear();
  double acc = 0;
  for (const auto& piece : cert_.pieces()) {
    piece_start_time_.push_back(acc);
    acc += prefactor_ * piece_power_integral(piece, -p_, piece.begin, piece.end);
  }
  total_ = acc;

  std::vector<double> grid;
  for (std::size_t i = 0; i < table_points; ++i) {
    grid.push_back(static_cast<double>(i) / static_cast<double>(table_points - 1));
  }
  for (const double b : breakpoints()) grid.push_back(b);
  // Extra resolution across the window where K' peaks.
  const double lo = std::max(0.0, cert_.s_star() - 2 * cert_.delta_s());
  const double hi = std::min(1.0, cert_.s_star() + 2 * cert_.delta_s());
  for (std::size_t i = 0; i <= 64; ++i) grid.push_back(lo + (hi - lo) * static_cast<double>(i) / 64.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  table_.clear();
  table_.reserve(grid.size());
  for (const double s : grid) table_.push_back({s, elapsed(s), rate(s), cert_(s)});
  table_.front().elapsed = 0;
  table_.back().elapsed = total_;
}

double SchedulePlan::rate(double s) const { return prefactor_ * std::pow(cert_(s), -p_); }

double SchedulePlan::elapsed(double s) const {
  if (s <= 0) return 0.0;
  if (s >= 1) return total_;
  const auto& pieces = cert_.pieces();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (s < pieces[i].end || i + 1 == pieces.size()) {
      return piece_start_time_[i] + prefactor_ * piece_power_integral(pieces[i], -p_, pieces[i].begin, s);
    }
  }
  return total_;
}

std::vector<double> SchedulePlan::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < cert_.pieces().size(); ++i) out.push_back(cert_.pieces()[i].begin);
  return out;
}

double SchedulePlan::s_at(double t) const {
  if (t <= 0) return 0.0;
  if (t >= total_) return 1.0;
  auto it = std::upper_bound(table_.begin(), table_.end(), t,
                             [](double value, const ScheduleSample& row) { return value < row.elapsed; });
  double lo = std::prev(it)->s;
  double hi = it == table_.end() ? 1.0 : it->s;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = lo + (hi - lo) / 2;
    if (!(mid > lo && mid < hi)) break;
    if (elapsed(mid) < t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::fabs(elapsed(lo) - t) <= std::fabs(elapsed(hi) - t) ? lo : hi;
}

SchedulePlan SchedulePlan::scaled(double factor) const {
  if (!(factor > 0)) throw PreconditionError("schedule scale factor must be positive");
  SchedulePlan out = *this;
  out.eps_ = eps_ / factor;
  out.build(table_points_);
  return out;
}

double SchedulePlan::time_bound() const { return c_const_ * bounds_.b1 / (eps_ * cert_.g_min()); }

SchedulePlan synthesize(const GapCertificate& cert, double p, double eps, const HamiltonianNorms& norms,
                        const ScheduleOptions& options) {
  return SchedulePlan(cert, p, eps, norms, options);
}

}  // namespace aqolab
