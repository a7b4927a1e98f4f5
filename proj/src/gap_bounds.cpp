#include "aqolab/gap_bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "aqolab/errors.hpp"
#include "aqolab/parallel.hpp"

namespace aqolab {

std::string_view region_name(Region region) {
  switch (region) {
    case Region::left:
      return "left";
    case Region::window:
      return "window";
    case Region::right:
      return "right";
  }
  return "?";
}

namespace {

bool close_relative(double a, double b, double tol) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= tol * scale;
}

}  // namespace

GapCertificate::GapCertificate(const SpectralProfile& profile, const CertificateOptions& options)
    : profile_(profile), options_(options) {
  if (options_.enforce_condition && !profile_.condition_ok) {
    std::ostringstream msg;
    msg << "spectral condition fails: (1/delta) sqrt(d0/(A2 N)) = " << profile_.condition_value
        << " is not below c = " << profile_.c;
    throw SpectralConditionError(msg.str());
  }
  if (!(options_.k > 0 && options_.b > 0)) throw PreconditionError("certificate constants must be positive");
  const double k = options_.k;
  const double b = options_.b;
  const double g = profile_.g_min;
  const double s_star = profile_.s_star;

  a_ = 4 * k * k * profile_.delta / 3;
  if (!(a_ > k * g)) {
    std::ostringstream msg;
    msg << "degenerate geometry: slope constant a = " << a_ << " does not exceed k g_min = " << k * g;
    throw GeometryError(msg.str());
  }
  s0_ = s_star - k * g * (1 - s_star) / (a_ - k * g);
  if (!(1 - 8 * k * k > 0)) throw GeometryError("resolvent offset k must satisfy 8k^2 < 1");
  right_scale_ = a_ * (1 - 8 * k * k) / (1 + 4 * k * k);

  const double window_begin = std::max(0.0, s_star - profile_.delta_s);
  const double left_slope = b * (profile_.a1 / profile_.a2) / (1 - s_star);
  const double right_slope = right_scale_ / (1 - s0_);

  if (window_begin > 0) {
    pieces_.push_back({Region::left, 0.0, window_begin, 0.0, -left_slope, s_star});
  }
  pieces_.push_back({Region::window, window_begin, s_star, b * g, 0.0, s_star});
  pieces_.push_back({Region::right, s_star, 1.0, 0.0, right_slope, s0_});

  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    const double at = pieces_[i].begin;
    Seam seam{at, pieces_[i - 1].value(at), pieces_[i].value(at)};
    seams_.push_back(seam);
    if (!close_relative(seam.left, seam.right, options_.continuity_tolerance)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "certificate discontinuous at s = " << at << ": " << seam.left << " vs " << seam.right
          << " (profile outside the regime of the constants k = " << k << ", b = " << b << ")";
      throw ContinuityError(msg.str());
    }
  }
  for (const auto& p : pieces_) {
    if (!(p.value(p.begin) > 0) && p.begin > 0) throw GeometryError("certificate not positive on (0, 1]");
  }
}

const CertificatePiece& GapCertificate::piece_at(double s) const {
  if (!(s >= 0 && s <= 1)) throw DomainError("certificate evaluated outside [0, 1]");
  for (const auto& p : pieces_) {
    if (s < p.end) return p;
  }
  return pieces_.back();
}

double GapCertificate::max_slope() const {
  double out = 0;
  for (const auto& p : pieces_) out = std::max(out, std::fabs(p.slope));
  return out;
}

GapCertificate certificate(const SpectralProfile& profile, const CertificateOptions& options) {
  return GapCertificate(profile, options);
}

// ---------------------------------------------------------------- window brackets

WindowBracket window_bracket(const SpectralProfile& profile, double s, double eta) {
  const double lo = profile.s_star - profile.delta_s;
  const double hi = profile.s_star + profile.delta_s;
  const double slack = 1e-12 * std::max(1.0, profile.delta_s);
  if (s < lo - slack || s > hi + slack || s <= 0 || s >= 1) {
    std::ostringstream msg;
    msg << "s = " << s << " outside the crossing window [" << lo << ", " << hi << "]";
    throw DomainError(msg.str());
  }
  // Equivalent to the two-root closed form with r = s/(1-s) - A1; the
  // smaller-magnitude root uses the product form to avoid cancellation.
  const double r = s / (1 - s) - profile.a1;
  const double q = 4 * profile.a2 * profile.ground_degeneracy / profile.dimension;
  const double disc = std::sqrt(r * r + q);
  const double scale = s / (2 * profile.a2);
  WindowBracket out;
  out.s = s;
  out.eta = eta;
  if (r >= 0) {
    out.delta0_plus = scale * (r + disc);
    out.delta0_minus = -scale * q / (r + disc);
  } else {
    out.delta0_minus = scale * (r - disc);
    out.delta0_plus = scale * q / (disc - r);
  }
  return out;
}

std::vector<double> window_grid(const SpectralProfile& profile, std::size_t points) {
  std::vector<double> grid;
  const double lo = std::max(profile.s_star - profile.delta_s, std::numeric_limits<double>::min());
  const double hi = std::min(profile.s_star + profile.delta_s, 1.0 - 1e-15);
  if (points == 1) return {profile.s_star};
  for (std::size_t i = 0; i < points; ++i) {
    grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  return grid;
}

double right_region_f(const GapCertificate& cert, double s) {
  const auto& pr = cert.profile();
  const double slack = 1e-12;
  if (s < pr.s_star - slack || s > 1) throw DomainError("right-region function needs s in [s*, 1]");
  if (s >= 1) return 0.0;
  const double beta = cert.a() * (s - cert.s0()) / (1 - cert.s0());
  const double n_over_d0 = pr.dimension / pr.ground_degeneracy;
  const double quad = n_over_d0 * beta * beta * pr.a2 / (s * s);
  const double middle = n_over_d0 * beta * (s - pr.s_star) / (s * (1 - s) * (1 - pr.s_star));
  const double numerator = 1 + 4 * quad;
  const double denominator = 1 + middle - 2 * quad;
  if (!(denominator > 0)) {
    std::ostringstream msg;
    msg << "resolvent ratio denominator " << denominator << " <= 0 at s = " << s << "; constants a, k mis-tuned";
    throw GeometryError(msg.str());
  }
  return numerator / denominator;
}

// ---------------------------------------------------------------- numeric checks

SandwichReport window_sandwich_check(const SpectralProfile& profile, const DegeneracySpectrum& spec,
                                     std::size_t points, double eta) {
  const auto grid = window_grid(profile, points);
  std::vector<double> gaps(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { gaps[i] = true_gap(spec, grid[i]); });

  SandwichReport rep;
  rep.points = grid.size();
  rep.lower = (1 - 2 * eta) * profile.g_min;
  rep.upper = profile.kappa_prime * profile.g_min;
  rep.min_gap = std::numeric_limits<double>::infinity();
  rep.max_gap = 0;
  for (double g : gaps) {
    rep.min_gap = std::min(rep.min_gap, g);
    rep.max_gap = std::max(rep.max_gap, g);
    if (g < rep.lower || g > rep.upper) ++rep.violations;
  }
  return rep;
}

BracketReport bracket_check(const SpectralProfile& profile, const DegeneracySpectrum& spec, std::size_t points,
                            double eta) {
  const auto grid = window_grid(profile, points);
  std::vector<std::array<double, 4>> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const double s = grid[i];
    const auto roots = secular_eigenvalues(spec, s);
    const auto& r0 = roots.roots()[0];
    const auto& r1 = roots.roots()[1];
    const double delta_minus = r0.offset + s * spec.energy_difference(r0.anchor, 0);
    const double delta_plus = r1.offset + s * spec.energy_difference(r1.anchor, 0);
    const auto wb = window_bracket(profile, s, eta);
    rows[i] = {delta_plus, delta_minus, wb.delta0_plus, wb.delta0_minus};
  });

  BracketReport rep;
  rep.points = grid.size();
  rep.plus_ratio_min = rep.minus_ratio_min = std::numeric_limits<double>::infinity();
  rep.plus_ratio_max = rep.minus_ratio_max = -std::numeric_limits<double>::infinity();
  for (const auto& [dp, dm, d0p, d0m] : rows) {
    const double rp = dp / d0p;
    const double rm = dm / d0m;
    rep.plus_ratio_min = std::min(rep.plus_ratio_min, rp);
    rep.plus_ratio_max = std::max(rep.plus_ratio_max, rp);
    rep.minus_ratio_min = std::min(rep.minus_ratio_min, rm);
    rep.minus_ratio_max = std::max(rep.minus_ratio_max, rm);
    const bool plus_ok = dp > (1 - eta) * d0p && dp < (1 + eta) * d0p;
    const bool minus_ok = dm > (1 + eta) * d0m && dm < (1 - eta) * d0m;
    if (!plus_ok || !minus_ok) ++rep.violations;
  }
  return rep;
}

std::vector<GapScanRow> gap_scan(const GapCertificate& cert, const DegeneracySpectrum& spec, std::size_t points) {
  std::vector<GapScanRow> rows(points);
  parallel_for(points, [&](std::size_t i) {
    const double s = static_cast<double>(i + 1) / static_cast<double>(points);
    rows[i] = {s, true_gap(spec, s), cert(s), cert.region(s)};
  });
  return rows;
}

SoundnessReport soundness_scan(const GapCertificate& cert, const DegeneracySpectrum& spec, std::size_t points,
                               double tolerance) {
  const auto rows = gap_scan(cert, spec, points);
  SoundnessReport rep;
  rep.points = rows.size();
  rep.max_excess = -std::numeric_limits<double>::infinity();
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    rep.max_excess = std::max(rep.max_excess, r.g_lower - r.g_true);
    rep.min_ratio = std::min(rep.min_ratio, r.g_true / r.g_lower);
    if (r.g_lower > r.g_true + tolerance) ++rep.violations;
  }
  return rep;
}

VariationalReport left_variational_check(const SpectralProfile& profile, const DegeneracySpectrum& spec,
                                         std::size_t points) {
  VariationalReport rep;
  const double end = profile.s_star - profile.delta_s;
  if (end <= 0) return rep;
  std::vector<double> excess(points);
  const double e0 = spec.energies()[0];
  parallel_for(points, [&](std::size_t i) {
    const double s = end * static_cast<double>(i) / static_cast<double>(points);
    const double lambda0 = secular_eigenvalues(spec, s).eigenvalue(0);
    const double trial = s * e0 + (profile.a1 / profile.a2) * (s - profile.s_star) / (1 - profile.s_star);
    excess[i] = lambda0 - trial;
  });
  rep.points = points;
  rep.max_excess = -std::numeric_limits<double>::infinity();
  for (double x : excess) {
    rep.max_excess = std::max(rep.max_excess, x);
    if (x > 1e-12) ++rep.violations;
  }
  return rep;
}

RightRegionReport right_region_check(const GapCertificate& cert, const DegeneracySpectrum& spec, std::size_t points) {
  const auto& pr = cert.profile();
  std::vector<double> grid(points), f(points), ratio(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = pr.s_star + (1 - pr.s_star) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  grid.back() = 1.0;
  parallel_for(points, [&](std::size_t i) {
    const double s = grid[i];
    f[i] = right_region_f(cert, s);
    const double beta = cert.a() * (s - cert.s0()) / (1 - cert.s0());
    ratio[i] = (2 * beta / (1 + f[i])) / true_gap(spec, s);
  });
  RightRegionReport rep;
  rep.points = points;
  rep.f_at_start = f.front();
  rep.max_bound_ratio = 0;
  for (std::size_t i = 0; i < points; ++i) {
    if (i > 0 && f[i] > f[i - 1] * (1 + 1e-12) + 1e-15) ++rep.monotonicity_violations;
    rep.max_bound_ratio = std::max(rep.max_bound_ratio, ratio[i]);
    if (ratio[i] > 1 + 1e-12) ++rep.bound_violations;
  }
  return rep;
}

MinimumLocation locate_minimum(const SpectralProfile& profile, const DegeneracySpectrum& spec, std::size_t points) {
  std::vector<double> gaps(points);
  parallel_for(points, [&](std::size_t i) {
    gaps[i] = true_gap(spec, static_cast<double>(i + 1) / static_cast<double>(points + 1));
  });
  const auto it = std::min_element(gaps.begin(), gaps.end());
  const auto idx = static_cast<std::size_t>(it - gaps.begin());
  MinimumLocation out;
  out.s = static_cast<double>(idx + 1) / static_cast<double>(points + 1);
  out.gap = *it;
  out.inside_window = std::fabs(out.s - profile.s_star) <= profile.delta_s;
  return out;
}

}  // namespace aqolab
