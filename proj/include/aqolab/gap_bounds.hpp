#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "aqolab/spectrum.hpp"

namespace aqolab {

enum class Region { left, window, right };

std::string_view region_name(Region region);

struct CertificateOptions {
  double k = 0.25;  // resolvent offset; about 0.237 is the alternative optimum
  double b = 0.1;   // shrink factor applied to the left and window pieces
  double continuity_tolerance = 1e-9;
  // Refusing spectra outside the spectral condition is the default. Turning
  // this off keeps every algebraic check but drops the regime guarantee; the
  // scaling experiments use it for small Grover instances.
  bool enforce_condition = true;
};

// g0(s) = constant + slope * (s - anchor) on [begin, end).
struct CertificatePiece {
  Region region = Region::left;
  double begin = 0;
  double end = 0;
  double constant = 0;
  double slope = 0;
  double anchor = 0;

  double value(double s) const { return constant + slope * (s - anchor); }
};

class GapCertificate {
 public:
  GapCertificate(const SpectralProfile& profile, const CertificateOptions& options);

  const SpectralProfile& profile() const noexcept { return profile_; }
  const CertificateOptions& options() const noexcept { return options_; }
  double s_star() const noexcept { return profile_.s_star; }
  double delta_s() const noexcept { return profile_.delta_s; }
  double g_min() const noexcept { return profile_.g_min; }
  double k() const noexcept { return options_.k; }
  double b() const noexcept { return options_.b; }
  double a() const noexcept { return a_; }
  double s0() const noexcept { return s0_; }
  // Prefactor of the right piece, equal to delta/30 for the default constants.
  double right_scale() const noexcept { return right_scale_; }
  bool within_regime() const noexcept { return profile_.condition_ok; }

  // Non-empty pieces in order of s; they tile [0, 1].
  const std::vector<CertificatePiece>& pieces() const noexcept { return pieces_; }
  const CertificatePiece& piece_at(double s) const;
  Region region(double s) const { return piece_at(s).region; }
  double operator()(double s) const { return piece_at(s).value(s); }
  double max_slope() const;

  // Seam values (left limit, right value) for diagnostics.
  struct Seam {
    double s;
    double left;
    double right;
  };
  const std::vector<Seam>& seams() const noexcept { return seams_; }

 private:
  SpectralProfile profile_;
  CertificateOptions options_;
  double a_ = 0;
  double s0_ = 0;
  double right_scale_ = 0;
  std::vector<CertificatePiece> pieces_;
  std::vector<Seam> seams_;
};

GapCertificate certificate(const SpectralProfile& profile, const CertificateOptions& options = {});

struct WindowBracket {
  double s = 0;
  double delta0_plus = 0;
  double delta0_minus = 0;
  double eta = 0.1;
};

WindowBracket window_bracket(const SpectralProfile& profile, double s, double eta = 0.1);

// Evenly spaced points covering [s* - delta_s, s* + delta_s] inclusive.
std::vector<double> window_grid(const SpectralProfile& profile, std::size_t points);

// Ratio function from the resolvent bound on [s*, 1]; at s = 1 the limit 0.
double right_region_f(const GapCertificate& cert, double s);

struct SandwichReport {
  std::size_t points = 0;
  double lower = 0;  // (1 - 2 eta) g_min
  double upper = 0;  // kappa' g_min
  double min_gap = 0;
  double max_gap = 0;
  std::size_t violations = 0;
};

SandwichReport window_sandwich_check(const SpectralProfile& profile, const DegeneracySpectrum& spec,
                                     std::size_t points = 101, double eta = 0.1);

struct BracketReport {
  std::size_t points = 0;
  std::size_t violations = 0;
  // Extremes of delta/delta0 for each branch, to show how much room is left.
  double plus_ratio_min = 0;
  double plus_ratio_max = 0;
  double minus_ratio_min = 0;
  double minus_ratio_max = 0;
};

BracketReport bracket_check(const SpectralProfile& profile, const DegeneracySpectrum& spec,
                            std::size_t points = 101, double eta = 0.1);

struct GapScanRow {
  double s = 0;
  double g_true = 0;
  double g_lower = 0;
  Region region = Region::left;
};

// Rows at s = i/points for i = 1..points.
std::vector<GapScanRow> gap_scan(const GapCertificate& cert, const DegeneracySpectrum& spec, std::size_t points);

struct SoundnessReport {
  std::size_t points = 0;
  std::size_t violations = 0;
  double max_excess = 0;   // max(g0 - g_true), may be negative
  double min_ratio = 0;    // min g_true / g0
};

SoundnessReport soundness_scan(const GapCertificate& cert, const DegeneracySpectrum& spec, std::size_t points = 1000,
                               double tolerance = 1e-12);

struct VariationalReport {
  std::size_t points = 0;
  std::size_t violations = 0;
  double max_excess = 0;  // max(lambda0 - trial energy)
};

// Trial energy sE0 + (A1/A2)(s - s*)/(1 - s*) against lambda0 on [0, s* - delta_s).
VariationalReport left_variational_check(const SpectralProfile& profile, const DegeneracySpectrum& spec,
                                         std::size_t points = 200);

struct RightRegionReport {
  std::size_t points = 0;
  std::size_t monotonicity_violations = 0;
  std::size_t bound_violations = 0;
  double f_at_start = 0;
  double max_bound_ratio = 0;  // max (2 beta / (1 + f)) / g_true
};

RightRegionReport right_region_check(const GapCertificate& cert, const DegeneracySpectrum& spec,
                                     std::size_t points = 200);

struct MinimumLocation {
  double s = 0;
  double gap = 0;
  bool inside_window = false;
};

MinimumLocation locate_minimum(const SpectralProfile& profile, const DegeneracySpectrum& spec,
                               std::size_t points = 10000);

}  // namespace aqolab
