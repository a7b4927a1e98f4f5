#pragma once

#include <cstddef>
#include <vector>

#include "aqolab/gap_bounds.hpp"
#include "aqolab/spectrum.hpp"

namespace aqolab {

// Physical-time parametrisation t = K(s) of an interpolation path.
class RateSchedule {
 public:
  virtual ~RateSchedule() = default;
  virtual double rate(double s) const = 0;     // K'(s)
  virtual double elapsed(double s) const = 0;  // K(s)
  virtual double total_time() const = 0;       // K(1)
  // Interior points where the rate is only continuous; integrators split there.
  virtual std::vector<double> breakpoints() const { return {}; }
};

class UniformSchedule final : public RateSchedule {
 public:
  explicit UniformSchedule(double total_time);
  double rate(double) const override { return total_; }
  double elapsed(double s) const override { return total_ * s; }
  double total_time() const override { return total_; }

 private:
  double total_;
};

struct HamiltonianNorms {
  double first = 2;   // sup ||H'(s)||
  double second = 0;  // sup ||H''(s)||
  bool linear_interpolation = true;

  // Norms of the linear path -(1-s)|psi0><psi0| + s Hz: H' = |psi0><psi0| + Hz
  // is s-independent, so its norm is computed once and H'' vanishes.
  static HamiltonianNorms for_linear_path(const DegeneracySpectrum& spec);
};

struct IntegralBounds {
  double b1 = 0;
  double b2 = 0;
  double integral_rate = 0;     // int g0^-p
  double integral_comp = 0;     // int g0^(p-3)
  double quadrature_rate = 0;   // cross-check values
  double quadrature_comp = 0;
};

// Integrals of powers of the certificate, exact per piece and cross-checked
// against adaptive Gauss-Kronrod quadrature (relative 1e-6).
IntegralBounds integral_bounds(const GapCertificate& cert, double p);

// Exact integral of g0^q over [lo, hi] within a single piece.
double piece_power_integral(const CertificatePiece& piece, double q, double lo, double hi);

double rate_constant(double b2, double p, double max_slope, const HamiltonianNorms& norms);
double rate_constant(const GapCertificate& cert, double p, const HamiltonianNorms& norms);

struct ScheduleOptions {
  std::size_t table_points = 1024;
  // Synthesis refuses certificates outside the spectral condition unless
  // this is set; see CertificateOptions::enforce_condition.
  bool allow_outside_regime = false;
};

struct ScheduleSample {
  double s = 0;
  double elapsed = 0;
  double rate = 0;
  double gap_bound = 0;
};

class SchedulePlan final : public RateSchedule {
 public:
  SchedulePlan(const GapCertificate& cert, double p, double eps, const HamiltonianNorms& norms,
               const ScheduleOptions& options = {});

  double rate(double s) const override;
  double elapsed(double s) const override;
  double total_time() const override { return total_; }
  std::vector<double> breakpoints() const override;

  // Inverse of elapsed(), resolved to adjacent doubles in s.
  double s_at(double t) const;

  // Same rate law with epsilon divided by the factor: every K'(s) is multiplied by it.
  SchedulePlan scaled(double factor) const;

  double p() const noexcept { return p_; }
  double eps() const noexcept { return eps_; }
  double c_const() const noexcept { return c_const_; }
  double b1() const noexcept { return bounds_.b1; }
  double b2() const noexcept { return bounds_.b2; }
  const IntegralBounds& bounds() const noexcept { return bounds_; }
  const GapCertificate& certificate() const noexcept { return cert_; }
  // K'(s) g0(s)^p, identical at every s.
  double rate_law_constant() const noexcept { return prefactor_; }
  // (1/eps) c B1 / g_min, which T must not exceed.
  double time_bound() const;

  const std::vector<ScheduleSample>& table() const noexcept { return table_; }

 private:
  void build(std::size_t table_points);

  GapCertificate cert_;
  double p_;
  double eps_;
  HamiltonianNorms norms_;
  IntegralBounds bounds_;
  double c_const_ = 0;
  double prefactor_ = 0;
  double total_ = 0;
  std::vector<double> piece_start_time_;
  std::vector<ScheduleSample> table_;
  std::size_t table_points_;
};

SchedulePlan synthesize(const GapCertificate& cert, double p, double eps, const HamiltonianNorms& norms,
                        const ScheduleOptions& options = {});

}  // namespace aqolab
