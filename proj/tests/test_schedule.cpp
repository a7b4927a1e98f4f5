#include <gtest/gtest.h>

#include <cmath>

#include "aqolab/errors.hpp"
#include "aqolab/families.hpp"
#include "aqolab/schedule.hpp"
#include "support.hpp"

using namespace aqolab;

namespace {

// Composite Simpson over each piece; independent of the closed forms.
double simpson_power(const GapCertificate& cert, double q, int per_piece = 20000) {
  double total = 0;
  for (const auto& piece : cert.pieces()) {
    const double h = (piece.end - piece.begin) / per_piece;
    double acc = 0;
    for (int i = 0; i <= per_piece; ++i) {
      // Evaluate through the piece itself: cert(s) at the right end belongs to the next piece.
      const double s = piece.begin + h * i;
      const double w = (i == 0 || i == per_piece) ? 1 : (i % 2 ? 4 : 2);
      acc += w * std::pow(piece.value(s), q);
    }
    total += acc * h / 3;
  }
  return total;
}

SchedulePlan grover_plan(int n, double eps, double p = 1.5) {
  const auto spec = grover_spectrum(n);
  ScheduleOptions so;
  so.allow_outside_regime = true;
  CertificateOptions co;
  co.enforce_condition = false;
  return synthesize(certificate(spectral_params(spec), co), p, eps, HamiltonianNorms::for_linear_path(spec), so);
}

}  // namespace

TEST(RateConstant, PlugIn) {
  HamiltonianNorms norms;
  norms.first = 2;
  norms.second = 0;
  EXPECT_DOUBLE_EQ(rate_constant(1.0, 2.0, 0.0, norms), 168.0);
  EXPECT_DOUBLE_EQ(rate_constant(2.0, 1.5, 0.5, norms), 8 + 160 * 2 + 6 * 1.5 * 0.5 * 2 * 2);
  norms.first = 2.5;
  EXPECT_THROW(rate_constant(1.0, 2.0, 0.0, norms), PreconditionError);
}

TEST(HamiltonianNorms, LinearPathMatchesDense) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = fixtures::random_spectrum(rng, 16, 10);
    const auto norms = HamiltonianNorms::for_linear_path(spec);
    // H' = |psi0><psi0| + D is independent of s; dense oracle from two s values.
    const auto a = fixtures::dense_eigenvalues(spec, 1.0);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(spec.size()), static_cast<Eigen::Index>(spec.size()));
    Eigen::VectorXd u(static_cast<Eigen::Index>(spec.size()));
    for (std::size_t k = 0; k < spec.size(); ++k) {
      d(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = a[k];
      u(static_cast<Eigen::Index>(k)) = std::sqrt(spec.weights()[k]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(d + u * u.transpose(), Eigen::EigenvaluesOnly);
    EXPECT_NEAR(norms.first, solver.eigenvalues().cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(norms.first, 2.0);
    EXPECT_EQ(norms.second, 0.0);
  }
}

TEST(IntegralBounds, ClosedFormMatchesSimpson) {
  for (int n : {10, 14}) {
    const auto plan = grover_plan(n, 0.2);
    const auto& cert = plan.certificate();
    const double g = cert.g_min();
    const auto b = integral_bounds(cert, 1.5);
    EXPECT_NEAR(b.integral_rate / simpson_power(cert, -1.5), 1.0, 1e-6);
    EXPECT_NEAR(b.integral_comp / simpson_power(cert, -1.5), 1.0, 1e-6);
    EXPECT_NEAR(b.b1, std::pow(g, 0.5) * b.integral_rate, 1e-9 * b.b1);
    EXPECT_NEAR(b.b2, std::pow(g, 0.5) * b.integral_comp, 1e-9 * b.b2);
    EXPECT_NEAR(b.quadrature_rate / b.integral_rate, 1.0, 1e-6);
  }
  const auto plan = grover_plan(12, 0.2, 1.8);
  const auto b = integral_bounds(plan.certificate(), 1.8);
  EXPECT_NEAR(b.integral_rate / simpson_power(plan.certificate(), -1.8), 1.0, 1e-6);
  EXPECT_NEAR(b.integral_comp / simpson_power(plan.certificate(), 1.8 - 3), 1.0, 1e-6);
}

TEST(IntegralBounds, ConstantPiece) {
  const CertificatePiece flat{Region::window, 0.0, 1.0, 0.3, 0.0, 0.0};
  EXPECT_NEAR(piece_power_integral(flat, -1.5, 0.0, 1.0), std::pow(0.3, -1.5), 1e-12);
  // With g0 = g_min everywhere, B1 = g^(p-1) int g^(-p) = 1/g.
  EXPECT_NEAR(std::pow(0.3, 0.5) * piece_power_integral(flat, -1.5, 0.0, 1.0), 1 / 0.3, 1e-12);
}

TEST(IntegralBounds, ExponentRange) {
  const auto plan = grover_plan(10, 0.2);
  EXPECT_THROW(integral_bounds(plan.certificate(), 1.0), PreconditionError);
  EXPECT_THROW(integral_bounds(plan.certificate(), 2.5), PreconditionError);
}

TEST(IntegralBounds, GroverB1GrowsSlowly) {
  // B1 = O(1/(Delta (1 + A1))), far from the sqrt(N) growth of T.
  const double b8 = grover_plan(8, 0.2).b1();
  const double b16 = grover_plan(16, 0.2).b1();
  EXPECT_LT(b16 / b8, 1.5);
  EXPECT_GT(b16, b8 * 0.5);
}

TEST(SchedulePlan, RateLawIdentity) {
  const auto plan = grover_plan(12, 0.2);
  const double target = plan.rate_law_constant();
  EXPECT_NEAR(target, plan.c_const() / (0.2 * std::pow(plan.certificate().g_min(), 0.5)), 1e-9 * target);
  for (int i = 0; i <= 500; ++i) {
    const double s = i / 500.0;
    EXPECT_NEAR(plan.rate(s) * std::pow(plan.certificate()(s), 1.5), target, 1e-12 * target);
  }
}

TEST(SchedulePlan, ElapsedIsMonotoneIntegralOfRate) {
  const auto plan = grover_plan(11, 0.2);
  EXPECT_EQ(plan.elapsed(0.0), 0.0);
  EXPECT_NEAR(plan.elapsed(1.0), plan.total_time(), 1e-12 * plan.total_time());
  double prev = 0;
  for (int i = 1; i <= 1000; ++i) {
    const double cur = plan.elapsed(i / 1000.0);
    EXPECT_GT(cur, prev);
    prev = cur;
  }
  // Simpson on the rate across each piece.
  double total = 0;
  for (const auto& piece : plan.certificate().pieces()) {
    const int m = 20000;
    const double h = (piece.end - piece.begin) / m;
    double acc = 0;
    for (int i = 0; i <= m; ++i) {
      const double s = piece.begin + h * i;
      const double w = (i == 0 || i == m) ? 1 : (i % 2 ? 4 : 2);
      acc += w * plan.rate_law_constant() * std::pow(piece.value(s), -1.5);
    }
    total += acc * h / 3;
  }
  EXPECT_NEAR(total / plan.total_time(), 1.0, 1e-6);
}

TEST(SchedulePlan, InverseLookupRoundTrip) {
  const auto plan = grover_plan(13, 0.2);
  const double t_total = plan.total_time();
  for (int i = 0; i <= 1000; ++i) {
    const double t = t_total * i / 1000.0;
    EXPECT_LE(std::fabs(plan.elapsed(plan.s_at(t)) - t), 1e-9 * t_total);
  }
}

TEST(SchedulePlan, EpsilonScalingAndBound) {
  const auto a = grover_plan(12, 0.2);
  const auto b = grover_plan(12, 0.1);
  EXPECT_NEAR(b.total_time() / a.total_time(), 2.0, 1e-14);
  EXPECT_EQ(a.c_const(), b.c_const());
  for (const auto& spec : fixtures::condition_corpus()) {
    const auto cert = certificate(spectral_params(spec));
    const auto plan = synthesize(cert, 1.5, 0.2, HamiltonianNorms::for_linear_path(spec));
    EXPECT_LE(plan.total_time() * 0.2 * cert.g_min() / (plan.c_const() * plan.b1()), 1.0 + 1e-12);
  }
}

TEST(SchedulePlan, ScaledMultipliesRate) {
  const auto plan = grover_plan(10, 0.2);
  const auto fast = plan.scaled(1e-3);
  EXPECT_NEAR(fast.total_time() / plan.total_time(), 1e-3, 1e-15);
  EXPECT_NEAR(fast.rate(0.3) / plan.rate(0.3), 1e-3, 1e-15);
  EXPECT_THROW(plan.scaled(0.0), PreconditionError);
}

TEST(SchedulePlan, RefusesOutsideRegimeByDefault) {
  const auto spec = grover_spectrum(9);
  CertificateOptions co;
  co.enforce_condition = false;
  const auto cert = certificate(spectral_params(spec), co);
  EXPECT_THROW(synthesize(cert, 1.5, 0.2, HamiltonianNorms::for_linear_path(spec)), SpectralConditionError);
  EXPECT_THROW(grover_plan(10, 1.5), PreconditionError);
}

TEST(UniformSchedule, Linear) {
  const UniformSchedule u(40.0);
  EXPECT_EQ(u.rate(0.7), 40.0);
  EXPECT_EQ(u.elapsed(0.25), 10.0);
  EXPECT_THROW(UniformSchedule(-1.0), PreconditionError);
}
