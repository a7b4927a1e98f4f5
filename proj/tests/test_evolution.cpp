#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "aqolab/errors.hpp"
#include "aqolab/evolution.hpp"
#include "aqolab/families.hpp"
#include "support.hpp"

using namespace aqolab;
using cd = std::complex<double>;

namespace {

SchedulePlan waived_plan(const DegeneracySpectrum& spec, double eps = 0.2) {
  CertificateOptions co;
  co.enforce_condition = false;
  ScheduleOptions so;
  so.allow_outside_regime = true;
  return synthesize(certificate(spectral_params(spec), co), 1.5, eps, HamiltonianNorms::for_linear_path(spec), so);
}

Eigen::MatrixXd dense_h(const DegeneracySpectrum& spec, double s) {
  const auto m = static_cast<Eigen::Index>(spec.size());
  Eigen::VectorXd u(m);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    u(k) = std::sqrt(static_cast<double>(spec.levels()[static_cast<std::size_t>(k)].degeneracy) /
                     std::ldexp(1.0, spec.qubits()));
    h(k, k) = s * spec.levels()[static_cast<std::size_t>(k)].energy.get_d();
  }
  return h - (1 - s) * u * u.transpose();
}

// Exponential midpoint rule with dense eigendecompositions, uniform schedule.
Eigen::VectorXcd midpoint_propagate(const DegeneracySpectrum& spec, double total_time, int steps) {
  const auto m = static_cast<Eigen::Index>(spec.size());
  Eigen::VectorXcd psi(m);
  for (Eigen::Index k = 0; k < m; ++k) psi(k) = std::sqrt(spec.weights()[static_cast<std::size_t>(k)]);
  const double h = 1.0 / steps;
  for (int i = 0; i < steps; ++i) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_h(spec, (i + 0.5) * h));
    Eigen::VectorXcd phase(m);
    for (Eigen::Index k = 0; k < m; ++k) phase(k) = std::polar(1.0, -total_time * h * solver.eigenvalues()(k));
    const Eigen::MatrixXcd v = solver.eigenvectors().cast<cd>();
    psi = v * phase.asDiagonal() * (v.adjoint() * psi);
  }
  return psi;
}

EvolveOptions with(Integrator kind) {
  EvolveOptions o;
  o.integrator = kind;
  return o;
}

}  // namespace

TEST(SubspaceHamiltonian, MatchesDenseAssembly) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = fixtures::random_spectrum(rng, 14, 9);
    for (double s : {0.0, 0.3, 1.0}) EXPECT_LE((subspace_hamiltonian(spec, s) - dense_h(spec, s)).norm(), 1e-15);
  }
}

TEST(Evolve, LabRk4MatchesMidpointOracle) {
  const auto spec = gaussian_spectrum(8, 4, 1.0, 1.5);
  const auto ref = midpoint_propagate(spec, 20.0, 40000);
  const auto res = uniform_baseline(spec, 20.0, with(Integrator::lab_rk4));
  EXPECT_EQ(res.integrator, Integrator::lab_rk4);
  EXPECT_LE((res.final_state - ref).norm(), 1e-6);
  EXPECT_LE(res.norm_drift, 1e-8);
}

TEST(Evolve, FrameAgreesWithLab) {
  for (const auto& spec : {grover_spectrum(6), gaussian_spectrum(8, 5, 1.0, 2.0), grover_spectrum(10, 3)}) {
    for (double t : {5.0, 50.0, 400.0}) {
      const auto lab = uniform_baseline(spec, t, with(Integrator::lab_rk4));
      const auto frame = uniform_baseline(spec, t, with(Integrator::adiabatic_frame));
      EXPECT_LE((lab.final_state - frame.final_state).norm(), 1e-6) << "T=" << t;
      EXPECT_LE(frame.norm_drift, 1e-8);
    }
  }
}

TEST(Evolve, FrameAgreesWithLabOnLocalSchedule) {
  const auto spec = grover_spectrum(8);
  const auto plan = waived_plan(spec).scaled(2e-6);
  const auto lab = evolve(spec, plan, with(Integrator::lab_rk4));
  const auto frame = evolve(spec, plan, with(Integrator::adiabatic_frame));
  EXPECT_LE((lab.final_state - frame.final_state).norm(), 1e-6);
}

TEST(Evolve, Grover8ReachesTargetFidelity) {
  const auto spec = grover_spectrum(8);
  const auto res = evolve(spec, waived_plan(spec));
  EXPECT_GE(res.fidelity, 0.8);
  EXPECT_LE(res.fidelity, 1.0);
  EXPECT_LE(res.norm_drift, 1e-8);
  EXPECT_EQ(res.integrator, Integrator::adiabatic_frame);
}

TEST(Evolve, SlowerIsNotWorse) {
  const auto spec = grover_spectrum(8);
  const auto plan = waived_plan(spec);
  const double base = evolve(spec, plan).fidelity;
  const double slow = evolve(spec, plan.scaled(100)).fidelity;
  EXPECT_GE(slow, base - 1e-6);
}

TEST(Evolve, FidelityGrowsAlongTimeLadder) {
  const auto spec = grover_spectrum(8);
  const auto plan = waived_plan(spec);
  double prev = 0;
  for (double f : {1e-6, 3e-6, 1e-5, 3e-5, 1e-4}) {
    const double fid = evolve(spec, plan.scaled(f)).fidelity;
    EXPECT_GE(fid, prev - 1e-6) << "factor " << f;
    prev = fid;
  }
}

TEST(Evolve, StationaryWhenFrozenAtEnd) {
  const auto spec = gaussian_spectrum(6, 4, 1.0, 1.5);
  EvolveOptions o = with(Integrator::lab_rk4);
  o.frozen_s = 1.0;
  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(spec.size()));
  e0(0) = 1;
  o.initial_state = e0;
  const auto res = uniform_baseline(spec, 300.0, o);
  EXPECT_NEAR(res.fidelity, 1.0, 1e-10);
  o.initial_state.reset();
  const auto populations = uniform_baseline(spec, 300.0, o);
  EXPECT_NEAR(populations.fidelity, spec.weights()[0], 1e-10);
}

TEST(UniformBaseline, SuddenAndSlowLimits) {
  const auto spec = grover_spectrum(6, 2);
  EXPECT_NEAR(uniform_baseline(spec, 1e-6).fidelity, 2.0 / 64.0, 1e-9);
  const auto p = spectral_params(spec);
  const double slow = 10 / (p.g_min * p.g_min);
  EXPECT_NEAR(uniform_baseline(spec, 100 * slow).fidelity, 1.0, 1e-3);
}

TEST(UniformBaseline, LosesToLocalScheduleAtEqualTime) {
  const auto spec = grover_spectrum(10);
  const auto plan = waived_plan(spec).scaled(1e-5);
  const auto local = evolve(spec, plan);
  const auto uniform = uniform_baseline(spec, plan.total_time());
  EXPECT_LT(uniform.fidelity, local.fidelity);
}

TEST(Evolve, StepSizeErrorSuggestsRefinement) {
  const auto spec = grover_spectrum(6);
  EvolveOptions o = with(Integrator::lab_rk4);
  o.phase_per_step = 1.5;
  o.norm_tolerance = 1e-12;
  try {
    uniform_baseline(spec, 200.0, o);
    FAIL() << "expected StepSizeError";
  } catch (const StepSizeError& e) {
    EXPECT_NEAR(e.suggested_phase_per_step(), 0.75, 1e-12);
  }
}

TEST(Evolve, Preconditions) {
  std::vector<Level> levels{{Rational(0), 1}, {Rational(3), 3}};
  const DegeneracySpectrum raw(2, levels, false);
  EXPECT_THROW(uniform_baseline(raw, 1.0), PreconditionError);
  EvolveOptions o = with(Integrator::adiabatic_frame);
  o.frozen_s = 0.5;
  EXPECT_THROW(uniform_baseline(grover_spectrum(4), 1.0, o), PreconditionError);
}

TEST(ProjectorBounds, Grover8InteriorGrid) {
  const auto spec = grover_spectrum(8);
  std::vector<double> grid;
  for (int i = 1; i <= 50; ++i) grid.push_back(i / 51.0);
  const auto rep = verify_projector_bounds(spec, grid);
  EXPECT_EQ(rep.points.size(), 50u);
  EXPECT_EQ(rep.excluded, 0u);
  EXPECT_LE(rep.max_derivative_ratio, 1.0);
  EXPECT_LE(rep.max_commutator_ratio, 1.0);
}

TEST(ProjectorBounds, SlackFarFromCrossing) {
  const auto spec = grover_spectrum(12);
  const auto rep = verify_projector_bounds(spec, {0.05, 0.95});
  for (const auto& pt : rep.points) EXPECT_LT(pt.derivative_norm / pt.derivative_bound, 1e-2);
}

TEST(ProjectorBounds, EndpointsFlagged) {
  const auto rep = verify_projector_bounds(grover_spectrum(6), {0.0, 0.5, 1.0});
  EXPECT_EQ(rep.excluded, 2u);
  EXPECT_EQ(rep.notes.size(), 2u);
}

TEST(ProjectorDerivative, MatchesPerturbationFormula) {
  for (const auto& spec : {grover_spectrum(5), gaussian_spectrum(6, 4, 1.0, 1.5)}) {
    const auto m = static_cast<Eigen::Index>(spec.size());
    Eigen::MatrixXd dh = dense_h(spec, 1.0) - dense_h(spec, 0.0);
    for (double s : {0.2, 0.45, 0.7}) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_h(spec, s));
      const auto& v = solver.eigenvectors();
      const auto& lam = solver.eigenvalues();
      Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(m, m);
      for (Eigen::Index j = 1; j < m; ++j) {
        const double coupling = v.col(j).dot(dh * v.col(0)) / (lam(0) - lam(j));
        expected += coupling * (v.col(j) * v.col(0).transpose() + v.col(0) * v.col(j).transpose());
      }
      const auto fd = projector_derivative(spec, s, 1e-4);
      EXPECT_LE((fd - expected).norm(), 1e-6) << "s=" << s;
    }
  }
}

TEST(Scaling, MinimumGapIdentityAndSlope) {
  ScalingOptions o;
  o.certificate.enforce_condition = false;
  o.schedule.allow_outside_regime = true;
  o.run_evolution = false;
  const auto table = scaling_experiment([](int n) { return grover_spectrum(n); }, {8, 10, 12, 14, 16}, 0.2, 1.5, o);
  ASSERT_EQ(table.rows.size(), 5u);
  for (const auto& row : table.rows) {
    EXPECT_TRUE(row.error.empty()) << row.error;
    EXPECT_NEAR(row.g_min_identity, 1.0, 1e-6);
  }
  EXPECT_GT(table.slope, 0.4);
  EXPECT_LT(table.slope, 0.65);
}

TEST(Scaling, FailedRowDoesNotAbortTable) {
  ScalingOptions o;
  o.run_evolution = false;
  const auto table = scaling_experiment([](int n) { return grover_spectrum(n); }, {8, 12, 13}, 0.2, 1.5, o);
  EXPECT_FALSE(table.rows[0].error.empty());
  EXPECT_TRUE(table.rows[1].error.empty());
  EXPECT_TRUE(table.rows[2].error.empty());
}
