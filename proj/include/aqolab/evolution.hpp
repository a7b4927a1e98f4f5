#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aqolab/gap_bounds.hpp"
#include "aqolab/schedule.hpp"
#include "aqolab/spectrum.hpp"

namespace aqolab {

enum class Integrator {
  automatic,
  // Classical RK4 on i dpsi/ds = K'(s) H(s) psi with steps fixed a priori by
  // the local phase K' ||H|| h.
  lab_rk4,
  // Instantaneous-eigenbasis amplitudes with the dynamical phases factored
  // out and integrated exactly; step size tracks how fast the eigenbasis
  // turns rather than the total time. Needed once T reaches 10^6 and beyond.
  adiabatic_frame,
};

std::string_view integrator_name(Integrator integrator);

struct EvolveOptions {
  Integrator integrator = Integrator::automatic;
  double norm_tolerance = 1e-8;
  double step_cap = 1e-3;
  double step_floor = 1e-8;
  // Phase advanced per RK4 step. Zero derives it from the norm tolerance and
  // the expected accumulated phase.
  double phase_per_step = 0;
  // Automatic mode uses RK4 while T max||H|| stays below this.
  double lab_phase_limit = 2e4;
  double frame_tolerance = 1e-10;
  double frame_start = 1e-6;
  // Hold H at this s for the whole run (RK4 only).
  std::optional<double> frozen_s;
  std::optional<Eigen::VectorXcd> initial_state;
};

struct EvolutionResult {
  Eigen::VectorXcd final_state;
  double fidelity = 0;
  std::size_t steps = 0;
  double max_local_error = 0;
  double total_time = 0;
  double norm_drift = 0;
  Integrator integrator = Integrator::automatic;
};

// Symmetric-subspace matrix sD - (1-s) u u^T.
Eigen::MatrixXd subspace_hamiltonian(const DegeneracySpectrum& spec, double s);

EvolutionResult evolve(const DegeneracySpectrum& spec, const RateSchedule& schedule, const EvolveOptions& options = {});

EvolutionResult uniform_baseline(const DegeneracySpectrum& spec, double total_time,
                                 const EvolveOptions& options = {});

struct ProjectorBoundPoint {
  double s = 0;
  double gap = 0;
  double derivative_norm = 0;
  double derivative_bound = 0;  // 2 ||H'|| / g
  double commutator_norm = 0;
  double commutator_bound = 0;  // 4 ||H'|| / g^2
  bool flagged = false;
};

struct ProjectorBoundsReport {
  std::vector<ProjectorBoundPoint> points;
  double max_derivative_ratio = 0;
  double max_commutator_ratio = 0;
  std::size_t excluded = 0;
  std::vector<std::string> notes;
};

// Ground projector and its s-derivative (central differences with one
// Richardson step) in the symmetric subspace.
Eigen::MatrixXd ground_projector(const DegeneracySpectrum& spec, double s);
Eigen::MatrixXd projector_derivative(const DegeneracySpectrum& spec, double s, double h);

ProjectorBoundsReport verify_projector_bounds(const DegeneracySpectrum& spec, const std::vector<double>& s_grid);

struct ScalingRow {
  int n = 0;
  double total_time = 0;
  double fidelity = 0;
  double g_min = 0;
  // g_min sqrt(N A2) / (2 A1/(1+A1) sqrt(d0)), one up to rounding.
  double g_min_identity = 0;
  std::string error;
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  double slope = 0;      // least squares of log2 T against n over successful rows
  double intercept = 0;
};

struct ScalingOptions {
  double c = 0.02;
  CertificateOptions certificate;
  ScheduleOptions schedule;
  EvolveOptions evolve;
  bool run_evolution = true;
};

ScalingTable scaling_experiment(const std::function<DegeneracySpectrum(int)>& family, const std::vector<int>& n_values,
                                double eps, double p, const ScalingOptions& options = {});

}  // namespace aqolab
