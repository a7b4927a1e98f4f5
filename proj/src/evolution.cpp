#include "aqolab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "aqolab/errors.hpp"
#include "aqolab/parallel.hpp"

namespace aqolab {

using cd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;

std::string_view integrator_name(Integrator integrator) {
  switch (integrator) {
    case Integrator::automatic:
      return "automatic";
    case Integrator::lab_rk4:
      return "lab_rk4";
    case Integrator::adiabatic_frame:
      return "adiabatic_frame";
  }
  return "?";
}

MatrixXd subspace_hamiltonian(const DegeneracySpectrum& spec, double s) {
  const auto u = symmetric_state_overlap(spec);
  const auto m = static_cast<Eigen::Index>(spec.size());
  MatrixXd h(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      h(i, j) = -(1 - s) * u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(j)];
    }
    h(i, i) += s * spec.energies()[static_cast<std::size_t>(i)];
  }
  return h;
}

namespace {

// ---------------------------------------------------------------- lab frame

class LabPropagator {
 public:
  LabPropagator(const DegeneracySpectrum& spec, const RateSchedule& schedule, std::optional<double> frozen)
      : schedule_(schedule), energies_(spec.energies()), overlap_(symmetric_state_overlap(spec)), frozen_(frozen) {
    for (double e : energies_) max_energy_ = std::max(max_energy_, std::fabs(e));
  }

  // Upper bound on ||H(s)||.
  double norm_bound(double s) const {
    const double at = frozen_ ? *frozen_ : s;
    return (1 - at) + at * max_energy_;
  }
  double max_norm_bound() const { return std::max(1.0, max_energy_); }

  // out = -i K'(s) H(s) psi
  void derivative(double s, const VectorXcd& psi, VectorXcd& out) const {
    const double at = frozen_ ? *frozen_ : s;
    const double rate = schedule_.rate(s);
    cd proj = 0;
    for (Eigen::Index k = 0; k < psi.size(); ++k) proj += overlap_[static_cast<std::size_t>(k)] * psi(k);
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
      const cd h_psi = at * energies_[static_cast<std::size_t>(k)] * psi(k) -
                       (1 - at) * overlap_[static_cast<std::size_t>(k)] * proj;
      out(k) = cd(0, -rate) * h_psi;
    }
  }

  void step(double s, double h, VectorXcd& psi) {
    k1_.resize(psi.size());
    k2_.resize(psi.size());
    k3_.resize(psi.size());
    k4_.resize(psi.size());
    derivative(s, psi, k1_);
    tmp_ = psi + (h / 2) * k1_;
    derivative(s + h / 2, tmp_, k2_);
    tmp_ = psi + (h / 2) * k2_;
    derivative(s + h / 2, tmp_, k3_);
    tmp_ = psi + h * k3_;
    derivative(s + h, tmp_, k4_);
    psi += (h / 6) * (k1_ + 2 * k2_ + 2 * k3_ + k4_);
  }

 private:
  const RateSchedule& schedule_;
  std::vector<double> energies_;
  std::vector<double> overlap_;
  std::optional<double> frozen_;
  double max_energy_ = 0;
  VectorXcd k1_, k2_, k3_, k4_, tmp_;
};

struct SegmentStats {
  std::size_t steps = 0;
  double max_local_error = 0;
  double max_drift = 0;
};

std::vector<double> split_points(const RateSchedule& schedule, double begin, double end) {
  std::vector<double> out;
  for (double b : schedule.breakpoints()) {
    if (b > begin && b < end) out.push_back(b);
  }
  out.push_back(end);
  std::sort(out.begin(), out.end());
  return out;
}

double default_phase_per_step(double phase_budget, double tolerance) {
  // RK4 loses about z^6/144 of norm per step at phase z; spend a tenth of the
  // tolerance over phase_budget / z steps.
  const double z = std::pow(14.4 * tolerance / std::max(phase_budget, 1.0), 0.2);
  return std::min(0.1, z);
}

SegmentStats run_lab(LabPropagator& prop, const RateSchedule& schedule, double begin, double end, double theta,
                     double floor, const EvolveOptions& options, VectorXcd& psi) {
  SegmentStats stats;
  double s = begin;
  const auto stops = split_points(schedule, begin, end);
  std::size_t next = 0;
  VectorXcd probe_full, probe_half;
  while (s < end) {
    while (next < stops.size() && stops[next] <= s) ++next;
    const double stop = next < stops.size() ? stops[next] : end;
    const double local = schedule.rate(s) * prop.norm_bound(s);
    double h = local > 0 ? theta / local : options.step_cap;
    h = std::clamp(h, floor, options.step_cap);
    if (s + h >= stop || stop - (s + h) < 1e-3 * h) h = stop - s;

    if (stats.steps % 64 == 0) {
      probe_full = psi;
      probe_half = psi;
      prop.step(s, h, probe_full);
      prop.step(s, h / 2, probe_half);
      prop.step(s + h / 2, h / 2, probe_half);
      stats.max_local_error = std::max(stats.max_local_error, (probe_full - probe_half).norm() / 15);
      psi = probe_half;
    } else {
      prop.step(s, h, psi);
    }
    s = (h == stop - s) ? stop : s + h;
    ++stats.steps;
    if (stats.steps % 256 == 0 || s >= end) {
      const double drift = std::fabs(psi.norm() - 1);
      stats.max_drift = std::max(stats.max_drift, drift);
      if (drift > options.norm_tolerance) {
        std::ostringstream msg;
        msg << "norm drift " << drift << " exceeds " << options.norm_tolerance << " at s = " << s
            << "; retry with phase per step <= " << theta / 2 << " or the adiabatic-frame integrator";
        throw StepSizeError(msg.str(), theta / 2);
      }
    }
  }
  return stats;
}

VectorXcd initial_state(const DegeneracySpectrum& spec, const EvolveOptions& options) {
  if (options.initial_state) {
    if (options.initial_state->size() != static_cast<Eigen::Index>(spec.size())) {
      throw PreconditionError("initial state dimension does not match the spectrum");
    }
    return *options.initial_state;
  }
  const auto u = symmetric_state_overlap(spec);
  VectorXcd psi(static_cast<Eigen::Index>(u.size()));
  for (std::size_t k = 0; k < u.size(); ++k) psi(static_cast<Eigen::Index>(k)) = u[k];
  return psi;
}

// ---------------------------------------------------------------- adiabatic frame

struct FrameNode {
  double s = 0;
  double rate = 0;
  double lambda0 = 0;
  std::vector<double> spacing;  // lambda_j - lambda_0
  MatrixXd coupling;            // <phi_j | d phi_k / ds>
};

class FramePropagator {
 public:
  FramePropagator(const DegeneracySpectrum& spec, const RateSchedule& schedule)
      : spec_(spec), schedule_(schedule), overlap_(symmetric_state_overlap(spec)) {}

  FrameNode node(double s) const {
    const std::size_t m = spec_.size();
    FrameNode out;
    out.s = s;
    out.rate = schedule_.rate(s);
    const auto roots = secular_eigenvalues(spec_, s, 0.0);
    out.lambda0 = roots.eigenvalue(0);
    out.spacing.resize(m);
    for (std::size_t j = 0; j < m; ++j) out.spacing[j] = roots.spacing(spec_, j, 0);
    out.coupling = MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    if (s >= 1) {
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
          if (j == k) continue;
          out.coupling(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
              overlap_[j] * overlap_[k] / spec_.energy_difference(k, j);
        }
      }
      return out;
    }
    // For the rank-one path <phi_j|H'|phi_k> = (phi_j.u)(phi_k.u)/s and the
    // secular equation gives phi_j.u = 1/((1-s)|alpha_j|) exactly, so the
    // coupling needs no cancellation-prone inner products.
    std::vector<double> alpha_norm(m);
    const auto& w = spec_.weights();
    for (std::size_t j = 0; j < m; ++j) {
      const auto dist = pole_distances(spec_, s, roots.roots()[j]);
      double acc = 0;
      for (std::size_t i = 0; i < m; ++i) acc += w[i] / (dist[i] * dist[i]);
      alpha_norm[j] = std::sqrt(acc);
    }
    const double pre = 1 / (s * (1 - s) * (1 - s));
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        if (j == k) continue;
        out.coupling(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
            pre / (alpha_norm[j] * alpha_norm[k] * roots.spacing(spec_, k, j));
      }
    }
    return out;
  }

  // Propagator over [a.s, b.s] given the relative phases at both ends.
  MatrixXcd propagator(const FrameNode& a, const FrameNode& b, const std::vector<double>& phase_a,
                       const std::vector<double>& phase_b) const {
    const auto m = static_cast<Eigen::Index>(spec_.size());
    const double h = b.s - a.s;
    MatrixXcd omega = MatrixXcd::Zero(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index k = 0; k < m; ++k) {
        if (j == k) continue;
        const double theta = phase_a[static_cast<std::size_t>(j)] - phase_a[static_cast<std::size_t>(k)];
        const double nu = (phase_b[static_cast<std::size_t>(j)] - phase_b[static_cast<std::size_t>(k)]) - theta;
        const auto [e1, e2] = oscillatory_moments(nu);
        const double c0 = a.coupling(j, k);
        const double dc = b.coupling(j, k) - c0;
        omega(j, k) = -h * std::polar(1.0, theta) * (c0 * e1 + dc * e2);
      }
    }
    // exp(Omega) with Omega skew-Hermitian: diagonalise i Omega.
    const MatrixXcd herm = cd(0, 1) * omega;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(0.5 * (herm + herm.adjoint()));
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed in frame propagator");
    VectorXcd phases(m);
    for (Eigen::Index i = 0; i < m; ++i) phases(i) = std::polar(1.0, -solver.eigenvalues()(i));
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
  }

  // int_0^1 e^{i nu x} dx and int_0^1 x e^{i nu x} dx
  static std::pair<cd, cd> oscillatory_moments(double nu) {
    if (std::fabs(nu) < 0.05) {
      cd e1 = 0, e2 = 0, term = 1;  // term = (i nu)^n / n!
      for (int n = 0; n < 12; ++n) {
        e1 += term / static_cast<double>(n + 1);
        e2 += term / static_cast<double>(n + 2);
        term *= cd(0, nu) / static_cast<double>(n + 1);
      }
      return {e1, e2};
    }
    const cd ph = std::polar(1.0, nu);
    const cd e1 = (ph - 1.0) / cd(0, nu);
    const cd e2 = (ph * cd(1, -nu) - 1.0) / (nu * nu);
    return {e1, e2};
  }

 private:
  const DegeneracySpectrum& spec_;
  const RateSchedule& schedule_;
  std::vector<double> overlap_;
};

void simpson_phase(const FrameNode& a, const FrameNode& m, const FrameNode& b, const std::vector<double>& start,
                   std::vector<double>& out, double& ground_start_out) {
  const double h = b.s - a.s;
  out.resize(start.size());
  for (std::size_t j = 0; j < start.size(); ++j) {
    out[j] = start[j] + h / 6 *
                            (a.rate * a.spacing[j] + 4 * m.rate * m.spacing[j] + b.rate * b.spacing[j]);
  }
  ground_start_out += h / 6 * (a.rate * a.lambda0 + 4 * m.rate * m.lambda0 + b.rate * b.lambda0);
}

EvolutionResult run_frame(const DegeneracySpectrum& spec, const RateSchedule& schedule,
                          const EvolveOptions& options) {
  const std::size_t m = spec.size();
  EvolutionResult result;
  result.integrator = Integrator::adiabatic_frame;
  result.total_time = schedule.total_time();

  // Short lab segment off s = 0, where the excited levels are degenerate.
  double start = options.frame_start;
  for (double b : schedule.breakpoints()) start = std::min(start, b / 2);
  VectorXcd psi = initial_state(spec, options);
  LabPropagator lab(spec, schedule, std::nullopt);
  const double budget = schedule.elapsed(start) * lab.max_norm_bound();
  const auto lab_stats =
      run_lab(lab, schedule, 0.0, start, std::min(0.01, default_phase_per_step(budget, options.norm_tolerance)),
              1e-16, options, psi);
  result.steps = lab_stats.steps;
  result.max_local_error = lab_stats.max_local_error;

  FramePropagator frame(spec, schedule);
  FrameNode current = frame.node(start);
  VectorXcd eta(static_cast<Eigen::Index>(m));
  {
    const auto roots = secular_eigenvalues(spec, start, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const auto phi = secular_eigenvector(spec, roots, j);
      cd acc = 0;
      for (std::size_t k = 0; k < m; ++k) acc += phi[k] * psi(static_cast<Eigen::Index>(k));
      eta(static_cast<Eigen::Index>(j)) = acc;
    }
  }
  std::vector<double> phase(m, 0.0);  // relative to the ground branch
  double ground_phase = 0;

  const auto stops = split_points(schedule, start, 1.0);
  std::size_t next = 0;
  double s = start;
  double h = std::min(1e-4, (1 - s) / 16);
  const double tol = options.frame_tolerance;
  std::vector<double> phase_mid, phase_half, phase_full;
  std::size_t attempts = 0;
  while (s < 1) {
    while (next < stops.size() && stops[next] <= s) ++next;
    const double stop = next < stops.size() ? stops[next] : 1.0;
    bool clipped = false;
    if (s + h >= stop || stop - (s + h) < 1e-6 * h) {
      h = stop - s;
      clipped = true;
    }
    if (++attempts > 50'000'000) throw NumericalError("adiabatic-frame integrator exceeded its step budget");

    const double b_s = clipped ? stop : s + h;
    const FrameNode q1 = frame.node(s + h / 4);
    const FrameNode mid = frame.node(s + h / 2);
    const FrameNode q3 = frame.node(s + 3 * h / 4);
    const FrameNode end = frame.node(b_s);

    double g_half = ground_phase, g_dummy = 0;
    simpson_phase(current, q1, mid, phase, phase_mid, g_half);
    simpson_phase(mid, q3, end, phase_mid, phase_half, g_half);
    simpson_phase(current, mid, end, phase, phase_full, g_dummy);

    const VectorXcd full = frame.propagator(current, end, phase, phase_full) * eta;
    const VectorXcd first = frame.propagator(current, mid, phase, phase_mid) * eta;
    const VectorXcd half = frame.propagator(mid, end, phase_mid, phase_half) * first;
    const double err = (full - half).norm();

    if (err <= tol || h <= 1e-14) {
      eta = half;
      phase = phase_half;
      ground_phase = g_half;
      current = end;
      s = b_s;
      ++result.steps;
      result.max_local_error = std::max(result.max_local_error, err);
    }
    const double factor = err > 0 ? 0.9 * std::cbrt(tol / err) : 4.0;
    h *= std::clamp(factor, 0.2, 4.0);
    h = std::max(h, 1e-14);
  }

  result.final_state.resize(static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j) {
    result.final_state(static_cast<Eigen::Index>(j)) =
        eta(static_cast<Eigen::Index>(j)) * std::polar(1.0, -(ground_phase + phase[j]));
  }
  result.norm_drift = std::max(lab_stats.max_drift, std::fabs(eta.norm() - 1));
  if (result.norm_drift > options.norm_tolerance) {
    throw StepSizeError("norm drift exceeded in the adiabatic-frame integrator", 0);
  }
  result.fidelity = std::norm(result.final_state(0));
  return result;
}

EvolutionResult run_lab_full(const DegeneracySpectrum& spec, const RateSchedule& schedule,
                             const EvolveOptions& options) {
  LabPropagator lab(spec, schedule, options.frozen_s);
  VectorXcd psi = initial_state(spec, options);
  const double budget = schedule.total_time() * lab.max_norm_bound();
  const double theta =
      options.phase_per_step > 0 ? options.phase_per_step : default_phase_per_step(budget, options.norm_tolerance);
  const auto stats = run_lab(lab, schedule, 0.0, 1.0, theta, options.step_floor, options, psi);
  EvolutionResult result;
  result.integrator = Integrator::lab_rk4;
  result.final_state = psi;
  result.steps = stats.steps;
  result.max_local_error = stats.max_local_error;
  result.norm_drift = std::max(stats.max_drift, std::fabs(psi.norm() - 1));
  result.total_time = schedule.total_time();
  result.fidelity = std::min(1.0, std::norm(psi(0)));
  return result;
}

}  // namespace

EvolutionResult evolve(const DegeneracySpectrum& spec, const RateSchedule& schedule, const EvolveOptions& options) {
  if (!spec.normalized()) throw PreconditionError("evolution needs a normalized spectrum");
  Integrator kind = options.integrator;
  if (options.frozen_s) {
    if (kind == Integrator::adiabatic_frame) throw PreconditionError("a frozen path needs the RK4 integrator");
    kind = Integrator::lab_rk4;
  }
  if (kind == Integrator::automatic) {
    double max_energy = 0;
    for (double e : spec.energies()) max_energy = std::max(max_energy, std::fabs(e));
    const double phase = schedule.total_time() * std::max(1.0, max_energy);
    kind = phase <= options.lab_phase_limit ? Integrator::lab_rk4 : Integrator::adiabatic_frame;
  }
  return kind == Integrator::lab_rk4 ? run_lab_full(spec, schedule, options) : run_frame(spec, schedule, options);
}

EvolutionResult uniform_baseline(const DegeneracySpectrum& spec, double total_time, const EvolveOptions& options) {
  const UniformSchedule schedule(total_time);
  return evolve(spec, schedule, options);
}

// ---------------------------------------------------------------- projector bounds

MatrixXd ground_projector(const DegeneracySpectrum& spec, double s) {
  const auto roots = secular_eigenvalues(spec, s, 0.0);
  const auto phi = secular_eigenvector(spec, roots, 0);
  const auto m = static_cast<Eigen::Index>(phi.size());
  Eigen::Map<const Eigen::VectorXd> v(phi.data(), m);
  return v * v.transpose();
}

MatrixXd projector_derivative(const DegeneracySpectrum& spec, double s, double h) {
  auto central = [&](double step) {
    return ((ground_projector(spec, s + step) - ground_projector(spec, s - step)) / (2 * step)).eval();
  };
  const MatrixXd coarse = central(h);
  const MatrixXd fine = central(h / 2);
  return (4 * fine - coarse) / 3;
}

ProjectorBoundsReport verify_projector_bounds(const DegeneracySpectrum& spec, const std::vector<double>& s_grid) {
  const double h1 = HamiltonianNorms::for_linear_path(spec).first;
  ProjectorBoundsReport rep;
  rep.points.resize(s_grid.size());
  std::vector<std::string> point_notes(s_grid.size());

  parallel_for(s_grid.size(), [&](std::size_t i) {
    const double s = s_grid[i];
    ProjectorBoundPoint pt;
    pt.s = s;
    if (!(s > 0 && s < 1)) {
      pt.flagged = true;
      point_notes[i] = "s = " + std::to_string(s) + " is not interior";
      rep.points[i] = pt;
      return;
    }
    const auto roots = secular_eigenvalues(spec, s, 0.0);
    pt.gap = roots.gap(spec);
    if (!(pt.gap > 1e-8)) {
      pt.flagged = true;
      point_notes[i] = "gap below 1e-8 at s = " + std::to_string(s);
      rep.points[i] = pt;
      return;
    }
    const double h = std::min({1e-4, 1e-2 * pt.gap, s / 4, (1 - s) / 4});
    auto central = [&](double step) {
      return ((ground_projector(spec, s + step) - ground_projector(spec, s - step)) / (2 * step)).eval();
    };
    const MatrixXd coarse = central(h);
    const MatrixXd fine = central(h / 2);
    const MatrixXd dp = (4 * fine - coarse) / 3;

    Eigen::SelfAdjointEigenSolver<MatrixXd> sym(dp, Eigen::EigenvaluesOnly);
    pt.derivative_norm = sym.eigenvalues().cwiseAbs().maxCoeff();
    if ((fine - coarse).norm() > 1e-3 * std::max(dp.norm(), 1e-300)) {
      pt.flagged = true;
      point_notes[i] = "finite differences unconverged at s = " + std::to_string(s);
    }

    const auto m = static_cast<Eigen::Index>(spec.size());
    MatrixXd reduced = MatrixXd::Zero(m, m);
    for (std::size_t j = 1; j < spec.size(); ++j) {
      const auto phi = secular_eigenvector(spec, roots, j);
      Eigen::Map<const Eigen::VectorXd> v(phi.data(), m);
      reduced += v * v.transpose() / roots.spacing(spec, j, 0);
    }
    const MatrixXd comm = dp * reduced - reduced * dp;
    Eigen::JacobiSVD<MatrixXd> svd(comm);
    pt.commutator_norm = svd.singularValues()(0);
    pt.derivative_bound = 2 * h1 / pt.gap;
    pt.commutator_bound = 4 * h1 / (pt.gap * pt.gap);
    rep.points[i] = pt;
  });

  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    const auto& pt = rep.points[i];
    if (!point_notes[i].empty()) rep.notes.push_back(point_notes[i]);
    if (pt.flagged) {
      ++rep.excluded;
      continue;
    }
    rep.max_derivative_ratio = std::max(rep.max_derivative_ratio, pt.derivative_norm / pt.derivative_bound);
    rep.max_commutator_ratio = std::max(rep.max_commutator_ratio, pt.commutator_norm / pt.commutator_bound);
  }
  return rep;
}

// ---------------------------------------------------------------- scaling

ScalingTable scaling_experiment(const std::function<DegeneracySpectrum(int)>& family, const std::vector<int>& n_values,
                                double eps, double p, const ScalingOptions& options) {
  ScalingTable table;
  table.rows.resize(n_values.size());
  parallel_for(n_values.size(), [&](std::size_t i) {
    ScalingRow row;
    row.n = n_values[i];
    try {
      const auto spec = family(row.n);
      const auto profile = spectral_params(spec, options.c);
      const auto cert = certificate(profile, options.certificate);
      const auto plan = synthesize(cert, p, eps, HamiltonianNorms::for_linear_path(spec), options.schedule);
      row.total_time = plan.total_time();
      row.g_min = profile.g_min;
      row.g_min_identity = profile.g_min * std::sqrt(profile.dimension * profile.a2) /
                           (2 * profile.a1 / (1 + profile.a1) * std::sqrt(profile.ground_degeneracy));
      if (options.run_evolution) row.fidelity = evolve(spec, plan, options.evolve).fidelity;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    table.rows[i] = row;
  });

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (const auto& row : table.rows) {
    if (!row.error.empty() || !(row.total_time > 0)) continue;
    const double x = row.n;
    const double y = std::log2(row.total_time);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count >= 2) {
    const double denom = static_cast<double>(count) * sxx - sx * sx;
    table.slope = (static_cast<double>(count) * sxy - sx * sy) / denom;
    table.intercept = (sy - table.slope * sx) / static_cast<double>(count);
  } else {
    table.slope = std::numeric_limits<double>::quiet_NaN();
  }
  return table;
}

}  // namespace aqolab
