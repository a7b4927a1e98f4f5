#pragma once

// Independent oracles and generators shared by the unit and acceptance tests.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "aqolab/families.hpp"
#include "aqolab/hardness/polynomial.hpp"
#include "aqolab/hardness/sat.hpp"
#include "aqolab/spectrum.hpp"

namespace aqolab::fixtures {

// Assembles sD - (1-s) u u^T from the levels alone and diagonalises densely.
inline std::vector<double> dense_eigenvalues(const DegeneracySpectrum& spec, double s) {
  const auto m = static_cast<Eigen::Index>(spec.size());
  const double n_states = std::ldexp(1.0, spec.qubits());
  Eigen::VectorXd u(m);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    u(k) = std::sqrt(static_cast<double>(spec.levels()[static_cast<std::size_t>(k)].degeneracy) / n_states);
    h(k, k) = s * spec.levels()[static_cast<std::size_t>(k)].energy.get_d();
  }
  h -= (1 - s) * u * u.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

inline Eigen::VectorXd dense_ground_vector(const DegeneracySpectrum& spec, double s) {
  const auto m = static_cast<Eigen::Index>(spec.size());
  const double n_states = std::ldexp(1.0, spec.qubits());
  Eigen::VectorXd u(m);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    u(k) = std::sqrt(static_cast<double>(spec.levels()[static_cast<std::size_t>(k)].degeneracy) / n_states);
    h(k, k) = s * spec.levels()[static_cast<std::size_t>(k)].energy.get_d();
  }
  h -= (1 - s) * u * u.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  return solver.eigenvectors().col(0);
}

// Random composition of 2^n into m positive parts.
inline std::vector<std::uint64_t> random_degeneracies(std::mt19937_64& rng, int n, std::size_t m) {
  const std::uint64_t total = std::uint64_t{1} << n;
  std::set<std::uint64_t> cuts;
  std::uniform_int_distribution<std::uint64_t> pick(1, total - 1);
  while (cuts.size() < m - 1) cuts.insert(pick(rng));
  std::vector<std::uint64_t> out;
  std::uint64_t prev = 0;
  for (auto c : cuts) {
    out.push_back(c - prev);
    prev = c;
  }
  out.push_back(total - prev);
  return out;
}

// Normalized spectrum: energies are distinct multiples of 1/1000 spanning [0, 1].
inline DegeneracySpectrum random_spectrum(std::mt19937_64& rng, int n_max, std::size_t m_max) {
  std::uniform_int_distribution<int> qubits(2, n_max);
  const int n = qubits(rng);
  const std::size_t cap = std::min<std::size_t>(m_max, std::size_t{1} << std::min(n, 20));
  std::uniform_int_distribution<std::size_t> levels(2, cap);
  const std::size_t m = levels(rng);
  std::set<long> numerators{0, 1000};
  std::uniform_int_distribution<long> pick(1, 999);
  while (numerators.size() < m) numerators.insert(pick(rng));
  const auto degs = random_degeneracies(rng, n, m);
  std::vector<Level> out;
  std::size_t k = 0;
  for (long num : numerators) out.push_back({Rational(num, 1000), degs[k++]});
  return DegeneracySpectrum(n, std::move(out), true);
}

// Spectra that satisfy the spectral condition at c = 0.02: Grover for
// n = 12..20, and Gaussian-degeneracy spectra over three sizes, three level
// counts and widths.
inline std::vector<DegeneracySpectrum> condition_corpus() {
  std::vector<DegeneracySpectrum> out;
  for (int n = 12; n <= 20; ++n) out.push_back(grover_spectrum(n));
  const int sizes[] = {16, 18, 20};
  const std::size_t level_counts[] = {5, 8, 11};
  const double widths[] = {1.0, 1.5, 2.0};
  for (int n : sizes) {
    for (std::size_t m : level_counts) {
      for (double w : widths) {
        if (out.size() == 25) return out;
        out.push_back(gaussian_spectrum(n, m, w, (static_cast<double>(m) - 1) / 2));
      }
    }
  }
  return out;
}

// Couplings and fields drawn from [-bound, bound]; at least one coupling is nonzero.
inline IsingModel random_ising(std::mt19937_64& rng, int n_max, long bound = 2) {
  std::uniform_int_distribution<int> size(2, n_max);
  std::uniform_int_distribution<long> value(-bound, bound);
  std::bernoulli_distribution present(0.5);
  IsingModel m;
  m.n = size(rng);
  for (int i = 0; i < m.n; ++i) {
    for (int j = i + 1; j < m.n; ++j) {
      if (present(rng)) m.couplings.push_back({i, j, value(rng)});
    }
  }
  m.couplings.push_back({0, 1, bound});
  for (int i = 0; i < m.n; ++i) m.fields.push_back(value(rng));
  return m;
}

inline SatInstance random_sat(std::mt19937_64& rng, int variables, std::size_t clauses) {
  std::uniform_int_distribution<int> var(0, variables - 1);
  std::bernoulli_distribution neg(0.5);
  SatInstance out;
  out.variables = variables;
  for (std::size_t c = 0; c < clauses; ++c) {
    out.clauses.push_back({Literal{var(rng), neg(rng)}, Literal{var(rng), neg(rng)}, Literal{var(rng), neg(rng)}});
  }
  return out;
}

inline Rational random_rational(std::mt19937_64& rng, long span = 50) {
  std::uniform_int_distribution<long> num(-span, span);
  std::uniform_int_distribution<long> den(1, span);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

// Degree deg - 1 polynomial sampled at k random distinct integer nodes.
inline std::vector<SamplePoint> random_samples(std::mt19937_64& rng, const Polynomial& p, std::size_t k) {
  std::set<long> nodes;
  std::uniform_int_distribution<long> pick(-40, 40);
  while (nodes.size() < k) nodes.insert(pick(rng));
  std::vector<SamplePoint> out;
  for (long x : nodes) out.push_back({Rational(x), p(Rational(x))});
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace aqolab::fixtures
