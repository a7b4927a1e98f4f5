#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "aqolab/rational.hpp"

namespace aqolab {

struct Level {
  Rational energy;
  std::uint64_t degeneracy = 0;
};

// Diagonal problem Hamiltonian compressed to its distinct energies.
// Construction validates every invariant; instances are immutable.
class DegeneracySpectrum {
 public:
  static constexpr int max_qubits = 62;

  DegeneracySpectrum(int qubits, std::vector<Level> levels, bool normalized);

  int qubits() const noexcept { return qubits_; }
  std::uint64_t dimension() const noexcept { return std::uint64_t{1} << qubits_; }
  std::size_t size() const noexcept { return levels_.size(); }
  const std::vector<Level>& levels() const noexcept { return levels_; }
  const Level& level(std::size_t k) const { return levels_.at(k); }
  bool normalized() const noexcept { return normalized_; }

  // Floating views used by the spectral solvers. weights[k] = d_k / N.
  const std::vector<double>& energies() const noexcept { return energies_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  // gap_to_ground[k] = E_k - E_0, converted from the exact difference.
  const std::vector<double>& gaps() const noexcept { return gaps_; }

  // Floating E_k - E_j, converted from the exact difference.
  double energy_difference(std::size_t k, std::size_t j) const;

  friend bool operator==(const DegeneracySpectrum& a, const DegeneracySpectrum& b);

 private:
  int qubits_;
  std::vector<Level> levels_;
  bool normalized_;
  std::vector<double> energies_;
  std::vector<double> weights_;
  std::vector<double> gaps_;
};

struct Coupling {
  int i = 0;
  int j = 0;
  long value = 0;
};

// H = sum J_ij Z_i Z_j + sum h_j Z_j, integer parameters.
struct IsingModel {
  int n = 0;
  std::vector<Coupling> couplings;
  std::vector<long> fields;

  // Throws PreconditionError on malformed indices or field count.
  void validate() const;
  long bound() const;
};

// Energy of a single assignment; bit j of z set means spin j is -1.
long ising_energy(const IsingModel& model, std::uint64_t z);

DegeneracySpectrum enumerate_ising(const IsingModel& model, int ceiling = 24);

// original = offset + scale * normalized
struct AffineMap {
  Rational offset;
  Rational scale;

  Rational forward(const Rational& original) const { return (original - offset) / scale; }
  Rational inverse(const Rational& normalized) const { return offset + scale * normalized; }
};

struct NormalizedSpectrum {
  DegeneracySpectrum spectrum;
  AffineMap map;
};

NormalizedSpectrum normalize(const DegeneracySpectrum& spec);

struct SpectralProfile {
  double a1 = 0;
  double a2 = 0;
  double a3 = 0;
  Rational a1_exact;
  Rational a2_exact;
  double delta = 0;
  double s_star = 0;
  double delta_s = 0;
  double g_min = 0;
  double kappa_prime = 0;
  double condition_value = 0;
  bool condition_ok = false;
  double c = 0;
  // Bookkeeping copied from the spectrum so downstream formulas need no lookup.
  double ground_degeneracy = 0;
  double dimension = 0;
};

double kappa_prime(double c);

SpectralProfile spectral_params(const DegeneracySpectrum& spec, double c = 0.02);

// lambda = s * E[anchor] + offset. Keeping the offset separate preserves
// relative precision for roots that hug a pole.
struct SecularRoot {
  double value = 0;
  std::size_t anchor = 0;
  double offset = 0;
};

class InterpolatedSpectrum {
 public:
  InterpolatedSpectrum(double s, std::vector<SecularRoot> roots) : s_(s), roots_(std::move(roots)) {}

  double s() const noexcept { return s_; }
  const std::vector<SecularRoot>& roots() const noexcept { return roots_; }
  std::vector<double> eigenvalues() const;
  double eigenvalue(std::size_t j) const { return roots_.at(j).value; }

  // lambda_j - lambda_k evaluated through the anchors.
  double spacing(const DegeneracySpectrum& spec, std::size_t j, std::size_t k) const;
  double gap(const DegeneracySpectrum& spec) const { return spacing(spec, 1, 0); }

 private:
  double s_;
  std::vector<SecularRoot> roots_;
};

// tolerance = 0 bisects to full double resolution.
InterpolatedSpectrum secular_eigenvalues(const DegeneracySpectrum& spec, double s,
                                         double tolerance = 1e-12);

double true_gap(const DegeneracySpectrum& spec, double s, double tolerance = 1e-12);

std::vector<double> symmetric_state_overlap(const DegeneracySpectrum& spec);

// s E_k - lambda_j for every k, evaluated through the root's anchor.
std::vector<double> pole_distances(const DegeneracySpectrum& spec, double s, const SecularRoot& root);

// Unit eigenvector of root j, components proportional to sqrt(w_k) / (s E_k - lambda_j).
// The sign convention (all components of one sign pattern fixed by the poles)
// is continuous in s on (0, 1].
std::vector<double> secular_eigenvector(const DegeneracySpectrum& spec, const InterpolatedSpectrum& roots,
                                        std::size_t j);

}  // namespace aqolab
