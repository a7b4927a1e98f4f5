#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "aqolab/rational.hpp"
#include "aqolab/spectrum.hpp"

namespace aqolab {

// Exact diagonal Hamiltonian for the reductions. Unlike DegeneracySpectrum a
// single level is allowed and no float views are kept.
class DiagonalHamiltonian {
 public:
  DiagonalHamiltonian(int qubits, std::vector<Level> levels);
  explicit DiagonalHamiltonian(const DegeneracySpectrum& spec);

  int qubits() const noexcept { return qubits_; }
  Integer dimension() const { return pow2(static_cast<unsigned>(qubits_)); }
  std::size_t size() const noexcept { return levels_.size(); }
  const std::vector<Level>& levels() const noexcept { return levels_; }
  const Rational& ground_energy() const { return levels_.front().energy; }

  // E_k - E_0; throws DomainError unless every difference is an integer.
  std::vector<Integer> integer_gaps() const;

  DegeneracySpectrum to_spectrum(bool normalized) const;

  friend bool operator==(const DiagonalHamiltonian& a, const DiagonalHamiltonian& b);

 private:
  int qubits_;
  std::vector<Level> levels_;
};

// (1/N) sum_{k>=1} d_k / (E_k - E_0)
Rational exact_a1(const DiagonalHamiltonian& h);

// H (x) (1 + Z)/2 on one extra qubit: a new zero level of degeneracy 2^n.
DiagonalHamiltonian couple_ancilla_plus(const DiagonalHamiltonian& h);
DegeneracySpectrum couple_ancilla_plus(const DegeneracySpectrum& spec);

// H (x) I - (x/2) on the ancilla-down block: every level gets a copy at E_k - x/2.
DiagonalHamiltonian couple_ancilla_shift(const DiagonalHamiltonian& h, const Rational& x);

// What the caller asks the oracle about. The oracle owns the hidden
// Hamiltonian; a query names a transform of it.
struct OracleQuery {
  enum class Transform { identity, ancilla_plus, ancilla_shift };
  Transform transform = Transform::identity;
  Rational shift;  // used by ancilla_shift

  static OracleQuery identity() { return {}; }
  static OracleQuery plus() { return {Transform::ancilla_plus, Rational(0)}; }
  static OracleQuery shifted(const Rational& x) { return {Transform::ancilla_shift, x}; }
  std::string describe() const;
};

class A1Oracle {
 public:
  explicit A1Oracle(DiagonalHamiltonian hidden);
  virtual ~A1Oracle() = default;
  A1Oracle(const A1Oracle&) = delete;
  A1Oracle& operator=(const A1Oracle&) = delete;

  Rational query(const OracleQuery& q);
  std::size_t calls() const noexcept { return calls_; }
  // The register size is public; the spectrum is not.
  int qubits() const noexcept { return hidden_.qubits(); }

  virtual Rational epsilon() const { return Rational(0); }
  virtual std::string mode() const = 0;

 protected:
  virtual Rational answer(const OracleQuery& q, const Rational& exact, std::size_t call_index) = 0;

 private:
  DiagonalHamiltonian hidden_;
  std::size_t calls_ = 0;
};

class ExactOracle final : public A1Oracle {
 public:
  using A1Oracle::A1Oracle;
  std::string mode() const override { return "exact"; }

 protected:
  Rational answer(const OracleQuery&, const Rational& exact, std::size_t) override { return exact; }
};

// Returns A1 + sign * eps. Signs come from the given sequence (cycled by call
// index, entries in {-1, 0, 1}) or, if empty, from a seeded generator.
class NoisyOracle final : public A1Oracle {
 public:
  NoisyOracle(DiagonalHamiltonian hidden, Rational eps, std::vector<int> signs);
  NoisyOracle(DiagonalHamiltonian hidden, Rational eps, std::uint64_t seed);

  Rational epsilon() const override { return eps_; }
  std::string mode() const override { return "noisy"; }

 protected:
  Rational answer(const OracleQuery& q, const Rational& exact, std::size_t call_index) override;

 private:
  Rational eps_;
  std::vector<int> signs_;
  std::mt19937_64 rng_;
};

// With probability `success` returns A1 + sign * eps, where the sign is a
// fixed function of the query; otherwise an arbitrary rational.
class ProbabilisticOracle final : public A1Oracle {
 public:
  ProbabilisticOracle(DiagonalHamiltonian hidden, Rational eps, double success, std::uint64_t seed);

  Rational epsilon() const override { return eps_; }
  double success() const noexcept { return success_; }
  std::string mode() const override { return "probabilistic"; }

 protected:
  Rational answer(const OracleQuery& q, const Rational& exact, std::size_t call_index) override;

 private:
  Rational eps_;
  double success_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

}  // namespace aqolab
