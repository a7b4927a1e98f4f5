#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "aqolab/hardness/extraction.hpp"
#include "aqolab/hardness/oracle.hpp"

namespace aqolab {

struct Literal {
  int variable = 0;  // 0-based
  bool negated = false;

  // Truth value under an assignment whose bit j holds variable j.
  bool value(std::uint64_t assignment) const { return (((assignment >> variable) & 1U) != 0) != negated; }
};

using Clause = std::array<Literal, 3>;

// 3-CNF formula. Literals within a clause may repeat, which is how shorter
// clauses are padded to width three.
struct SatInstance {
  int variables = 0;
  std::vector<Clause> clauses;

  void validate() const;
  bool satisfied_by(std::uint64_t assignment) const;
};

// DIMACS CNF restricted to clauses of at most three literals; shorter
// clauses are padded by repeating their last literal.
SatInstance read_dimacs(std::istream& in);

bool brute_force_satisfiable(const SatInstance& instance);

// Diagonal gadget on 2n + 2m qubits. Bits [0, n) hold the variables, bit n+k
// is the auxiliary of clause k, bits [n+m, 2n+2m) only enter the field term.
class SatGadget {
 public:
  static constexpr int default_ceiling = 14;

  explicit SatGadget(SatInstance instance, int ceiling = default_ceiling);

  int qubits() const noexcept { return qubits_; }
  const SatInstance& instance() const noexcept { return instance_; }

  // Per-clause term for a full basis state, an integer in [3, 6] at its minimum.
  int clause_value(std::size_t clause, std::uint64_t state) const;
  Rational energy(std::uint64_t state) const;

  // All 2^(2n+2m) energies collected into levels.
  DiagonalHamiltonian spectrum() const;

 private:
  SatInstance instance_;
  int qubits_;
};

// Four ways a clause value arises from its true-literal count and auxiliary bit.
int clause_gadget_value(int true_literals, bool auxiliary);

struct SatVerdict {
  bool satisfiable = false;
  Rational ground_energy;
  DisambiguationResult decision;
};

// Builds the gadget, backs an exact oracle with it and runs the two-call test.
SatVerdict decide_sat(const SatInstance& instance, int ceiling = SatGadget::default_ceiling);

}  // namespace aqolab
