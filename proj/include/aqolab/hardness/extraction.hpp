#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "aqolab/hardness/oracle.hpp"
#include "aqolab/hardness/polynomial.hpp"

namespace aqolab {

// f(x) = 2 A1(H'(x)) - A1(H), two oracle calls.
Rational f_of_x(A1Oracle& oracle, const Rational& x);

// (1/2^n) sum_k d_k / (gap_k + x/2), the value an exact oracle produces.
Rational f_reference(const DiagonalHamiltonian& h, const Rational& x);

struct ExtractionSample {
  Rational x;
  Rational f;  // as reconstructed from the oracle
  Rational p;  // prod_k (gap_k + x/2) * f, possibly snapped to its lattice
};

struct ExtractionTranscript {
  std::string method;  // exact | noisy | probabilistic
  int qubits = 0;
  std::vector<Integer> gaps;
  std::vector<ExtractionSample> samples;
  Polynomial polynomial;
  std::vector<Rational> raw_degeneracies;  // before rounding
  std::vector<Integer> degeneracies;
  // Upper bound on |raw - true| for each level and whether it is below 1/2.
  std::vector<Rational> margins;
  std::vector<bool> margin_ok;
  Rational epsilon;
  std::optional<Rational> epsilon_budget;   // largest eps with every margin < 1/2
  std::optional<Rational> epsilon_formula;  // closed-form estimate, diagnostic only
  std::vector<std::size_t> error_positions;
  std::size_t oracle_calls = 0;
  int votes = 1;
  std::optional<double> success_bound;
};

// Exact oracle; raises InconsistentOracleError on non-integer or
// inconsistent recoveries.
ExtractionTranscript extract_degeneracies(A1Oracle& oracle, const std::vector<Integer>& gaps);

// Eps-accurate oracle: rounds each recovery to the nearest integer and
// raises PrecisionInsufficient if any rigorous margin reaches 1/2.
ExtractionTranscript extract_degeneracies_noisy(A1Oracle& oracle, const std::vector<Integer>& gaps);

struct NoiseBudget {
  Rational budget;              // rigorous: every margin < 1/2 iff eps < budget
  Rational formula;             // closed-form estimate
  std::vector<Rational> slope;  // margin_k = eps * slope[k]
};

NoiseBudget noise_budget(int qubits, const std::vector<Integer>& gaps);

struct ProbabilisticOptions {
  std::size_t samples = 0;  // 0 picks 4(M+2)
  int votes = 5;            // repeats per oracle call, plurality wins
};

// Oracle that is right only with some probability: repeated calls are
// voted, samples snapped to the lattice of the exact values, and the
// polynomial recovered by Berlekamp-Welch.
ExtractionTranscript probabilistic_extraction(ProbabilisticOracle& oracle, const std::vector<Integer>& gaps,
                                              const ProbabilisticOptions& options = {});

// Shared tail: decode P from samples with an error budget and read off the
// degeneracies. Raises InconsistentOracleError if they are not valid.
ExtractionTranscript decode_samples(int qubits, const std::vector<Integer>& gaps,
                                    const std::vector<ExtractionSample>& samples, int error_budget);

enum class Verdict { zero, bounded_away };

std::string_view verdict_name(Verdict v);

struct DisambiguationResult {
  Verdict verdict = Verdict::zero;
  Rational difference;  // A1(H) - 2 A1(H (x) (1+Z)/2), as measured
  Rational epsilon;
  Rational separation;  // mu1/(1-mu1) - d0/(2^n mu1 mu2)
  bool separation_guaranteed = false;
  std::size_t oracle_calls = 0;
};

// Decides E_0 = 0 against mu1 <= E_0 <= 1 - mu2 with two calls. Refuses a
// noisy oracle whose accuracy cannot resolve the promised separation.
DisambiguationResult disambiguate(A1Oracle& oracle, const Rational& mu1, const Rational& mu2,
                                  const Integer& ground_degeneracy_bound);

// |(1/2^n) sum_k d_k exp(i * phase * gap_k)|^2
double iqp_amplitude(const DiagonalHamiltonian& h, double phase = 1.0);

}  // namespace aqolab
