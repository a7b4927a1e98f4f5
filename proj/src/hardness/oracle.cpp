#include "aqolab/hardness/oracle.hpp"

#include <algorithm>
#include <map>

#include "aqolab/errors.hpp"

namespace aqolab {

namespace {

std::vector<Level> merge_levels(std::vector<Level> levels) {
  std::map<Rational, std::uint64_t> merged;
  for (auto& l : levels) merged[l.energy] += l.degeneracy;
  std::vector<Level> out;
  out.reserve(merged.size());
  for (auto& [e, d] : merged) out.push_back({e, d});
  return out;
}

std::uint64_t fnv1a(const std::string& text, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ULL ^ seed;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

DiagonalHamiltonian::DiagonalHamiltonian(int qubits, std::vector<Level> levels)
    : qubits_(qubits), levels_(std::move(levels)) {
  if (qubits_ < 1 || qubits_ > DegeneracySpectrum::max_qubits) {
    throw SizeError("qubit count must lie in [1, " + std::to_string(DegeneracySpectrum::max_qubits) + "]");
  }
  if (levels_.empty()) throw DegenerateSpectrumError("a Hamiltonian needs at least one level");
  Integer total = 0;
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    levels_[k].energy.canonicalize();
    if (levels_[k].degeneracy == 0) throw PreconditionError("degeneracies must be positive");
    if (k > 0 && !(levels_[k - 1].energy < levels_[k].energy)) {
      throw PreconditionError("energies must be strictly increasing");
    }
    total += to_integer(levels_[k].degeneracy);
  }
  if (total != dimension()) throw PreconditionError("degeneracies must sum to 2^n");
}

DiagonalHamiltonian::DiagonalHamiltonian(const DegeneracySpectrum& spec)
    : DiagonalHamiltonian(spec.qubits(), spec.levels()) {}

std::vector<Integer> DiagonalHamiltonian::integer_gaps() const {
  std::vector<Integer> out;
  out.reserve(levels_.size());
  for (const auto& l : levels_) {
    const Rational gap = l.energy - ground_energy();
    if (gap.get_den() != 1) throw DomainError("energy gaps must be integers, found " + to_string(gap));
    out.emplace_back(gap.get_num());
  }
  return out;
}

DegeneracySpectrum DiagonalHamiltonian::to_spectrum(bool normalized) const {
  return DegeneracySpectrum(qubits_, levels_, normalized);
}

bool operator==(const DiagonalHamiltonian& a, const DiagonalHamiltonian& b) {
  if (a.qubits_ != b.qubits_ || a.levels_.size() != b.levels_.size()) return false;
  for (std::size_t k = 0; k < a.levels_.size(); ++k) {
    if (a.levels_[k].energy != b.levels_[k].energy || a.levels_[k].degeneracy != b.levels_[k].degeneracy) {
      return false;
    }
  }
  return true;
}

Rational exact_a1(const DiagonalHamiltonian& h) {
  Rational acc = 0;
  const Rational& e0 = h.ground_energy();
  for (std::size_t k = 1; k < h.size(); ++k) {
    acc += Rational(to_integer(h.levels()[k].degeneracy)) / (h.levels()[k].energy - e0);
  }
  acc /= Rational(h.dimension());
  acc.canonicalize();
  return acc;
}

DiagonalHamiltonian couple_ancilla_plus(const DiagonalHamiltonian& h) {
  if (h.qubits() >= DegeneracySpectrum::max_qubits) throw SizeError("no room for the ancilla qubit");
  auto levels = h.levels();
  levels.push_back({Rational(0), std::uint64_t{1} << h.qubits()});
  return DiagonalHamiltonian(h.qubits() + 1, merge_levels(std::move(levels)));
}

DegeneracySpectrum couple_ancilla_plus(const DegeneracySpectrum& spec) {
  return couple_ancilla_plus(DiagonalHamiltonian(spec)).to_spectrum(spec.normalized());
}

DiagonalHamiltonian couple_ancilla_shift(const DiagonalHamiltonian& h, const Rational& x) {
  if (h.qubits() >= DegeneracySpectrum::max_qubits) throw SizeError("no room for the ancilla qubit");
  auto levels = h.levels();
  for (const auto& l : h.levels()) levels.push_back({l.energy - x / 2, l.degeneracy});
  return DiagonalHamiltonian(h.qubits() + 1, merge_levels(std::move(levels)));
}

std::string OracleQuery::describe() const {
  switch (transform) {
    case Transform::identity:
      return "H";
    case Transform::ancilla_plus:
      return "H(x)(1+Z)/2";
    case Transform::ancilla_shift:
      return "H'(" + to_string(shift) + ")";
  }
  return "?";
}

A1Oracle::A1Oracle(DiagonalHamiltonian hidden) : hidden_(std::move(hidden)) {}

Rational A1Oracle::query(const OracleQuery& q) {
  Rational exact;
  switch (q.transform) {
    case OracleQuery::Transform::identity:
      exact = exact_a1(hidden_);
      break;
    case OracleQuery::Transform::ancilla_plus:
      exact = exact_a1(couple_ancilla_plus(hidden_));
      break;
    case OracleQuery::Transform::ancilla_shift:
      if (!(q.shift > 0)) throw DomainError("ancilla shift must be positive");
      exact = exact_a1(couple_ancilla_shift(hidden_, q.shift));
      break;
  }
  Rational out = answer(q, exact, calls_++);
  out.canonicalize();
  return out;
}

NoisyOracle::NoisyOracle(DiagonalHamiltonian hidden, Rational eps, std::vector<int> signs)
    : A1Oracle(std::move(hidden)), eps_(std::move(eps)), signs_(std::move(signs)) {
  if (eps_ < 0) throw DomainError("oracle accuracy must be nonnegative");
  for (int s : signs_) {
    if (s < -1 || s > 1) throw DomainError("noise signs must be -1, 0 or 1");
  }
}

NoisyOracle::NoisyOracle(DiagonalHamiltonian hidden, Rational eps, std::uint64_t seed)
    : A1Oracle(std::move(hidden)), eps_(std::move(eps)), rng_(seed) {
  if (eps_ < 0) throw DomainError("oracle accuracy must be nonnegative");
}

Rational NoisyOracle::answer(const OracleQuery&, const Rational& exact, std::size_t call_index) {
  int sign;
  if (!signs_.empty()) {
    sign = signs_[call_index % signs_.size()];
  } else {
    sign = (rng_() & 1U) ? 1 : -1;
  }
  return exact + sign * eps_;
}

ProbabilisticOracle::ProbabilisticOracle(DiagonalHamiltonian hidden, Rational eps, double success,
                                         std::uint64_t seed)
    : A1Oracle(std::move(hidden)), eps_(std::move(eps)), success_(success), seed_(seed), rng_(seed) {
  if (eps_ < 0) throw DomainError("oracle accuracy must be nonnegative");
  if (!(success >= 0 && success <= 1)) throw DomainError("success probability must lie in [0, 1]");
}

Rational ProbabilisticOracle::answer(const OracleQuery& q, const Rational& exact, std::size_t) {
  std::bernoulli_distribution correct(success_);
  if (correct(rng_)) {
    const int sign = (fnv1a(q.describe(), seed_) & 1U) ? 1 : -1;
    return exact + sign * eps_;
  }
  std::uniform_int_distribution<long> num(-1'000'000, 1'000'000);
  std::uniform_int_distribution<long> den(1, 999'983);
  Rational wrong(num(rng_), den(rng_));
  wrong.canonicalize();
  wrong += exact;
  if (wrong == exact + eps_ || wrong == exact - eps_) wrong += 1;
  return wrong;
}

}  // namespace aqolab
