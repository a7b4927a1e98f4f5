#include "aqolab/hardness/sat.hpp"

#include <map>
#include <sstream>

#include "aqolab/errors.hpp"

namespace aqolab {

void SatInstance::validate() const {
  if (variables < 1) throw PreconditionError("a formula needs at least one variable");
  if (clauses.empty()) throw PreconditionError("a formula needs at least one clause");
  for (const auto& c : clauses) {
    for (const auto& l : c) {
      if (l.variable < 0 || l.variable >= variables) throw PreconditionError("literal refers to a missing variable");
    }
  }
}

bool SatInstance::satisfied_by(std::uint64_t assignment) const {
  for (const auto& c : clauses) {
    if (!(c[0].value(assignment) || c[1].value(assignment) || c[2].value(assignment))) return false;
  }
  return true;
}

SatInstance read_dimacs(std::istream& in) {
  SatInstance out;
  std::string line;
  int declared_clauses = -1;
  std::vector<Literal> pending;
  auto flush = [&] {
    if (pending.empty()) throw ParseError("empty clause in DIMACS input");
    if (pending.size() > 3) throw ParseError("only clauses of up to three literals are supported");
    while (pending.size() < 3) pending.push_back(pending.back());
    out.clauses.push_back({pending[0], pending[1], pending[2]});
    pending.clear();
  };
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head == "c" || head[0] == 'c' || head[0] == '%') continue;
    if (head == "p") {
      std::string fmt;
      if (!(ls >> fmt >> out.variables >> declared_clauses) || fmt != "cnf") throw ParseError("bad DIMACS header");
      continue;
    }
    std::istringstream tokens(line);
    long v;
    while (tokens >> v) {
      if (v == 0) {
        flush();
        continue;
      }
      if (out.variables == 0) throw ParseError("clause before the DIMACS header");
      const long var = v < 0 ? -v : v;
      if (var > out.variables) throw ParseError("literal " + std::to_string(v) + " exceeds the variable count");
      pending.push_back({static_cast<int>(var - 1), v < 0});
    }
    if (!tokens.eof()) throw ParseError("non-numeric token in DIMACS clause line");
  }
  if (!pending.empty()) flush();
  if (declared_clauses >= 0 && static_cast<std::size_t>(declared_clauses) != out.clauses.size()) {
    throw ParseError("DIMACS header declares " + std::to_string(declared_clauses) + " clauses, found " +
                     std::to_string(out.clauses.size()));
  }
  out.validate();
  return out;
}

bool brute_force_satisfiable(const SatInstance& instance) {
  instance.validate();
  if (instance.variables > 30) throw SizeError("brute force limited to 30 variables");
  const std::uint64_t count = std::uint64_t{1} << instance.variables;
  for (std::uint64_t a = 0; a < count; ++a) {
    if (instance.satisfied_by(a)) return true;
  }
  return false;
}

int clause_gadget_value(int true_literals, bool auxiliary) {
  // Negated-literal fields, pairwise literal terms, and auxiliary couplings.
  const int t = true_literals;
  const int y = auxiliary ? 1 : 0;
  return (3 - t) + (1 - y) + t * (t - 1) / 2 + (3 - t) * y;
}

SatGadget::SatGadget(SatInstance instance, int ceiling) : instance_(std::move(instance)) {
  instance_.validate();
  qubits_ = 2 * instance_.variables + 2 * static_cast<int>(instance_.clauses.size());
  if (qubits_ > ceiling) {
    throw SizeError("gadget needs " + std::to_string(qubits_) + " qubits, ceiling is " + std::to_string(ceiling));
  }
}

int SatGadget::clause_value(std::size_t clause, std::uint64_t state) const {
  const auto& c = instance_.clauses.at(clause);
  const int t = static_cast<int>(c[0].value(state)) + static_cast<int>(c[1].value(state)) +
                static_cast<int>(c[2].value(state));
  const bool aux = ((state >> (instance_.variables + static_cast<int>(clause))) & 1U) != 0;
  return clause_gadget_value(t, aux);
}

Rational SatGadget::energy(std::uint64_t state) const {
  const auto m = static_cast<long>(instance_.clauses.size());
  long clause_sum = 0;
  for (std::size_t k = 0; k < instance_.clauses.size(); ++k) clause_sum += clause_value(k, state);
  long padding = 0;
  for (int b = instance_.variables + static_cast<int>(m); b < qubits_; ++b) padding += (state >> b) & 1U;
  Rational e = Rational(clause_sum, 6 * m) + Rational(padding, qubits_) - Rational(1, 2);
  e.canonicalize();
  return e;
}

DiagonalHamiltonian SatGadget::spectrum() const {
  std::map<Rational, std::uint64_t> levels;
  const std::uint64_t count = std::uint64_t{1} << qubits_;
  for (std::uint64_t z = 0; z < count; ++z) ++levels[energy(z)];
  std::vector<Level> out;
  for (auto& [e, d] : levels) out.push_back({e, d});
  return DiagonalHamiltonian(qubits_, std::move(out));
}

SatVerdict decide_sat(const SatInstance& instance, int ceiling) {
  const SatGadget gadget(instance, ceiling);
  auto spec = gadget.spectrum();
  SatVerdict v;
  v.ground_energy = spec.ground_energy();
  const auto m = static_cast<long>(instance.clauses.size());
  ExactOracle oracle(std::move(spec));
  // d0 <= 2^(n+m): the padding block must be all zero in any ground state.
  const Integer bound = pow2(static_cast<unsigned>(instance.variables + m));
  v.decision = disambiguate(oracle, Rational(1, 6 * m), Rational(1, 2), bound);
  v.satisfiable = v.decision.verdict == Verdict::zero;
  return v;
}

}  // namespace aqolab
