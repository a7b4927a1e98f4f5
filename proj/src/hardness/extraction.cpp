#include "aqolab/hardness/extraction.hpp"

#include <cmath>
#include <complex>
#include <map>

#include "aqolab/errors.hpp"

namespace aqolab {

namespace {

void check_gaps(const std::vector<Integer>& gaps) {
  if (gaps.empty()) throw PreconditionError("at least one level is required");
  if (gaps[0] != 0) throw DomainError("the first gap must be 0");
  for (std::size_t k = 1; k < gaps.size(); ++k) {
    if (!(gaps[k - 1] < gaps[k])) throw DomainError("gaps must be strictly increasing integers");
  }
}

std::vector<Rational> odd_nodes(std::size_t count) {
  std::vector<Rational> xs;
  xs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) xs.emplace_back(static_cast<long>(2 * i + 1));
  return xs;
}

// prod_k (gap_k + x/2)
Rational sample_weight(const std::vector<Integer>& gaps, const Rational& x) {
  Rational acc = 1;
  for (const auto& g : gaps) acc *= Rational(g) + x / 2;
  return acc;
}

// prod_{l != k} (gap_l - gap_k)
Rational level_separation(const std::vector<Integer>& gaps, std::size_t k) {
  Rational acc = 1;
  for (std::size_t l = 0; l < gaps.size(); ++l) {
    if (l != k) acc *= Rational(gaps[l] - gaps[k]);
  }
  return acc;
}

Integer nearest_integer(const Rational& q) {
  const Rational shifted = q + Rational(1, 2);
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  return out;
}

std::vector<Rational> raw_degeneracies(int qubits, const std::vector<Integer>& gaps, const Polynomial& p) {
  const Rational n_states(pow2(static_cast<unsigned>(qubits)));
  std::vector<Rational> out(gaps.size());
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    out[k] = n_states * p(Rational(-2 * gaps[k])) / level_separation(gaps, k);
    out[k].canonicalize();
  }
  return out;
}

void check_recovery(const ExtractionTranscript& t) {
  Integer total = 0;
  for (std::size_t k = 0; k < t.degeneracies.size(); ++k) {
    if (t.degeneracies[k] < 0) {
      throw InconsistentOracleError("recovered a negative degeneracy at level " + std::to_string(k));
    }
    total += t.degeneracies[k];
  }
  if (total != pow2(static_cast<unsigned>(t.qubits))) {
    throw InconsistentOracleError("recovered degeneracies sum to " + to_string(total) + ", not 2^n");
  }
}

Rational voted_query(A1Oracle& oracle, const OracleQuery& q, int votes) {
  std::map<Rational, int> counts;
  Rational best;
  int best_count = 0;
  for (int v = 0; v < votes; ++v) {
    const Rational a = oracle.query(q);
    const int c = ++counts[a];
    if (c > best_count) {
      best_count = c;
      best = a;
    }
  }
  return best;
}

double binomial_tail_above_half(int votes, double q) {
  double acc = 0;
  for (int j = 0; j <= votes; ++j) {
    if (2 * j <= votes) continue;
    acc += std::exp(std::lgamma(votes + 1.0) - std::lgamma(j + 1.0) - std::lgamma(votes - j + 1.0)) *
           std::pow(q, j) * std::pow(1 - q, votes - j);
  }
  return acc;
}

}  // namespace

Rational f_of_x(A1Oracle& oracle, const Rational& x) {
  if (!(x > 0)) throw DomainError("f(x) needs x > 0");
  const Rational shifted = oracle.query(OracleQuery::shifted(x));
  const Rational base = oracle.query(OracleQuery::identity());
  Rational out = 2 * shifted - base;
  out.canonicalize();
  return out;
}

Rational f_reference(const DiagonalHamiltonian& h, const Rational& x) {
  if (!(x > 0)) throw DomainError("f(x) needs x > 0");
  Rational acc = 0;
  for (const auto& l : h.levels()) acc += Rational(to_integer(l.degeneracy)) / (l.energy - h.ground_energy() + x / 2);
  acc /= Rational(h.dimension());
  acc.canonicalize();
  return acc;
}

NoiseBudget noise_budget(int qubits, const std::vector<Integer>& gaps) {
  check_gaps(gaps);
  const std::size_t m = gaps.size();
  const auto xs = odd_nodes(m);
  std::vector<Rational> weights(m);
  for (std::size_t i = 0; i < m; ++i) weights[i] = sample_weight(gaps, xs[i]);
  const Rational n_states(pow2(static_cast<unsigned>(qubits)));

  NoiseBudget out;
  out.slope.resize(m);
  Rational worst = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const auto l = lagrange_weights(xs, Rational(-2 * gaps[k]));
    Rational s = 0;
    for (std::size_t i = 0; i < m; ++i) s += abs(l[i]) * weights[i];
    out.slope[k] = 3 * n_states * s / abs(level_separation(gaps, k));
    out.slope[k].canonicalize();
    worst = std::max(worst, out.slope[k]);
  }
  out.budget = 1 / (2 * worst);
  out.budget.canonicalize();

  Rational min_sep = abs(level_separation(gaps, 0));
  for (std::size_t k = 1; k < m; ++k) min_sep = std::min(min_sep, Rational(abs(level_separation(gaps, k))));
  Rational max_sample = 0;
  for (const auto& x : xs) {
    Rational v = x / 2;
    for (std::size_t k = 1; k < m; ++k) v *= Rational(gaps[k]) + x / 2;
    max_sample = std::max(max_sample, v);
  }
  out.formula = (min_sep / 2) / (n_states * 3 * Rational(pow2(static_cast<unsigned>(m - 1))) * max_sample);
  out.formula.canonicalize();
  return out;
}

ExtractionTranscript decode_samples(int qubits, const std::vector<Integer>& gaps,
                                    const std::vector<ExtractionSample>& samples, int error_budget) {
  check_gaps(gaps);
  const std::size_t m = gaps.size();
  if (samples.size() < m) throw PreconditionError("need at least one sample per level");
  ExtractionTranscript t;
  t.qubits = qubits;
  t.gaps = gaps;
  t.samples = samples;
  if (error_budget == 0 && samples.size() == m) {
    std::vector<Rational> xs, ys;
    for (const auto& s : samples) {
      xs.push_back(s.x);
      ys.push_back(s.p);
    }
    t.polynomial = Polynomial::interpolate(xs, ys);
  } else {
    std::vector<SamplePoint> points;
    for (const auto& s : samples) points.push_back({s.x, s.p});
    auto decoded = berlekamp_welch(points, static_cast<int>(m) - 1, error_budget);
    t.polynomial = std::move(decoded.polynomial);
    t.error_positions = std::move(decoded.error_positions);
  }
  t.raw_degeneracies = raw_degeneracies(qubits, gaps, t.polynomial);
  for (std::size_t k = 0; k < m; ++k) {
    if (t.raw_degeneracies[k].get_den() != 1) {
      throw InconsistentOracleError("non-integer degeneracy " + to_string(t.raw_degeneracies[k]) + " at level " +
                                    std::to_string(k));
    }
    t.degeneracies.emplace_back(t.raw_degeneracies[k].get_num());
  }
  t.margins.assign(m, Rational(0));
  t.margin_ok.assign(m, true);
  check_recovery(t);
  return t;
}

ExtractionTranscript extract_degeneracies(A1Oracle& oracle, const std::vector<Integer>& gaps) {
  check_gaps(gaps);
  if (oracle.epsilon() != 0) throw PreconditionError("exact extraction needs an exact oracle");
  const auto xs = odd_nodes(gaps.size());
  std::vector<ExtractionSample> samples;
  for (const auto& x : xs) {
    const Rational f = f_of_x(oracle, x);
    Rational p = sample_weight(gaps, x) * f;
    p.canonicalize();
    samples.push_back({x, f, p});
  }
  auto t = decode_samples(oracle.qubits(), gaps, samples, 0);
  t.method = "exact";
  t.oracle_calls = oracle.calls();
  return t;
}

ExtractionTranscript extract_degeneracies_noisy(A1Oracle& oracle, const std::vector<Integer>& gaps) {
  check_gaps(gaps);
  const int n = oracle.qubits();
  const Rational eps = oracle.epsilon();
  const auto budget = noise_budget(n, gaps);
  const std::size_t m = gaps.size();

  ExtractionTranscript t;
  t.method = "noisy";
  t.qubits = n;
  t.gaps = gaps;
  t.epsilon = eps;
  t.epsilon_budget = budget.budget;
  t.epsilon_formula = budget.formula;
  t.margins.resize(m);
  t.margin_ok.resize(m);
  bool ok = true;
  for (std::size_t k = 0; k < m; ++k) {
    t.margins[k] = eps * budget.slope[k];
    t.margins[k].canonicalize();
    t.margin_ok[k] = t.margins[k] < Rational(1, 2);
    ok = ok && t.margin_ok[k];
  }
  if (!ok) {
    throw PrecisionInsufficient("oracle accuracy " + to_scientific(eps) + " cannot guarantee rounding; need eps < " +
                                    to_scientific(budget.budget),
                                to_scientific(budget.budget));
  }

  const auto xs = odd_nodes(m);
  std::vector<Rational> ys;
  for (const auto& x : xs) {
    const Rational f = f_of_x(oracle, x);
    Rational p = sample_weight(gaps, x) * f;
    p.canonicalize();
    t.samples.push_back({x, f, p});
    ys.push_back(p);
  }
  t.polynomial = Polynomial::interpolate(xs, ys);
  t.raw_degeneracies = raw_degeneracies(n, gaps, t.polynomial);
  for (const auto& raw : t.raw_degeneracies) t.degeneracies.push_back(nearest_integer(raw));
  for (std::size_t k = 0; k < m; ++k) {
    if (abs(t.raw_degeneracies[k] - Rational(t.degeneracies[k])) > t.margins[k]) {
      throw InconsistentOracleError("oracle error exceeded its stated accuracy at level " + std::to_string(k));
    }
  }
  check_recovery(t);
  t.oracle_calls = oracle.calls();
  return t;
}

ExtractionTranscript probabilistic_extraction(ProbabilisticOracle& oracle, const std::vector<Integer>& gaps,
                                              const ProbabilisticOptions& options) {
  check_gaps(gaps);
  const std::size_t m = gaps.size();
  const std::size_t k = options.samples == 0 ? 4 * (m + 2) : options.samples;
  if (k < 4 * (m + 2)) throw PreconditionError("probabilistic extraction needs at least 4(M+2) samples");
  if (options.votes < 1) throw PreconditionError("at least one vote per call is required");
  const int n = oracle.qubits();
  const Rational eps = oracle.epsilon();

  // Exact P(x_i) at odd x lies on the lattice 2^-(n+M-1) Z.
  const Rational lattice(pow2(static_cast<unsigned>(n) + static_cast<unsigned>(m) - 1));
  const auto xs = odd_nodes(k);
  Rational max_weight = 0;
  for (const auto& x : xs) max_weight = std::max(max_weight, sample_weight(gaps, x));
  const Rational snap_budget = 1 / (6 * lattice * max_weight);
  if (eps >= snap_budget) {
    throw PrecisionInsufficient("oracle accuracy too coarse to snap samples; need eps < " + to_scientific(snap_budget),
                                to_scientific(snap_budget));
  }

  std::vector<ExtractionSample> samples;
  for (const auto& x : xs) {
    const Rational shifted = voted_query(oracle, OracleQuery::shifted(x), options.votes);
    const Rational base = voted_query(oracle, OracleQuery::identity(), options.votes);
    Rational f = 2 * shifted - base;
    f.canonicalize();
    const Rational p = sample_weight(gaps, x) * f;
    Rational snapped(nearest_integer(p * lattice));
    snapped /= lattice;
    snapped.canonicalize();
    samples.push_back({x, f, snapped});
  }
  const int budget = static_cast<int>((k - m + 1) / 2) - 1;
  auto t = decode_samples(n, gaps, samples, budget);
  t.method = "probabilistic";
  t.epsilon = eps;
  t.votes = options.votes;
  t.oracle_calls = oracle.calls();

  const double per_sample = std::pow(binomial_tail_above_half(options.votes, oracle.success()), 2);
  const double need = static_cast<double>(k) - budget;
  const double margin = static_cast<double>(k) * per_sample - (need - 1);
  t.success_bound = margin > 0 ? 1 - std::exp(-2 * margin * margin / static_cast<double>(k)) : 0.0;
  return t;
}

std::string_view verdict_name(Verdict v) { return v == Verdict::zero ? "zero" : "bounded-away"; }

DisambiguationResult disambiguate(A1Oracle& oracle, const Rational& mu1, const Rational& mu2,
                                  const Integer& ground_degeneracy_bound) {
  if (!(mu1 > 0 && mu2 > 0 && mu1 + mu2 <= 1)) throw DomainError("need mu1, mu2 > 0 with mu1 + mu2 <= 1");
  DisambiguationResult r;
  r.epsilon = oracle.epsilon();
  const Rational fraction = Rational(ground_degeneracy_bound) / Rational(pow2(static_cast<unsigned>(oracle.qubits())));
  r.separation = mu1 / (1 - mu1) - fraction / (mu1 * mu2);
  r.separation.canonicalize();
  r.separation_guaranteed = 6 * r.epsilon < r.separation;
  if (r.epsilon > 0 && !r.separation_guaranteed) {
    const std::string need = r.separation > 0 ? to_scientific(r.separation / 6) : std::string("none");
    throw PrecisionInsufficient("oracle accuracy " + to_scientific(r.epsilon) +
                                    " cannot resolve the promised separation " + to_scientific(r.separation),
                                need);
  }
  const Rational base = oracle.query(OracleQuery::identity());
  const Rational plus = oracle.query(OracleQuery::plus());
  r.difference = base - 2 * plus;
  r.difference.canonicalize();
  r.verdict = r.difference <= 3 * r.epsilon ? Verdict::zero : Verdict::bounded_away;
  r.oracle_calls = oracle.calls();
  return r;
}

double iqp_amplitude(const DiagonalHamiltonian& h, double phase) {
  const auto gaps = h.integer_gaps();
  std::complex<double> acc = 0;
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    acc += static_cast<double>(h.levels()[k].degeneracy) * std::polar(1.0, phase * gaps[k].get_d());
  }
  acc /= std::ldexp(1.0, h.qubits());
  return std::norm(acc);
}

}  // namespace aqolab
