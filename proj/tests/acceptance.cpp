// One line per acceptance criterion; exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "aqolab/errors.hpp"
#include "aqolab/evolution.hpp"
#include "aqolab/families.hpp"
#include "aqolab/gap_bounds.hpp"
#include "aqolab/hardness/extraction.hpp"
#include "aqolab/hardness/oracle.hpp"
#include "aqolab/hardness/polynomial.hpp"
#include "aqolab/hardness/sat.hpp"
#include "support.hpp"

using namespace aqolab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

Outcome secular_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240101);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto spec = fixtures::random_spectrum(rng, 20, 12);
    for (int i = 0; i <= 20; ++i) {
      const double s = i / 20.0;
      const auto dense = fixtures::dense_eigenvalues(spec, s);
      const auto roots = secular_eigenvalues(spec, s).eigenvalues();
      for (std::size_t k = 0; k < dense.size(); ++k) worst = std::max(worst, std::abs(dense[k] - roots[k]));
    }
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-10 && elapsed < 10, "max deviation " + fmt(worst) + ", " + fmt(elapsed) + " s"};
}

Outcome certificate_soundness() {
  std::size_t violations = 0;
  double worst_ratio = 1e300;
  const auto corpus = fixtures::condition_corpus();
  for (const auto& spec : corpus) {
    const auto cert = certificate(spectral_params(spec));
    const auto r = soundness_scan(cert, spec, 1000, 1e-12);
    violations += r.violations;
    worst_ratio = std::min(worst_ratio, r.min_ratio);
  }
  return {violations == 0 && corpus.size() == 25,
          std::to_string(corpus.size()) + " spectra, " + std::to_string(violations) +
              " violations, min g_true/g0 " + fmt(worst_ratio)};
}

Outcome window_sandwich() {
  std::size_t violations = 0;
  double lo = 1e300, hi = 0;
  for (const auto& spec : fixtures::condition_corpus()) {
    const auto profile = spectral_params(spec, 0.02);
    const auto r = window_sandwich_check(profile, spec, 101, 0.1);
    violations += r.violations;
    lo = std::min(lo, r.min_gap / profile.g_min);
    hi = std::max(hi, r.max_gap / profile.g_min);
  }
  return {violations == 0, std::to_string(violations) + " violations, g/g_min in [" + fmt(lo) + ", " + fmt(hi) +
                               "], kappa' " + fmt(kappa_prime(0.02))};
}

Outcome bracket_containment() {
  std::size_t violations = 0;
  for (const auto& spec : fixtures::condition_corpus()) {
    violations += bracket_check(spectral_params(spec), spec, 101, 0.1).violations;
  }
  return {violations == 0, std::to_string(violations) + " violations at 101 window points per spectrum"};
}

ScalingOptions waived() {
  ScalingOptions o;
  o.certificate.enforce_condition = false;
  o.schedule.allow_outside_regime = true;
  return o;
}

Outcome runtime_scaling() {
  const auto start = Clock::now();
  const auto table = scaling_experiment([](int n) { return grover_spectrum(n); }, {8, 9, 10, 11, 12, 13, 14}, 0.2, 1.5,
                                        waived());
  double min_fidelity = 1;
  bool rows_ok = true;
  for (const auto& row : table.rows) {
    rows_ok = rows_ok && row.error.empty();
    min_fidelity = std::min(min_fidelity, row.fidelity);
  }
  const double elapsed = seconds_since(start);
  const bool pass = rows_ok && min_fidelity >= 0.8 && table.slope >= 0.4 && table.slope <= 0.6 && elapsed < 300;
  return {pass, "slope " + fmt(table.slope) + ", min fidelity " + fmt(min_fidelity) + ", " + fmt(elapsed) + " s"};
}

Outcome degeneracy_dependence() {
  const auto o = waived();
  double t1 = 0;
  double worst = 0;
  std::string ratios;
  for (std::uint64_t d0 : {1, 2, 4}) {
    const auto spec = grover_spectrum(12, d0);
    const auto plan = synthesize(certificate(spectral_params(spec), o.certificate), 1.5, 0.2,
                                 HamiltonianNorms::for_linear_path(spec), o.schedule);
    if (d0 == 1) t1 = plan.total_time();
    const double ratio = plan.total_time() / t1;
    const double expected = 1 / std::sqrt(static_cast<double>(d0));
    worst = std::max(worst, std::abs(ratio / expected - 1));
    ratios += " " + fmt(ratio);
  }
  return {worst <= 0.15, "T(d0)/T(1):" + ratios + ", worst relative deviation " + fmt(worst)};
}

std::vector<Integer> hidden(const DiagonalHamiltonian& h) {
  std::vector<Integer> out;
  for (const auto& l : h.levels()) out.push_back(to_integer(l.degeneracy));
  return out;
}

Outcome extraction_round_trip() {
  std::mt19937_64 rng(777);
  int exact_ok = 0, noisy_instances = 0, noisy_runs = 0, noisy_fail = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto model = fixtures::random_ising(rng, 10, trial % 2 == 0 ? 1 : 3);
    const DiagonalHamiltonian h(enumerate_ising(model));
    const auto gaps = h.integer_gaps();
    ExactOracle exact(h);
    const auto t = extract_degeneracies(exact, gaps);
    bool zero_margins = true;
    for (const auto& m : t.margins) zero_margins = zero_margins && m == 0;
    exact_ok += t.degeneracies == hidden(h) && zero_margins;
    if (gaps.size() > 4) continue;
    ++noisy_instances;
    const Rational eps = noise_budget(h.qubits(), gaps).budget / 10;
    const std::size_t calls = 2 * gaps.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << calls); ++mask) {
      std::vector<int> signs(calls);
      for (std::size_t i = 0; i < calls; ++i) signs[i] = ((mask >> i) & 1U) ? 1 : -1;
      NoisyOracle noisy(h, eps, signs);
      ++noisy_runs;
      try {
        noisy_fail += extract_degeneracies_noisy(noisy, gaps).degeneracies != hidden(h);
      } catch (const Error&) {
        ++noisy_fail;
      }
    }
  }
  return {exact_ok == 30 && noisy_instances > 0 && noisy_fail == 0,
          std::to_string(exact_ok) + "/30 exact, " + std::to_string(noisy_runs) + " noisy corners over " +
              std::to_string(noisy_instances) + " instances with M <= 4, " + std::to_string(noisy_fail) +
              " failures"};
}

Outcome berlekamp_welch_trials() {
  std::mt19937_64 rng(8);
  int ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + trial % 8;
    std::vector<Rational> coeffs;
    for (int i = 0; i < m; ++i) coeffs.push_back(fixtures::random_rational(rng));
    const Polynomial clean(coeffs);
    const std::size_t k = static_cast<std::size_t>(2 * m + 3);
    const int budget = static_cast<int>((k - static_cast<std::size_t>(m)) / 2) - 1;
    auto pts = fixtures::random_samples(rng, clean, k);
    std::vector<Rational> xs, ys;
    for (const auto& p : pts) {
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
    const auto interpolant = Polynomial::interpolate(xs, ys);
    std::uniform_int_distribution<int> count(0, budget);
    const int corrupt = count(rng);
    for (int e = 0; e < corrupt; ++e) {
      Rational delta = fixtures::random_rational(rng);
      if (delta == 0) delta = 1;
      pts[static_cast<std::size_t>(e)].y += delta;
    }
    try {
      ok += berlekamp_welch(pts, m - 1, budget).polynomial == interpolant && interpolant == clean;
    } catch (const Error&) {
    }
  }
  return {ok == 100, std::to_string(ok) + "/100 decoded to the clean interpolant"};
}

Outcome sat_gadget() {
  std::mt19937_64 rng(31337);
  std::vector<SatInstance> set;
  set.push_back({1, {Clause{Literal{0, false}, Literal{0, false}, Literal{0, false}},
                     Clause{Literal{0, true}, Literal{0, true}, Literal{0, true}}}});
  set.push_back({3, {Clause{Literal{0, false}, Literal{1, false}, Literal{2, false}}}});
  // Unsatisfiable by construction: every sign pattern over a few variables.
  auto pad = [](Literal a, Literal b) { return Clause{a, b, b}; };
  set.push_back({2, {pad({0, false}, {1, false}), pad({0, false}, {1, true}), pad({0, true}, {1, false}),
                     pad({0, true}, {1, true})}});
  set.push_back({2, {pad({0, false}, {1, false}), pad({0, true}, {0, true}), pad({1, true}, {1, true})}});
  set.push_back({3, {pad({0, false}, {0, false}), pad({0, true}, {1, false}), pad({1, true}, {2, false}),
                     pad({2, true}, {2, true})}});
  for (int extra = 2; extra <= 5; ++extra) {
    set.push_back({extra, {pad({0, false}, {0, false}), pad({0, true}, {0, true})}});
  }
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<int> vars(1, 4);
    const int n = vars(rng);
    std::uniform_int_distribution<std::size_t> clauses(1, static_cast<std::size_t>(7 - n));
    set.push_back(fixtures::random_sat(rng, n, clauses(rng)));
  }
  int sat = 0, unsat = 0, wrong = 0;
  for (const auto& inst : set) {
    const SatGadget g(inst);
    const bool truth = brute_force_satisfiable(inst);
    (truth ? sat : unsat)++;
    const auto spec = g.spectrum();
    if ((spec.ground_energy() == 0) != truth) ++wrong;
    const std::uint64_t aux_states = std::uint64_t{1} << inst.clauses.size();
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << inst.variables); ++a) {
      for (std::size_t c = 0; c < inst.clauses.size(); ++c) {
        int best = 1 << 20;
        for (std::uint64_t y = 0; y < aux_states; ++y) {
          best = std::min(best, g.clause_value(c, a | (y << inst.variables)));
        }
        const bool clause_true = inst.clauses[c][0].value(a) || inst.clauses[c][1].value(a) || inst.clauses[c][2].value(a);
        if (best != (clause_true ? 3 : 4)) ++wrong;
      }
    }
    const auto verdict = decide_sat(inst);
    if ((verdict.decision.verdict == Verdict::zero) != truth || verdict.satisfiable != truth) ++wrong;
  }
  return {wrong == 0 && sat > 0 && unsat > 0, std::to_string(set.size()) + " formulas (" + std::to_string(sat) +
                                                   " satisfiable), " + std::to_string(wrong) + " mismatches"};
}

Outcome projector_bounds() {
  const auto corpus = fixtures::condition_corpus();
  std::vector<double> grid;
  for (int i = 1; i <= 50; ++i) grid.push_back(i / 51.0);
  double worst = 0;
  std::size_t excluded = 0, checked = 0;
  for (std::size_t i = 0; i < corpus.size() && checked < 10; i += 2, ++checked) {
    const auto r = verify_projector_bounds(corpus[i], grid);
    worst = std::max({worst, r.max_derivative_ratio, r.max_commutator_ratio});
    excluded += r.excluded;
  }
  return {checked == 10 && worst <= 1 + 1e-3 && excluded == 0,
          std::to_string(checked) + " spectra, max ratio " + fmt(worst) + ", " + std::to_string(excluded) +
              " excluded points"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"secular solver matches dense eigensolver", secular_equivalence},
      {"gap certificate is a lower bound", certificate_soundness},
      {"window sandwich", window_sandwich},
      {"window root brackets", bracket_containment},
      {"runtime scaling on Grover 8..14", runtime_scaling},
      {"ground degeneracy dependence", degeneracy_dependence},
      {"degeneracy extraction round trip", extraction_round_trip},
      {"Berlekamp-Welch decoding", berlekamp_welch_trials},
      {"3-SAT gadget and two-call test", sat_gadget},
      {"projector derivative bounds", projector_bounds},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " (" << o.detail
              << ")" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
