#include "aqolab/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "aqolab/errors.hpp"

namespace aqolab {

DegeneracySpectrum::DegeneracySpectrum(int qubits, std::vector<Level> levels, bool normalized)
    : qubits_(qubits), levels_(std::move(levels)), normalized_(normalized) {
  if (qubits_ < 1 || qubits_ > max_qubits) {
    throw SizeError("qubit count " + std::to_string(qubits_) + " outside [1, " +
                    std::to_string(max_qubits) + "]");
  }
  if (levels_.size() < 2) {
    throw DegenerateSpectrumError("spectrum needs at least two distinct levels, got " +
                                  std::to_string(levels_.size()));
  }
  Integer total = 0;
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    levels_[k].energy.canonicalize();
    if (levels_[k].degeneracy == 0) {
      throw PreconditionError("level " + std::to_string(k) + " has zero degeneracy");
    }
    if (k > 0 && !(levels_[k - 1].energy < levels_[k].energy)) {
      throw PreconditionError("energies must be strictly increasing (level " + std::to_string(k) + ")");
    }
    total += to_integer(levels_[k].degeneracy);
  }
  if (total != pow2(static_cast<unsigned>(qubits_))) {
    throw PreconditionError("degeneracies sum to " + total.get_str() + ", expected 2^" +
                            std::to_string(qubits_));
  }
  if (normalized_ && (levels_.front().energy < 0 || levels_.back().energy > 1)) {
    throw PreconditionError("spectrum flagged normalized but energies leave [0, 1]");
  }

  const double dim = std::ldexp(1.0, qubits_);
  energies_.reserve(levels_.size());
  weights_.reserve(levels_.size());
  gaps_.reserve(levels_.size());
  for (const auto& lv : levels_) {
    energies_.push_back(to_double(lv.energy));
    weights_.push_back(static_cast<double>(lv.degeneracy) / dim);
    gaps_.push_back(to_double(Rational(lv.energy - levels_.front().energy)));
  }
}

double DegeneracySpectrum::energy_difference(std::size_t k, std::size_t j) const {
  if (k == j) return 0.0;
  if (j == 0) return gaps_[k];
  if (k == 0) return -gaps_[j];
  // Both gaps are accurate to half an ulp; their difference is exact when
  // they are within a factor of two, which covers the pole-hugging cases.
  return gaps_[k] - gaps_[j];
}

bool operator==(const DegeneracySpectrum& a, const DegeneracySpectrum& b) {
  if (a.qubits_ != b.qubits_ || a.normalized_ != b.normalized_ || a.levels_.size() != b.levels_.size()) {
    return false;
  }
  for (std::size_t k = 0; k < a.levels_.size(); ++k) {
    if (a.levels_[k].energy != b.levels_[k].energy || a.levels_[k].degeneracy != b.levels_[k].degeneracy) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- Ising

void IsingModel::validate() const {
  if (n < 1 || n > DegeneracySpectrum::max_qubits) {
    throw SizeError("Ising model spin count " + std::to_string(n) + " out of range");
  }
  if (!fields.empty() && fields.size() != static_cast<std::size_t>(n)) {
    throw PreconditionError("Ising model has " + std::to_string(fields.size()) + " fields for " +
                            std::to_string(n) + " spins");
  }
  for (const auto& c : couplings) {
    if (c.i < 0 || c.i >= c.j || c.j >= n) {
      throw PreconditionError("coupling (" + std::to_string(c.i) + ", " + std::to_string(c.j) +
                              ") violates 0 <= i < j < n");
    }
  }
}

long IsingModel::bound() const {
  long m = 0;
  for (const auto& c : couplings) m = std::max(m, std::labs(c.value));
  for (long h : fields) m = std::max(m, std::labs(h));
  return m;
}

long ising_energy(const IsingModel& model, std::uint64_t z) {
  auto spin = [z](int i) { return ((z >> i) & 1U) ? -1L : 1L; };
  long e = 0;
  for (const auto& c : model.couplings) e += c.value * spin(c.i) * spin(c.j);
  for (std::size_t i = 0; i < model.fields.size(); ++i) e += model.fields[i] * spin(static_cast<int>(i));
  return e;
}

DegeneracySpectrum enumerate_ising(const IsingModel& model, int ceiling) {
  model.validate();
  if (model.n > ceiling) {
    throw SizeError("brute-force enumeration of " + std::to_string(model.n) +
                    " spins exceeds the ceiling of " + std::to_string(ceiling));
  }
  const int n = model.n;
  std::vector<long> field(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < model.fields.size(); ++i) field[i] = model.fields[i];
  std::vector<std::vector<std::pair<int, long>>> adjacency(static_cast<std::size_t>(n));
  long range = 0;
  for (const auto& c : model.couplings) {
    adjacency[static_cast<std::size_t>(c.i)].emplace_back(c.j, c.value);
    adjacency[static_cast<std::size_t>(c.j)].emplace_back(c.i, c.value);
    range += std::labs(c.value);
  }
  for (long h : field) range += std::labs(h);

  // Gray-code walk: each step flips one spin and updates the energy locally.
  std::vector<long> spins(static_cast<std::size_t>(n), 1);
  long energy = ising_energy(model, 0);
  const std::uint64_t count = std::uint64_t{1} << n;

  const bool dense = range <= (1L << 25);
  std::vector<std::uint64_t> histogram;
  std::unordered_map<long, std::uint64_t> sparse;
  if (dense) histogram.assign(static_cast<std::size_t>(2 * range + 1), 0);
  auto record = [&](long e) {
    if (dense) {
      ++histogram[static_cast<std::size_t>(e + range)];
    } else {
      ++sparse[e];
    }
  };
  record(energy);
  for (std::uint64_t g = 1; g < count; ++g) {
    const int b = std::countr_zero(g);
    long local = field[static_cast<std::size_t>(b)];
    for (const auto& [other, value] : adjacency[static_cast<std::size_t>(b)]) {
      local += value * spins[static_cast<std::size_t>(other)];
    }
    energy -= 2 * spins[static_cast<std::size_t>(b)] * local;
    spins[static_cast<std::size_t>(b)] = -spins[static_cast<std::size_t>(b)];
    record(energy);
  }

  std::vector<Level> levels;
  if (dense) {
    for (std::size_t idx = 0; idx < histogram.size(); ++idx) {
      if (histogram[idx] != 0) {
        levels.push_back({Rational(static_cast<long>(idx) - range), histogram[idx]});
      }
    }
  } else {
    std::map<long, std::uint64_t> ordered(sparse.begin(), sparse.end());
    for (const auto& [e, d] : ordered) levels.push_back({Rational(e), d});
  }
  return DegeneracySpectrum(n, std::move(levels), false);
}

// ---------------------------------------------------------------- normalize

NormalizedSpectrum normalize(const DegeneracySpectrum& spec) {
  const Rational offset = spec.levels().front().energy;
  const Rational scale = spec.levels().back().energy - offset;
  if (sgn(scale) <= 0) throw DegenerateSpectrumError("all energies equal; cannot normalize");
  AffineMap map{offset, scale};
  std::vector<Level> levels;
  levels.reserve(spec.size());
  for (const auto& lv : spec.levels()) levels.push_back({map.forward(lv.energy), lv.degeneracy});
  return {DegeneracySpectrum(spec.qubits(), std::move(levels), true), map};
}

// ---------------------------------------------------------------- spectral parameters

double kappa_prime(double c) { return ((1 + 2 * c) / (1 - 2 * c)) * std::sqrt(1 + (1 - 2 * c) * (1 - 2 * c)); }

SpectralProfile spectral_params(const DegeneracySpectrum& spec, double c) {
  if (!spec.normalized()) throw PreconditionError("spectral parameters need a normalized spectrum");
  const Rational dim(pow2(static_cast<unsigned>(spec.qubits())));
  const Rational& e0 = spec.levels().front().energy;
  Rational a1 = 0, a2 = 0, a3 = 0;
  for (std::size_t k = 1; k < spec.size(); ++k) {
    const Rational gap = spec.level(k).energy - e0;
    const Rational d(to_integer(spec.level(k).degeneracy));
    const Rational t1 = d / gap;
    const Rational t2 = t1 / gap;
    a1 += t1;
    a2 += t2;
    a3 += t2 / gap;
  }
  a1 /= dim;
  a2 /= dim;
  a3 /= dim;

  SpectralProfile out;
  out.a1_exact = a1;
  out.a2_exact = a2;
  out.a1 = to_double(a1);
  out.a2 = to_double(a2);
  out.a3 = to_double(a3);
  out.delta = spec.gaps()[1];
  out.c = c;
  out.ground_degeneracy = static_cast<double>(spec.level(0).degeneracy);
  out.dimension = std::ldexp(1.0, spec.qubits());

  const double ratio = std::sqrt(out.ground_degeneracy / (out.a2 * out.dimension));
  out.s_star = out.a1 / (out.a1 + 1);
  out.delta_s = 2 / ((out.a1 + 1) * (out.a1 + 1)) * std::sqrt(out.ground_degeneracy * out.a2 / out.dimension);
  out.g_min = 2 * out.a1 / (out.a1 + 1) * ratio;
  out.kappa_prime = kappa_prime(c);
  out.condition_value = ratio / out.delta;
  out.condition_ok = out.condition_value < c;
  return out;
}

// ---------------------------------------------------------------- secular equation

namespace {

double residual(const DegeneracySpectrum& spec, double s, std::size_t anchor, double offset) {
  const auto& w = spec.weights();
  double sum = 0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    sum += w[k] / (s * spec.energy_difference(k, anchor) - offset);
  }
  return sum - 1 / (1 - s);
}

// Bisection on the offset coordinate; residual is increasing in the offset.
// Invariant: residual(lo) <= 0 < residual(hi) (endpoints may be poles and are
// never evaluated).
double bisect(const DegeneracySpectrum& spec, double s, std::size_t anchor, double lo, double hi,
              double tolerance) {
  for (int iter = 0; iter < 4096; ++iter) {
    if (hi - lo <= tolerance) break;
    const double mid = lo + (hi - lo) / 2;
    if (!(mid > lo && mid < hi)) break;
    if (residual(spec, s, anchor, mid) > 0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo + (hi - lo) / 2;
}

}  // namespace

std::vector<double> InterpolatedSpectrum::eigenvalues() const {
  std::vector<double> out;
  out.reserve(roots_.size());
  for (const auto& r : roots_) out.push_back(r.value);
  return out;
}

double InterpolatedSpectrum::spacing(const DegeneracySpectrum& spec, std::size_t j, std::size_t k) const {
  const auto& a = roots_.at(j);
  const auto& b = roots_.at(k);
  return s_ * spec.energy_difference(a.anchor, b.anchor) + (a.offset - b.offset);
}

InterpolatedSpectrum secular_eigenvalues(const DegeneracySpectrum& spec, double s, double tolerance) {
  if (!(s >= 0 && s <= 1)) throw DomainError("schedule parameter s = " + std::to_string(s) + " outside [0, 1]");
  if (!spec.normalized()) throw PreconditionError("secular solver needs a normalized spectrum");
  const std::size_t m = spec.size();
  const auto& e = spec.energies();
  std::vector<SecularRoot> roots(m);

  if (s == 0) {
    roots[0] = {-1.0, 0, -1.0};
    for (std::size_t k = 1; k < m; ++k) roots[k] = {0.0, k, 0.0};
    return {s, std::move(roots)};
  }
  if (s == 1) {
    for (std::size_t k = 0; k < m; ++k) roots[k] = {e[k], k, 0.0};
    return {s, std::move(roots)};
  }

  {
    const double guard = 1e-15 * std::max(1.0, std::fabs(s * e[0]));
    double lo = -(1 - s);
    double hi = -guard;
    if (residual(spec, s, 0, lo) > 0 || residual(spec, s, 0, hi) <= 0) {
      throw BracketError("lowest secular root not bracketed by [sE0 - (1-s), sE0 - guard] at s = " +
                         std::to_string(s) + "; ground weight too small for the pole guard");
    }
    const double off = bisect(spec, s, 0, lo, hi, tolerance);
    roots[0] = {s * e[0] + off, 0, off};
  }
  for (std::size_t j = 1; j < m; ++j) {
    const double width = s * spec.energy_difference(j, j - 1);
    if (!(width > 0)) {
      throw BracketError("pole interval " + std::to_string(j) + " collapsed at s = " + std::to_string(s));
    }
    const double half = width / 2;
    SecularRoot r;
    if (residual(spec, s, j - 1, half) > 0) {
      r.anchor = j - 1;
      r.offset = bisect(spec, s, j - 1, 0.0, half, tolerance);
    } else {
      r.anchor = j;
      r.offset = bisect(spec, s, j, -(width - half), 0.0, tolerance);
    }
    r.value = s * e[r.anchor] + r.offset;
    roots[j] = r;
  }
  return {s, std::move(roots)};
}

double true_gap(const DegeneracySpectrum& spec, double s, double tolerance) {
  return secular_eigenvalues(spec, s, tolerance).gap(spec);
}

std::vector<double> symmetric_state_overlap(const DegeneracySpectrum& spec) {
  std::vector<double> out;
  out.reserve(spec.size());
  for (double w : spec.weights()) out.push_back(std::sqrt(w));
  return out;
}

std::vector<double> pole_distances(const DegeneracySpectrum& spec, double s, const SecularRoot& root) {
  std::vector<double> out(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    out[k] = s * spec.energy_difference(k, root.anchor) - root.offset;
  }
  return out;
}

std::vector<double> secular_eigenvector(const DegeneracySpectrum& spec, const InterpolatedSpectrum& roots,
                                        std::size_t j) {
  const std::size_t m = spec.size();
  const double s = roots.s();
  std::vector<double> v(m, 0.0);
  if (s == 1) {
    v.at(j) = 1.0;
    return v;
  }
  if (s == 0) {
    if (j != 0) throw DomainError("excited eigenvectors are degenerate at s = 0");
    return symmetric_state_overlap(spec);
  }
  const auto dist = pole_distances(spec, s, roots.roots().at(j));
  const auto& w = spec.weights();
  double norm2 = 0;
  for (std::size_t k = 0; k < m; ++k) {
    v[k] = std::sqrt(w[k]) / dist[k];
    norm2 += v[k] * v[k];
  }
  const double inv = 1 / std::sqrt(norm2);
  for (double& x : v) x *= inv;
  return v;
}

}  // namespace aqolab
