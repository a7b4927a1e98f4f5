#include "aqolab/families.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aqolab/errors.hpp"

namespace aqolab {

DegeneracySpectrum grover_spectrum(int n, std::uint64_t ground_degeneracy) {
  if (n < 1 || n > DegeneracySpectrum::max_qubits) throw SizeError("Grover family needs 1 <= n <= 62");
  const std::uint64_t dim = std::uint64_t{1} << n;
  if (ground_degeneracy == 0 || ground_degeneracy >= dim) {
    throw PreconditionError("ground degeneracy must lie in [1, 2^n)");
  }
  return DegeneracySpectrum(n, {{Rational(0), ground_degeneracy}, {Rational(1), dim - ground_degeneracy}}, true);
}

DegeneracySpectrum gaussian_spectrum(int n, std::size_t levels, double width, double centre,
                                     std::uint64_t ground_degeneracy) {
  if (n < 1 || n > DegeneracySpectrum::max_qubits) throw SizeError("Gaussian family needs 1 <= n <= 62");
  if (levels < 2) throw DegenerateSpectrumError("Gaussian family needs at least two levels");
  if (!(width > 0)) throw PreconditionError("Gaussian width must be positive");
  const std::uint64_t dim = std::uint64_t{1} << n;
  const std::uint64_t excited_levels = levels - 1;
  if (ground_degeneracy == 0 || ground_degeneracy + excited_levels > dim) {
    throw PreconditionError("not enough states to occupy every level");
  }
  const std::uint64_t pool = dim - ground_degeneracy - excited_levels;

  std::vector<double> profile(excited_levels);
  for (std::size_t k = 1; k < levels; ++k) {
    const double x = (static_cast<double>(k) - centre) / width;
    profile[k - 1] = std::exp(-0.5 * x * x);
  }
  const double total = std::accumulate(profile.begin(), profile.end(), 0.0);

  // One state per level up front, the pool distributed by largest remainder.
  std::vector<std::uint64_t> share(excited_levels);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::uint64_t assigned = 0;
  for (std::size_t k = 0; k < excited_levels; ++k) {
    const double exact = static_cast<double>(pool) * profile[k] / total;
    share[k] = static_cast<std::uint64_t>(std::floor(exact));
    assigned += share[k];
    remainders.emplace_back(exact - std::floor(exact), k);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < pool; ++i, ++assigned) ++share[remainders[i % excited_levels].second];

  std::vector<Level> out;
  out.push_back({Rational(0), ground_degeneracy});
  const auto denom = static_cast<long>(levels - 1);
  for (std::size_t k = 1; k < levels; ++k) {
    Rational e(static_cast<long>(k), denom);
    e.canonicalize();
    out.push_back({e, share[k - 1] + 1});
  }
  return DegeneracySpectrum(n, std::move(out), true);
}

}  // namespace aqolab
