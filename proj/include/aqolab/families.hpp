#pragma once

#include <cstdint>

#include "aqolab/spectrum.hpp"

namespace aqolab {

// {(0, d0), (1, N - d0)}
DegeneracySpectrum grover_spectrum(int n, std::uint64_t ground_degeneracy = 1);

// Equally spaced energies k/(M-1). The ground level carries the requested
// degeneracy; the remaining 2^n - d0 states are spread over the excited levels
// following a Gaussian profile of the given width (in level units) centred on
// `centre`, with every level kept occupied.
DegeneracySpectrum gaussian_spectrum(int n, std::size_t levels, double width, double centre,
                                     std::uint64_t ground_degeneracy = 1);

}  // namespace aqolab
