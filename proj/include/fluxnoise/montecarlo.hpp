// Copyright 2026 The fluxnoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLUXNOISE_MONTECARLO_HPP
#define FLUXNOISE_MONTECARLO_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fluxnoise/geometry.hpp"
#include "fluxnoise/spectrum.hpp"

namespace fluxnoise {

/// Brute-force check of the momentum-space variance integral: Gaussian
/// magnetization fields are synthesized spectrally on a periodic square
/// grid and the loop flux is summed cell by cell.
///
/// Grid convention: n x n cells of side h = L / n, cell centers at
/// -L/2 + (i + 1/2) h on both axes, values stored row-major (y outer).
struct FieldGrid {
  double extent = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;

  double spacing() const { return extent / static_cast<double>(n); }
  double coordinate(std::size_t i) const;
  double at(std::size_t ix, std::size_t iy) const { return values[iy * n + ix]; }
};

/// Seed of realization `index` under base seed `base` (counter-based, so a
/// realization does not depend on which others were drawn before it).
std::uint64_t realization_seed(std::uint64_t base, std::uint64_t index);

/// Modes with |q| xi above this are left empty; S there is below e^-42 S(0).
inline constexpr double kModeCutoff = 6.5;

/// One real field with E|m_q|^2 = L^2 S(q) per discrete mode (Hermitian
/// symmetric), transformed back to real space. Deterministic in all inputs.
/// White spectra throw UnsupportedError.
FieldGrid synthesize_field(const NoiseSpectrum& spec, double extent,
                           std::size_t n, std::uint64_t seed);

/// Cell weights of K(r) on the grid, each averaged over `supersample`^2
/// sub-points (1 = cell-center sampling).
std::vector<double> rasterize_kernel(const LoopGeometry& geometry,
                                     double extent, std::size_t n,
                                     int supersample);

/// Phi = sum_i K(r_i) m(r_i) dA over all cells.
double flux_from_field(const LoopGeometry& geometry, const FieldGrid& field,
                       int supersample);

struct GridSpec {
  double extent = 0.0;
  std::size_t n = 0;
};

/// Throws ConfigError naming the violated bound unless n is a power of two,
/// L >= 8 max(2R + d, xi) and L / n <= min(w, xi) / 4.
void validate_grid(const LoopGeometry& geometry, const NoiseSpectrum& spec,
                   double extent, std::size_t n);

/// Smallest extent and power-of-two n satisfying validate_grid.
GridSpec minimal_grid(const LoopGeometry& geometry, const NoiseSpectrum& spec);

struct McOptions {
  std::size_t realizations = 4000;
  std::uint64_t seed = 1;
  int supersample = 4;
  bool keep_samples = true;
  unsigned threads = 1;
};

struct McEstimate {
  double mean_sq = 0.0;    // mean of Phi^2, Wb^2
  double std_error = 0.0;  // sample std of Phi^2 / sqrt(N)
  std::size_t n_realizations = 0;
  std::vector<double> samples;  // per-realization Phi, if requested
};

/// Monte Carlo <Phi^2>. Realization r uses the field
/// synthesize_field(spec, L, n, realization_seed(seed, r)); its flux is
/// applied in mode space through the discrete Parseval identity, which gives
/// the same number as flux_from_field on that field without materializing
/// it.
McEstimate mc_flux_variance(const LoopGeometry& geometry,
                            const NoiseSpectrum& spec, double extent,
                            std::size_t n, const McOptions& options);

/// As above for several geometries sharing every field realization.
std::vector<McEstimate> mc_flux_variance(std::span<const LoopGeometry> geometries,
                                         const NoiseSpectrum& spec,
                                         double extent, std::size_t n,
                                         const McOptions& options);

}  // namespace fluxnoise

#endif  // FLUXNOISE_MONTECARLO_HPP
