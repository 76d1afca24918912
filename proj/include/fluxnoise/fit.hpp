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

#ifndef FLUXNOISE_FIT_HPP
#define FLUXNOISE_FIT_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fluxnoise/ramsey.hpp"
#include "fluxnoise/transmon.hpp"

namespace fluxnoise {

/// One Ramsey measurement. Times are kept in microseconds as read from disk.
struct T2StarMeasurement {
  double phi_bias = 0.0;  // Phi0
  double t2_star_us = 0.0;
  std::optional<double> t1_us;
  double weight = 1.0;

  double t2_star_s() const { return t2_star_us * 1e-6; }
};

struct T2StarDataset {
  std::vector<T2StarMeasurement> points;
  std::string device_label;

  /// Throws DataError (citing the 1-based point) unless there are at least
  /// `min_points` points, all times and weights are positive and every bias
  /// lies in the dispersion domain.
  void validate(std::size_t min_points) const;
};

/// Gamma1 per point from the t1 column where present, `fallback_rate`
/// elsewhere; a constant source when no point carries t1.
Gamma1Source gamma1_source_for(const T2StarDataset& data, double fallback_rate);

struct ResidualValue {
  double value = 0.0;           // s^2
  std::size_t capped_points = 0;  // model T2* unbounded at these points
};

/// sum_j w_j [T2*_exp(Phi_j) - T2*_model(Phi_j)]^2. An unbounded model T2*
/// contributes (10 max_j T2*_exp)^2 and is counted in `capped_points`.
ResidualValue residual(const T2StarDataset& data, const TransmonDispersion& disp,
                       double sigma_quanta, double gamma0,
                       const Gamma1Source& gamma1);

struct LandscapeCell {
  double sigma_phi = 0.0;  // Phi0
  double gamma0 = 0.0;     // 1/s
  double err = 0.0;        // s^2
};

struct BoundaryFlags {
  bool sigma_low = false;
  bool sigma_high = false;
  bool gamma0_low = false;
  bool gamma0_high = false;

  bool any() const { return sigma_low || sigma_high || gamma0_low || gamma0_high; }
};

struct FitOutcome {
  double sigma_phi_hat = 0.0;         // Phi0
  std::optional<double> gamma0_hat;   // absent for the one-parameter fit
  double err_min = 0.0;
  /// Row-major in (sigma, gamma0): cell (i, j) at i * gamma0_points + j.
  std::vector<LandscapeCell> landscape;
  std::size_t sigma_points = 0;
  std::size_t gamma0_points = 0;
  std::size_t best_cell = 0;
  double best_cell_err = 0.0;
  bool refined = false;
  int refinement_iterations = 0;
  BoundaryFlags boundary;
  std::size_t capped_points = 0;
};

struct FitOptions {
  /// Line searches stop when the bracket is this small (log sigma, and
  /// gamma0 relative to the gamma0 grid step).
  double tolerance = 1e-10;
  int max_iterations = 50;
  unsigned threads = 1;
};

std::vector<double> default_sigma_grid();   // 61 log-spaced, 1e-6..1e-3 Phi0
std::vector<double> default_gamma0_grid();  // 41 linear, 0..2e5 1/s

/// sigma-only fit (gamma0 = 0): grid search, then golden-section refinement
/// in log sigma between the neighbours of the best cell.
FitOutcome fit_sigma(const T2StarDataset& data, const TransmonDispersion& disp,
                     const Gamma1Source& gamma1,
                     std::span<const double> sigma_grid,
                     const FitOptions& options = {});

/// Exhaustive (sigma, gamma0) grid, then coordinate descent from the best
/// cell. Ties on the grid go to the smallest sigma, then smallest gamma0.
FitOutcome fit_sigma_gamma0(const T2StarDataset& data,
                            const TransmonDispersion& disp,
                            const Gamma1Source& gamma1,
                            std::span<const double> sigma_grid,
                            std::span<const double> gamma0_grid,
                            const FitOptions& options = {});

}  // namespace fluxnoise

#endif  // FLUXNOISE_FIT_HPP
