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

#ifndef FLUXNOISE_VARIANCE_HPP
#define FLUXNOISE_VARIANCE_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fluxnoise/geometry.hpp"
#include "fluxnoise/spectrum.hpp"

namespace fluxnoise {

enum class Regime { ShortWavelength, Crossover, LongWavelength };

std::string_view to_string(Regime regime);

/// Regime from xi / d (d = ring diameter 2R for a single ring):
/// short below 0.1, long above 10.
Regime classify_regime(const LoopGeometry& geometry,
                       const NoiseSpectrum& spec);

struct VarianceResult {
  double value = 0.0;                     // <Phi^2>, Wb^2
  double estimated_quadrature_error = 0.0;
  Regime regime = Regime::Crossover;
};

struct QuadratureOptions {
  double rel_tol = 1e-6;
  /// Integrand is truncated where its envelope drops below this fraction of
  /// the sampled peak.
  double truncation = 1e-12;
  std::size_t max_panels = 4'000'000;
};

/// <Phi^2> = (2 pi)^-1 \int_0^inf <|K(k)|^2>_theta S(k) k dk.
VarianceResult flux_variance(const LoopGeometry& geometry,
                             const NoiseSpectrum& spec,
                             const QuadratureOptions& options = {});

struct SuppressionResult {
  double s_factor = 0.0;  // <Phi_X^2> / <Phi_8^2>
  VarianceResult single;
  VarianceResult gradiometric;
};

/// Suppression of the pair relative to a single ring with the same R, w and
/// amplitude. `pair` must be a GradiometricPair with d > 0.
SuppressionResult suppression_factor(const LoopGeometry& pair,
                                     const NoiseSpectrum& spec,
                                     const QuadratureOptions& options = {});

/// <f(k)>_xi: average of f over the 2D wavevector plane weighted by
/// |K_ring(k)|^2 S(k). Evaluated as a radial adaptive integral with a
/// periodic trapezoid rule in angle (at least `min_angular_points` nodes,
/// increased with k * `angular_scale`).
double weighted_average(const LoopGeometry& geometry,
                        const NoiseSpectrum& spec,
                        const std::function<double(Vec2)>& f,
                        double angular_scale, int min_angular_points = 64,
                        const QuadratureOptions& options = {});

struct SweepPoint {
  double correlation_length = 0.0;
  std::optional<VarianceResult> result;
  std::string error;  // set when result is empty
};

/// flux_variance along a strictly increasing grid of correlation lengths
/// (Gaussian spectrum). A failing point records its error and the sweep
/// continues. Points may be evaluated on up to `threads` threads; output is
/// in grid order regardless.
std::vector<SweepPoint> variance_sweep(const LoopGeometry& geometry,
                                       std::span<const double> xi_grid,
                                       double amplitude,
                                       const QuadratureOptions& options = {},
                                       unsigned threads = 1);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// n points log-spaced over [lo, hi], endpoints exact.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

}  // namespace fluxnoise

#endif  // FLUXNOISE_VARIANCE_HPP
