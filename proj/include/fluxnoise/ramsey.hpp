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

#ifndef FLUXNOISE_RAMSEY_HPP
#define FLUXNOISE_RAMSEY_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fluxnoise/transmon.hpp"

namespace fluxnoise {

/// Quasi-static Gaussian flux noise plus the two exponential channels.
struct DephasingParams {
  Flux sigma_phi = Flux::quanta(0.0);  // rms flux noise
  double gamma0 = 0.0;                 // bias-independent dephasing, 1/s
  double gamma1 = 0.0;                 // energy relaxation, 1/s

  void validate() const;
};

/// |<exp(i (D1 dPhi + D2 dPhi^2 / 2) t)>| for dPhi ~ N(0, sigma^2):
///   [1 + (D2 s^2 t)^2]^(-1/4) exp(-D1^2 s^2 t^2 / (2 (1 + (D2 s^2 t)^2))).
/// d1, d2 and sigma must share one flux unit.
double coherence_factor(double d1, double d2, double sigma, double t);
double coherence_factor(const FluxSensitivity& s, Flux sigma, double t);

/// E(t) = exp(-(Gamma1 / 2 + Gamma0) t) |W_flux(t)|.
double total_envelope(const FluxSensitivity& s, const DephasingParams& params,
                      double t);

/// Relative bracket width at which the T2* bisection stops.
inline constexpr double kT2StarRelTol = 1e-12;

/// Solves E(T2*) = 1/e. Empty when no decay channel is active and the
/// envelope never falls to 1/e.
std::optional<double> t2_star(const FluxSensitivity& s,
                              const DephasingParams& params);

/// Energy-relaxation rate as a function of bias: a constant, a table
/// interpolated linearly in Phi (clamped at the ends), or one value per
/// curve point.
class Gamma1Source {
 public:
  static Gamma1Source constant(double rate);
  /// (phi / Phi0, rate) pairs; sorted by phi on construction.
  static Gamma1Source table(std::vector<std::pair<double, double>> points);
  static Gamma1Source per_point(std::vector<double> rates);

  /// Rate at curve point `index` located at `phi_quanta`.
  double rate(std::size_t index, double phi_quanta) const;

  enum class Kind { Constant, Table, PerPoint };
  Kind kind() const { return kind_; }
  const std::vector<std::pair<double, double>>& table_points() const {
    return table_;
  }
  const std::vector<double>& per_point_rates() const { return rates_; }

 private:
  Kind kind_ = Kind::Constant;
  double constant_ = 0.0;
  std::vector<std::pair<double, double>> table_;
  std::vector<double> rates_;
};

struct CurvePoint {
  enum class Status { Finite, Unbounded, Failed };
  double phi_quanta = 0.0;
  Status status = Status::Failed;
  double t2_star = 0.0;  // s; meaningful only when Finite
  std::string error;
};

/// T2*(Phi) along `phi_grid` (Phi0 units). `params.gamma1` is ignored in
/// favour of `gamma1`. Per-point failures are recorded, not thrown.
std::vector<CurvePoint> t2_star_curve(const TransmonDispersion& disp,
                                      const DephasingParams& params,
                                      const Gamma1Source& gamma1,
                                      std::span<const double> phi_grid,
                                      unsigned threads = 1);

}  // namespace fluxnoise

#endif  // FLUXNOISE_RAMSEY_HPP
