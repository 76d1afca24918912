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

#ifndef FLUXNOISE_CONFIG_HPP
#define FLUXNOISE_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fluxnoise/fit.hpp"
#include "fluxnoise/geometry.hpp"
#include "fluxnoise/ramsey.hpp"
#include "fluxnoise/spectrum.hpp"
#include "fluxnoise/transmon.hpp"

namespace fluxnoise {

/// phi / Phi0 = slope * raw + offset.
struct BiasCalibration {
  double slope = 1.0;
  double offset = 0.0;
  double apply(double raw) const { return slope * raw + offset; }
  /// Throws ConfigError unless slope is finite and nonzero.
  void validate() const;
};

struct CorrelationGrid {
  double min = 1e-8;  // m
  double max = 1e-3;  // m
  std::size_t points = 61;
};

struct BiasGrid {
  double min = 0.0;   // Phi0
  double max = 0.45;  // Phi0
  std::size_t points = 91;
  std::vector<double> values() const;
};

struct RamseyConfig {
  double phi_bias = 0.1;  // Phi0
  double t_max = 20e-6;   // s
  std::size_t points = 201;
};

struct FitConfig {
  double sigma_min = 1e-6;  // Phi0, log-spaced grid
  double sigma_max = 1e-3;
  std::size_t sigma_points = 61;
  double gamma0_min = 0.0;  // 1/s, linear grid
  double gamma0_max = 2e5;
  std::size_t gamma0_points = 41;
  FitOptions options;

  std::vector<double> sigma_grid() const;
  std::vector<double> gamma0_grid() const;
};

struct McConfig {
  std::optional<double> extent;             // m; smallest valid when absent
  std::optional<std::size_t> points_per_side;  // smallest valid when absent
  std::size_t realizations = 4000;
  std::uint64_t seed = 1;
  int supersample = 4;
  bool write_samples = false;
};

struct OutputConfig {
  std::string directory = ".";
  std::string prefix;
};

/// Fully resolved and validated run description.
struct RunConfig {
  LoopGeometry geometry = LoopGeometry::gradiometric_pair(5e-6, 1e-6, 11e-6);
  NoiseSpectrum spectrum = NoiseSpectrum::gaussian(1e-6);
  CorrelationGrid xi_grid;
  TransmonDispersion transmon;
  DephasingParams dephasing;
  Gamma1Source gamma1 = Gamma1Source::constant(1.0 / 30e-6);
  BiasGrid bias;
  RamseyConfig ramsey;
  FitConfig fit;
  McConfig mc;
  OutputConfig output;
  std::optional<BiasCalibration> calibration;
  unsigned threads = 1;

  /// Dotted keys of every field filled from a default, with the value used.
  std::vector<std::string> defaults_applied;
  /// Canonical JSON of the resolved values (no paths, no defaults list).
  std::string canonical;
  std::uint64_t hash = 0;
};

/// YAML text to RunConfig. Unknown keys, malformed values and invariant
/// violations throw ConfigError naming the key; YAML syntax errors carry
/// line and column. `source` labels messages.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");
RunConfig load_config(const std::string& path);

/// Configuration with every field defaulted (as an empty document).
RunConfig default_config();

std::string hash_hex(std::uint64_t hash);

}  // namespace fluxnoise

#endif  // FLUXNOISE_CONFIG_HPP
