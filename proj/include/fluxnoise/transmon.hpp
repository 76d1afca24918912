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

#ifndef FLUXNOISE_TRANSMON_HPP
#define FLUXNOISE_TRANSMON_HPP

#include <string_view>

namespace fluxnoise {

/// Superconducting flux quantum h / 2e, in Wb.
inline constexpr double kFluxQuantum = 2.067833848e-15;

enum class FluxUnit { Weber, FluxQuantum };

std::string_view to_string(FluxUnit unit);

/// Magnetic flux with its unit fixed at construction.
class Flux {
 public:
  constexpr Flux() = default;
  static constexpr Flux webers(double value) { return {value, FluxUnit::Weber}; }
  static constexpr Flux quanta(double value) {
    return {value, FluxUnit::FluxQuantum};
  }

  constexpr FluxUnit native_unit() const { return unit_; }
  constexpr double in_webers() const {
    return unit_ == FluxUnit::Weber ? value_ : value_ * kFluxQuantum;
  }
  constexpr double in_quanta() const {
    return unit_ == FluxUnit::FluxQuantum ? value_ : value_ / kFluxQuantum;
  }
  constexpr double in(FluxUnit unit) const {
    return unit == FluxUnit::Weber ? in_webers() : in_quanta();
  }

 private:
  constexpr Flux(double value, FluxUnit unit) : value_(value), unit_(unit) {}
  double value_ = 0.0;
  FluxUnit unit_ = FluxUnit::FluxQuantum;
};

/// Symmetric-SQUID transmon in the asymptotic transmon regime:
///   omega(Phi) = 2 pi (sqrt(8 E_J |cos(pi Phi / Phi0)| E_C) - E_C) / h.
struct TransmonDispersion {
  double ej_over_h = 20e9;   // Hz, total Josephson energy
  double ec_over_h = 0.25e9; // Hz, charging energy

  /// Throws ParameterDomainError unless E_J / E_C >= 20 and both positive.
  void validate() const;
};

/// First and second flux derivatives of omega, in rad/s per unit and per
/// unit^2 of `unit`.
struct FluxSensitivity {
  double d1 = 0.0;
  double d2 = 0.0;
  FluxUnit unit = FluxUnit::Weber;

  FluxSensitivity in(FluxUnit target) const;
};

/// Angular transition frequency (rad/s). Throws ParameterDomainError within
/// |cos(pi Phi / Phi0)| <= 1e-6 of the half-quantum degeneracy.
double omega(const TransmonDispersion& disp, Flux bias);

/// f01 = omega / 2 pi, in Hz.
double transition_frequency(const TransmonDispersion& disp, Flux bias);

FluxSensitivity d1_d2(const TransmonDispersion& disp, Flux bias,
                      FluxUnit unit = FluxUnit::Weber);

}  // namespace fluxnoise

#endif  // FLUXNOISE_TRANSMON_HPP
