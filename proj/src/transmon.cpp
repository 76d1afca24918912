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

#include "fluxnoise/transmon.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fluxnoise/errors.hpp"

namespace fluxnoise {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegeneracyGuard = 1e-6;

// Bias folded into [-1/2, 1/2] Phi0; std::remainder is exact.
double reduced(Flux bias) { return std::remainder(bias.in_quanta(), 1.0); }

double checked_cos(Flux bias) {
  const double c = std::cos(kPi * reduced(bias));
  if (!(std::abs(c) > kDegeneracyGuard)) {
    std::ostringstream os;
    os << "bias " << bias.in_quanta()
       << " Phi0 is too close to the half-quantum degeneracy";
    throw ParameterDomainError(os.str());
  }
  return c;
}

}  // namespace

std::string_view to_string(FluxUnit unit) {
  return unit == FluxUnit::Weber ? "Wb" : "Phi0";
}

void TransmonDispersion::validate() const {
  if (!(ej_over_h > 0.0) || !(ec_over_h > 0.0) || !std::isfinite(ej_over_h) ||
      !std::isfinite(ec_over_h))
    throw ParameterDomainError("transmon energies must be positive");
  if (!(ej_over_h / ec_over_h >= 20.0)) {
    std::ostringstream os;
    os << "E_J/E_C = " << ej_over_h / ec_over_h
       << " violates the transmon regime E_J/E_C >= 20";
    throw ParameterDomainError(os.str());
  }
}

FluxSensitivity FluxSensitivity::in(FluxUnit target) const {
  if (target == unit) return *this;
  // d/dPhi[Wb] = (1/Phi0) d/dPhi[Phi0].
  const double scale =
      target == FluxUnit::Weber ? 1.0 / kFluxQuantum : kFluxQuantum;
  return {d1 * scale, d2 * scale * scale, target};
}

double omega(const TransmonDispersion& disp, Flux bias) {
  disp.validate();
  const double c = checked_cos(bias);
  return 2.0 * kPi *
         (std::sqrt(8.0 * disp.ej_over_h * std::abs(c) * disp.ec_over_h) -
          disp.ec_over_h);
}

double transition_frequency(const TransmonDispersion& disp, Flux bias) {
  return omega(disp, bias) / (2.0 * kPi);
}

FluxSensitivity d1_d2(const TransmonDispersion& disp, Flux bias,
                      FluxUnit unit) {
  disp.validate();
  const double c = checked_cos(bias);
  // Work in Phi0 units: g = |cos(pi x)|, omega = 2 pi (F sqrt(g) - E_C).
  const double a = kPi;
  const double sign = c > 0.0 ? 1.0 : -1.0;
  const double g = std::abs(c);
  const double dg = -sign * a * std::sin(a * reduced(bias));
  const double d2g = -a * a * g;
  const double scale = 2.0 * kPi * std::sqrt(8.0 * disp.ej_over_h * disp.ec_over_h);
  const double root = std::sqrt(g);
  FluxSensitivity s;
  s.unit = FluxUnit::FluxQuantum;
  s.d1 = scale * dg / (2.0 * root);
  s.d2 = scale * (-0.25 * dg * dg / (g * root) + 0.5 * d2g / root);
  return s.in(unit);
}

}  // namespace fluxnoise
