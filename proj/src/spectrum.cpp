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

#include "fluxnoise/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "fluxnoise/errors.hpp"

namespace fluxnoise {

std::string_view to_string(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::GaussianCorrelated:
      return "gaussian";
    case SpectrumKind::White:
      return "white";
  }
  return "?";
}

SpectrumKind parse_spectrum_kind(std::string_view text) {
  if (text == "gaussian") return SpectrumKind::GaussianCorrelated;
  if (text == "white") return SpectrumKind::White;
  throw ParameterDomainError("unknown spectrum kind '" + std::string(text) +
                             "' (expected gaussian or white)");
}

NoiseSpectrum::NoiseSpectrum(SpectrumKind kind, double correlation_length,
                             double amplitude)
    : kind_(kind),
      correlation_length_(correlation_length),
      amplitude_(amplitude) {
  if (kind_ == SpectrumKind::GaussianCorrelated &&
      (!(correlation_length_ > 0.0) || !std::isfinite(correlation_length_))) {
    std::ostringstream os;
    os << "correlation_length = " << correlation_length_
       << " violates xi > 0";
    throw ParameterDomainError(os.str());
  }
  if (!(amplitude_ >= 0.0) || !std::isfinite(amplitude_)) {
    std::ostringstream os;
    os << "amplitude = " << amplitude_ << " violates amplitude >= 0";
    throw ParameterDomainError(os.str());
  }
}

NoiseSpectrum NoiseSpectrum::gaussian(double correlation_length,
                                      double amplitude) {
  return {SpectrumKind::GaussianCorrelated, correlation_length, amplitude};
}

NoiseSpectrum NoiseSpectrum::white(double amplitude) {
  return {SpectrumKind::White, 0.0, amplitude};
}

NoiseSpectrum NoiseSpectrum::with_amplitude(double amplitude) const {
  return {kind_, correlation_length_, amplitude};
}

NoiseSpectrum NoiseSpectrum::with_correlation_length(
    double correlation_length) const {
  return {kind_, correlation_length, amplitude_};
}

double spectrum_at(const NoiseSpectrum& spec, double k) {
  if (spec.kind() == SpectrumKind::White) return spec.amplitude();
  const double xi = spec.correlation_length();
  const double kx = k * xi;
  return spec.amplitude() * xi * xi * std::exp(-kx * kx);
}

double correlation_real(const NoiseSpectrum& spec, double r) {
  if (spec.kind() == SpectrumKind::White) {
    if (r > 0.0) return 0.0;
    throw UnsupportedError(
        "white spectrum has a delta correlation with no value at r = 0");
  }
  // 2D transform pair: xi^2 exp(-k^2 xi^2) <-> exp(-r^2 / (4 xi^2)) / (4 pi).
  const double xi = spec.correlation_length();
  return spec.amplitude() * std::exp(-r * r / (4.0 * xi * xi)) /
         (4.0 * std::numbers::pi);
}

}  // namespace fluxnoise
