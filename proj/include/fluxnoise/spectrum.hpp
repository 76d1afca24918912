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

#ifndef FLUXNOISE_SPECTRUM_HPP
#define FLUXNOISE_SPECTRUM_HPP

#include <string_view>

namespace fluxnoise {

enum class SpectrumKind { GaussianCorrelated, White };

std::string_view to_string(SpectrumKind kind);
SpectrumKind parse_spectrum_kind(std::string_view text);

/// Isotropic spatial spectrum of the out-of-plane surface magnetization.
///
/// GaussianCorrelated: S(k) = amplitude * xi^2 * exp(-k^2 xi^2).
/// White:              S(k) = amplitude (independent-spin limit).
class NoiseSpectrum {
 public:
  static NoiseSpectrum gaussian(double correlation_length,
                                double amplitude = 1.0);
  static NoiseSpectrum white(double amplitude);

  SpectrumKind kind() const { return kind_; }
  /// Zero for White.
  double correlation_length() const { return correlation_length_; }
  double amplitude() const { return amplitude_; }

  NoiseSpectrum with_amplitude(double amplitude) const;
  NoiseSpectrum with_correlation_length(double correlation_length) const;

 private:
  NoiseSpectrum(SpectrumKind kind, double correlation_length,
                double amplitude);

  SpectrumKind kind_;
  double correlation_length_;
  double amplitude_;
};

double spectrum_at(const NoiseSpectrum& spec, double k);

/// Inverse 2D Fourier transform of the spectrum at separation r. The white
/// spectrum is a delta function: zero for r > 0, UnsupportedError at r = 0.
double correlation_real(const NoiseSpectrum& spec, double r);

}  // namespace fluxnoise

#endif  // FLUXNOISE_SPECTRUM_HPP
