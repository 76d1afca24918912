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

#include "fluxnoise/variance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fluxnoise/errors.hpp"
#include "fluxnoise/parallel.hpp"
#include "fluxnoise/quadrature.hpp"

namespace fluxnoise {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Upper cutoff (in k w) of the white-noise integral; the remainder is added
// from the large-k asymptote of the ring filter.
constexpr double kWhiteCutoff = 4000.0;

// Envelope bound on the angular-averaged filter, used only for truncation.
double filter_envelope(const LoopGeometry& g, double k) {
  const double amp = g.coupling_amplitude();
  const double at_zero = amp * g.annulus_area();
  double ring = at_zero;
  if (k > 0.0) {
    const double tail = amp * kTwoPi *
                        (std::sqrt(g.outer_radius()) + std::sqrt(g.inner_radius())) /
                        std::pow(k, 1.5);
    ring = std::min(ring, tail);
  }
  const double angular = g.kind() == LoopKind::SingleRing ? 1.0 : 4.0;
  return angular * ring * ring;
}

// Length scale setting the panel width: the fastest oscillation in the
// integrand is cos(k * max(2 R2, d)).
double panel_width(const LoopGeometry& g, const NoiseSpectrum& spec) {
  double width = kPi / (2.0 * g.outer_radius());
  if (g.kind() == LoopKind::GradiometricPair && g.separation() > 0.0)
    width = std::min(width, kPi / (2.0 * g.separation()));
  if (spec.kind() == SpectrumKind::GaussianCorrelated)
    width = std::min(width, 1.0 / spec.correlation_length());
  return width;
}

double radial_integrand(const LoopGeometry& g, const NoiseSpectrum& spec,
                        double k) {
  return angular_average_filter(g, k) * spectrum_at(spec, k) * k / kTwoPi;
}

struct RadialDomain {
  double k_max = 0.0;
  double peak = 0.0;
};

// Truncation point where the integrand envelope has dropped below
// `truncation` times the sampled peak.
RadialDomain gaussian_domain(const LoopGeometry& g, const NoiseSpectrum& spec,
                             double truncation) {
  const double xi = spec.correlation_length();
  const double lo = std::min(1e-3 / g.outer_radius(), 1e-3 / xi);
  const double hi = 7.0 / xi;
  RadialDomain domain;
  double arg_peak = lo;
  const int samples = 600;
  for (int i = 0; i <= samples; ++i) {
    const double k = lo * std::pow(hi / lo, double(i) / samples);
    const double v = radial_integrand(g, spec, k);
    if (v > domain.peak) {
      domain.peak = v;
      arg_peak = k;
    }
  }
  if (domain.peak <= 0.0) return domain;
  double k = arg_peak;
  while (filter_envelope(g, k) * spectrum_at(spec, k) * k / kTwoPi >
         truncation * domain.peak) {
    k *= 1.02;
  }
  domain.k_max = k;
  return domain;
}

std::vector<double> uniform_breakpoints(double k_max, double width) {
  const auto panels =
      static_cast<std::size_t>(std::max(1.0, std::ceil(k_max / width)));
  std::vector<double> b(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i)
    b[i] = k_max * double(i) / double(panels);
  return b;
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::ShortWavelength:
      return "short_wavelength";
    case Regime::Crossover:
      return "crossover";
    case Regime::LongWavelength:
      return "long_wavelength";
  }
  return "?";
}

Regime classify_regime(const LoopGeometry& g, const NoiseSpectrum& spec) {
  if (spec.kind() == SpectrumKind::White) return Regime::ShortWavelength;
  const double scale = g.kind() == LoopKind::GradiometricPair &&
                               g.separation() > 0.0
                           ? g.separation()
                           : 2.0 * g.ring_radius();
  const double ratio = spec.correlation_length() / scale;
  if (ratio < 0.1) return Regime::ShortWavelength;
  if (ratio > 10.0) return Regime::LongWavelength;
  return Regime::Crossover;
}

VarianceResult flux_variance(const LoopGeometry& g, const NoiseSpectrum& spec,
                             const QuadratureOptions& options) {
  VarianceResult result;
  result.regime = classify_regime(g, spec);
  const bool cancels = g.kind() == LoopKind::GradiometricPair &&
                       g.separation() == 0.0;
  if (spec.amplitude() == 0.0 || cancels) return result;

  auto integrand = [&](double k) { return radial_integrand(g, spec, k); };

  double k_max = 0.0;
  double tail = 0.0;
  double tail_error = 0.0;
  double rel_tol = options.rel_tol;
  if (spec.kind() == SpectrumKind::GaussianCorrelated) {
    const RadialDomain domain =
        gaussian_domain(g, spec, options.truncation);
    if (domain.peak <= 0.0) return result;
    k_max = domain.k_max;
  } else {
    // Mean large-k filter: |K_ring|^2 -> 8 pi R amp^2 / k^3 (times 2 for the
    // pair), so the remainder of (2 pi)^-1 \int S |K|^2 k dk is 4 R S0 / K.
    // The slowest oscillating remainder term decays as 1 / (w K^2).
    const double amp2 = g.coupling_amplitude() * g.coupling_amplitude();
    const double pair_factor = g.kind() == LoopKind::SingleRing ? 1.0 : 2.0;
    k_max = kWhiteCutoff / g.annulus_width();
    tail = pair_factor * 4.0 * g.ring_radius() * amp2 * spec.amplitude() / k_max;
    tail_error = pair_factor * 4.0 *
                 std::sqrt(g.inner_radius() * g.outer_radius()) * amp2 *
                 spec.amplitude() / (g.annulus_width() * k_max * k_max);
    rel_tol *= 0.5;
  }

  const std::vector<double> breakpoints =
      uniform_breakpoints(k_max, panel_width(g, spec));
  const QuadratureResult quad =
      integrate_panels(integrand, breakpoints, rel_tol, 0.0,
                       std::max(options.max_panels, 2 * breakpoints.size()));
  result.value = quad.value + tail;
  result.estimated_quadrature_error = quad.error + tail_error;
  if (!quad.converged) {
    std::ostringstream os;
    os << "flux variance quadrature did not converge after " << quad.panels
       << " panels (estimate " << result.value << " +/- "
       << result.estimated_quadrature_error << ")";
    throw ConvergenceError(os.str(), result.value,
                           result.estimated_quadrature_error);
  }
  return result;
}

SuppressionResult suppression_factor(const LoopGeometry& pair,
                                     const NoiseSpectrum& spec,
                                     const QuadratureOptions& options) {
  if (pair.kind() != LoopKind::GradiometricPair || !(pair.separation() > 0.0))
    throw ParameterDomainError(
        "suppression factor needs a gradiometric pair with separation > 0");
  SuppressionResult out;
  out.single = flux_variance(pair.single_ring_equivalent(), spec, options);
  out.gradiometric = flux_variance(pair, spec, options);
  if (!(out.gradiometric.value > 0.0)) {
    std::ostringstream os;
    os << "gradiometric variance underflowed to zero at xi = "
       << spec.correlation_length() << " m, d = " << pair.separation()
       << " m";
    throw DegeneracyError(os.str());
  }
  out.s_factor = out.single.value / out.gradiometric.value;
  return out;
}

double weighted_average(const LoopGeometry& geometry,
                        const NoiseSpectrum& spec,
                        const std::function<double(Vec2)>& f,
                        double angular_scale, int min_angular_points,
                        const QuadratureOptions& options) {
  if (spec.kind() != SpectrumKind::GaussianCorrelated)
    throw UnsupportedError("weighted_average needs a Gaussian spectrum");
  const LoopGeometry ring = geometry.single_ring_equivalent();
  const RadialDomain domain = gaussian_domain(ring, spec, options.truncation);
  if (domain.peak <= 0.0)
    throw DegeneracyError("weighted_average: weight vanishes identically");

  auto angular_mean = [&](double k) {
    const int n = min_angular_points +
                  2 * static_cast<int>(std::ceil(k * angular_scale));
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double theta = kTwoPi * (double(i) + 0.5) / double(n);
      sum += f({k * std::cos(theta), k * std::sin(theta)});
    }
    return sum / double(n);
  };
  auto weight = [&](double k) { return radial_integrand(ring, spec, k); };
  auto weighted = [&](double k) { return weight(k) * angular_mean(k); };

  double width = panel_width(ring, spec);
  if (angular_scale > 0.0) width = std::min(width, kPi / (4.0 * angular_scale));
  const std::vector<double> breakpoints =
      uniform_breakpoints(domain.k_max, width);
  const std::size_t budget =
      std::max(options.max_panels, 2 * breakpoints.size());
  const QuadratureResult num =
      integrate_panels(weighted, breakpoints, options.rel_tol, 0.0, budget);
  const QuadratureResult den =
      integrate_panels(weight, breakpoints, options.rel_tol, 0.0, budget);
  if (!num.converged || !den.converged)
    throw ConvergenceError("weighted_average quadrature did not converge",
                           num.value / den.value, num.error + den.error);
  return num.value / den.value;
}

std::vector<SweepPoint> variance_sweep(const LoopGeometry& geometry,
                                       std::span<const double> xi_grid,
                                       double amplitude,
                                       const QuadratureOptions& options,
                                       unsigned threads) {
  for (std::size_t i = 0; i < xi_grid.size(); ++i) {
    if (!(xi_grid[i] > 0.0))
      throw ParameterDomainError("variance_sweep: correlation lengths must be positive");
    if (i > 0 && !(xi_grid[i] > xi_grid[i - 1]))
      throw ParameterDomainError("variance_sweep: xi grid must be strictly increasing");
  }
  std::vector<SweepPoint> points(xi_grid.size());
  parallel_for(xi_grid.size(), threads, [&](std::size_t i) {
    points[i].correlation_length = xi_grid[i];
    try {
      points[i].result = flux_variance(
          geometry, NoiseSpectrum::gaussian(xi_grid[i], amplitude), options);
    } catch (const Error& e) {
      points[i].error = e.what();
    }
  });
  return points;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ParameterDomainError("loglog_slope needs two equal-length series of >= 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw ParameterDomainError("loglog_slope needs positive data");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw ParameterDomainError("log_grid needs 0 < lo < hi and n >= 2");
  std::vector<double> grid(n);
  const double step = std::log(hi / lo) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) grid[i] = lo * std::exp(step * double(i));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

}  // namespace fluxnoise
