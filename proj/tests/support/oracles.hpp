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

#ifndef FLUXNOISE_TESTS_ORACLES_HPP
#define FLUXNOISE_TESTS_ORACLES_HPP

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "fluxnoise/fit.hpp"
#include "fluxnoise/ramsey.hpp"
#include "fluxnoise/transmon.hpp"

namespace fluxnoise::oracle {

/// N standard-normal draws, one per equal-probability stratum:
/// z_i = Phi^-1((i + U_i) / N).
inline std::vector<double> stratified_normals(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const boost::math::normal unit;
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    double p = (double(i) + u(rng)) / double(n);
    p = std::clamp(p, 1e-300, 1.0 - 1e-16);
    z[i] = boost::math::quantile(unit, p);
  }
  return z;
}

/// |mean of exp(i (d1 dphi + d2 dphi^2 / 2) t)| over dphi = sigma z.
inline double phase_average(const std::vector<double>& z, double d1, double d2,
                            double sigma, double t) {
  double re = 0.0, im = 0.0;
  for (double zi : z) {
    const double x = sigma * zi;
    const double phase = (d1 * x + 0.5 * d2 * x * x) * t;
    re += std::cos(phase);
    im += std::sin(phase);
  }
  return std::hypot(re, im) / double(z.size());
}

using big = boost::multiprecision::cpp_bin_float_50;

inline big omega_big(const TransmonDispersion& d, const big& phi) {
  const big pi = boost::math::constants::pi<big>();
  return 2 * pi *
         (sqrt(8 * big(d.ej_over_h) * abs(cos(pi * phi)) * big(d.ec_over_h)) -
          big(d.ec_over_h));
}

/// Central first and second differences of omega (Phi0 units, step h),
/// evaluated in 50-digit arithmetic.
inline std::pair<double, double> central_differences(const TransmonDispersion& d,
                                                     double phi, double h) {
  const big x = phi, step = h;
  const big up = omega_big(d, x + step), mid = omega_big(d, x), dn = omega_big(d, x - step);
  return {static_cast<double>((up - dn) / (2 * step)),
          static_cast<double>((up - 2 * mid + dn) / (step * step))};
}

/// E(t) = 1/e by scanning `n` uniform points on [0, t_max] and linearly
/// interpolating the first crossing.
inline double scan_t2_star(const FluxSensitivity& s, const DephasingParams& p,
                           double t_max, std::size_t n) {
  const double target = std::exp(-1.0);
  double t_prev = 0.0, e_prev = 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = t_max * double(i) / double(n);
    const double e = total_envelope(s, p, t);
    if (e <= target) return t_prev + (e_prev - target) / (e_prev - e) * (t - t_prev);
    t_prev = t;
    e_prev = e;
  }
  return NAN;
}

/// Measured values from the model: T2*(phi_j), optionally with multiplicative
/// Gaussian noise of relative size `noise`.
inline T2StarDataset synthetic_dataset(const TransmonDispersion& disp,
                                       const std::vector<double>& phis,
                                       double sigma_quanta, double gamma0,
                                       double gamma1, double noise = 0.0,
                                       std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  T2StarDataset data;
  for (double phi : phis) {
    DephasingParams p;
    p.sigma_phi = Flux::quanta(sigma_quanta);
    p.gamma0 = gamma0;
    p.gamma1 = gamma1;
    const auto s = d1_d2(disp, Flux::quanta(phi), FluxUnit::FluxQuantum);
    const double t2 = *t2_star(s, p);
    T2StarMeasurement m;
    m.phi_bias = phi;
    m.t2_star_us = t2 * 1e6 * (noise > 0.0 ? 1.0 + noise * g(rng) : 1.0);
    data.points.push_back(m);
  }
  return data;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * double(i) / double(n - 1);
  return v;
}

}  // namespace fluxnoise::oracle

#endif  // FLUXNOISE_TESTS_ORACLES_HPP
