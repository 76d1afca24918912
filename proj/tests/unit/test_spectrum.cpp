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

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fluxnoise/errors.hpp"
#include "fluxnoise/quadrature.hpp"
#include "fluxnoise/spectrum.hpp"
#include "fluxnoise/variance.hpp"

using namespace fluxnoise;

namespace {

constexpr double kPi = std::numbers::pi;

// (2 pi)^-1 \int S(k) J0(k r) k dk over k in [0, 12/xi].
double hankel_of_spectrum(const NoiseSpectrum& s, double r) {
  const double xi = s.correlation_length();
  std::vector<double> b;
  for (int i = 0; i <= 48; ++i) b.push_back(i * 0.25 / xi);
  auto f = [&](double k) { return spectrum_at(s, k) * boost::math::cyl_bessel_j(0, k * r) * k; };
  const auto q = integrate_panels(f, b, 1e-13, 0.0, 100000);
  REQUIRE(q.converged);
  return q.value / (2 * kPi);
}

// 2 pi \int C(r) J0(k r) r dr over r in [0, 16 xi], with C from the library.
double hankel_of_correlation(const NoiseSpectrum& s, double k) {
  const double xi = s.correlation_length();
  std::vector<double> b;
  for (int i = 0; i <= 64; ++i) b.push_back(i * 0.25 * xi);
  auto f = [&](double r) { return correlation_real(s, r) * boost::math::cyl_bessel_j(0, k * r) * r; };
  const auto q = integrate_panels(f, b, 1e-12, 1e-15 * xi * xi, 100000);
  REQUIRE(q.converged);
  return 2 * kPi * q.value;
}

}  // namespace

TEST_CASE("spectrum values at reference wavenumbers") {
  const double xi = 0.7e-6;
  const auto g = NoiseSpectrum::gaussian(xi);
  CHECK(spectrum_at(g, 0.0) == doctest::Approx(xi * xi).epsilon(1e-15));
  CHECK(spectrum_at(g, 1.0 / xi) == doctest::Approx(xi * xi * std::exp(-1.0)).epsilon(1e-15));
  const auto w = NoiseSpectrum::white(2.5);
  for (double k : {0.0, 1.0, 1e6, 1e12}) CHECK(spectrum_at(w, k) == 2.5);
  CHECK(spectrum_at(g.with_amplitude(3.0), 0.0) == doctest::Approx(3 * xi * xi));
  CHECK(g.with_correlation_length(2e-6).correlation_length() == 2e-6);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(NoiseSpectrum::gaussian(0.0), ParameterDomainError);
  CHECK_THROWS_AS(NoiseSpectrum::gaussian(-1e-6), ParameterDomainError);
  CHECK_THROWS_AS(NoiseSpectrum::white(-1.0), ParameterDomainError);
  CHECK_THROWS_AS(correlation_real(NoiseSpectrum::white(1.0), 0.0), UnsupportedError);
  CHECK(correlation_real(NoiseSpectrum::white(1.0), 1e-9) == 0.0);
  CHECK(parse_spectrum_kind("gaussian") == SpectrumKind::GaussianCorrelated);
  CHECK_THROWS_AS(parse_spectrum_kind("lorentzian"), ParameterDomainError);
}

TEST_CASE("real-space correlation closed form") {
  const double xi = 1e-6;
  const auto g = NoiseSpectrum::gaussian(xi, 2.0);
  CHECK(correlation_real(g, 0.0) == doctest::Approx(2.0 / (4 * kPi)).epsilon(1e-15));
  CHECK(correlation_real(g, 2 * xi) == doctest::Approx(2.0 * std::exp(-1.0) / (4 * kPi)).epsilon(1e-15));
}

TEST_CASE("correlation at r = 3 um matches a numerical Hankel transform of S") {
  const auto g = NoiseSpectrum::gaussian(1e-6);
  for (double r : {0.0, 0.5e-6, 3e-6}) {
    const double ref = hankel_of_spectrum(g, r);
    CHECK(correlation_real(g, r) == doctest::Approx(ref).epsilon(1e-6));
  }
}

TEST_CASE("transform round trip recovers S where double precision resolves it") {
  // Above k ~ 4/xi the transform of C is cancellation-limited in double:
  // S(k)/S(0) falls below the rounding floor of \int |C J0| r dr.
  const double xi = 1e-6;
  const auto g = NoiseSpectrum::gaussian(xi);
  for (double k : log_grid(1e-3 / xi, 4.0 / xi, 25))
    CHECK(hankel_of_correlation(g, k) == doctest::Approx(spectrum_at(g, k)).epsilon(1e-5));
}

TEST_CASE("transform pair holds to 10/xi in extended precision") {
  using big = boost::multiprecision::cpp_bin_float_100;
  using boost::math::quadrature::gauss_kronrod;
  // xi = 1: C(r) = exp(-r^2/4)/(4 pi), S(k) = exp(-k^2).
  const big pi = boost::math::constants::pi<big>();
  for (double kd : {5.0, 7.5, 10.0}) {
    const big k = kd;
    auto f = [&](const big& r) {
      return exp(-r * r / 4) / (4 * pi) * boost::math::cyl_bessel_j(0, k * r) * r;
    };
    big sum = 0;
    for (int i = 0; i < 26; ++i)
      sum += gauss_kronrod<big, 61>::integrate(f, big(i), big(i + 1), 0, big(1e-60));
    const big recovered = 2 * pi * sum;
    const double scale = spectrum_at(NoiseSpectrum::gaussian(1.0), kd);
    CHECK(static_cast<double>(recovered) == doctest::Approx(scale).epsilon(1e-5));
  }
}

TEST_CASE("spectra are non-negative and Gaussian is monotone in k") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lx(-9, -3), lk(-3, 2);
  for (int i = 0; i < 500; ++i) {
    const double xi = std::pow(10.0, lx(rng));
    const auto g = NoiseSpectrum::gaussian(xi);
    const double k = std::pow(10.0, lk(rng)) / xi;
    CHECK(spectrum_at(g, k) >= 0.0);
    CHECK(spectrum_at(g, 1.01 * k) <= spectrum_at(g, k));
  }
}
