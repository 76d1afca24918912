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

#include <cmath>
#include <random>
#include <vector>

#include "fluxnoise/errors.hpp"
#include "fluxnoise/ramsey.hpp"
#include "fluxnoise/transmon.hpp"
#include "support/oracles.hpp"

using namespace fluxnoise;

namespace {

FluxSensitivity phi0_units(double d1, double d2) { return {d1, d2, FluxUnit::FluxQuantum}; }

DephasingParams params(double sigma, double g0, double g1) {
  DephasingParams p;
  p.sigma_phi = Flux::quanta(sigma);
  p.gamma0 = g0;
  p.gamma1 = g1;
  return p;
}

}  // namespace

TEST_CASE("coherence factor limits") {
  CHECK(coherence_factor(3e9, -2e12, 0.0, 1e-5) == 1.0);
  CHECK(coherence_factor(3e9, -2e12, 1e-4, 0.0) == 1.0);
  for (double t : {1e-7, 1e-6, 5e-6}) {
    const double a = 3e9 * 1e-4 * t;
    CHECK(coherence_factor(3e9, 0.0, 1e-4, t) == doctest::Approx(std::exp(-a * a / 2)).epsilon(1e-15));
  }
}

TEST_CASE("coherence factor agrees with a stratified phase average on a 5x5x5 grid") {
  const auto z = oracle::stratified_normals(1'000'000, 20260101);
  const double levels[] = {0.0, 2.5, 5.0, 7.5, 10.0};
  const double sigmas[] = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2};
  double worst = 0.0;
  for (double a : levels)
    for (double b : levels)
      for (double sigma : sigmas) {
        const double t = 2e-6;
        const double d1 = a / (sigma * t);
        const double d2 = -b / (sigma * sigma * t);
        const double mc = oracle::phase_average(z, d1, d2, sigma, t);
        worst = std::max(worst, std::abs(coherence_factor(d1, d2, sigma, t) - mc));
      }
  CHECK(worst < 1e-3);
}

TEST_CASE("power-law decay at the sweet spot") {
  const double sigma = 1e-4, d2 = -5e12;
  const double t = 1e3 / (std::abs(d2) * sigma * sigma);
  const double w = coherence_factor(0.0, d2, sigma, t);
  CHECK(w * std::sqrt(1e3) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("envelope values are unit-independent") {
  const TransmonDispersion disp;
  for (double phi : {0.0, 0.05, 0.2, 0.41}) {
    const auto q = d1_d2(disp, Flux::quanta(phi), FluxUnit::FluxQuantum);
    const auto w = d1_d2(disp, Flux::quanta(phi), FluxUnit::Weber);
    DephasingParams pq = params(2e-4, 1e4, 3e4);
    DephasingParams pw = pq;
    pw.sigma_phi = Flux::webers(2e-4 * kFluxQuantum);
    for (double t : {1e-7, 1e-6, 1e-5}) {
      CHECK(total_envelope(w, pw, t) ==
            doctest::Approx(total_envelope(q, pq, t)).epsilon(1e-12));
      CHECK(total_envelope(w, pq, t) ==
            doctest::Approx(total_envelope(q, pw, t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("total envelope limits and monotonicity") {
  const auto s = phi0_units(4e9, -3e12);
  CHECK(total_envelope(s, params(0.0, 0.0, 2e4), 1e-5) ==
        doctest::Approx(std::exp(-1e4 * 1e-5)).epsilon(1e-15));
  CHECK(total_envelope(s, params(1e-4, 1e4, 2e4), 0.0) == 1.0);
  CHECK(total_envelope(s, params(0.0, 0.0, 0.0), 1.0) == 1.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sv = phi0_units(1e10 * u(rng), -1e13 * u(rng));
    const auto p = params(3e-4 * u(rng), 1e5 * u(rng), 1e5 * u(rng));
    double prev = 1.0;
    for (int i = 1; i <= 200; ++i) {
      const double e = total_envelope(sv, p, 1e-7 * i);
      CHECK(e <= prev);
      CHECK(e >= 0.0);
      prev = e;
    }
  }
}

TEST_CASE("T2* closed forms") {
  const auto s = phi0_units(5e9, 0.0);
  const auto pure = t2_star(s, params(0.0, 1e4, 3e4));
  REQUIRE(pure);
  CHECK(*pure == doctest::Approx(1.0 / (1.5e4 + 1e4)).epsilon(1e-11));
  const auto gauss = t2_star(s, params(1e-4, 0.0, 0.0));
  REQUIRE(gauss);
  CHECK(*gauss == doctest::Approx(std::sqrt(2.0) / (5e9 * 1e-4)).epsilon(1e-11));
  CHECK_FALSE(t2_star(phi0_units(0.0, 0.0), params(1e-4, 0.0, 0.0)));
  CHECK_FALSE(t2_star(s, params(0.0, 0.0, 0.0)));
  CHECK_THROWS_AS(t2_star(s, params(-1.0, 0.0, 0.0)), ParameterDomainError);
  CHECK_THROWS_AS(t2_star(s, params(0.0, -1.0, 0.0)), ParameterDomainError);
}

TEST_CASE("T2* matches a 10^7-point scan of the envelope") {
  const TransmonDispersion disp;
  struct Case { double phi, sigma, g0, g1; };
  for (const Case c : {Case{0.0, 3e-4, 5e3, 2e4}, Case{0.13, 1e-4, 2e4, 3.3e4},
                       Case{0.37, 4e-5, 0.0, 1e4}}) {
    const auto s = d1_d2(disp, Flux::quanta(c.phi), FluxUnit::FluxQuantum);
    const auto p = params(c.sigma, c.g0, c.g1);
    const auto t2 = t2_star(s, p);
    REQUIRE(t2);
    const double scan = oracle::scan_t2_star(s, p, 3.0 * *t2, 10'000'000);
    CHECK(*t2 == doctest::Approx(scan).epsilon(1e-6));
  }
}

TEST_CASE("gamma1 sources") {
  CHECK(Gamma1Source::constant(7.0).rate(12, 0.3) == 7.0);
  const auto table = Gamma1Source::table({{0.4, 4.0}, {0.0, 0.0}, {0.2, 1.0}});
  CHECK(table.rate(0, -1.0) == 0.0);
  CHECK(table.rate(0, 0.1) == doctest::Approx(0.5));
  CHECK(table.rate(0, 0.3) == doctest::Approx(2.5));
  CHECK(table.rate(0, 0.9) == 4.0);
  const auto pp = Gamma1Source::per_point({1.0, 2.0});
  CHECK(pp.rate(1, 0.0) == 2.0);
  CHECK_THROWS_AS(pp.rate(2, 0.0), ParameterDomainError);
  CHECK_THROWS_AS(Gamma1Source::constant(-1.0), ParameterDomainError);
  CHECK_THROWS_AS(Gamma1Source::table({}), ParameterDomainError);
}

TEST_CASE("T2* curves: monotone falloff, bounded plateau, per-point failures") {
  const TransmonDispersion disp;
  const auto grid = oracle::linspace(0.0, 0.45, 91);
  const auto flux_only = t2_star_curve(disp, params(1e-4, 0.0, 0.0), Gamma1Source::constant(0.0), grid);
  for (std::size_t i = 1; i < flux_only.size(); ++i) {
    REQUIRE(flux_only[i].status == CurvePoint::Status::Finite);
    CHECK(flux_only[i].t2_star <= flux_only[i - 1].t2_star);
  }
  const auto full = t2_star_curve(disp, params(1e-4, 2e4, 0.0), Gamma1Source::constant(3.3e4), grid, 2);
  CHECK(full[0].t2_star <= 1.0 / 2e4);

  const std::vector<double> bad{0.0, 0.5, 0.1};
  const auto mixed = t2_star_curve(disp, params(1e-4, 2e4, 0.0), Gamma1Source::constant(3.3e4), bad);
  CHECK(mixed[0].status == CurvePoint::Status::Finite);
  CHECK(mixed[1].status == CurvePoint::Status::Failed);
  CHECK_FALSE(mixed[1].error.empty());
  CHECK(mixed[2].status == CurvePoint::Status::Finite);

  const auto none = t2_star_curve(disp, params(0.0, 0.0, 0.0), Gamma1Source::constant(0.0), bad);
  CHECK(none[0].status == CurvePoint::Status::Unbounded);

  const auto serial = t2_star_curve(disp, params(1e-4, 2e4, 0.0), Gamma1Source::constant(3.3e4), grid, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(serial[i].t2_star == full[i].t2_star);
}
