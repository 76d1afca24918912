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
#include <numbers>

#include "fluxnoise/errors.hpp"
#include "fluxnoise/transmon.hpp"
#include "support/oracles.hpp"

using namespace fluxnoise;

using oracle::central_differences;

TEST_CASE("sweet-spot frequency by hand") {
  const TransmonDispersion d;
  const double expected = 2 * std::numbers::pi * (std::sqrt(40.0) - 0.25) * 1e9;
  CHECK(omega(d, Flux::quanta(0.0)) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(transition_frequency(d, Flux::quanta(0.0)) == doctest::Approx(6.0745553203e9).epsilon(1e-10));
}

TEST_CASE("omega is even and Phi0-periodic") {
  const TransmonDispersion d;
  for (int i = -460; i <= 460; ++i) {
    const double phi = i / 1024.0;
    const double w = omega(d, Flux::quanta(phi));
    CHECK(omega(d, Flux::quanta(-phi)) == w);
    CHECK(omega(d, Flux::quanta(phi + 1.0)) == w);
    CHECK(omega(d, Flux::quanta(phi - 3.0)) == w);
  }
}

TEST_CASE("sweet spot: D1 vanishes exactly, D2 negative") {
  const TransmonDispersion d;
  const auto s = d1_d2(d, Flux::quanta(0.0));
  CHECK(s.d1 == 0.0);
  CHECK(s.d2 < 0.0);
  CHECK(s.unit == FluxUnit::Weber);
}

TEST_CASE("derivatives agree with extended-precision central differences") {
  const TransmonDispersion d;
  const auto at01 = d1_d2(d, Flux::quanta(0.1), FluxUnit::FluxQuantum);
  const auto fd01 = central_differences(d, 0.1, 1e-6);
  CHECK(at01.d1 == doctest::Approx(fd01.first).epsilon(1e-6));
  CHECK(at01.d2 == doctest::Approx(fd01.second).epsilon(1e-6));

  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double phi = -0.45 + 0.9 * i / 1000.0;
    const auto s = d1_d2(d, Flux::quanta(phi), FluxUnit::FluxQuantum);
    const auto [f1, f2] = central_differences(d, phi, 1e-6);
    if (f1 != 0.0) worst = std::max(worst, std::abs(s.d1 - f1) / std::abs(f1));
    worst = std::max(worst, std::abs(s.d2 - f2) / std::abs(f2));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("derivative parity and unit conversion") {
  const TransmonDispersion d{15e9, 0.3e9};
  for (double phi : {0.013, 0.1, 0.27, 0.44}) {
    const auto p = d1_d2(d, Flux::quanta(phi), FluxUnit::FluxQuantum);
    const auto m = d1_d2(d, Flux::quanta(-phi), FluxUnit::FluxQuantum);
    CHECK(m.d1 == -p.d1);
    CHECK(m.d2 == p.d2);
    const auto wb = d1_d2(d, Flux::webers(phi * kFluxQuantum), FluxUnit::Weber);
    CHECK(wb.d1 == doctest::Approx(p.d1 / kFluxQuantum).epsilon(1e-12));
    CHECK(wb.d2 == doctest::Approx(p.d2 / (kFluxQuantum * kFluxQuantum)).epsilon(1e-12));
    const auto back = wb.in(FluxUnit::FluxQuantum);
    CHECK(back.d1 == doctest::Approx(p.d1).epsilon(1e-12));
    CHECK(back.unit == FluxUnit::FluxQuantum);
  }
  CHECK(Flux::quanta(0.5).in_webers() == doctest::Approx(0.5 * kFluxQuantum));
  CHECK(to_string(FluxUnit::Weber) == "Wb");
}

TEST_CASE("domain errors") {
  const TransmonDispersion d;
  CHECK_THROWS_AS(omega(d, Flux::quanta(0.5)), ParameterDomainError);
  CHECK_THROWS_AS(d1_d2(d, Flux::quanta(-0.5 + 1e-8)), ParameterDomainError);
  CHECK_NOTHROW(omega(d, Flux::quanta(0.4999)));
  CHECK_THROWS_AS(omega(TransmonDispersion{4e9, 0.25e9}, Flux::quanta(0.0)), ParameterDomainError);
  CHECK_THROWS_AS(omega(TransmonDispersion{20e9, 0.0}, Flux::quanta(0.0)), ParameterDomainError);
}
