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

#include <algorithm>
#include <cmath>
#include <vector>

#include "fluxnoise/errors.hpp"
#include "fluxnoise/fit.hpp"
#include "fluxnoise/variance.hpp"
#include "support/oracles.hpp"

using namespace fluxnoise;
using oracle::linspace;
using oracle::synthetic_dataset;

namespace {

const TransmonDispersion kDisp;
constexpr double kGamma1 = 1.0 / 30e-6;
const Gamma1Source kG1 = Gamma1Source::constant(kGamma1);

T2StarDataset sigma_only_data(double noise = 0.0, std::uint64_t seed = 0) {
  return synthetic_dataset(kDisp, linspace(0.0, 0.2, 11), 5e-5, 0.0, kGamma1, noise, seed);
}

T2StarDataset two_param_data(double noise = 0.0, std::uint64_t seed = 0) {
  return synthetic_dataset(kDisp, linspace(0.0, 0.02, 21), 5e-5, 2.5e4, kGamma1, noise, seed);
}

}  // namespace

TEST_CASE("residual vanishes at the generating parameters") {
  const auto data = two_param_data();
  const auto r = residual(data, kDisp, 5e-5, 2.5e4, kG1);
  CHECK(r.value <= 1e-18);
  CHECK(r.capped_points == 0);
}

TEST_CASE("residual has its minimum at the generating sigma") {
  const auto data = sigma_only_data();
  std::vector<double> sigmas;
  for (int i = -50; i <= 50; ++i) sigmas.push_back(5e-5 * std::pow(1.002, i));
  std::size_t best = 0;
  std::vector<double> errs;
  for (double s : sigmas) errs.push_back(residual(data, kDisp, s, 0.0, kG1).value);
  for (std::size_t i = 0; i < errs.size(); ++i)
    if (errs[i] < errs[best]) best = i;
  CHECK(best == 50);
  for (std::size_t i = 1; i <= 50; ++i) {
    CHECK(errs[50 + i] > errs[50 + i - 1]);
    CHECK(errs[50 - i] > errs[50 - i + 1]);
  }
}

TEST_CASE("residual is quadratic under a common time rescaling") {
  // T2* depends only on D t and Gamma t, so scaling energies and rates by 1/c
  // scales every model time by c.
  const auto data = two_param_data();
  const double c = 3.0;
  T2StarDataset scaled = data;
  for (auto& p : scaled.points) p.t2_star_us *= c;
  const TransmonDispersion slow{kDisp.ej_over_h / c, kDisp.ec_over_h / c};
  for (double sigma : {3e-5, 8e-5}) {
    const double e = residual(data, kDisp, sigma, 1e4, kG1).value;
    const double es = residual(scaled, slow, sigma, 1e4 / c, Gamma1Source::constant(kGamma1 / c)).value;
    CHECK(es == doctest::Approx(c * c * e).epsilon(1e-9));
  }
}

TEST_CASE("unbounded model points are capped and counted") {
  const auto data = two_param_data();
  const auto r = residual(data, kDisp, 0.0, 0.0, Gamma1Source::constant(0.0));
  double max_t2 = 0.0;
  for (const auto& p : data.points) max_t2 = std::max(max_t2, p.t2_star_s());
  CHECK(r.capped_points == data.points.size());
  CHECK(r.value == doctest::Approx(data.points.size() * std::pow(10 * max_t2, 2)));
}

TEST_CASE("one-parameter round trip on noiseless data") {
  const auto data = sigma_only_data();
  const auto fit = fit_sigma(data, kDisp, kG1, default_sigma_grid());
  CHECK(fit.sigma_phi_hat == doctest::Approx(5e-5).epsilon(0.01));
  CHECK_FALSE(fit.gamma0_hat);
  CHECK(fit.refined);
  CHECK_FALSE(fit.boundary.any());
  CHECK(fit.landscape.size() == 61);
  CHECK(fit.err_min <= fit.best_cell_err);
  CHECK(fit.err_min == doctest::Approx(residual(data, kDisp, fit.sigma_phi_hat, 0.0, kG1).value).epsilon(1e-12));
}

TEST_CASE("two-parameter round trip on noiseless data") {
  const auto data = synthetic_dataset(kDisp, linspace(0.0, 0.02, 21), 5e-5, 1.0 / 40e-6, kGamma1);
  const auto fit = fit_sigma_gamma0(data, kDisp, kG1, default_sigma_grid(), default_gamma0_grid());
  REQUIRE(fit.gamma0_hat);
  CHECK(fit.sigma_phi_hat == doctest::Approx(5e-5).epsilon(0.05));
  CHECK(*fit.gamma0_hat == doctest::Approx(1.0 / 40e-6).epsilon(0.05));
  CHECK(fit.landscape.size() == 61 * 41);
  CHECK(fit.err_min <= fit.best_cell_err);
  const auto& cell = fit.landscape[fit.best_cell];
  CHECK(cell.err == fit.best_cell_err);
}

TEST_CASE("noisy round trips recover the parameters in most trials") {
  int ok1 = 0, ok2 = 0;
  const int trials = 10;
  for (int seed = 0; seed < trials; ++seed) {
    const auto f1 = fit_sigma(sigma_only_data(0.05, 100 + seed), kDisp, kG1, default_sigma_grid());
    ok1 += std::abs(f1.sigma_phi_hat / 5e-5 - 1) <= 0.15;
    const auto f2 = fit_sigma_gamma0(two_param_data(0.05, 200 + seed), kDisp, kG1,
                                     default_sigma_grid(), default_gamma0_grid());
    ok2 += std::abs(f2.sigma_phi_hat / 5e-5 - 1) <= 0.15 && std::abs(*f2.gamma0_hat / 2.5e4 - 1) <= 0.15;
  }
  CHECK(ok1 >= 9);
  CHECK(ok2 >= 9);
}

TEST_CASE("a gamma0 grid of {0} reproduces the one-parameter fit exactly") {
  const auto data = two_param_data();
  const std::vector<double> zero{0.0};
  const auto a = fit_sigma(data, kDisp, kG1, default_sigma_grid());
  const auto b = fit_sigma_gamma0(data, kDisp, kG1, default_sigma_grid(), zero);
  CHECK(a.sigma_phi_hat == b.sigma_phi_hat);
  CHECK(a.err_min == b.err_min);
  CHECK(*b.gamma0_hat == 0.0);
}

TEST_CASE("2D landscape nests the 1D landscape and re-evaluates exactly") {
  const auto data = two_param_data(0.05, 7);
  const auto sig = log_grid(1e-5, 2e-4, 15);
  const auto gam = linspace(0.0, 6e4, 7);
  const auto one = fit_sigma(data, kDisp, kG1, sig);
  const auto two = fit_sigma_gamma0(data, kDisp, kG1, sig, gam);
  double row_min = INFINITY;
  for (std::size_t i = 0; i < sig.size(); ++i) row_min = std::min(row_min, two.landscape[i * gam.size()].err);
  CHECK(row_min == one.best_cell_err);
  for (std::size_t c = 0; c < two.landscape.size(); c += 5) {
    const auto& cell = two.landscape[c];
    CHECK(residual(data, kDisp, cell.sigma_phi, cell.gamma0, kG1).value ==
          doctest::Approx(cell.err).epsilon(1e-12));
  }
}

TEST_CASE("sigma fit on gamma0 > 0 data misses the plateau") {
  const auto data = two_param_data();
  const auto one = fit_sigma(data, kDisp, kG1, default_sigma_grid());
  const auto two = fit_sigma_gamma0(data, kDisp, kG1, default_sigma_grid(), default_gamma0_grid());
  CHECK(one.err_min >= 10.0 * two.err_min);
  DephasingParams p;
  p.sigma_phi = Flux::quanta(one.sigma_phi_hat);
  p.gamma1 = kGamma1;
  const double model0 = *t2_star(d1_d2(kDisp, Flux::quanta(0.0), FluxUnit::FluxQuantum), p);
  CHECK(std::abs(model0 / data.points.front().t2_star_s() - 1.0) > 0.1);
}

TEST_CASE("refinement never worsens the best grid cell") {
  for (int seed = 0; seed < 6; ++seed) {
    const auto data = two_param_data(0.1, 300 + seed);
    const auto a = fit_sigma(data, kDisp, kG1, log_grid(1e-5, 3e-4, 9));
    CHECK(a.err_min <= a.best_cell_err);
    const auto b = fit_sigma_gamma0(data, kDisp, kG1, log_grid(1e-5, 3e-4, 9), linspace(0, 1e5, 6));
    CHECK(b.err_min <= b.best_cell_err);
  }
}

TEST_CASE("boundary optimum is flagged") {
  const auto data = sigma_only_data();
  const auto low = fit_sigma(data, kDisp, kG1, log_grid(1e-6, 1e-5, 11));
  CHECK(low.boundary.sigma_high);
  CHECK(low.boundary.any());
  const auto high = fit_sigma(data, kDisp, kG1, log_grid(2e-4, 1e-3, 11));
  CHECK(high.boundary.sigma_low);
  const auto g = fit_sigma_gamma0(two_param_data(), kDisp, kG1, default_sigma_grid(), linspace(0, 1e4, 5));
  CHECK(g.boundary.gamma0_high);
  CHECK_FALSE(g.boundary.gamma0_low);
}

TEST_CASE("fits are deterministic across thread counts") {
  const auto data = two_param_data(0.05, 11);
  FitOptions serial, parallel;
  parallel.threads = 3;
  const auto a = fit_sigma_gamma0(data, kDisp, kG1, default_sigma_grid(), default_gamma0_grid(), serial);
  const auto b = fit_sigma_gamma0(data, kDisp, kG1, default_sigma_grid(), default_gamma0_grid(), parallel);
  CHECK(a.sigma_phi_hat == b.sigma_phi_hat);
  CHECK(*a.gamma0_hat == *b.gamma0_hat);
  CHECK(a.err_min == b.err_min);
  for (std::size_t c = 0; c < a.landscape.size(); ++c) CHECK(a.landscape[c].err == b.landscape[c].err);
}

TEST_CASE("dataset preconditions") {
  auto data = two_param_data();
  T2StarDataset tiny;
  tiny.points.assign(data.points.begin(), data.points.begin() + 2);
  CHECK_THROWS_AS(fit_sigma(tiny, kDisp, kG1, default_sigma_grid()), DataError);
  tiny.points.assign(data.points.begin(), data.points.begin() + 4);
  CHECK_NOTHROW(fit_sigma(tiny, kDisp, kG1, default_sigma_grid()));
  CHECK_THROWS_AS(fit_sigma_gamma0(tiny, kDisp, kG1, default_sigma_grid(), default_gamma0_grid()),
                  DataError);
  CHECK_THROWS_AS(residual(T2StarDataset{}, kDisp, 1e-4, 0.0, kG1), DataError);

  auto bad = data;
  bad.points[3].t2_star_us = -1.0;
  try {
    bad.validate(3);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(e.row() == 4);
  }
  bad = data;
  bad.points[1].phi_bias = 0.5;
  CHECK_THROWS_AS(bad.validate(3), DataError);
  const std::vector<double> descending{1e-4, 1e-5};
  CHECK_THROWS_AS(fit_sigma(data, kDisp, kG1, descending), ParameterDomainError);
}

TEST_CASE("gamma1 from the t1 column") {
  auto data = two_param_data();
  CHECK(gamma1_source_for(data, 5.0).kind() == Gamma1Source::Kind::Constant);
  data.points[2].t1_us = 20.0;
  const auto g = gamma1_source_for(data, 5.0);
  CHECK(g.kind() == Gamma1Source::Kind::PerPoint);
  CHECK(g.rate(2, 0.0) == doctest::Approx(1.0 / 20e-6));
  CHECK(g.rate(0, 0.0) == 5.0);
}
