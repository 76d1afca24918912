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

#include "fluxnoise/montecarlo.hpp"
#include "fluxnoise/variance.hpp"

using namespace fluxnoise;

TEST_CASE("single ring at xi = 0.05 um agrees with the analytic variance") {
  const auto ring = LoopGeometry::single_ring(5e-6, 1e-6);
  const auto spec = NoiseSpectrum::gaussian(0.05e-6);
  const double analytic = flux_variance(ring, spec).value;
  const auto grid = minimal_grid(ring, spec);
  McOptions opt;
  opt.realizations = 4000;
  opt.seed = 505;
  opt.keep_samples = false;
  const auto e = mc_flux_variance(ring, spec, grid.extent, grid.n, opt);
  MESSAGE("grid " << grid.extent << " m / " << grid.n << ", mc " << e.mean_sq << " +/- "
                  << e.std_error << ", analytic " << analytic);
  CHECK(std::abs(e.mean_sq - analytic) < 3 * e.std_error);
}
