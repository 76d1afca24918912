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

#include "fluxnoise/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fluxnoise/errors.hpp"
#include "fluxnoise/parallel.hpp"

namespace fluxnoise {

namespace {

const double kGolden = 0.5 * (std::sqrt(5.0) - 1.0);

void require_increasing(std::span<const double> grid, const char* name,
                        bool positive) {
  if (grid.empty()) throw ParameterDomainError(std::string(name) + " is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || (positive ? !(grid[i] > 0.0) : !(grid[i] >= 0.0)))
      throw ParameterDomainError(std::string(name) +
                                 (positive ? " must be positive" : " must be >= 0"));
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw ParameterDomainError(std::string(name) + " must be strictly increasing");
  }
}

// Golden-section minimisation of f on [a, b]; returns the abscissa of the
// best value seen.
template <typename F>
double golden_section(F&& f, double a, double b, double tol, int& iterations) {
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  iterations = 0;
  while (b - a > tol && iterations < 500) {
    ++iterations;
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

FitOutcome fit_grid(const T2StarDataset& data, const TransmonDispersion& disp,
                    const Gamma1Source& gamma1,
                    std::span<const double> sigma_grid,
                    std::span<const double> gamma0_grid,
                    const FitOptions& options, std::size_t min_points) {
  data.validate(min_points);
  disp.validate();
  require_increasing(sigma_grid, "sigma grid", true);
  require_increasing(gamma0_grid, "gamma0 grid", false);

  const std::size_t ns = sigma_grid.size();
  const std::size_t ng = gamma0_grid.size();
  FitOutcome out;
  out.sigma_points = ns;
  out.gamma0_points = ng;
  out.landscape.resize(ns * ng);

  parallel_for(ns * ng, options.threads, [&](std::size_t cell) {
    const std::size_t i = cell / ng;
    const std::size_t j = cell % ng;
    out.landscape[cell] = {sigma_grid[i], gamma0_grid[j],
                           residual(data, disp, sigma_grid[i], gamma0_grid[j],
                                    gamma1)
                               .value};
  });

  // Row-major order already encodes the tie-break: smallest sigma first,
  // then smallest gamma0.
  std::size_t best = 0;
  for (std::size_t c = 1; c < out.landscape.size(); ++c)
    if (out.landscape[c].err < out.landscape[best].err) best = c;
  out.best_cell = best;
  out.best_cell_err = out.landscape[best].err;
  const std::size_t bi = best / ng;
  const std::size_t bj = best % ng;
  out.boundary.sigma_low = ns > 1 && bi == 0;
  out.boundary.sigma_high = ns > 1 && bi == ns - 1;
  out.boundary.gamma0_low = ng > 1 && bj == 0 && gamma0_grid[0] > 0.0;
  out.boundary.gamma0_high = ng > 1 && bj == ng - 1;

  auto err_at = [&](double sigma, double g0) {
    return residual(data, disp, sigma, g0, gamma1).value;
  };

  double sigma = sigma_grid[bi];
  double g0 = gamma0_grid[bj];
  double err = out.best_cell_err;

  // Line-search brackets span the neighbouring grid cells.
  const double u_lo = std::log(sigma_grid[bi == 0 ? 0 : bi - 1]);
  const double u_hi = std::log(sigma_grid[std::min(bi + 1, ns - 1)]);
  const double g_lo = gamma0_grid[bj == 0 ? 0 : bj - 1];
  const double g_hi = gamma0_grid[std::min(bj + 1, ng - 1)];
  const double g_tol = options.tolerance * std::max(g_hi - g_lo, 1.0);

  bool converged = false;
  int iteration = 0;
  for (; iteration < options.max_iterations; ++iteration) {
    const double sigma_before = sigma;
    const double g0_before = g0;
    int steps = 0;
    if (u_hi > u_lo) {
      const double u = golden_section(
          [&](double v) { return err_at(std::exp(v), g0); }, u_lo, u_hi,
          options.tolerance, steps);
      const double candidate = std::exp(u);
      const double e = err_at(candidate, g0);
      if (e <= err) {
        sigma = candidate;
        err = e;
      }
    }
    if (g_hi > g_lo) {
      const double g = golden_section(
          [&](double v) { return err_at(sigma, v); }, g_lo, g_hi, g_tol, steps);
      const double e = err_at(sigma, g);
      if (e <= err) {
        g0 = g;
        err = e;
      }
    }
    const bool sigma_still = std::abs(std::log(sigma / sigma_before)) <= options.tolerance;
    const bool g0_still = std::abs(g0 - g0_before) <= g_tol;
    if (sigma_still && g0_still) {
      converged = true;
      ++iteration;
      break;
    }
  }

  out.sigma_phi_hat = sigma;
  out.gamma0_hat = g0;
  const ResidualValue final_err = residual(data, disp, sigma, g0, gamma1);
  out.err_min = final_err.value;
  out.capped_points = final_err.capped_points;
  out.refined = converged;
  out.refinement_iterations = iteration;
  return out;
}

}  // namespace

void T2StarDataset::validate(std::size_t min_points) const {
  if (points.size() < min_points) {
    std::ostringstream os;
    os << "dataset has " << points.size() << " points, at least " << min_points
       << " required";
    throw DataError(os.str());
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    auto fail = [&](const std::string& what) {
      throw DataError("point " + std::to_string(i + 1) + ": " + what, i + 1);
    };
    if (!std::isfinite(p.phi_bias)) fail("phi_bias is not finite");
    if (!(std::abs(std::cos(std::numbers::pi * p.phi_bias)) > 1e-6))
      fail("phi_bias lies at the half-quantum degeneracy");
    if (!(p.t2_star_us > 0.0) || !std::isfinite(p.t2_star_us))
      fail("t2_star must be positive");
    if (p.t1_us && (!(*p.t1_us > 0.0) || !std::isfinite(*p.t1_us)))
      fail("t1 must be positive");
    if (!(p.weight > 0.0) || !std::isfinite(p.weight)) fail("weight must be positive");
  }
}

Gamma1Source gamma1_source_for(const T2StarDataset& data, double fallback_rate) {
  const bool any_t1 = std::any_of(data.points.begin(), data.points.end(),
                                  [](const auto& p) { return p.t1_us.has_value(); });
  if (!any_t1) return Gamma1Source::constant(fallback_rate);
  std::vector<double> rates;
  rates.reserve(data.points.size());
  for (const auto& p : data.points)
    rates.push_back(p.t1_us ? 1.0 / (*p.t1_us * 1e-6) : fallback_rate);
  return Gamma1Source::per_point(std::move(rates));
}

ResidualValue residual(const T2StarDataset& data, const TransmonDispersion& disp,
                       double sigma_quanta, double gamma0,
                       const Gamma1Source& gamma1) {
  if (data.points.empty())
    throw DataError("residual needs a non-empty dataset");
  double max_observed = 0.0;
  for (const auto& p : data.points) max_observed = std::max(max_observed, p.t2_star_s());
  const double cap = 10.0 * max_observed;

  ResidualValue out;
  DephasingParams params;
  params.sigma_phi = Flux::quanta(sigma_quanta);
  params.gamma0 = gamma0;
  for (std::size_t j = 0; j < data.points.size(); ++j) {
    const auto& p = data.points[j];
    params.gamma1 = gamma1.rate(j, p.phi_bias);
    const FluxSensitivity s =
        d1_d2(disp, Flux::quanta(p.phi_bias), FluxUnit::FluxQuantum);
    const std::optional<double> model = t2_star(s, params);
    double diff;
    if (model) {
      diff = p.t2_star_s() - *model;
    } else {
      diff = cap;
      ++out.capped_points;
    }
    out.value += p.weight * diff * diff;
  }
  return out;
}

std::vector<double> default_sigma_grid() {
  std::vector<double> grid(61);
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = std::pow(10.0, -6.0 + 3.0 * double(i) / 60.0);
  return grid;
}

std::vector<double> default_gamma0_grid() {
  std::vector<double> grid(41);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = 5000.0 * double(i);
  return grid;
}

FitOutcome fit_sigma(const T2StarDataset& data, const TransmonDispersion& disp,
                     const Gamma1Source& gamma1,
                     std::span<const double> sigma_grid,
                     const FitOptions& options) {
  const double zero = 0.0;
  FitOutcome out = fit_grid(data, disp, gamma1, sigma_grid,
                            std::span<const double>(&zero, 1), options, 3);
  out.gamma0_hat.reset();
  return out;
}

FitOutcome fit_sigma_gamma0(const T2StarDataset& data,
                            const TransmonDispersion& disp,
                            const Gamma1Source& gamma1,
                            std::span<const double> sigma_grid,
                            std::span<const double> gamma0_grid,
                            const FitOptions& options) {
  return fit_grid(data, disp, gamma1, sigma_grid, gamma0_grid, options, 5);
}

}  // namespace fluxnoise
