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

#include "fluxnoise/ramsey.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fluxnoise/errors.hpp"
#include "fluxnoise/parallel.hpp"

namespace fluxnoise {

namespace {

const double kInvE = std::exp(-1.0);

void require_rate(double rate, const char* name) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    std::ostringstream os;
    os << name << " = " << rate << " violates " << name << " >= 0";
    throw ParameterDomainError(os.str());
  }
}

}  // namespace

void DephasingParams::validate() const {
  const double s = sigma_phi.in_quanta();
  if (!(s >= 0.0) || !std::isfinite(s))
    throw ParameterDomainError("sigma_phi must be >= 0");
  require_rate(gamma0, "gamma0");
  require_rate(gamma1, "gamma1");
}

double coherence_factor(double d1, double d2, double sigma, double t) {
  const double b = d2 * sigma * sigma * t;
  const double q = 1.0 + b * b;
  const double a = d1 * sigma * t;
  return std::exp(-a * a / (2.0 * q)) / std::sqrt(std::sqrt(q));
}

double coherence_factor(const FluxSensitivity& s, Flux sigma, double t) {
  return coherence_factor(s.d1, s.d2, sigma.in(s.unit), t);
}

double total_envelope(const FluxSensitivity& s, const DephasingParams& params,
                      double t) {
  return std::exp(-(0.5 * params.gamma1 + params.gamma0) * t) *
         coherence_factor(s, params.sigma_phi, t);
}

std::optional<double> t2_star(const FluxSensitivity& s,
                              const DephasingParams& params) {
  params.validate();
  const double sigma = params.sigma_phi.in(s.unit);
  const double rate = 0.5 * params.gamma1 + params.gamma0;
  const double linear = std::abs(s.d1) * sigma;
  const double quadratic = std::abs(s.d2) * sigma * sigma;
  if (rate == 0.0 && linear == 0.0 && quadratic == 0.0) return std::nullopt;

  auto above = [&](double t) { return total_envelope(s, params, t) > kInvE; };
  double lo = 0.0;
  double hi = 1.0 / (rate + linear + quadratic);
  while (above(hi)) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) return std::nullopt;
  }
  while (hi - lo > kT2StarRelTol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (above(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Gamma1Source Gamma1Source::constant(double rate) {
  require_rate(rate, "gamma1");
  Gamma1Source g;
  g.kind_ = Kind::Constant;
  g.constant_ = rate;
  return g;
}

Gamma1Source Gamma1Source::table(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw ParameterDomainError("gamma1 table is empty");
  for (const auto& [phi, rate] : points) {
    if (!std::isfinite(phi)) throw ParameterDomainError("gamma1 table bias is not finite");
    require_rate(rate, "gamma1");
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  Gamma1Source g;
  g.kind_ = Kind::Table;
  g.table_ = std::move(points);
  return g;
}

Gamma1Source Gamma1Source::per_point(std::vector<double> rates) {
  for (double r : rates) require_rate(r, "gamma1");
  Gamma1Source g;
  g.kind_ = Kind::PerPoint;
  g.rates_ = std::move(rates);
  return g;
}

double Gamma1Source::rate(std::size_t index, double phi_quanta) const {
  switch (kind_) {
    case Kind::Constant:
      return constant_;
    case Kind::PerPoint:
      if (index >= rates_.size())
        throw ParameterDomainError("per-point gamma1 has no entry for point " +
                                   std::to_string(index));
      return rates_[index];
    case Kind::Table:
      break;
  }
  if (phi_quanta <= table_.front().first) return table_.front().second;
  if (phi_quanta >= table_.back().first) return table_.back().second;
  const auto hi = std::upper_bound(
      table_.begin(), table_.end(), phi_quanta,
      [](double x, const auto& p) { return x < p.first; });
  const auto lo = hi - 1;
  const double f = (phi_quanta - lo->first) / (hi->first - lo->first);
  return lo->second + f * (hi->second - lo->second);
}

std::vector<CurvePoint> t2_star_curve(const TransmonDispersion& disp,
                                      const DephasingParams& params,
                                      const Gamma1Source& gamma1,
                                      std::span<const double> phi_grid,
                                      unsigned threads) {
  std::vector<CurvePoint> curve(phi_grid.size());
  parallel_for(phi_grid.size(), threads, [&](std::size_t i) {
    CurvePoint& p = curve[i];
    p.phi_quanta = phi_grid[i];
    try {
      DephasingParams local = params;
      local.gamma1 = gamma1.rate(i, phi_grid[i]);
      const FluxSensitivity s =
          d1_d2(disp, Flux::quanta(phi_grid[i]), FluxUnit::FluxQuantum);
      const std::optional<double> t = t2_star(s, local);
      if (t) {
        p.status = CurvePoint::Status::Finite;
        p.t2_star = *t;
      } else {
        p.status = CurvePoint::Status::Unbounded;
      }
    } catch (const Error& e) {
      p.status = CurvePoint::Status::Failed;
      p.error = e.what();
    }
  });
  return curve;
}

}  // namespace fluxnoise
