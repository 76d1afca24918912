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

#include "fluxnoise/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>
#include <vector>

namespace fluxnoise {

namespace {

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

struct ByError {
  bool operator()(const Panel& lhs, const Panel& rhs) const {
    return lhs.error < rhs.error;
  }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a,
                     double b) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  using Gauss = boost::math::quadrature::gauss<double, 7>;
  static const auto& kronrod_x = Rule::abscissa();
  static const auto& kronrod_w = Rule::weights();
  static const auto& gauss_w = Gauss::weights();

  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  // Abscissae are the non-negative half; odd indices are Kronrod-only nodes.
  const double f0 = f(mid);
  double kronrod = kronrod_w[0] * f0;
  double gauss = gauss_w[0] * f0;
  for (std::size_t i = 1; i < kronrod_x.size(); ++i) {
    const double dx = half * kronrod_x[i];
    const double pair = f(mid - dx) + f(mid + dx);
    kronrod += kronrod_w[i] * pair;
    if (i % 2 == 0) gauss += gauss_w[i / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate_panels(const std::function<double(double)>& f,
                                  std::span<const double> breakpoints,
                                  double rel_tol, double abs_tol,
                                  std::size_t max_panels) {
  QuadratureResult result;
  if (breakpoints.size() < 2) {
    result.converged = true;
    return result;
  }
  std::vector<Panel> storage;
  storage.reserve(2 * breakpoints.size());
  std::priority_queue<Panel, std::vector<Panel>, ByError> queue(ByError{},
                                                                 std::move(storage));
  double value = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    Panel p = evaluate_panel(f, breakpoints[i], breakpoints[i + 1]);
    value += p.value;
    error += p.error;
    queue.push(p);
  }
  std::size_t evaluations = 15 * queue.size();

  auto target = [&] { return std::max(abs_tol, rel_tol * std::abs(value)); };
  while (error > target() && queue.size() < max_panels) {
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel can no longer be split in floating point.
      queue.push(worst);
      break;
    }
    Panel left = evaluate_panel(f, worst.a, mid);
    Panel right = evaluate_panel(f, mid, worst.b);
    evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }

  // Re-sum from the panels so the reported value carries no drift from the
  // incremental updates.
  double resummed_value = 0.0;
  double resummed_error = 0.0;
  result.panels = queue.size();
  while (!queue.empty()) {
    resummed_value += queue.top().value;
    resummed_error += queue.top().error;
    queue.pop();
  }
  result.value = resummed_value;
  result.error = resummed_error;
  result.evaluations = evaluations;
  result.converged =
      resummed_error <= std::max(abs_tol, rel_tol * std::abs(resummed_value));
  return result;
}

}  // namespace fluxnoise
