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

#ifndef FLUXNOISE_QUADRATURE_HPP
#define FLUXNOISE_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <span>

namespace fluxnoise {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  std::size_t panels = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration over consecutive
/// panels [b0, b1], [b1, b2], ... The panel with the largest error estimate
/// is bisected until the summed error drops below
/// max(abs_tol, rel_tol * |value|) or `max_panels` is reached.
QuadratureResult integrate_panels(const std::function<double(double)>& f,
                                  std::span<const double> breakpoints,
                                  double rel_tol, double abs_tol,
                                  std::size_t max_panels);

}  // namespace fluxnoise

#endif  // FLUXNOISE_QUADRATURE_HPP
