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

#ifndef FLUXNOISE_GEOMETRY_HPP
#define FLUXNOISE_GEOMETRY_HPP

#include <string_view>

namespace fluxnoise {

/// In-plane position (m) or wavevector (1/m).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double norm(Vec2 v);

enum class LoopKind {
  SingleRing,        // conventional single SQUID loop
  GradiometricPair,  // two counter-wound rings, centers at (-d/2, 0), (+d/2, 0)
};

std::string_view to_string(LoopKind kind);
LoopKind parse_loop_kind(std::string_view text);

/// Idealized SQUID loop: one uniform-weight annulus of mean radius R and
/// width w, or two such annuli with opposite winding separated by d along x.
///
/// Instances are validated on construction and immutable afterwards.
class LoopGeometry {
 public:
  static LoopGeometry single_ring(double ring_radius, double annulus_width,
                                  double coupling_amplitude = 1.0);
  static LoopGeometry gradiometric_pair(double ring_radius,
                                        double annulus_width,
                                        double separation,
                                        double coupling_amplitude = 1.0);

  LoopKind kind() const { return kind_; }
  double ring_radius() const { return ring_radius_; }
  double annulus_width() const { return annulus_width_; }
  /// Zero for SingleRing.
  double separation() const { return separation_; }
  double coupling_amplitude() const { return coupling_amplitude_; }

  double inner_radius() const { return ring_radius_ - 0.5 * annulus_width_; }
  double outer_radius() const { return ring_radius_ + 0.5 * annulus_width_; }
  /// Area of one annulus, pi (R2^2 - R1^2) = 2 pi R w.
  double annulus_area() const;
  /// Diameter of the smallest disk centered at the origin holding the support.
  double support_diameter() const;

  /// The SingleRing with the same R, w and amplitude.
  LoopGeometry single_ring_equivalent() const;

 private:
  LoopGeometry(LoopKind kind, double ring_radius, double annulus_width,
               double separation, double coupling_amplitude);

  LoopKind kind_;
  double ring_radius_;
  double annulus_width_;
  double separation_;
  double coupling_amplitude_;
};

/// Real-space sensitivity kernel K(r): flux per unit magnetization per area.
double kernel_real(const LoopGeometry& geometry, Vec2 r);

/// Fourier transform of one annulus, K_ring(k) (real, isotropic).
double ring_transform(const LoopGeometry& geometry, double k);

/// |K(k)|^2 at a 2D wavevector.
double kernel_fourier_sq(const LoopGeometry& geometry, Vec2 k);

/// (1/2pi) \int_0^{2pi} |K(k, theta)|^2 dtheta.
double angular_average_filter(const LoopGeometry& geometry, double k);

/// J1(x)/x, accurate down to x = 0.
double j1_over_x(double x);
/// 1 - J0(x) without cancellation at small x.
double one_minus_j0(double x);

}  // namespace fluxnoise

#endif  // FLUXNOISE_GEOMETRY_HPP
