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

#include "fluxnoise/geometry.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "fluxnoise/errors.hpp"

namespace fluxnoise {

namespace {

constexpr double kPi = std::numbers::pi;

bool in_annulus(const LoopGeometry& g, double dx, double dy) {
  const double rho = std::hypot(dx, dy);
  return rho >= g.inner_radius() && rho <= g.outer_radius();
}

}  // namespace

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

std::string_view to_string(LoopKind kind) {
  switch (kind) {
    case LoopKind::SingleRing:
      return "single_ring";
    case LoopKind::GradiometricPair:
      return "gradiometric_pair";
  }
  return "?";
}

LoopKind parse_loop_kind(std::string_view text) {
  if (text == "single_ring" || text == "xmon") return LoopKind::SingleRing;
  if (text == "gradiometric_pair" || text == "8mon")
    return LoopKind::GradiometricPair;
  throw ParameterDomainError("unknown geometry kind '" + std::string(text) +
                             "' (expected single_ring or gradiometric_pair)");
}

LoopGeometry::LoopGeometry(LoopKind kind, double ring_radius,
                           double annulus_width, double separation,
                           double coupling_amplitude)
    : kind_(kind),
      ring_radius_(ring_radius),
      annulus_width_(annulus_width),
      separation_(separation),
      coupling_amplitude_(coupling_amplitude) {
  auto fail = [](const std::string& field, const std::string& rule,
                 double value) {
    std::ostringstream os;
    os << field << " = " << value << " violates " << rule;
    throw ParameterDomainError(os.str());
  };
  if (!(ring_radius_ > 0.0) || !std::isfinite(ring_radius_))
    fail("ring_radius", "R > 0", ring_radius_);
  if (!(annulus_width_ > 0.0) || !(annulus_width_ < 2.0 * ring_radius_))
    fail("annulus_width", "0 < w < 2R", annulus_width_);
  if (!(separation_ >= 0.0) || !std::isfinite(separation_))
    fail("separation", "d >= 0", separation_);
  if (!(coupling_amplitude_ > 0.0) || !std::isfinite(coupling_amplitude_))
    fail("coupling_amplitude", "amplitude > 0", coupling_amplitude_);
}

LoopGeometry LoopGeometry::single_ring(double ring_radius,
                                       double annulus_width,
                                       double coupling_amplitude) {
  return {LoopKind::SingleRing, ring_radius, annulus_width, 0.0,
          coupling_amplitude};
}

LoopGeometry LoopGeometry::gradiometric_pair(double ring_radius,
                                             double annulus_width,
                                             double separation,
                                             double coupling_amplitude) {
  return {LoopKind::GradiometricPair, ring_radius, annulus_width, separation,
          coupling_amplitude};
}

double LoopGeometry::annulus_area() const {
  return 2.0 * kPi * ring_radius_ * annulus_width_;
}

double LoopGeometry::support_diameter() const {
  return 2.0 * outer_radius() + separation_;
}

LoopGeometry LoopGeometry::single_ring_equivalent() const {
  return single_ring(ring_radius_, annulus_width_, coupling_amplitude_);
}

double kernel_real(const LoopGeometry& g, Vec2 r) {
  if (g.kind() == LoopKind::SingleRing)
    return in_annulus(g, r.x, r.y) ? g.coupling_amplitude() : 0.0;
  const double half = 0.5 * g.separation();
  double value = 0.0;
  if (in_annulus(g, r.x + half, r.y)) value += g.coupling_amplitude();
  if (in_annulus(g, r.x - half, r.y)) value -= g.coupling_amplitude();
  return value;
}

double j1_over_x(double x) {
  x = std::abs(x);
  if (x < 1e-2) {
    const double x2 = x * x;
    return 0.5 + x2 * (-1.0 / 16.0 + x2 * (1.0 / 384.0 - x2 / 18432.0));
  }
  return boost::math::cyl_bessel_j(1, x) / x;
}

double one_minus_j0(double x) {
  x = std::abs(x);
  if (x < 0.1) {
    const double x2 = x * x;
    return x2 * (0.25 + x2 * (-1.0 / 64.0 + x2 * (1.0 / 2304.0 - x2 / 147456.0)));
  }
  return 1.0 - boost::math::cyl_bessel_j(0, x);
}

double ring_transform(const LoopGeometry& g, double k) {
  const double r1 = g.inner_radius();
  const double r2 = g.outer_radius();
  // 2 pi [R2 J1(k R2) - R1 J1(k R1)] / k, written via J1(x)/x so k = 0 is exact.
  return g.coupling_amplitude() * 2.0 * kPi *
         (r2 * r2 * j1_over_x(k * r2) - r1 * r1 * j1_over_x(k * r1));
}

double kernel_fourier_sq(const LoopGeometry& g, Vec2 k) {
  const double ring = ring_transform(g, norm(k));
  const double ring_sq = ring * ring;
  if (g.kind() == LoopKind::SingleRing) return ring_sq;
  const double s = std::sin(0.5 * k.x * g.separation());
  return 4.0 * ring_sq * s * s;
}

double angular_average_filter(const LoopGeometry& g, double k) {
  const double ring = ring_transform(g, k);
  const double ring_sq = ring * ring;
  if (g.kind() == LoopKind::SingleRing) return ring_sq;
  // <sin^2(k d cos(theta) / 2)>_theta = (1 - J0(k d)) / 2.
  return 2.0 * ring_sq * one_minus_j0(k * g.separation());
}

}  // namespace fluxnoise
