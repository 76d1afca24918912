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

#include "fluxnoise/montecarlo.hpp"

#include <fftw3.h>

#include <algorithm>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include "fluxnoise/errors.hpp"
#include "fluxnoise/parallel.hpp"

namespace fluxnoise {

namespace {

using cplx = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
struct PlanDestroy {
  void operator()(fftw_plan p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDestroy>;

template <typename T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t count) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
  if (!p) throw std::bad_alloc();
  return std::unique_ptr<T[], FftwFree>(p);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct NeumaierSum {
  double sum = 0.0;
  double compensation = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      compensation += (sum - t) + v;
    else
      compensation += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + compensation; }
};

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

// Discrete modes (mx, my) = q L / 2 pi kept in the synthesis: the upper half
// plane (mx > 0, or mx == 0 and my >= 0) inside |q| xi <= kModeCutoff.
// Index 0 is the zero mode; every other entry stands for the pair (q, -q).
struct ModeWindow {
  int m_max = 0;
  std::vector<int> mx;
  std::vector<int> my;
  std::vector<double> amplitude;  // sqrt(L^2 S / 2); sqrt(L^2 S) for q = 0
};

ModeWindow make_window(const NoiseSpectrum& spec, double extent, std::size_t n) {
  const double xi = spec.correlation_length();
  const double m_radius = kModeCutoff * extent / (kTwoPi * xi);
  ModeWindow w;
  w.m_max = static_cast<int>(std::floor(m_radius));
  if (w.m_max >= static_cast<int>(n / 2))
    throw ConfigError("grid spacing too coarse for the mode window");
  const double r2 = m_radius * m_radius;
  const double dq = kTwoPi / extent;
  auto push = [&](int x, int y) {
    const double s = spectrum_at(spec, dq * std::hypot(double(x), double(y)));
    w.mx.push_back(x);
    w.my.push_back(y);
    w.amplitude.push_back(x == 0 && y == 0 ? extent * std::sqrt(s)
                                           : extent * std::sqrt(0.5 * s));
  };
  push(0, 0);
  for (int y = 1; y <= w.m_max; ++y)
    if (double(y) * y <= r2) push(0, y);
  for (int x = 1; x <= w.m_max; ++x)
    for (int y = -w.m_max; y <= w.m_max; ++y)
      if (double(x) * x + double(y) * y <= r2) push(x, y);
  return w;
}

// Per-realization standard normals in window order: one for the zero mode,
// (real, imaginary) for every other mode.
class ModeDraws {
 public:
  explicit ModeDraws(std::uint64_t seed) : engine_(seed) {}
  double next() { return normal_(engine_); }

 private:
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_;
};

double kernel_cell_weight(const LoopGeometry& g, double cx, double cy,
                          double h, int supersample) {
  if (supersample <= 1) return kernel_real(g, {cx, cy});
  double sum = 0.0;
  for (int a = 0; a < supersample; ++a)
    for (int b = 0; b < supersample; ++b) {
      const double ox = ((a + 0.5) / supersample - 0.5) * h;
      const double oy = ((b + 0.5) / supersample - 0.5) * h;
      sum += kernel_real(g, {cx + ox, cy + oy});
    }
  return sum / double(supersample * supersample);
}

struct IndexRange {
  std::size_t lo = 0;
  std::size_t hi = 0;  // exclusive
};

IndexRange cell_range(double lo, double hi, double extent, std::size_t n) {
  const double h = extent / double(n);
  const double first = std::floor((lo + 0.5 * extent) / h) - 1.0;
  const double last = std::ceil((hi + 0.5 * extent) / h) + 1.0;
  IndexRange r;
  r.lo = static_cast<std::size_t>(std::clamp(first, 0.0, double(n)));
  r.hi = static_cast<std::size_t>(std::clamp(last, 0.0, double(n)));
  return r;
}

// K^(q) = sum_j K_j dA exp(-i q . r_j) at every window mode, computed by
// row FFTs over the kernel's bounding box followed by column FFTs for the
// kept mx only.
std::vector<cplx> kernel_spectrum(const LoopGeometry& g, const ModeWindow& w,
                                  double extent, std::size_t n,
                                  int supersample) {
  const double h = extent / double(n);
  const double half_x = 0.5 * g.separation() + g.outer_radius();
  const double half_y = g.outer_radius();
  const IndexRange xs = cell_range(-half_x, half_x, extent, n);
  const IndexRange ys = cell_range(-half_y, half_y, extent, n);
  const std::size_t rows = ys.hi - ys.lo;
  const std::size_t kept_x = static_cast<std::size_t>(w.m_max) + 1;
  const std::size_t half_n = n / 2 + 1;

  auto real_row = fftw_buffer<double>(n);
  auto row_out = fftw_buffer<fftw_complex>(half_n);
  auto column = fftw_buffer<fftw_complex>(n);
  auto column_out = fftw_buffer<fftw_complex>(n);
  Plan row_plan, column_plan;
  {
    std::lock_guard lock(planner_mutex());
    row_plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), real_row.get(),
                                        row_out.get(), FFTW_ESTIMATE));
    column_plan.reset(fftw_plan_dft_1d(static_cast<int>(n), column.get(),
                                       column_out.get(), FFTW_FORWARD,
                                       FFTW_ESTIMATE));
  }

  FieldGrid coords{extent, n, 0, {}};
  std::vector<cplx> partial(rows * kept_x);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t iy = ys.lo + r;
    std::fill(real_row.get(), real_row.get() + n, 0.0);
    for (std::size_t ix = xs.lo; ix < xs.hi; ++ix)
      real_row[ix] = kernel_cell_weight(g, coords.coordinate(ix),
                                        coords.coordinate(iy), h, supersample);
    fftw_execute(row_plan.get());
    for (std::size_t m = 0; m < kept_x; ++m)
      partial[r * kept_x + m] = {row_out[m][0], row_out[m][1]};
  }

  // Column transforms, keyed by mx: spectrum_by_x[mx][my mod n].
  std::vector<std::vector<cplx>> by_x(kept_x);
  for (std::size_t m = 0; m < kept_x; ++m) {
    std::fill(&column[0][0], &column[0][0] + 2 * n, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      column[ys.lo + r][0] = partial[r * kept_x + m].real();
      column[ys.lo + r][1] = partial[r * kept_x + m].imag();
    }
    fftw_execute(column_plan.get());
    by_x[m].resize(n);
    for (std::size_t k = 0; k < n; ++k)
      by_x[m][k] = {column_out[k][0], column_out[k][1]};
  }

  const double area = h * h;
  const double r0 = coords.coordinate(0);
  const double dq = kTwoPi / extent;
  std::vector<cplx> out(w.mx.size());
  for (std::size_t i = 0; i < w.mx.size(); ++i) {
    const int x = w.mx[i];
    const int y = w.my[i];
    const std::size_t yk = static_cast<std::size_t>((y % int(n) + int(n)) % int(n));
    const double phase = -dq * (double(x) + double(y)) * r0;
    out[i] = area * std::polar(1.0, phase) * by_x[std::size_t(x)][yk];
  }
  return out;
}

// Linear map from the realization's normals to Phi.
struct FluxProjection {
  double zero = 0.0;
  std::vector<double> re;  // weights of the real-part normals
  std::vector<double> im;  // weights of the imaginary-part normals
};

FluxProjection project(const ModeWindow& w, const std::vector<cplx>& khat,
                       double extent) {
  const double inv_area = 1.0 / (extent * extent);
  FluxProjection p;
  p.zero = w.amplitude[0] * khat[0].real() * inv_area;
  p.re.resize(w.mx.size() - 1);
  p.im.resize(w.mx.size() - 1);
  for (std::size_t i = 1; i < w.mx.size(); ++i) {
    // (2 / L^2) Re(a_q conj(K^_q)) with a_q = A (g1 + i g2).
    const double scale = 2.0 * w.amplitude[i] * inv_area;
    p.re[i - 1] = scale * khat[i].real();
    p.im[i - 1] = scale * khat[i].imag();
  }
  return p;
}

McEstimate summarize(std::vector<double> samples, bool keep) {
  McEstimate e;
  e.n_realizations = samples.size();
  NeumaierSum sum;
  for (double phi : samples) sum.add(phi * phi);
  e.mean_sq = sum.value() / double(samples.size());
  NeumaierSum dev;
  for (double phi : samples) {
    const double d = phi * phi - e.mean_sq;
    dev.add(d * d);
  }
  const double var = dev.value() / double(samples.size() - 1);
  e.std_error = std::sqrt(var / double(samples.size()));
  if (keep) e.samples = std::move(samples);
  return e;
}

}  // namespace

double FieldGrid::coordinate(std::size_t i) const {
  const double h = spacing();
  return -0.5 * extent + (double(i) + 0.5) * h;
}

std::uint64_t realization_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(splitmix64(base) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

FieldGrid synthesize_field(const NoiseSpectrum& spec, double extent,
                           std::size_t n, std::uint64_t seed) {
  if (spec.kind() != SpectrumKind::GaussianCorrelated)
    throw UnsupportedError("field synthesis needs a Gaussian-correlated spectrum");
  if (!is_power_of_two(n)) throw ConfigError("points_per_side must be a power of two");
  if (!(extent > 0.0)) throw ConfigError("extent must be positive");

  const ModeWindow w = make_window(spec, extent, n);
  const std::size_t half_n = n / 2 + 1;
  auto coeffs = fftw_buffer<fftw_complex>(n * half_n);
  FieldGrid field{extent, n, seed, std::vector<double>(n * n)};
  auto out = fftw_buffer<double>(n * n);
  std::fill(&coeffs[0][0], &coeffs[0][0] + 2 * n * half_n, 0.0);

  const double inv_area = 1.0 / (extent * extent);
  const double r0 = field.coordinate(0);
  const double dq = kTwoPi / extent;
  ModeDraws draws(seed);
  auto store = [&](int x, int y, cplx c) {
    const std::size_t yk = static_cast<std::size_t>((y % int(n) + int(n)) % int(n));
    coeffs[yk * half_n + std::size_t(x)][0] = c.real();
    coeffs[yk * half_n + std::size_t(x)][1] = c.imag();
  };
  store(0, 0, w.amplitude[0] * draws.next() * inv_area);
  for (std::size_t i = 1; i < w.mx.size(); ++i) {
    const double g1 = draws.next();
    const double g2 = draws.next();
    const cplx a = w.amplitude[i] * cplx(g1, g2);
    const cplx c =
        a * std::polar(1.0, dq * (double(w.mx[i]) + double(w.my[i])) * r0) *
        inv_area;
    store(w.mx[i], w.my[i], c);
    if (w.mx[i] == 0) store(0, -w.my[i], std::conj(c));
  }
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_c2r_2d(static_cast<int>(n), static_cast<int>(n),
                                    coeffs.get(), out.get(), FFTW_ESTIMATE));
  }
  fftw_execute(plan.get());
  std::copy(out.get(), out.get() + n * n, field.values.begin());
  return field;
}

std::vector<double> rasterize_kernel(const LoopGeometry& g, double extent,
                                     std::size_t n, int supersample) {
  FieldGrid coords{extent, n, 0, {}};
  const double h = coords.spacing();
  std::vector<double> k(n * n, 0.0);
  const double half_x = 0.5 * g.separation() + g.outer_radius();
  const IndexRange xs = cell_range(-half_x, half_x, extent, n);
  const IndexRange ys = cell_range(-g.outer_radius(), g.outer_radius(), extent, n);
  for (std::size_t iy = ys.lo; iy < ys.hi; ++iy)
    for (std::size_t ix = xs.lo; ix < xs.hi; ++ix)
      k[iy * n + ix] = kernel_cell_weight(g, coords.coordinate(ix),
                                          coords.coordinate(iy), h, supersample);
  return k;
}

double flux_from_field(const LoopGeometry& g, const FieldGrid& field,
                       int supersample) {
  const std::vector<double> k =
      rasterize_kernel(g, field.extent, field.n, supersample);
  const double area = field.spacing() * field.spacing();
  NeumaierSum sum;
  for (std::size_t i = 0; i < k.size(); ++i)
    if (k[i] != 0.0) sum.add(k[i] * field.values[i]);
  return sum.value() * area;
}

void validate_grid(const LoopGeometry& g, const NoiseSpectrum& spec,
                   double extent, std::size_t n) {
  if (spec.kind() != SpectrumKind::GaussianCorrelated)
    throw UnsupportedError("Monte Carlo needs a Gaussian-correlated spectrum");
  if (!is_power_of_two(n)) {
    std::ostringstream os;
    os << "points_per_side = " << n << " must be a power of two";
    throw ConfigError(os.str());
  }
  const double xi = spec.correlation_length();
  const double support = 2.0 * g.ring_radius() + g.separation();
  const double min_extent = 8.0 * std::max(support, xi);
  if (!(extent >= min_extent)) {
    std::ostringstream os;
    os << "extent L = " << extent << " m violates L >= 8 max(2R + d, xi) = "
       << min_extent << " m";
    throw ConfigError(os.str());
  }
  const double max_spacing = std::min(g.annulus_width(), xi) / 4.0;
  const double spacing = extent / double(n);
  if (!(spacing <= max_spacing)) {
    std::ostringstream os;
    os << "grid spacing L/n = " << spacing
       << " m violates L/n <= min(w, xi)/4 = " << max_spacing << " m";
    throw ConfigError(os.str());
  }
}

GridSpec minimal_grid(const LoopGeometry& g, const NoiseSpectrum& spec) {
  if (spec.kind() != SpectrumKind::GaussianCorrelated)
    throw UnsupportedError("Monte Carlo needs a Gaussian-correlated spectrum");
  const double xi = spec.correlation_length();
  GridSpec grid;
  grid.extent = 8.0 * std::max(2.0 * g.ring_radius() + g.separation(), xi);
  const double max_spacing = std::min(g.annulus_width(), xi) / 4.0;
  grid.n = 2;
  while (grid.extent / double(grid.n) > max_spacing) grid.n *= 2;
  return grid;
}

std::vector<McEstimate> mc_flux_variance(std::span<const LoopGeometry> geometries,
                                         const NoiseSpectrum& spec,
                                         double extent, std::size_t n,
                                         const McOptions& options) {
  for (const auto& g : geometries) validate_grid(g, spec, extent, n);
  if (options.realizations < 2)
    throw ConfigError("n_realizations must be >= 2");
  if (options.supersample < 1) throw ConfigError("supersample must be >= 1");

  const ModeWindow w = make_window(spec, extent, n);
  std::vector<FluxProjection> projections;
  projections.reserve(geometries.size());
  for (const auto& g : geometries)
    projections.push_back(
        project(w, kernel_spectrum(g, w, extent, n, options.supersample), extent));

  const std::size_t ng = geometries.size();
  const std::size_t modes = w.mx.size() - 1;
  std::vector<std::vector<double>> samples(ng,
                                           std::vector<double>(options.realizations));
  parallel_for(options.realizations, options.threads, [&](std::size_t r) {
    ModeDraws draws(realization_seed(options.seed, r));
    const double g0 = draws.next();
    std::vector<double> phi(ng);
    for (std::size_t k = 0; k < ng; ++k) phi[k] = projections[k].zero * g0;
    for (std::size_t i = 0; i < modes; ++i) {
      const double g1 = draws.next();
      const double g2 = draws.next();
      for (std::size_t k = 0; k < ng; ++k)
        phi[k] += g1 * projections[k].re[i] + g2 * projections[k].im[i];
    }
    for (std::size_t k = 0; k < ng; ++k) samples[k][r] = phi[k];
  });

  std::vector<McEstimate> out;
  out.reserve(ng);
  for (auto& s : samples) out.push_back(summarize(std::move(s), options.keep_samples));
  return out;
}

McEstimate mc_flux_variance(const LoopGeometry& geometry,
                            const NoiseSpectrum& spec, double extent,
                            std::size_t n, const McOptions& options) {
  return mc_flux_variance(std::span<const LoopGeometry>(&geometry, 1), spec,
                          extent, n, options)
      .front();
}

}  // namespace fluxnoise
