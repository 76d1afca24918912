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

#include "fluxnoise/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "fluxnoise/artifacts.hpp"
#include "fluxnoise/config.hpp"
#include "fluxnoise/dataset.hpp"
#include "fluxnoise/errors.hpp"
#include "fluxnoise/fit.hpp"
#include "fluxnoise/montecarlo.hpp"
#include "fluxnoise/parallel.hpp"
#include "fluxnoise/ramsey.hpp"
#include "fluxnoise/transmon.hpp"
#include "fluxnoise/variance.hpp"

namespace fluxnoise {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  int threads = -1;
};

struct Context {
  RunConfig config;
  std::string command;
  std::ostream& out;
  std::ostream& err;

  fs::path artifact(const std::string& name) const {
    return fs::path(config.output.directory) / (config.output.prefix + name);
  }
  unsigned threads() const { return config.threads; }
};

Metadata base_metadata(const Context& ctx) {
  Metadata m;
  m.set("tool", "fluxnoise");
  m.set("tool_version", std::string(kToolVersion));
  m.set("command", ctx.command);
  m.set("config_hash", hash_hex(ctx.config.hash));
  m.set("seed", std::to_string(ctx.config.mc.seed));
  m.set("flux_unit", "Phi0");
  std::string defaults;
  for (const auto& d : ctx.config.defaults_applied) {
    if (!defaults.empty()) defaults += ';';
    defaults += d;
  }
  m.set("defaults_applied", defaults.empty() ? std::string("none") : defaults);
  return m;
}

ordered_json metadata_json(const Context& ctx, const Metadata& m) {
  ordered_json j;
  for (const auto& [k, v] : m.entries())
    if (k != "defaults_applied") j[k] = v;
  j["defaults_applied"] = ctx.config.defaults_applied;
  j["resolved_config"] = ordered_json::parse(ctx.config.canonical);
  return j;
}

void write_csv(const Context& ctx, const std::string& name, const CsvTable& table,
               const Metadata& meta) {
  const fs::path p = ctx.artifact(name);
  write_file_atomic(p, table.render(meta));
  ctx.out << "wrote " << p.string() << " (" << table.rows() << " rows)\n";
}

void write_json(const Context& ctx, const std::string& name, const ordered_json& j) {
  const fs::path p = ctx.artifact(name);
  write_file_atomic(p, j.dump(2) + "\n");
  ctx.out << "wrote " << p.string() << "\n";
}

std::string join_failures(const std::vector<std::string>& failures) {
  std::string s;
  for (const auto& f : failures) s += "  " + f + "\n";
  return s;
}

int report_failures(const Context& ctx, const std::vector<std::string>& failures) {
  if (failures.empty()) return kExitOk;
  ctx.err << "error: " << failures.size() << " point(s) failed:\n"
          << join_failures(failures);
  return kExitNumerical;
}

int cmd_variance(Context& ctx) {
  const RunConfig& c = ctx.config;
  CsvTable table({"xi_m", "variance", "quad_err", "regime"});
  std::vector<std::string> failures;
  if (c.spectrum.kind() == SpectrumKind::White) {
    const VarianceResult r = flux_variance(c.geometry, c.spectrum);
    table.add_row({"0", format_double(r.value), format_double(r.estimated_quadrature_error),
                   std::string(to_string(r.regime))});
  } else {
    const auto grid = log_grid(c.xi_grid.min, c.xi_grid.max, c.xi_grid.points);
    const auto sweep =
        variance_sweep(c.geometry, grid, c.spectrum.amplitude(), {}, ctx.threads());
    for (const auto& p : sweep) {
      if (p.result) {
        table.add_row({format_double(p.correlation_length), format_double(p.result->value),
                       format_double(p.result->estimated_quadrature_error),
                       std::string(to_string(p.result->regime))});
      } else {
        table.add_row({format_double(p.correlation_length), "nan", "nan", "failed"});
        failures.push_back("xi = " + format_double(p.correlation_length) + " m: " + p.error);
      }
    }
  }
  Metadata meta = base_metadata(ctx);
  meta.set("geometry", std::string(to_string(c.geometry.kind())));
  meta.set("spectrum", std::string(to_string(c.spectrum.kind())));
  meta.set("variance_unit", "Wb^2");
  write_csv(ctx, "variance.csv", table, meta);
  return report_failures(ctx, failures);
}

struct SuppressionArgs {
  std::optional<double> xi_min, xi_max;
  std::optional<std::size_t> points;
};

int cmd_suppression(Context& ctx, const SuppressionArgs& a) {
  const RunConfig& c = ctx.config;
  if (c.geometry.kind() != LoopKind::GradiometricPair)
    throw ConfigError("suppression needs geometry.kind = gradiometric_pair");
  if (c.spectrum.kind() != SpectrumKind::GaussianCorrelated)
    throw UnsupportedError("suppression sweeps need a gaussian spectrum");
  const double lo = a.xi_min.value_or(c.xi_grid.min);
  const double hi = a.xi_max.value_or(c.xi_grid.max);
  const std::size_t n = a.points.value_or(c.xi_grid.points);
  if (!(lo > 0.0) || !(hi > lo)) throw ConfigError("--xi-min/--xi-max must satisfy 0 < min < max");
  if (n < 2) throw ConfigError("--points must be at least 2");
  const auto grid = log_grid(lo, hi, n);

  std::vector<double> s(n, std::nan(""));
  std::vector<std::string> errors(n);
  parallel_for(n, ctx.threads(), [&](std::size_t i) {
    try {
      s[i] = suppression_factor(c.geometry, c.spectrum.with_correlation_length(grid[i]))
                 .s_factor;
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  CsvTable table({"xi_m", "s_factor"});
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < n; ++i) {
    table.add_row({format_double(grid[i]), format_double(s[i])});
    if (!errors[i].empty())
      failures.push_back("xi = " + format_double(grid[i]) + " m: " + errors[i]);
  }
  Metadata meta = base_metadata(ctx);
  meta.set("xi_min_m", lo);
  meta.set("xi_max_m", hi);
  meta.set("points", std::to_string(n));
  write_csv(ctx, "suppression.csv", table, meta);
  return report_failures(ctx, failures);
}

int cmd_spectrum_curve(Context& ctx) {
  const RunConfig& c = ctx.config;
  CsvTable table({"phi_over_phi0", "f01_hz"});
  for (double phi : c.bias.values())
    table.add_row(std::vector<double>{phi, transition_frequency(c.transmon, Flux::quanta(phi))});
  Metadata meta = base_metadata(ctx);
  meta.set("ej_hz", c.transmon.ej_over_h);
  meta.set("ec_hz", c.transmon.ec_over_h);
  write_csv(ctx, "spectrum_curve.csv", table, meta);
  return kExitOk;
}

int cmd_ramsey(Context& ctx) {
  const RunConfig& c = ctx.config;
  const double phi = c.ramsey.phi_bias;
  const FluxSensitivity s = d1_d2(c.transmon, Flux::quanta(phi), FluxUnit::FluxQuantum);
  DephasingParams params = c.dephasing;
  params.gamma1 = c.gamma1.rate(0, phi);
  CsvTable table({"t_s", "envelope"});
  for (std::size_t i = 0; i < c.ramsey.points; ++i) {
    const double t = c.ramsey.t_max * double(i) / double(c.ramsey.points - 1);
    table.add_row(std::vector<double>{t, total_envelope(s, params, t)});
  }
  Metadata meta = base_metadata(ctx);
  meta.set("phi_bias_phi0", phi);
  meta.set("d1_rad_per_s_phi0", s.d1);
  meta.set("d2_rad_per_s_phi0sq", s.d2);
  meta.set("gamma1_per_s", params.gamma1);
  const auto t2 = t2_star(s, params);
  meta.set("t2_star_s", t2 ? *t2 : INFINITY);
  write_csv(ctx, "ramsey.csv", table, meta);
  return kExitOk;
}

int cmd_t2star_curve(Context& ctx) {
  const RunConfig& c = ctx.config;
  const auto grid = c.bias.values();
  const auto curve = t2_star_curve(c.transmon, c.dephasing, c.gamma1, grid, ctx.threads());
  CsvTable table({"phi_over_phi0", "t2_star_s"});
  std::vector<std::string> failures;
  for (const auto& p : curve) {
    std::string v;
    switch (p.status) {
      case CurvePoint::Status::Finite: v = format_double(p.t2_star); break;
      case CurvePoint::Status::Unbounded: v = "inf"; break;
      case CurvePoint::Status::Failed:
        v = "nan";
        failures.push_back("phi = " + format_double(p.phi_quanta) + ": " + p.error);
        break;
    }
    table.add_row({format_double(p.phi_quanta), v});
  }
  Metadata meta = base_metadata(ctx);
  meta.set("sigma_phi_phi0", c.dephasing.sigma_phi.in_quanta());
  meta.set("gamma0_per_s", c.dephasing.gamma0);
  write_csv(ctx, "t2star_curve.csv", table, meta);
  return report_failures(ctx, failures);
}

// Gamma1 at each point: 1/t1 where the dataset has it, else the config source.
Gamma1Source dataset_gamma1(const T2StarDataset& data, const Gamma1Source& config) {
  std::vector<double> rates(data.points.size());
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const auto& p = data.points[i];
    rates[i] = p.t1_us ? 1.0 / (*p.t1_us * 1e-6) : config.rate(i, p.phi_bias);
  }
  return Gamma1Source::per_point(std::move(rates));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_fit(Context& ctx, const std::string& data_path, bool two_param) {
  const RunConfig& c = ctx.config;
  const T2StarDataset data = load_dataset(data_path, c.calibration);
  const Gamma1Source g1 = dataset_gamma1(data, c.gamma1);
  FitOptions options = c.fit.options;
  options.threads = ctx.threads();
  const auto sigma_grid = c.fit.sigma_grid();
  const FitOutcome fit =
      two_param ? fit_sigma_gamma0(data, c.transmon, g1, sigma_grid, c.fit.gamma0_grid(), options)
                : fit_sigma(data, c.transmon, g1, sigma_grid, options);

  Metadata meta = base_metadata(ctx);
  meta.set("mode", two_param ? "sigma_gamma0" : "sigma");
  meta.set("dataset_hash", hash_hex(fnv1a64(read_file(data_path))));
  meta.set("dataset_points", std::to_string(data.points.size()));
  if (!data.device_label.empty()) meta.set("device_label", data.device_label);

  CsvTable table({"sigma_phi", "gamma0", "err", "log10_err"});
  for (const auto& cell : fit.landscape)
    table.add_row(std::vector<double>{cell.sigma_phi, cell.gamma0, cell.err,
                                      std::log10(cell.err)});

  ordered_json j;
  j["sigma_phi_hat"] = fit.sigma_phi_hat;
  j["gamma0_hat"] = fit.gamma0_hat ? ordered_json(*fit.gamma0_hat) : ordered_json(nullptr);
  j["err_min"] = fit.err_min;
  j["refined"] = fit.refined;
  j["boundary_flags"] = {{"sigma_low", fit.boundary.sigma_low},
                         {"sigma_high", fit.boundary.sigma_high},
                         {"gamma0_low", fit.boundary.gamma0_low},
                         {"gamma0_high", fit.boundary.gamma0_high}};
  j["refinement_iterations"] = fit.refinement_iterations;
  const LandscapeCell& best = fit.landscape.at(fit.best_cell);
  j["best_cell"] = {{"sigma_phi", best.sigma_phi}, {"gamma0", best.gamma0}, {"err", best.err}};
  j["capped_points"] = fit.capped_points;
  j["units"] = {{"sigma_phi", "Phi0"}, {"gamma0", "1/s"}, {"err", "s^2"}};
  j["metadata"] = metadata_json(ctx, meta);

  write_json(ctx, "fit_outcome.json", j);
  write_csv(ctx, "fit_landscape.csv", table, meta);
  if (fit.boundary.any())
    ctx.err << "warning: optimum lies on the edge of the search grid\n";
  return kExitOk;
}

int cmd_montecarlo(Context& ctx, bool samples_flag) {
  const RunConfig& c = ctx.config;
  if (c.spectrum.kind() != SpectrumKind::GaussianCorrelated)
    throw UnsupportedError("montecarlo needs spectrum.kind = gaussian");
  GridSpec grid = minimal_grid(c.geometry, c.spectrum);
  if (c.mc.extent) grid.extent = *c.mc.extent;
  if (c.mc.points_per_side) {
    grid.n = *c.mc.points_per_side;
  } else if (c.mc.extent) {
    const double max_h = std::min(c.geometry.annulus_width(), c.spectrum.correlation_length()) / 4;
    grid.n = 2;
    while (grid.extent / double(grid.n) > max_h) grid.n *= 2;
  }
  validate_grid(c.geometry, c.spectrum, grid.extent, grid.n);
  const bool keep = samples_flag || c.mc.write_samples;
  McOptions opt;
  opt.realizations = c.mc.realizations;
  opt.seed = c.mc.seed;
  opt.supersample = c.mc.supersample;
  opt.keep_samples = keep;
  opt.threads = ctx.threads();
  const McEstimate est = mc_flux_variance(c.geometry, c.spectrum, grid.extent, grid.n, opt);
  const VarianceResult analytic = flux_variance(c.geometry, c.spectrum);

  Metadata meta = base_metadata(ctx);
  meta.set("extent_m", grid.extent);
  meta.set("points_per_side", std::to_string(grid.n));
  meta.set("supersample", std::to_string(opt.supersample));

  ordered_json j;
  j["mean_sq"] = est.mean_sq;
  j["std_error"] = est.std_error;
  j["n_realizations"] = est.n_realizations;
  j["analytic_variance"] = analytic.value;
  j["z_score"] = est.std_error > 0 ? (est.mean_sq - analytic.value) / est.std_error : 0.0;
  j["extent_m"] = grid.extent;
  j["points_per_side"] = grid.n;
  j["units"] = {{"mean_sq", "Wb^2"}, {"std_error", "Wb^2"}};
  j["metadata"] = metadata_json(ctx, meta);
  write_json(ctx, "montecarlo.json", j);
  if (keep) {
    CsvTable table({"realization", "phi_wb"});
    for (std::size_t i = 0; i < est.samples.size(); ++i)
      table.add_row({std::to_string(i), format_double(est.samples[i])});
    write_csv(ctx, "montecarlo_samples.csv", table, meta);
  }
  return kExitOk;
}

int cmd_validate(Context& ctx, const std::string& data_path) {
  const RunConfig& c = ctx.config;
  ctx.out << "config ok, hash " << hash_hex(c.hash) << "\n";
  for (const auto& d : c.defaults_applied) ctx.out << "  default " << d << "\n";
  if (!data_path.empty()) {
    const T2StarDataset data = load_dataset(data_path, c.calibration);
    data.validate(1);
    ctx.out << "dataset ok, " << data.points.size() << " points\n";
  }
  return kExitOk;
}

int exit_code_for(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::Config: return kExitConfig;
    case ErrorCategory::Data: return kExitData;
    case ErrorCategory::Numerical: return kExitNumerical;
  }
  return kExitUnexpected;
}

std::string_view category_name(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::Config: return "configuration error";
    case ErrorCategory::Data: return "data error";
    case ErrorCategory::Numerical: return "numerical error";
  }
  return "error";
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"Flux-noise modelling for single and gradiometric SQUID loops"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  CommonOptions common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config,-c", common.config_path, "YAML run configuration");
    sub->add_option("--out,-o", common.out_dir, "Output directory (overrides output.directory)");
    sub->add_option("--threads", common.threads, "Worker threads, 0 = all cores")
        ->check(CLI::NonNegativeNumber);
  };

  auto* variance = app.add_subcommand("variance", "Flux variance over the xi grid");
  add_common(variance);

  SuppressionArgs supp;
  auto* suppression = app.add_subcommand("suppression", "Suppression factor versus xi");
  add_common(suppression);
  suppression->add_option("--xi-min", supp.xi_min, "Smallest xi (m)");
  suppression->add_option("--xi-max", supp.xi_max, "Largest xi (m)");
  suppression->add_option("--points", supp.points, "Number of log-spaced points");

  auto* spectrum = app.add_subcommand("spectrum-curve", "Transition frequency versus bias");
  add_common(spectrum);
  auto* ramsey = app.add_subcommand("ramsey", "Ramsey envelope at one bias");
  add_common(ramsey);
  auto* t2curve = app.add_subcommand("t2star-curve", "T2* versus bias");
  add_common(t2curve);

  std::string data_path;
  bool two_param = false;
  auto* fit = app.add_subcommand("fit", "Fit sigma_phi (and gamma0) to a T2* dataset");
  add_common(fit);
  fit->add_option("--data,-d", data_path, "T2* dataset CSV")->required();
  fit->add_flag("--two-param", two_param, "Fit gamma0 as well");

  bool samples = false;
  auto* mc = app.add_subcommand("montecarlo", "Sampled flux variance on a field grid");
  add_common(mc);
  mc->add_flag("--samples", samples, "Also write per-realization flux samples");

  std::string validate_data;
  auto* validate = app.add_subcommand("validate", "Check a config and dataset");
  add_common(validate);
  validate->add_option("--data,-d", validate_data, "T2* dataset CSV");

  if (!args.empty() && !args.front().empty() && args.front().front() != '-') {
    const auto subs = app.get_subcommands([](CLI::App*) { return true; });
    const bool known = std::any_of(subs.begin(), subs.end(), [&](CLI::App* s) {
      return s->get_name() == args.front();
    });
    if (!known) {
      err << "configuration error: unknown subcommand '" << args.front() << "'\n";
      return kExitConfig;
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    RunConfig config =
        common.config_path.empty() ? default_config() : load_config(common.config_path);
    if (!common.out_dir.empty()) config.output.directory = common.out_dir;
    if (common.threads >= 0) config.threads = static_cast<unsigned>(common.threads);
    Context ctx{std::move(config), chosen->get_name(), out, err};

    if (chosen == variance) return cmd_variance(ctx);
    if (chosen == suppression) return cmd_suppression(ctx, supp);
    if (chosen == spectrum) return cmd_spectrum_curve(ctx);
    if (chosen == ramsey) return cmd_ramsey(ctx);
    if (chosen == t2curve) return cmd_t2star_curve(ctx);
    if (chosen == fit) return cmd_fit(ctx, data_path, two_param);
    if (chosen == mc) return cmd_montecarlo(ctx, samples);
    if (chosen == validate) return cmd_validate(ctx, validate_data);
  } catch (const ConvergenceError& e) {
    err << "numerical error: " << e.what() << " (partial value " << e.partial_value()
        << ", error estimate " << e.partial_error() << ")\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << category_name(e) << ": " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnexpected;
  }
  return kExitUnexpected;
}

}  // namespace fluxnoise
