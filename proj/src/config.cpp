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

#include "fluxnoise/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <json.hpp>
#include <set>
#include <sstream>

#include "fluxnoise/artifacts.hpp"
#include "fluxnoise/errors.hpp"
#include "fluxnoise/montecarlo.hpp"
#include "fluxnoise/variance.hpp"

namespace fluxnoise {

namespace {

std::string where(const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) return {};
  std::ostringstream os;
  os << " (line " << m.line + 1 << ", column " << m.column + 1 << ")";
  return os.str();
}

// One mapping of the document. Absent sections behave as empty mappings.
class Section {
 public:
  Section(YAML::Node node, std::string name, std::vector<std::string>& defaults)
      : node_(std::move(node)), name_(std::move(name)), defaults_(defaults) {
    if (node_ && !node_.IsNull() && !node_.IsMap())
      throw ConfigError("section '" + name_ + "' must be a mapping" + where(node_));
  }

  void allow(std::initializer_list<std::string_view> keys) const {
    if (!present()) return;
    const std::set<std::string_view> ok(keys);
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!ok.count(key))
        throw ConfigError("unknown key '" + key + "' in section '" + name_ + "'" +
                          where(kv.first));
    }
  }

  bool present() const { return node_ && node_.IsMap(); }
  bool has(const std::string& key) const { return present() && node_[key]; }
  YAML::Node raw(const std::string& key) const { return node_[key]; }
  std::string path(const std::string& key) const {
    return name_.empty() ? key : name_ + "." + key;
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) {
      note_default(key, format_double(fallback));
      return fallback;
    }
    return scalar_number(key);
  }

  std::optional<double> optional_number(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return scalar_number(key);
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    if (!has(key)) {
      note_default(key, std::to_string(fallback));
      return fallback;
    }
    return scalar_count(key);
  }

  std::optional<std::size_t> optional_count(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return scalar_count(key);
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) {
      note_default(key, fallback.empty() ? "\"\"" : fallback);
      return fallback;
    }
    const YAML::Node n = node_[key];
    if (!n.IsScalar())
      throw ConfigError(path(key) + ": expected a string" + where(n));
    return n.as<std::string>();
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) {
      note_default(key, fallback ? "true" : "false");
      return fallback;
    }
    const YAML::Node n = node_[key];
    try {
      return n.as<bool>();
    } catch (const YAML::Exception&) {
      throw ConfigError(path(key) + ": expected true or false" + where(n));
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    const std::string loc = has(key) ? where(node_[key]) : std::string();
    throw ConfigError(path(key) + ": " + why + loc);
  }

  void note_default(const std::string& key, const std::string& value) {
    defaults_.push_back(path(key) + "=" + value);
  }

 private:
  double scalar_number(const std::string& key) const {
    const YAML::Node n = node_[key];
    double v = 0.0;
    try {
      if (!n.IsScalar()) throw YAML::Exception(n.Mark(), "not a scalar");
      v = n.as<double>();
    } catch (const YAML::Exception&) {
      throw ConfigError(path(key) + ": expected a number" + where(n));
    }
    if (!std::isfinite(v)) throw ConfigError(path(key) + ": must be finite" + where(n));
    return v;
  }

  std::size_t scalar_count(const std::string& key) const {
    const YAML::Node n = node_[key];
    const double v = scalar_number(key);
    if (v < 0 || v != std::floor(v) || v > 9.0e15)
      throw ConfigError(path(key) + ": expected a non-negative integer" + where(n));
    return static_cast<std::size_t>(v);
  }

  YAML::Node node_;
  std::string name_;
  std::vector<std::string>& defaults_;
};

void require(bool ok, Section& s, const std::string& key, const std::string& why) {
  if (!ok) s.fail(key, why);
}

template <typename F>
auto rethrow_as_config(const std::string& context, F&& f) {
  try {
    return f();
  } catch (const ParameterDomainError& e) {
    throw ConfigError(context + ": " + e.what());
  }
}

bool power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

nlohmann::ordered_json canonical_json(const RunConfig& c) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["geometry"] = {{"kind", std::string(to_string(c.geometry.kind()))},
                   {"ring_radius_m", c.geometry.ring_radius()},
                   {"annulus_width_m", c.geometry.annulus_width()},
                   {"separation_m", c.geometry.separation()},
                   {"coupling_amplitude", c.geometry.coupling_amplitude()}};
  j["spectrum"] = {{"kind", std::string(to_string(c.spectrum.kind()))},
                   {"correlation_length_m", c.spectrum.correlation_length()},
                   {"amplitude", c.spectrum.amplitude()},
                   {"xi_grid",
                    {{"min_m", c.xi_grid.min},
                     {"max_m", c.xi_grid.max},
                     {"points", c.xi_grid.points}}}};
  j["transmon"] = {{"ej_hz", c.transmon.ej_over_h}, {"ec_hz", c.transmon.ec_over_h}};
  ordered_json deph = {{"sigma_phi_phi0", c.dephasing.sigma_phi.in_quanta()},
                       {"gamma0_per_s", c.dephasing.gamma0}};
  if (c.gamma1.kind() == Gamma1Source::Kind::Table) {
    ordered_json table = ordered_json::array();
    for (const auto& [phi, rate] : c.gamma1.table_points())
      table.push_back(ordered_json::array({phi, rate}));
    deph["gamma1_table"] = table;
  } else {
    deph["gamma1_per_s"] = c.gamma1.rate(0, 0.0);
  }
  j["dephasing"] = deph;
  j["bias"] = {{"min_phi0", c.bias.min}, {"max_phi0", c.bias.max},
               {"points", c.bias.points}};
  j["ramsey"] = {{"phi_bias_phi0", c.ramsey.phi_bias},
                 {"t_max_s", c.ramsey.t_max},
                 {"points", c.ramsey.points}};
  j["fit"] = {{"sigma_min_phi0", c.fit.sigma_min},
              {"sigma_max_phi0", c.fit.sigma_max},
              {"sigma_points", c.fit.sigma_points},
              {"gamma0_min_per_s", c.fit.gamma0_min},
              {"gamma0_max_per_s", c.fit.gamma0_max},
              {"gamma0_points", c.fit.gamma0_points},
              {"tolerance", c.fit.options.tolerance},
              {"max_iterations", c.fit.options.max_iterations}};
  ordered_json mc = {{"extent_m", nullptr},
                     {"points_per_side", nullptr},
                     {"realizations", c.mc.realizations},
                     {"seed", c.mc.seed},
                     {"supersample", c.mc.supersample},
                     {"write_samples", c.mc.write_samples}};
  if (c.mc.extent) mc["extent_m"] = *c.mc.extent;
  if (c.mc.points_per_side) mc["points_per_side"] = *c.mc.points_per_side;
  j["mc"] = mc;
  if (c.calibration)
    j["calibration"] = {{"slope", c.calibration->slope},
                        {"offset", c.calibration->offset}};
  else
    j["calibration"] = nullptr;
  return j;
}

}  // namespace

void BiasCalibration::validate() const {
  if (!std::isfinite(slope) || slope == 0.0)
    throw ConfigError("calibration.slope must be finite and nonzero");
  if (!std::isfinite(offset)) throw ConfigError("calibration.offset must be finite");
}

std::vector<double> BiasGrid::values() const {
  std::vector<double> v(points);
  for (std::size_t i = 0; i < points; ++i)
    v[i] = points == 1 ? min
                       : min + (max - min) * double(i) / double(points - 1);
  if (points > 1) v.back() = max;
  return v;
}

std::vector<double> FitConfig::sigma_grid() const {
  return log_grid(sigma_min, sigma_max, sigma_points);
}

std::vector<double> FitConfig::gamma0_grid() const {
  std::vector<double> v(gamma0_points);
  for (std::size_t i = 0; i < gamma0_points; ++i)
    v[i] = gamma0_min + (gamma0_max - gamma0_min) * double(i) / double(gamma0_points - 1);
  v.back() = gamma0_max;
  return v;
}

std::string hash_hex(std::uint64_t hash) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[hash & 0xf];
    hash >>= 4;
  }
  return s;
}

RunConfig parse_config(std::string_view text, std::string_view source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << source << ": parse error at line " << e.mark.line + 1 << ", column "
       << e.mark.column + 1 << ": " << e.msg;
    throw ConfigError(os.str());
  }
  if (root && !root.IsNull() && !root.IsMap())
    throw ConfigError(std::string(source) + ": top level must be a mapping");

  RunConfig c;
  auto& defaults = c.defaults_applied;
  Section top(root, "", defaults);
  top.allow({"geometry", "spectrum", "transmon", "dephasing", "bias", "ramsey",
             "fit", "mc", "output", "calibration", "threads"});
  auto section = [&](const char* name) {
    return Section(top.present() ? root[name] : YAML::Node(), name, defaults);
  };

  {
    Section s = section("geometry");
    s.allow({"kind", "ring_radius_m", "annulus_width_m", "separation_m",
             "coupling_amplitude"});
    const std::string kind_text = s.text("kind", "gradiometric_pair");
    LoopKind kind;
    try {
      kind = parse_loop_kind(kind_text);
    } catch (const Error&) {
      s.fail("kind", "unknown loop kind '" + kind_text + "'");
    }
    const double r = s.number("ring_radius_m", 5e-6);
    const double w = s.number("annulus_width_m", 1e-6);
    const double amp = s.number("coupling_amplitude", 1.0);
    if (kind == LoopKind::GradiometricPair) {
      const double d = s.number("separation_m", 11e-6);
      c.geometry = rethrow_as_config("geometry", [&] {
        return LoopGeometry::gradiometric_pair(r, w, d, amp);
      });
    } else {
      if (s.has("separation_m")) s.fail("separation_m", "only valid for kind gradiometric_pair");
      c.geometry = rethrow_as_config(
          "geometry", [&] { return LoopGeometry::single_ring(r, w, amp); });
    }
  }

  {
    Section s = section("spectrum");
    s.allow({"kind", "correlation_length_m", "amplitude", "xi_grid"});
    const std::string kind_text = s.text("kind", "gaussian");
    SpectrumKind kind;
    try {
      kind = parse_spectrum_kind(kind_text);
    } catch (const Error&) {
      s.fail("kind", "unknown spectrum kind '" + kind_text + "'");
    }
    const double amp = s.number("amplitude", 1.0);
    if (kind == SpectrumKind::GaussianCorrelated) {
      const double xi = s.number("correlation_length_m", 1e-6);
      c.spectrum = rethrow_as_config(
          "spectrum", [&] { return NoiseSpectrum::gaussian(xi, amp); });
    } else {
      if (s.has("correlation_length_m"))
        s.fail("correlation_length_m", "only valid for kind gaussian");
      c.spectrum = rethrow_as_config("spectrum",
                                     [&] { return NoiseSpectrum::white(amp); });
    }
    Section g(s.present() ? s.raw("xi_grid") : YAML::Node(), "spectrum.xi_grid",
              defaults);
    g.allow({"min_m", "max_m", "points"});
    c.xi_grid.min = g.number("min_m", c.xi_grid.min);
    c.xi_grid.max = g.number("max_m", c.xi_grid.max);
    c.xi_grid.points = g.count("points", c.xi_grid.points);
    require(c.xi_grid.min > 0.0, g, "min_m", "must be positive");
    require(c.xi_grid.max > c.xi_grid.min, g, "max_m", "must exceed min_m");
    require(c.xi_grid.points >= 2, g, "points", "must be at least 2");
  }

  {
    Section s = section("transmon");
    s.allow({"ej_hz", "ec_hz"});
    c.transmon.ej_over_h = s.number("ej_hz", c.transmon.ej_over_h);
    c.transmon.ec_over_h = s.number("ec_hz", c.transmon.ec_over_h);
    rethrow_as_config("transmon", [&] { c.transmon.validate(); return 0; });
  }

  {
    Section s = section("dephasing");
    s.allow({"sigma_phi_phi0", "gamma0_per_s", "gamma1_per_s", "gamma1_table"});
    c.dephasing.sigma_phi = Flux::quanta(s.number("sigma_phi_phi0", 1e-4));
    c.dephasing.gamma0 = s.number("gamma0_per_s", 2e4);
    if (s.has("gamma1_table")) {
      if (s.has("gamma1_per_s"))
        s.fail("gamma1_table", "give either gamma1_per_s or gamma1_table, not both");
      const YAML::Node t = s.raw("gamma1_table");
      if (!t.IsSequence() || t.size() == 0)
        s.fail("gamma1_table", "expected a non-empty list of [phi_phi0, rate_per_s]");
      std::vector<std::pair<double, double>> pts;
      for (const auto& row : t) {
        if (!row.IsSequence() || row.size() != 2)
          throw ConfigError("dephasing.gamma1_table: each entry must be [phi_phi0, rate_per_s]" +
                            where(row));
        double phi = 0, rate = 0;
        try {
          phi = row[0].as<double>();
          rate = row[1].as<double>();
        } catch (const YAML::Exception&) {
          throw ConfigError("dephasing.gamma1_table: expected numbers" + where(row));
        }
        if (!std::isfinite(phi) || !std::isfinite(rate) || rate < 0.0)
          throw ConfigError("dephasing.gamma1_table: rates must be finite and >= 0" +
                            where(row));
        pts.emplace_back(phi, rate);
      }
      c.gamma1 = Gamma1Source::table(std::move(pts));
      c.dephasing.gamma1 = 0.0;
    } else {
      const double g1 = s.number("gamma1_per_s", 1.0 / 30e-6);
      c.dephasing.gamma1 = g1;
      c.gamma1 = Gamma1Source::constant(g1);
    }
    rethrow_as_config("dephasing", [&] { c.dephasing.validate(); return 0; });
  }

  auto check_bias = [&](Section& s, const std::string& key, double phi) {
    try {
      (void)omega(c.transmon, Flux::quanta(phi));
    } catch (const ParameterDomainError& e) {
      s.fail(key, e.what());
    }
  };

  {
    Section s = section("bias");
    s.allow({"min_phi0", "max_phi0", "points"});
    c.bias.min = s.number("min_phi0", c.bias.min);
    c.bias.max = s.number("max_phi0", c.bias.max);
    c.bias.points = s.count("points", c.bias.points);
    require(c.bias.max > c.bias.min, s, "max_phi0", "must exceed min_phi0");
    require(c.bias.points >= 2, s, "points", "must be at least 2");
    for (double phi : c.bias.values()) check_bias(s, "points", phi);
  }

  {
    Section s = section("ramsey");
    s.allow({"phi_bias_phi0", "t_max_s", "points"});
    c.ramsey.phi_bias = s.number("phi_bias_phi0", c.ramsey.phi_bias);
    c.ramsey.t_max = s.number("t_max_s", c.ramsey.t_max);
    c.ramsey.points = s.count("points", c.ramsey.points);
    check_bias(s, "phi_bias_phi0", c.ramsey.phi_bias);
    require(c.ramsey.t_max > 0.0, s, "t_max_s", "must be positive");
    require(c.ramsey.points >= 2, s, "points", "must be at least 2");
  }

  {
    Section s = section("fit");
    s.allow({"sigma_min_phi0", "sigma_max_phi0", "sigma_points", "gamma0_min_per_s",
             "gamma0_max_per_s", "gamma0_points", "tolerance", "max_iterations"});
    auto& f = c.fit;
    f.sigma_min = s.number("sigma_min_phi0", f.sigma_min);
    f.sigma_max = s.number("sigma_max_phi0", f.sigma_max);
    f.sigma_points = s.count("sigma_points", f.sigma_points);
    f.gamma0_min = s.number("gamma0_min_per_s", f.gamma0_min);
    f.gamma0_max = s.number("gamma0_max_per_s", f.gamma0_max);
    f.gamma0_points = s.count("gamma0_points", f.gamma0_points);
    f.options.tolerance = s.number("tolerance", f.options.tolerance);
    f.options.max_iterations =
        static_cast<int>(s.count("max_iterations", std::size_t(f.options.max_iterations)));
    require(f.sigma_min > 0.0, s, "sigma_min_phi0", "must be positive");
    require(f.sigma_max > f.sigma_min, s, "sigma_max_phi0", "must exceed sigma_min_phi0");
    require(f.sigma_points >= 3, s, "sigma_points", "must be at least 3");
    require(f.gamma0_min >= 0.0, s, "gamma0_min_per_s", "must be >= 0");
    require(f.gamma0_max > f.gamma0_min, s, "gamma0_max_per_s", "must exceed gamma0_min_per_s");
    require(f.gamma0_points >= 3, s, "gamma0_points", "must be at least 3");
    require(f.options.tolerance > 0.0, s, "tolerance", "must be positive");
    require(f.options.max_iterations >= 1, s, "max_iterations", "must be at least 1");
  }

  {
    Section s = section("mc");
    s.allow({"extent_m", "points_per_side", "realizations", "seed", "supersample",
             "write_samples"});
    c.mc.extent = s.optional_number("extent_m");
    c.mc.points_per_side = s.optional_count("points_per_side");
    if (!c.mc.extent) s.note_default("extent_m", "auto");
    if (!c.mc.points_per_side) s.note_default("points_per_side", "auto");
    c.mc.realizations = s.count("realizations", c.mc.realizations);
    if (s.has("seed")) {
      const YAML::Node n = s.raw("seed");
      try {
        const auto str = n.as<std::string>();
        if (str.empty() || str.find_first_not_of("0123456789") != std::string::npos)
          throw YAML::Exception(n.Mark(), "bad seed");
        c.mc.seed = n.as<std::uint64_t>();
      } catch (const YAML::Exception&) {
        s.fail("seed", "expected a non-negative 64-bit integer");
      }
    } else {
      s.note_default("seed", std::to_string(c.mc.seed));
    }
    c.mc.supersample = static_cast<int>(s.count("supersample", std::size_t(c.mc.supersample)));
    c.mc.write_samples = s.flag("write_samples", c.mc.write_samples);
    require(!c.mc.extent || *c.mc.extent > 0.0, s, "extent_m", "must be positive");
    require(!c.mc.points_per_side || power_of_two(*c.mc.points_per_side), s,
            "points_per_side", "must be a power of two");
    require(c.mc.realizations >= 2, s, "realizations", "must be at least 2");
    require(c.mc.supersample >= 1 && c.mc.supersample <= 16, s, "supersample",
            "must be in [1, 16]");
    if (c.mc.extent && c.mc.points_per_side &&
        c.spectrum.kind() == SpectrumKind::GaussianCorrelated)
      validate_grid(c.geometry, c.spectrum, *c.mc.extent, *c.mc.points_per_side);
  }

  {
    Section s = section("output");
    s.allow({"directory", "prefix"});
    c.output.directory = s.text("directory", c.output.directory);
    c.output.prefix = s.text("prefix", c.output.prefix);
    require(!c.output.directory.empty(), s, "directory", "must not be empty");
  }

  {
    Section s = section("calibration");
    s.allow({"slope", "offset"});
    if (s.present()) {
      BiasCalibration cal;
      if (!s.has("slope")) s.fail("slope", "required when calibration is given");
      cal.slope = s.number("slope", 1.0);
      cal.offset = s.number("offset", 0.0);
      cal.validate();
      c.calibration = cal;
    }
  }

  c.threads = static_cast<unsigned>(top.count("threads", 1));

  c.canonical = canonical_json(c).dump();
  c.hash = fnv1a64(c.canonical);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

RunConfig default_config() { return parse_config("", "<defaults>"); }

}  // namespace fluxnoise
