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

#include "fluxnoise/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "fluxnoise/artifacts.hpp"
#include "fluxnoise/errors.hpp"

namespace fluxnoise {

namespace {

constexpr std::string_view kLabelTag = "# device_label:";

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

[[noreturn]] void fail_row(std::string_view source, std::size_t row,
                           const std::string& why) {
  std::ostringstream os;
  os << source << ": row " << row << ": " << why;
  throw DataError(os.str(), row);
}

double parse_cell(std::string_view source, std::size_t row,
                  std::string_view column, std::string_view cell) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  const auto res = std::from_chars(cell.data(), end, v);
  if (cell.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
    fail_row(source, row,
             std::string(column) + " is not a finite number ('" + std::string(cell) + "')");
  return v;
}

}  // namespace

T2StarDataset parse_dataset(std::string_view text,
                            const std::optional<BiasCalibration>& calibration,
                            std::string_view source) {
  if (calibration) calibration->validate();
  T2StarDataset data;
  int col_phi = -1, col_t2 = -1, col_t1 = -1, col_w = -1;
  std::size_t width = 0;
  bool have_header = false;
  std::size_t row = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.substr(0, kLabelTag.size()) == kLabelTag)
        data.device_label = std::string(trim(line.substr(kLabelTag.size())));
      continue;
    }
    const auto cells = split(line);
    if (!have_header) {
      have_header = true;
      width = cells.size();
      for (std::size_t i = 0; i < cells.size(); ++i) {
        int* slot = nullptr;
        if (cells[i] == "phi_bias") slot = &col_phi;
        else if (cells[i] == "t2_star_us") slot = &col_t2;
        else if (cells[i] == "t1_us") slot = &col_t1;
        else if (cells[i] == "weight") slot = &col_w;
        else
          throw DataError(std::string(source) + ": header: unknown column '" +
                          std::string(cells[i]) + "'");
        if (*slot >= 0)
          throw DataError(std::string(source) + ": header: duplicate column '" +
                          std::string(cells[i]) + "'");
        *slot = static_cast<int>(i);
      }
      if (col_phi < 0)
        throw DataError(std::string(source) + ": header: missing column 'phi_bias'");
      if (col_t2 < 0)
        throw DataError(std::string(source) + ": header: missing column 't2_star_us'");
      continue;
    }
    ++row;
    if (cells.size() != width) {
      std::ostringstream os;
      os << "expected " << width << " cells, found " << cells.size();
      fail_row(source, row, os.str());
    }
    T2StarMeasurement m;
    const double raw_phi =
        parse_cell(source, row, "phi_bias", cells[std::size_t(col_phi)]);
    m.phi_bias = calibration ? calibration->apply(raw_phi) : raw_phi;
    m.t2_star_us = parse_cell(source, row, "t2_star_us", cells[std::size_t(col_t2)]);
    if (!(m.t2_star_us > 0.0))
      fail_row(source, row, "t2_star_us must be positive (got " +
                                format_double(m.t2_star_us) + ")");
    if (col_t1 >= 0 && !cells[std::size_t(col_t1)].empty()) {
      const double t1 = parse_cell(source, row, "t1_us", cells[std::size_t(col_t1)]);
      if (!(t1 > 0.0))
        fail_row(source, row, "t1_us must be positive (got " + format_double(t1) + ")");
      m.t1_us = t1;
    }
    if (col_w >= 0 && !cells[std::size_t(col_w)].empty()) {
      m.weight = parse_cell(source, row, "weight", cells[std::size_t(col_w)]);
      if (!(m.weight > 0.0))
        fail_row(source, row, "weight must be positive (got " + format_double(m.weight) + ")");
    }
    data.points.push_back(m);
  }
  if (!have_header) throw DataError(std::string(source) + ": missing header line");
  if (data.points.empty()) throw DataError(std::string(source) + ": no data rows");

  std::stable_sort(data.points.begin(), data.points.end(),
                   [](const T2StarMeasurement& a, const T2StarMeasurement& b) {
                     return std::abs(a.phi_bias) < std::abs(b.phi_bias);
                   });
  return data;
}

T2StarDataset load_dataset(const std::string& path,
                           const std::optional<BiasCalibration>& calibration) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), calibration, path);
}

std::string format_dataset(const T2StarDataset& data) {
  const bool with_t1 = std::any_of(data.points.begin(), data.points.end(),
                                   [](const auto& p) { return p.t1_us.has_value(); });
  const bool with_w = std::any_of(data.points.begin(), data.points.end(),
                                  [](const auto& p) { return p.weight != 1.0; });
  std::string out;
  if (!data.device_label.empty()) {
    out += kLabelTag;
    out += ' ';
    out += data.device_label;
    out += '\n';
  }
  out += "phi_bias,t2_star_us";
  if (with_t1) out += ",t1_us";
  if (with_w) out += ",weight";
  out += '\n';
  for (const auto& p : data.points) {
    out += format_double(p.phi_bias);
    out += ',';
    out += format_double(p.t2_star_us);
    if (with_t1) {
      out += ',';
      if (p.t1_us) out += format_double(*p.t1_us);
    }
    if (with_w) {
      out += ',';
      out += format_double(p.weight);
    }
    out += '\n';
  }
  return out;
}

void write_dataset(const T2StarDataset& data, const std::string& path) {
  write_file_atomic(path, format_dataset(data));
}

}  // namespace fluxnoise
