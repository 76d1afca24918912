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

#ifndef FLUXNOISE_ARTIFACTS_HPP
#define FLUXNOISE_ARTIFACTS_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fluxnoise {

inline constexpr std::string_view kToolVersion = "0.3.1";

/// Shortest decimal that reads back to the same double; "inf", "-inf",
/// "nan" for non-finite values.
std::string format_double(double value);

std::uint64_t fnv1a64(std::string_view bytes);

/// Ordered key/value block embedded in every artifact.
class Metadata {
 public:
  void set(std::string key, std::string value);
  void set(std::string key, double value);
  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// CSV text: one "# key: value" line per metadata entry, then the header
/// and rows.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  void add_row(std::vector<std::string> cells);
  void add_row(const std::vector<double>& values);
  std::size_t rows() const { return rows_.size(); }
  std::string render(const Metadata& meta) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents);

}  // namespace fluxnoise

#endif  // FLUXNOISE_ARTIFACTS_HPP
