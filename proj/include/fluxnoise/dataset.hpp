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

#ifndef FLUXNOISE_DATASET_HPP
#define FLUXNOISE_DATASET_HPP

#include <optional>
#include <string>
#include <string_view>

#include "fluxnoise/config.hpp"
#include "fluxnoise/fit.hpp"

namespace fluxnoise {

/// Reads the T2* CSV: header `phi_bias,t2_star_us[,t1_us][,weight]` in any
/// column order, '#' comment lines and blank lines ignored, an optional
/// "# device_label: ..." comment. Rows are numbered from 1 counting data
/// lines only. phi_bias is in Phi0 unless `calibration` maps it from the
/// instrument unit. The result is stable-sorted by |phi|.
T2StarDataset parse_dataset(std::string_view text,
                            const std::optional<BiasCalibration>& calibration = {},
                            std::string_view source = "<dataset>");
T2StarDataset load_dataset(const std::string& path,
                           const std::optional<BiasCalibration>& calibration = {});

/// Inverse of parse_dataset for datasets already sorted by |phi|.
std::string format_dataset(const T2StarDataset& data);
void write_dataset(const T2StarDataset& data, const std::string& path);

}  // namespace fluxnoise

#endif  // FLUXNOISE_DATASET_HPP
