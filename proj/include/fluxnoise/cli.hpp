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

#ifndef FLUXNOISE_CLI_HPP
#define FLUXNOISE_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace fluxnoise {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUnexpected = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitNumerical = 4,
};

/// Runs one subcommand. `args` excludes the program name. Diagnostics go to
/// `err`, short summaries to `out`.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace fluxnoise

#endif  // FLUXNOISE_CLI_HPP
