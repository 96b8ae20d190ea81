// Copyright 2026 The ohddp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

namespace ohddp::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kNotConverged = 2,
};

/// Entry point of the `ohddp` executable. Subcommands: solve, sweep-ct, mpc,
/// oracle, check. Diagnostics go to stderr, short summaries to stdout.
int run_cli(int argc, const char* const* argv);

/// Convenience for tests: argv[0] is supplied.
int run_cli(const std::vector<std::string>& args);

}  // namespace ohddp::cli
