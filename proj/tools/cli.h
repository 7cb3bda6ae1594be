// Copyright 2026 The lpsample Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: train, score, subsample, baseline, bounds, verify
// and eval subcommands.

#ifndef LPS_TOOLS_CLI_H_
#define LPS_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace lps::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 2,
  kDataError = 3,
  kInfeasibleBudget = 4,
};

// Runs one command line (args excludes the program name). Reports go to
// `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace lps::cli

#endif  // LPS_TOOLS_CLI_H_
