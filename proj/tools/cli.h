// Copyright 2026 The Webground Authors
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

#ifndef WEBGROUND_TOOLS_CLI_H_
#define WEBGROUND_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace webground::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitRemote = 3;

// Runs the command line `args` (args[0] is the program name). Command
// output goes to `out`, progress and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Appends the entries of the JSON object named by `--config` as flags,
// skipping any flag already present in `args`.
std::vector<std::string> apply_config(std::vector<std::string> args);

}  // namespace webground::cli

#endif  // WEBGROUND_TOOLS_CLI_H_
