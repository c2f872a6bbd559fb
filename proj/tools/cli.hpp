// Copyright 2026 The ghzflux Authors
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

#ifndef GHZFLUX_TOOLS_CLI_HPP
#define GHZFLUX_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ghzflux::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kAccuracy = 3,
  kParse = 4,
};

/// Runs one `ghzflux` invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ghzflux::cli

#endif  // GHZFLUX_TOOLS_CLI_HPP
