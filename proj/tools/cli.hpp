// Copyright 2026 The sotif-tc Authors
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

#ifndef SOTIF_TOOLS__CLI_HPP_
#define SOTIF_TOOLS__CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace sotif::cli
{

/// Exit statuses of the `sotif` command.
enum ExitCode : int {
  kOk = 0,
  kGateFailed = 1,
  kStageFailed = 2,
  kUsage = 64,
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

}  // namespace sotif::cli

#endif  // SOTIF_TOOLS__CLI_HPP_
