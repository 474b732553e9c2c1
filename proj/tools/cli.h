// Copyright 2026 The cvmdi Authors
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

#ifndef CVMDI_TOOLS_CLI_H
#define CVMDI_TOOLS_CLI_H

#include <iosfwd>
#include <string>
#include <vector>

namespace cvmdi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidParameters = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitNumerical = 70;

/// Runs the command line (without the program name). Reports go to `out`
/// unless --out is given; diagnostics go to `err`.
int run(std::vector<std::string> args, std::ostream &out, std::ostream &err);

}  // namespace cvmdi::cli

#endif
