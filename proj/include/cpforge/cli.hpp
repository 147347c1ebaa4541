// Copyright 2026 The cpforge Authors
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

#ifndef CPFORGE_CLI_HPP
#define CPFORGE_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace cpforge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitVerification = 3;
inline constexpr int kExitNoConvergence = 4;

/// Command-line entry point. `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Parses an angle given in units of pi: "0.5", "0.5pi", "pi/2", "1/2".
double parse_angle_over_pi(const std::string &text);

/// Shortest decimal that reads back to the same binary64 value.
std::string format_double(double value);

}  // namespace cpforge

#endif
