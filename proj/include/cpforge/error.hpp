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

#ifndef CPFORGE_ERROR_HPP
#define CPFORGE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace cpforge {

enum class ErrorCode {
    BadArgument,
    BadParamCount,
    UnsupportedCombination,
    UnsupportedTheta,
    NoConvergence,
    NoCrossing,
    MultipleCrossings,
    UnknownEntry,
    VerificationFailure,
};

std::string_view to_string(ErrorCode code);

/// Library error. Every failure the library reports carries one of the codes
/// above so the CLI can translate it into a machine-readable message.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(message), code_(code) {
    }

    ErrorCode code() const noexcept {
        return code_;
    }

  private:
    ErrorCode code_;
};

}  // namespace cpforge

#endif
