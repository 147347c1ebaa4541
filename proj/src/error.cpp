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

#include "cpforge/error.hpp"

namespace cpforge {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::BadArgument:
            return "BadArgument";
        case ErrorCode::BadParamCount:
            return "BadParamCount";
        case ErrorCode::UnsupportedCombination:
            return "UnsupportedCombination";
        case ErrorCode::UnsupportedTheta:
            return "UnsupportedTheta";
        case ErrorCode::NoConvergence:
            return "NoConvergence";
        case ErrorCode::NoCrossing:
            return "NoCrossing";
        case ErrorCode::MultipleCrossings:
            return "MultipleCrossings";
        case ErrorCode::UnknownEntry:
            return "UnknownEntry";
        case ErrorCode::VerificationFailure:
            return "VerificationFailure";
    }
    return "Unknown";
}

}  // namespace cpforge
