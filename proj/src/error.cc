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

#include "cvmdi/error.h"

namespace cvmdi {

const char *to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidParameter:
            return "invalid-parameter";
        case ErrorKind::InvalidArgument:
            return "invalid-argument";
        case ErrorKind::DegenerateMeasurement:
            return "degenerate-measurement";
        case ErrorKind::Numerical:
            return "numerical-error";
        case ErrorKind::UnphysicalState:
            return "unphysical-state";
        case ErrorKind::BracketFailure:
            return "bracket-failure";
        case ErrorKind::Unimplemented:
            return "unimplemented";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string &message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {
}

void fail(ErrorKind kind, const std::string &message) {
    throw Error(kind, message);
}

}  // namespace cvmdi
