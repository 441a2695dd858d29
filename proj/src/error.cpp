// Copyright 2026 The sparseswaps Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "sparseswaps/error.hpp"

namespace sparseswaps {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedHeader: return "malformed header";
        case ErrorCode::DimensionOverflow: return "dimension overflow";
        case ErrorCode::NonFiniteValue: return "non-finite value";
        case ErrorCode::TruncatedPayload: return "truncated payload";
        case ErrorCode::NonBinaryEntry: return "non-binary entry";
        case ErrorCode::IoFailure: return "io failure";
        case ErrorCode::ShapeMismatch: return "shape mismatch";
        case ErrorCode::DecompositionFailure: return "decomposition failure";
        case ErrorCode::IncompatibleConstraint: return "incompatible constraint";
        case ErrorCode::InfeasibleWarmstart: return "infeasible warmstart";
        case ErrorCode::IndexNotInSet: return "index not in set";
        case ErrorCode::EmptySet: return "empty set";
        case ErrorCode::TooLarge: return "too large";
        case ErrorCode::InvalidConfig: return "invalid config";
    }
    return "unknown error";
}

}  // namespace sparseswaps
