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

#include "sparseswaps/report.hpp"

#include <string>

#include "sparseswaps/error.hpp"

namespace sparseswaps {

ReductionSummary relative_error_reduction(std::span<const double> before,
                                          std::span<const double> after) {
    if (before.size() != after.size()) {
        throw Error(ErrorCode::ShapeMismatch, std::to_string(before.size()) + " warm-start losses vs " +
                                                  std::to_string(after.size()) + " refined losses");
    }
    ReductionSummary out;
    out.per_row_pct.resize(before.size());
    double sum = 0.0;
    std::size_t counted = 0;
    for (std::size_t i = 0; i < before.size(); ++i) {
        if (before[i] == 0.0) {
            ++out.excluded_rows;
            continue;
        }
        const double pct = 100.0 * (before[i] - after[i]) / before[i];
        out.per_row_pct[i] = pct;
        sum += pct;
        ++counted;
    }
    out.mean_pct = counted ? sum / static_cast<double>(counted) : 0.0;
    return out;
}

}  // namespace sparseswaps
