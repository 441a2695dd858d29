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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace sparseswaps {

struct ReductionSummary {
    // 100 * (before - after) / before; empty for rows with before == 0.
    std::vector<std::optional<double>> per_row_pct;
    // Mean over rows with a value; 0 when there are none.
    double mean_pct = 0.0;
    std::size_t excluded_rows = 0;
};

// Throws ShapeMismatch when the two loss vectors differ in length.
ReductionSummary relative_error_reduction(std::span<const double> before,
                                          std::span<const double> after);

}  // namespace sparseswaps
