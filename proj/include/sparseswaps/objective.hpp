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
#include <cstdint>
#include <span>
#include <vector>

#include "sparseswaps/gram.hpp"
#include "sparseswaps/matrix.hpp"

namespace sparseswaps {

struct RowLossBreakdown {
    std::size_t row_index = 0;
    double loss = 0.0;
    std::size_t pruned_count = 0;
};

struct LayerLoss {
    double total = 0.0;
    std::vector<RowLossBreakdown> rows;
};

// (w - m.w)^T G (w - m.w), evaluated as v^T (G v) over the pruned support of v.
double row_loss_gram(std::span<const double> w, std::span<const std::uint8_t> mask,
                     const GramMatrix& gram);

// ||W X - (M.W) X||_F^2 through G. Rows may be evaluated in parallel; the total
// is always summed in row order.
LayerLoss full_loss(const DenseMatrix& weights, const PruningMask& mask, const GramMatrix& gram,
                    std::size_t threads = 1);

// sum_k (sum_j (1 - m_j) w_j X_jk)^2 straight from the activations.
double row_loss_direct(std::span<const double> w, std::span<const std::uint8_t> mask,
                       const DenseMatrix& x);

}  // namespace sparseswaps
