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

// Exhaustive checks for small rows. Nothing here uses the swap engine: every
// loss is recomputed from scratch with row_loss_gram.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sparseswaps/constraint.hpp"
#include "sparseswaps/gram.hpp"

namespace sparseswaps::oracle {

// Largest number of feasible masks brute_force_row will enumerate.
inline constexpr std::uint64_t kPerRowBudget = 1'000'000;
// N:M cross products are capped at 2^20 combinations.
inline constexpr std::uint64_t kBlockBudget = std::uint64_t{1} << 20;

struct OracleResult {
    std::vector<std::uint8_t> best_mask;
    double best_loss = 0.0;
    std::uint64_t n_evaluated = 0;
};

// Global optimum over all feasible masks, enumerated in lexicographic order
// of the pruned index set; the first optimum found wins ties. Throws TooLarge
// when the feasible set exceeds the budget above.
OracleResult brute_force_row(std::span<const double> w, const GramMatrix& gram,
                             const SparsityConstraint& constraint);

// Number of feasible masks for one row, saturating at UINT64_MAX.
std::uint64_t feasible_mask_count(std::size_t d_in, const SparsityConstraint& constraint);

struct SwapDeltaEntry {
    std::size_t u = 0;
    std::size_t p = 0;
    double delta_direct = 0.0;   // loss(after) - loss(before), both recomputed
    double delta_formula = 0.0;  // closed form from a freshly summed correlation vector
};

// Every feasible (u, p) pair in (u, p) order.
std::vector<SwapDeltaEntry> enumerate_swap_deltas(std::span<const double> w,
                                                  std::span<const std::uint8_t> mask,
                                                  const GramMatrix& gram,
                                                  const SparsityConstraint& constraint);

// True iff no feasible 1-swap lowers the recomputed loss by more than eps.
bool is_one_swap_optimal(std::span<const double> w, std::span<const std::uint8_t> mask,
                         const GramMatrix& gram, const SparsityConstraint& constraint, double eps);

}  // namespace sparseswaps::oracle
