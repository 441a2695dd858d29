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

// Greedy 1-swap refinement of pruning masks.
//
// For one row with weights w and mask m, let P = {j : m_j = 0} and
// U = {j : m_j = 1}. The row loss is r^T r with residual r = sum_{j in P} w_j x_j
// (x_j the j-th activation feature), and the correlation vector
//
//     c = G ((1 - m) . w),   c_i = <x_i, r>
//
// makes the exact loss change of pruning u in U while restoring p in P
//
//     dL(u, p) = 2 w_u c_u + w_u^2 G_uu - 2 w_p c_p + w_p^2 G_pp - 2 w_u w_p G_up
//
// a handful of lookups. After a swap, c moves by w_u G[:,u] - w_p G[:,p].
//
// The engine evaluates the formula as a_u + b_p - 2 w_u w_p G_up with
//     a_u = 2 w_u c_u + w_u^2 G_uu      (cost of pruning u alone)
//     b_p = w_p^2 G_pp - 2 w_p c_p      (cost of restoring p alone)
// so that a_u and b_p are computed once per iteration. swap_delta() uses the
// same grouping, so a reported SwapDecision::delta is bit-identical to it.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sparseswaps/constraint.hpp"
#include "sparseswaps/gram.hpp"
#include "sparseswaps/matrix.hpp"

namespace sparseswaps {

struct RefineConfig {
    std::size_t t_max = 100;
    // A swap is accepted iff its delta < -accept_threshold.
    double accept_threshold = 0.0;

    void validate() const;
};

struct SwapDecision {
    std::size_t u = 0;  // kept index that becomes pruned
    std::size_t p = 0;  // pruned index that becomes kept
    double delta = 0.0;
};

// One row under refinement. pruned() and unpruned() are kept sorted and
// always partition [0, d_in).
class RowState {
public:
    RowState(std::span<const double> weights, std::span<const std::uint8_t> mask,
             const GramMatrix& gram);

    std::size_t dim() const noexcept { return weights_.size(); }
    std::span<const double> weights() const noexcept { return weights_; }
    std::span<const std::uint8_t> mask() const noexcept { return mask_; }
    std::span<const std::size_t> pruned() const noexcept { return pruned_; }
    std::span<const std::size_t> unpruned() const noexcept { return unpruned_; }
    std::span<const double> correlation() const noexcept { return correlation_; }

private:
    friend void apply_swap(RowState& state, const SwapDecision& decision, const GramMatrix& gram);

    std::vector<double> weights_;
    std::vector<std::uint8_t> mask_;
    std::vector<std::size_t> pruned_;
    std::vector<std::size_t> unpruned_;
    std::vector<double> correlation_;
};

// c = G ((1 - m) . w)
std::vector<double> init_correlation(std::span<const double> w, std::span<const std::uint8_t> mask,
                                     const GramMatrix& gram);

// Exact loss change of swapping (u, p). Throws IndexNotInSet unless mask[u]
// is kept and mask[p] is pruned.
double swap_delta(std::size_t u, std::size_t p, std::span<const double> w,
                  std::span<const std::uint8_t> mask, std::span<const double> correlation,
                  const GramMatrix& gram);
double swap_delta(const RowState& state, std::size_t u, std::size_t p, const GramMatrix& gram);

// Feasible pair of minimum delta; ties go to the lexicographically smallest
// (u, p). N:M swaps stay inside one aligned block. Empty when no feasible
// pair exists.
std::optional<SwapDecision> best_swap(const RowState& state, const GramMatrix& gram,
                                      const SparsityConstraint& constraint);

// Flips mask[p] to kept and mask[u] to pruned and updates c in O(d_in).
void apply_swap(RowState& state, const SwapDecision& decision, const GramMatrix& gram);

// Called after every accepted swap with the updated state.
using SwapObserver = std::function<void(const RowState&, const SwapDecision&)>;

struct RowRefineResult {
    std::vector<std::uint8_t> mask;
    // trace[0] is the warm-start loss; trace[k] is the loss after k swaps,
    // tracked incrementally through the accepted deltas.
    std::vector<double> trace;
    std::vector<SwapDecision> swaps;
    // True when refinement stopped because no feasible swap improves by more
    // than the threshold, false when it ran out of iterations.
    bool converged = false;
};

RowRefineResult refine_row(std::span<const double> w, std::span<const std::uint8_t> mask_init,
                           const GramMatrix& gram, const SparsityConstraint& constraint,
                           const RefineConfig& config, const SwapObserver& observer = {});

struct RowRecord {
    std::size_t row = 0;
    double loss_before = 0.0;
    double loss_after = 0.0;
    std::size_t swaps = 0;
    bool converged = false;
    std::optional<double> reduction_pct;  // empty when loss_before == 0
};

struct RefineReport {
    std::vector<RowRecord> rows;
    double total_before = 0.0;
    double total_after = 0.0;
    double mean_reduction_pct = 0.0;
    std::size_t zero_loss_rows = 0;  // excluded from the mean
    double wall_time_ms = 0.0;
};

struct MatrixRefineResult {
    PruningMask mask;
    RefineReport report;
};

// Refines each row independently. Rows are distributed over `threads`
// workers (0 = hardware concurrency); the output does not depend on it.
// Losses in the report are recomputed from G for the initial and final masks.
MatrixRefineResult refine_matrix(const DenseMatrix& weights, const PruningMask& mask_init,
                                 const GramMatrix& gram, const SparsityConstraint& constraint,
                                 const RefineConfig& config, std::size_t threads = 1);

struct SeparateSwapResult {
    std::vector<std::uint8_t> mask;
    std::size_t u = 0;
    std::size_t p = 0;
    double loss = 0.0;
};

// One swap whose two halves are chosen independently: restore the p whose
// removal alone lowers the loss most, prune the u whose addition alone
// raises it least, ignoring the -2 w_u w_p G_up interaction. Kept as a
// baseline showing why the pair must be chosen jointly.
SeparateSwapResult greedy_separate_baseline(std::span<const double> w,
                                            std::span<const std::uint8_t> mask,
                                            const GramMatrix& gram);

}  // namespace sparseswaps
