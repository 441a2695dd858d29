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

#include "sparseswaps/swapengine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "sparseswaps/error.hpp"
#include "sparseswaps/objective.hpp"
#include "sparseswaps/parallel.hpp"
#include "sparseswaps/report.hpp"

namespace sparseswaps {

namespace {

inline double prune_cost(double w_u, double c_u, double g_uu) {
    return 2.0 * w_u * c_u + w_u * w_u * g_uu;
}

inline double restore_cost(double w_p, double c_p, double g_pp) {
    return w_p * w_p * g_pp - 2.0 * w_p * c_p;
}

inline double pair_delta(double a_u, double b_p, double w_u, double w_p, double g_up) {
    return a_u + b_p - 2.0 * w_u * w_p * g_up;
}

void check_row(std::size_t w, std::size_t m, const GramMatrix& gram) {
    if (w != gram.dim() || m != gram.dim()) {
        throw Error(ErrorCode::ShapeMismatch, "row of " + std::to_string(w) + " weights and " +
                                                  std::to_string(m) + " mask entries vs Gram dimension " +
                                                  std::to_string(gram.dim()));
    }
}

void erase_sorted(std::vector<std::size_t>& v, std::size_t x) {
    v.erase(std::lower_bound(v.begin(), v.end(), x));
}

void insert_sorted(std::vector<std::size_t>& v, std::size_t x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
}

// Scratch reused across iterations of one row.
struct CandidateScratch {
    std::vector<double> restore;    // b_p, aligned with state.pruned()
    std::vector<double> pruned_w;   // w_p, aligned with state.pruned()
};

// Best pair with u in unpruned[u_begin, u_end) and p in pruned[p_begin, p_end).
// Strict improvement keeps the first minimum in (u, p) order.
void scan_group(const RowState& state, const GramMatrix& gram, const CandidateScratch& scratch,
                std::size_t u_begin, std::size_t u_end, std::size_t p_begin, std::size_t p_end,
                std::optional<SwapDecision>& best) {
    const auto w = state.weights();
    const auto c = state.correlation();
    const auto unpruned = state.unpruned();
    const auto pruned = state.pruned();
    for (std::size_t a = u_begin; a < u_end; ++a) {
        const std::size_t u = unpruned[a];
        const double w_u = w[u];
        const double a_u = prune_cost(w_u, c[u], gram(u, u));
        const auto g_u = gram.row(u);
        for (std::size_t b = p_begin; b < p_end; ++b) {
            const double delta = pair_delta(a_u, scratch.restore[b], w_u, scratch.pruned_w[b], g_u[pruned[b]]);
            if (!best || delta < best->delta) best = SwapDecision{u, pruned[b], delta};
        }
    }
}

std::optional<SwapDecision> best_swap_impl(const RowState& state, const GramMatrix& gram,
                                           const SparsityConstraint& constraint,
                                           CandidateScratch& scratch) {
    const auto pruned = state.pruned();
    const auto unpruned = state.unpruned();
    if (pruned.empty() || unpruned.empty()) return std::nullopt;

    const auto w = state.weights();
    const auto c = state.correlation();
    scratch.restore.resize(pruned.size());
    scratch.pruned_w.resize(pruned.size());
    for (std::size_t b = 0; b < pruned.size(); ++b) {
        const std::size_t p = pruned[b];
        scratch.pruned_w[b] = w[p];
        scratch.restore[b] = restore_cost(w[p], c[p], gram(p, p));
    }

    std::optional<SwapDecision> best;
    if (constraint.per_row()) {
        scan_group(state, gram, scratch, 0, unpruned.size(), 0, pruned.size(), best);
        return best;
    }

    // N:M: one independent candidate table per aligned block. Blocks are
    // visited in column order, so strict improvement across blocks keeps the
    // lexicographic tie rule.
    const std::size_t m_block = constraint.block_nm()->m_block;
    std::size_t u_pos = 0;
    std::size_t p_pos = 0;
    for (std::size_t start = 0; start < state.dim(); start += m_block) {
        const std::size_t end = start + m_block;
        std::size_t u_end = u_pos;
        while (u_end < unpruned.size() && unpruned[u_end] < end) ++u_end;
        std::size_t p_end = p_pos;
        while (p_end < pruned.size() && pruned[p_end] < end) ++p_end;
        scan_group(state, gram, scratch, u_pos, u_end, p_pos, p_end, best);
        u_pos = u_end;
        p_pos = p_end;
    }
    return best;
}

}  // namespace

void RefineConfig::validate() const {
    if (!(accept_threshold >= 0.0) || !std::isfinite(accept_threshold)) {
        throw Error(ErrorCode::InvalidConfig,
                    "accept threshold must be finite and >= 0, got " + std::to_string(accept_threshold));
    }
}

RowState::RowState(std::span<const double> weights, std::span<const std::uint8_t> mask,
                   const GramMatrix& gram)
    : weights_(weights.begin(), weights.end()), mask_(mask.size()) {
    check_row(weights.size(), mask.size(), gram);
    for (std::size_t j = 0; j < mask.size(); ++j) {
        mask_[j] = mask[j] ? 1 : 0;
        (mask_[j] ? unpruned_ : pruned_).push_back(j);
    }
    correlation_ = init_correlation(weights_, mask_, gram);
}

std::vector<double> init_correlation(std::span<const double> w, std::span<const std::uint8_t> mask,
                                     const GramMatrix& gram) {
    check_row(w.size(), mask.size(), gram);
    std::vector<double> c(gram.dim(), 0.0);
    for (std::size_t i = 0; i < gram.dim(); ++i) {
        const auto g_i = gram.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < gram.dim(); ++j) {
            if (!mask[j]) s += w[j] * g_i[j];
        }
        c[i] = s;
    }
    return c;
}

double swap_delta(std::size_t u, std::size_t p, std::span<const double> w,
                  std::span<const std::uint8_t> mask, std::span<const double> correlation,
                  const GramMatrix& gram) {
    check_row(w.size(), mask.size(), gram);
    if (correlation.size() != gram.dim()) {
        throw Error(ErrorCode::ShapeMismatch, "correlation vector length " +
                                                  std::to_string(correlation.size()));
    }
    if (u >= mask.size() || !mask[u]) {
        throw Error(ErrorCode::IndexNotInSet, "u = " + std::to_string(u) + " is not a kept index");
    }
    if (p >= mask.size() || mask[p]) {
        throw Error(ErrorCode::IndexNotInSet, "p = " + std::to_string(p) + " is not a pruned index");
    }
    const double a_u = prune_cost(w[u], correlation[u], gram(u, u));
    const double b_p = restore_cost(w[p], correlation[p], gram(p, p));
    return pair_delta(a_u, b_p, w[u], w[p], gram(u, p));
}

double swap_delta(const RowState& state, std::size_t u, std::size_t p, const GramMatrix& gram) {
    return swap_delta(u, p, state.weights(), state.mask(), state.correlation(), gram);
}

std::optional<SwapDecision> best_swap(const RowState& state, const GramMatrix& gram,
                                      const SparsityConstraint& constraint) {
    CandidateScratch scratch;
    return best_swap_impl(state, gram, constraint, scratch);
}

void apply_swap(RowState& state, const SwapDecision& decision, const GramMatrix& gram) {
    const std::size_t u = decision.u;
    const std::size_t p = decision.p;
    if (u >= state.dim() || !state.mask_[u]) {
        throw Error(ErrorCode::IndexNotInSet, "u = " + std::to_string(u) + " is not a kept index");
    }
    if (p >= state.dim() || state.mask_[p]) {
        throw Error(ErrorCode::IndexNotInSet, "p = " + std::to_string(p) + " is not a pruned index");
    }

    state.mask_[p] = 1;
    state.mask_[u] = 0;
    erase_sorted(state.pruned_, p);
    insert_sorted(state.pruned_, u);
    erase_sorted(state.unpruned_, u);
    insert_sorted(state.unpruned_, p);

    const double w_u = state.weights_[u];
    const double w_p = state.weights_[p];
    const auto g_u = gram.row(u);
    const auto g_p = gram.row(p);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        state.correlation_[i] += w_u * g_u[i] - w_p * g_p[i];
    }
}

RowRefineResult refine_row(std::span<const double> w, std::span<const std::uint8_t> mask_init,
                           const GramMatrix& gram, const SparsityConstraint& constraint,
                           const RefineConfig& config, const SwapObserver& observer) {
    config.validate();
    check_row(w.size(), mask_init.size(), gram);
    constraint.validate(gram.dim());
    if (!constraint.satisfied_by(mask_init)) {
        throw Error(ErrorCode::InfeasibleWarmstart,
                    "warm-start mask violates " + constraint.to_string());
    }

    RowState state(w, mask_init, gram);
    RowRefineResult result;
    result.trace.push_back(row_loss_gram(w, mask_init, gram));

    CandidateScratch scratch;
    std::size_t t = 0;
    for (; t < config.t_max; ++t) {
        const auto best = best_swap_impl(state, gram, constraint, scratch);
        if (!best || !(best->delta < -config.accept_threshold)) {
            result.converged = true;
            break;
        }
        apply_swap(state, *best, gram);
        result.swaps.push_back(*best);
        result.trace.push_back(result.trace.back() + best->delta);
        if (observer) observer(state, *best);
    }
    result.mask.assign(state.mask().begin(), state.mask().end());
    return result;
}

MatrixRefineResult refine_matrix(const DenseMatrix& weights, const PruningMask& mask_init,
                                 const GramMatrix& gram, const SparsityConstraint& constraint,
                                 const RefineConfig& config, std::size_t threads) {
    const auto started = std::chrono::steady_clock::now();
    config.validate();
    if (mask_init.rows() != weights.rows() || mask_init.cols() != weights.cols()) {
        throw Error(ErrorCode::ShapeMismatch, "mask shape differs from weight shape");
    }
    if (weights.cols() != gram.dim()) {
        throw Error(ErrorCode::ShapeMismatch, "weights have " + std::to_string(weights.cols()) +
                                                  " columns, Gram dimension is " +
                                                  std::to_string(gram.dim()));
    }
    constraint.validate(weights.cols());
    if (const auto bad = constraint.first_violation(mask_init)) {
        throw Error(ErrorCode::InfeasibleWarmstart,
                    "row " + std::to_string(*bad) + " violates " + constraint.to_string());
    }

    MatrixRefineResult out{mask_init, {}};
    out.report.rows.resize(weights.rows());
    parallel_for(weights.rows(), threads, [&](std::size_t i) {
        const auto refined = refine_row(weights.row(i), mask_init.row(i), gram, constraint, config);
        std::copy(refined.mask.begin(), refined.mask.end(), out.mask.row(i).begin());
        auto& rec = out.report.rows[i];
        rec.row = i;
        rec.loss_before = refined.trace.front();
        rec.loss_after = row_loss_gram(weights.row(i), refined.mask, gram);
        rec.swaps = refined.swaps.size();
        rec.converged = refined.converged;
    });

    std::vector<double> before(weights.rows());
    std::vector<double> after(weights.rows());
    for (std::size_t i = 0; i < weights.rows(); ++i) {
        before[i] = out.report.rows[i].loss_before;
        after[i] = out.report.rows[i].loss_after;
        out.report.total_before += before[i];
        out.report.total_after += after[i];
    }
    const auto reduction = relative_error_reduction(before, after);
    for (std::size_t i = 0; i < weights.rows(); ++i) {
        out.report.rows[i].reduction_pct = reduction.per_row_pct[i];
    }
    out.report.mean_reduction_pct = reduction.mean_pct;
    out.report.zero_loss_rows = reduction.excluded_rows;
    out.report.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return out;
}

SeparateSwapResult greedy_separate_baseline(std::span<const double> w,
                                            std::span<const std::uint8_t> mask,
                                            const GramMatrix& gram) {
    RowState state(w, mask, gram);
    if (state.pruned().empty() || state.unpruned().empty()) {
        throw Error(ErrorCode::EmptySet, "need at least one pruned and one kept index");
    }
    const auto c = state.correlation();

    // Restore the p whose removal from the residual alone helps most.
    std::size_t p_best = state.pruned().front();
    double p_cost = restore_cost(w[p_best], c[p_best], gram(p_best, p_best));
    for (std::size_t p : state.pruned()) {
        const double cost = restore_cost(w[p], c[p], gram(p, p));
        if (cost < p_cost) {
            p_cost = cost;
            p_best = p;
        }
    }
    // Prune the u whose addition to the original residual alone hurts least.
    std::size_t u_best = state.unpruned().front();
    double u_cost = prune_cost(w[u_best], c[u_best], gram(u_best, u_best));
    for (std::size_t u : state.unpruned()) {
        const double cost = prune_cost(w[u], c[u], gram(u, u));
        if (cost < u_cost) {
            u_cost = cost;
            u_best = u;
        }
    }

    SeparateSwapResult out;
    out.mask.assign(state.mask().begin(), state.mask().end());
    out.mask[p_best] = 1;
    out.mask[u_best] = 0;
    out.u = u_best;
    out.p = p_best;
    out.loss = row_loss_gram(w, out.mask, gram);
    return out;
}

}  // namespace sparseswaps
