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

#include "sparseswaps/oracle.hpp"

#include <limits>
#include <numeric>
#include <string>

#include "sparseswaps/error.hpp"
#include "sparseswaps/objective.hpp"

namespace sparseswaps::oracle {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > kSaturated) return kSaturated;
    }
    return static_cast<std::uint64_t>(r);
}

// Advances `idx` (strictly increasing, values < n) to the next combination in
// lexicographic order. Returns false after the last one.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    for (std::size_t pos = k; pos-- > 0;) {
        if (idx[pos] < n - k + pos) {
            ++idx[pos];
            for (std::size_t q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
            return true;
        }
    }
    return false;
}

std::vector<std::vector<std::size_t>> all_combinations(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    do {
        out.push_back(idx);
    } while (next_combination(idx, n));
    return out;
}

void check_shapes(std::size_t w, std::size_t d) {
    if (w != d) {
        throw Error(ErrorCode::ShapeMismatch,
                    "row has " + std::to_string(w) + " weights, Gram dimension is " + std::to_string(d));
    }
}

bool same_group(std::size_t u, std::size_t p, const SparsityConstraint& constraint, std::size_t d) {
    const std::size_t g = constraint.group_size(d);
    return u / g == p / g;
}

}  // namespace

std::uint64_t feasible_mask_count(std::size_t d_in, const SparsityConstraint& constraint) {
    if (const auto* c = constraint.per_row()) return binomial(d_in, c->prune_count);
    const auto& c = *constraint.block_nm();
    const std::uint64_t per_block = binomial(c.m_block, c.m_block - c.n_keep);
    unsigned __int128 total = 1;
    for (std::size_t b = 0; b < d_in / c.m_block; ++b) {
        total *= per_block;
        if (total > kSaturated) return kSaturated;
    }
    return static_cast<std::uint64_t>(total);
}

OracleResult brute_force_row(std::span<const double> w, const GramMatrix& gram,
                             const SparsityConstraint& constraint) {
    const std::size_t d = gram.dim();
    check_shapes(w.size(), d);
    constraint.validate(d);
    const std::uint64_t count = feasible_mask_count(d, constraint);
    const std::uint64_t budget = constraint.per_row() ? kPerRowBudget : kBlockBudget;
    if (count > budget) {
        throw Error(ErrorCode::TooLarge, std::to_string(count) + " feasible masks for " +
                                             constraint.to_string() + " at d_in=" +
                                             std::to_string(d) + " exceed the budget of " +
                                             std::to_string(budget));
    }

    OracleResult best;
    std::vector<std::uint8_t> mask(d);
    auto consider = [&] {
        const double loss = row_loss_gram(w, mask, gram);
        if (best.n_evaluated == 0 || loss < best.best_loss) {
            best.best_loss = loss;
            best.best_mask = mask;
        }
        ++best.n_evaluated;
    };

    if (const auto* c = constraint.per_row()) {
        std::vector<std::size_t> pruned(c->prune_count);
        std::iota(pruned.begin(), pruned.end(), 0);
        do {
            std::fill(mask.begin(), mask.end(), std::uint8_t{1});
            for (std::size_t j : pruned) mask[j] = 0;
            consider();
        } while (next_combination(pruned, d));
        return best;
    }

    // Odometer over per-block choices; block 0 is the most significant digit,
    // which keeps the concatenated pruned sets in lexicographic order.
    const auto& c = *constraint.block_nm();
    const auto choices = all_combinations(c.m_block, c.m_block - c.n_keep);
    const std::size_t n_blocks = d / c.m_block;
    std::vector<std::size_t> digit(n_blocks, 0);
    while (true) {
        std::fill(mask.begin(), mask.end(), std::uint8_t{1});
        for (std::size_t b = 0; b < n_blocks; ++b) {
            for (std::size_t off : choices[digit[b]]) mask[b * c.m_block + off] = 0;
        }
        consider();
        std::size_t pos = n_blocks;
        while (pos > 0 && ++digit[pos - 1] == choices.size()) digit[--pos] = 0;
        if (pos == 0) break;
    }
    return best;
}

std::vector<SwapDeltaEntry> enumerate_swap_deltas(std::span<const double> w,
                                                  std::span<const std::uint8_t> mask,
                                                  const GramMatrix& gram,
                                                  const SparsityConstraint& constraint) {
    const std::size_t d = gram.dim();
    check_shapes(w.size(), d);
    check_shapes(mask.size(), d);

    // Correlation vector summed directly from its definition.
    std::vector<double> c(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (!mask[j]) c[i] += w[j] * gram(i, j);
        }
    }

    const double before = row_loss_gram(w, mask, gram);
    std::vector<std::uint8_t> trial(mask.begin(), mask.end());
    std::vector<SwapDeltaEntry> out;
    for (std::size_t u = 0; u < d; ++u) {
        if (!mask[u]) continue;
        for (std::size_t p = 0; p < d; ++p) {
            if (mask[p] || !same_group(u, p, constraint, d)) continue;
            trial[u] = 0;
            trial[p] = 1;
            const double after = row_loss_gram(w, trial, gram);
            trial[u] = 1;
            trial[p] = 0;
            const double formula = 2 * w[u] * c[u] + w[u] * w[u] * gram(u, u) - 2 * w[p] * c[p] +
                                   w[p] * w[p] * gram(p, p) - 2 * w[u] * w[p] * gram(u, p);
            out.push_back({u, p, after - before, formula});
        }
    }
    return out;
}

bool is_one_swap_optimal(std::span<const double> w, std::span<const std::uint8_t> mask,
                         const GramMatrix& gram, const SparsityConstraint& constraint, double eps) {
    const std::size_t d = gram.dim();
    check_shapes(w.size(), d);
    check_shapes(mask.size(), d);
    const double before = row_loss_gram(w, mask, gram);
    std::vector<std::uint8_t> trial(mask.begin(), mask.end());
    for (std::size_t u = 0; u < d; ++u) {
        if (!mask[u]) continue;
        for (std::size_t p = 0; p < d; ++p) {
            if (mask[p] || !same_group(u, p, constraint, d)) continue;
            trial[u] = 0;
            trial[p] = 1;
            const double after = row_loss_gram(w, trial, gram);
            trial[u] = 1;
            trial[p] = 0;
            if (after - before < -eps) return false;
        }
    }
    return true;
}

}  // namespace sparseswaps::oracle
