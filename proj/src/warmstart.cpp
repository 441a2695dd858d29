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

#include "sparseswaps/warmstart.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "sparseswaps/error.hpp"

namespace sparseswaps {

namespace {

void check_gram(const DenseMatrix& weights, const GramMatrix& gram) {
    if (weights.cols() != gram.dim()) {
        throw Error(ErrorCode::ShapeMismatch, "weights have " + std::to_string(weights.cols()) +
                                                  " columns, Gram dimension is " +
                                                  std::to_string(gram.dim()));
    }
}

// Marks the `keep` best entries of scores[begin, end) in `row`.
void keep_top(std::span<const double> scores, std::span<std::uint8_t> row, std::size_t begin,
              std::size_t end, std::size_t keep, std::vector<std::size_t>& order) {
    order.resize(end - begin);
    std::iota(order.begin(), order.end(), begin);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    for (std::size_t j = begin; j < end; ++j) row[j] = 0;
    for (std::size_t k = 0; k < keep; ++k) row[order[k]] = 1;
}

}  // namespace

Criterion parse_criterion(std::string_view name) {
    if (name == "magnitude") return Criterion::Magnitude;
    if (name == "wanda") return Criterion::Wanda;
    if (name == "ria") return Criterion::Ria;
    throw Error(ErrorCode::InvalidConfig,
                "unknown criterion '" + std::string(name) + "' (magnitude, wanda, ria)");
}

std::string_view to_string(Criterion c) {
    switch (c) {
        case Criterion::Magnitude: return "magnitude";
        case Criterion::Wanda: return "wanda";
        case Criterion::Ria: return "ria";
    }
    return "unknown";
}

ScoreMatrix score_magnitude(const DenseMatrix& weights) {
    DenseMatrix s(weights.rows(), weights.cols());
    auto out = s.data();
    auto in = weights.data();
    for (std::size_t k = 0; k < in.size(); ++k) out[k] = std::abs(in[k]);
    return {std::move(s)};
}

ScoreMatrix score_wanda(const DenseMatrix& weights, const GramMatrix& gram) {
    check_gram(weights, gram);
    const auto norms = feature_norms(gram);
    DenseMatrix s(weights.rows(), weights.cols());
    for (std::size_t i = 0; i < weights.rows(); ++i) {
        for (std::size_t j = 0; j < weights.cols(); ++j) s(i, j) = std::abs(weights(i, j)) * norms[j];
    }
    return {std::move(s)};
}

ScoreMatrix score_ria(const DenseMatrix& weights, const GramMatrix& gram, double exponent) {
    check_gram(weights, gram);
    const auto norms = feature_norms(gram);
    std::vector<double> row_sum(weights.rows(), 0.0);
    std::vector<double> col_sum(weights.cols(), 0.0);
    for (std::size_t i = 0; i < weights.rows(); ++i) {
        for (std::size_t j = 0; j < weights.cols(); ++j) {
            const double a = std::abs(weights(i, j));
            row_sum[i] += a;
            col_sum[j] += a;
        }
    }

    DenseMatrix s(weights.rows(), weights.cols());
    for (std::size_t i = 0; i < weights.rows(); ++i) {
        for (std::size_t j = 0; j < weights.cols(); ++j) {
            const double a = std::abs(weights(i, j));
            const double by_col = col_sum[j] > 0.0 ? a / col_sum[j] : 0.0;
            const double by_row = row_sum[i] > 0.0 ? a / row_sum[i] : 0.0;
            s(i, j) = (by_col + by_row) * std::pow(norms[j], exponent);
        }
    }
    return {std::move(s)};
}

PruningMask select_mask(const ScoreMatrix& scores, const SparsityConstraint& constraint) {
    const auto& s = scores.values;
    constraint.validate(s.cols());
    PruningMask mask(s.rows(), s.cols(), 1);
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < s.rows(); ++i) {
        const auto row_scores = s.row(i);
        auto row = mask.row(i);
        if (const auto* pr = constraint.per_row()) {
            keep_top(row_scores, row, 0, s.cols(), s.cols() - pr->prune_count, order);
        } else {
            const auto& nm = *constraint.block_nm();
            for (std::size_t start = 0; start < s.cols(); start += nm.m_block) {
                keep_top(row_scores, row, start, start + nm.m_block, nm.n_keep, order);
            }
        }
    }
    return mask;
}

std::size_t prune_count_from_fraction(std::size_t d_in, double fraction) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig,
                    "sparsity fraction must lie in [0, 1], got " + std::to_string(fraction));
    }
    const double target = fraction * static_cast<double>(d_in);
    // Products such as 0.57 * 100 land one ulp under the integer they denote.
    const double nearest = std::round(target);
    if (std::abs(target - nearest) <= 1e-9 * std::max(1.0, nearest)) {
        return static_cast<std::size_t>(nearest);
    }
    return static_cast<std::size_t>(std::floor(target));
}

ScoreMatrix score(Criterion criterion, const DenseMatrix& weights, const GramMatrix& gram,
                  double ria_exponent) {
    switch (criterion) {
        case Criterion::Magnitude: return score_magnitude(weights);
        case Criterion::Wanda: return score_wanda(weights, gram);
        case Criterion::Ria: return score_ria(weights, gram, ria_exponent);
    }
    throw Error(ErrorCode::InvalidConfig, "unknown criterion");
}

}  // namespace sparseswaps
