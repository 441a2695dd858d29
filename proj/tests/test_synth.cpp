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

#include <gtest/gtest.h>

#include <cmath>

#include "sparseswaps/error.hpp"
#include "sparseswaps/gram.hpp"
#include "sparseswaps/report.hpp"
#include "sparseswaps/swapengine.hpp"
#include "sparseswaps/synth.hpp"
#include "sparseswaps/warmstart.hpp"
#include "test_support.hpp"

namespace sparseswaps {
namespace {

using synth::SynthConfig;

double mean_abs_feature_correlation(const DenseMatrix& x) {
    const auto g = testing::naive_gram(x);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = i + 1; j < g.rows(); ++j) {
            sum += std::abs(g(i, j)) / std::sqrt(g(i, i) * g(j, j));
            ++n;
        }
    }
    return sum / static_cast<double>(n);
}

TEST(Synth, SameSeedSameBits) {
    SynthConfig cfg;
    cfg.seed = 1234;
    const auto a = synth::generate_layer(cfg);
    const auto b = synth::generate_layer(cfg);
    EXPECT_EQ(a.weights, b.weights);
    EXPECT_EQ(a.activations, b.activations);
    EXPECT_EQ(a.outlier_rows, b.outlier_rows);
    cfg.seed = 1235;
    EXPECT_NE(synth::generate_layer(cfg).weights, a.weights);
}

TEST(Synth, Shapes) {
    SynthConfig cfg;
    cfg.d_in = 12;
    cfg.d_out = 5;
    cfg.n_cols = 40;
    cfg.corr_rank = 2;
    cfg.outlier_count = 3;
    const auto layer = synth::generate_layer(cfg);
    EXPECT_EQ(layer.weights.rows(), 5u);
    EXPECT_EQ(layer.weights.cols(), 12u);
    EXPECT_EQ(layer.activations.rows(), 12u);
    EXPECT_EQ(layer.activations.cols(), 40u);
    ASSERT_EQ(layer.outlier_rows.size(), 3u);
    EXPECT_TRUE(std::is_sorted(layer.outlier_rows.begin(), layer.outlier_rows.end()));
    EXPECT_LT(layer.outlier_rows.back(), 12u);
    EXPECT_LT(layer.outlier_rows[0], layer.outlier_rows[1]);
}

TEST(Synth, OutlierRowsAreExactlyScaled) {
    SynthConfig base;
    base.seed = 77;
    base.outlier_scale = 1.0;
    SynthConfig loud = base;
    loud.outlier_scale = 10.0;
    const auto a = synth::generate_layer(base);
    const auto b = synth::generate_layer(loud);
    ASSERT_EQ(a.outlier_rows, b.outlier_rows);
    EXPECT_EQ(a.weights, b.weights);
    for (std::size_t i = 0; i < base.d_in; ++i) {
        const bool outlier = std::binary_search(a.outlier_rows.begin(), a.outlier_rows.end(), i);
        for (std::size_t k = 0; k < base.n_cols; ++k) {
            EXPECT_EQ(b.activations(i, k), (outlier ? 10.0 : 1.0) * a.activations(i, k));
        }
    }
}

TEST(Synth, LowRankMeansCorrelatedFeatures) {
    SynthConfig cfg;
    cfg.d_in = 32;
    cfg.n_cols = 512;
    cfg.outlier_count = 1;
    cfg.outlier_scale = 1.0;
    cfg.corr_rank = 1;
    const double rank_one = mean_abs_feature_correlation(synth::generate_layer(cfg).activations);
    cfg.corr_rank = 32;
    const double full_rank = mean_abs_feature_correlation(synth::generate_layer(cfg).activations);
    EXPECT_GT(rank_one, 0.7);
    EXPECT_LT(full_rank, 0.3);
}

TEST(Synth, SamplerMoments) {
    synth::Sampler s(5);
    double sum = 0.0;
    double sq = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double z = s.normal();
        sum += z;
        sq += z * z;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sq / n, 1.0, 0.02);
    for (int k = 0; k < 1000; ++k) {
        const double u = s.uniform();
        EXPECT_GT(u, 0.0);
        EXPECT_LE(u, 1.0);
        EXPECT_LT(s.below(7), 7u);
    }
}

TEST(Synth, ValidateRejects) {
    auto expect_invalid = [](SynthConfig cfg) {
        try {
            synth::generate_layer(cfg);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
        }
    };
    SynthConfig cfg;
    cfg.d_in = 0;
    expect_invalid(cfg);
    cfg = {};
    cfg.corr_rank = 65;
    expect_invalid(cfg);
    cfg = {};
    cfg.corr_rank = 0;
    expect_invalid(cfg);
    cfg = {};
    cfg.outlier_count = 0;
    expect_invalid(cfg);
    cfg = {};
    cfg.outlier_scale = 0.5;
    expect_invalid(cfg);
    cfg = {};
    cfg.n_cols = 0;
    expect_invalid(cfg);
}

TEST(Synth, RefinementImprovesNearlyEveryRow) {
    SynthConfig cfg;
    cfg.seed = 3;
    const auto layer = synth::generate_layer(cfg);
    const auto g = accumulate_gram(std::span(&layer.activations, 1));
    const SparsityConstraint c(PerRow{prune_count_from_fraction(cfg.d_in, 0.6)});
    const auto warm = select_mask(score_wanda(layer.weights, g), c);
    const auto r = refine_matrix(layer.weights, warm, g, c, RefineConfig{100, 0.0});
    std::size_t improved = 0;
    for (const auto& row : r.report.rows) improved += row.loss_after < row.loss_before;
    EXPECT_GT(static_cast<double>(improved), 0.95 * static_cast<double>(cfg.d_out));
    EXPECT_GT(r.report.mean_reduction_pct, 0.0);
}

TEST(Reduction, Examples) {
    const std::vector<double> before{81.0, 5.0, 0.0, 4.0};
    const std::vector<double> after{0.0, 5.0, 0.0, 3.0};
    const auto s = relative_error_reduction(before, after);
    ASSERT_EQ(s.per_row_pct.size(), 4u);
    EXPECT_EQ(s.per_row_pct[0], 100.0);
    EXPECT_EQ(s.per_row_pct[1], 0.0);
    EXPECT_FALSE(s.per_row_pct[2].has_value());
    EXPECT_EQ(s.per_row_pct[3], 25.0);
    EXPECT_EQ(s.excluded_rows, 1u);
    EXPECT_DOUBLE_EQ(s.mean_pct, 125.0 / 3.0);
}

TEST(Reduction, AllExcluded) {
    const std::vector<double> zeros(3, 0.0);
    const auto s = relative_error_reduction(zeros, zeros);
    EXPECT_EQ(s.excluded_rows, 3u);
    EXPECT_EQ(s.mean_pct, 0.0);
}

TEST(Reduction, ShapeMismatch) {
    try {
        relative_error_reduction(std::vector<double>(2), std::vector<double>(3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
    }
}

}  // namespace
}  // namespace sparseswaps
