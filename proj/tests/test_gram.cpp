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

#include "sparseswaps/error.hpp"
#include "sparseswaps/gram.hpp"
#include "test_support.hpp"

namespace sparseswaps {
namespace {

std::vector<DenseMatrix> split_columns(const DenseMatrix& x, std::vector<std::size_t> widths) {
    std::vector<DenseMatrix> blocks;
    std::size_t start = 0;
    for (std::size_t w : widths) {
        DenseMatrix b(x.rows(), w);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            for (std::size_t k = 0; k < w; ++k) b(i, k) = x(i, start + k);
        }
        blocks.push_back(std::move(b));
        start += w;
    }
    return blocks;
}

TEST(Gram, RankOneColumn) {
    const DenseMatrix x(2, 1, {1.0, 2.0});
    const auto g = accumulate_gram(std::span(&x, 1));
    EXPECT_EQ(g.values(), DenseMatrix(2, 2, {1, 2, 2, 4}));
    EXPECT_EQ(feature_norms(g), (std::vector<double>{1.0, 2.0}));
}

TEST(Gram, IdentityActivations) {
    const auto x = DenseMatrix::identity(2);
    const auto g = accumulate_gram(std::span(&x, 1));
    EXPECT_EQ(g.values(), DenseMatrix::identity(2));
    EXPECT_EQ(feature_norms(g), (std::vector<double>{1.0, 1.0}));
    EXPECT_EQ(g.trace(), 2.0);
}

TEST(Gram, BlocksMatchOneShotProduct) {
    std::mt19937_64 rng(1);
    const auto x = testing::random_matrix(8, 300, rng);
    const auto reference = testing::naive_gram(x);
    const auto blocks = split_columns(x, {100, 100, 100});
    const auto g = accumulate_gram(blocks);
    EXPECT_LT(testing::max_rel_diff(g.values(), reference), 1e-12);
}

TEST(Gram, PartitionAndThreadIndependence) {
    std::mt19937_64 rng(2);
    const auto x = testing::random_matrix(12, 257, rng);
    const auto reference = testing::naive_gram(x);
    const std::vector<std::vector<std::size_t>> partitions = {
        {257}, {1, 256}, {100, 57, 100}, {50, 50, 50, 50, 50, 7}, {128, 129}};
    for (const auto& widths : partitions) {
        const auto blocks = split_columns(x, widths);
        const auto serial = accumulate_gram(blocks, 1);
        EXPECT_LT(testing::max_rel_diff(serial.values(), reference), 1e-12);
        // Same partition, any thread count: bitwise identical.
        for (std::size_t threads : {2u, 3u, 8u}) {
            EXPECT_EQ(accumulate_gram(blocks, threads).values(), serial.values());
        }
    }
}

TEST(Gram, SymmetricByConstruction) {
    std::mt19937_64 rng(3);
    const auto x = testing::random_matrix(10, 33, rng);
    const auto blocks = split_columns(x, {10, 23});
    const auto g = accumulate_gram(blocks);
    for (std::size_t i = 0; i < g.dim(); ++i) {
        EXPECT_GE(g(i, i), 0.0);
        for (std::size_t j = 0; j < g.dim(); ++j) EXPECT_EQ(g(i, j), g(j, i));
    }
    DenseMatrix skew(2, 2, {1.0, 3.0, 1.0, 1.0});
    const auto sym = GramMatrix::from_matrix(skew);
    EXPECT_EQ(sym(0, 1), 2.0);
    EXPECT_EQ(sym(1, 0), 2.0);
}

TEST(Gram, ShapeMismatch) {
    std::vector<DenseMatrix> blocks{DenseMatrix(3, 2), DenseMatrix(4, 2)};
    try {
        accumulate_gram(blocks);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
    }
    EXPECT_THROW(accumulate_gram(std::span<const DenseMatrix>{}), Error);
    EXPECT_THROW(GramMatrix::from_matrix(DenseMatrix(2, 3)), Error);
}

TEST(Gram, QuadraticFormMatchesActivationNorm) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const auto x = testing::correlated_activations(16, 40, 3, rng);
        const auto g = accumulate_gram(std::span(&x, 1));
        const auto v = testing::random_vector(16, rng);
        double quad = 0.0;
        for (std::size_t i = 0; i < 16; ++i) {
            for (std::size_t j = 0; j < 16; ++j) quad += v[i] * g(i, j) * v[j];
        }
        double direct = 0.0;
        for (std::size_t k = 0; k < x.cols(); ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < 16; ++i) s += v[i] * x(i, k);
            direct += s * s;
        }
        EXPECT_LT(testing::rel_diff(quad, direct), 1e-10);
    }
}

TEST(Gram, FeatureNormsMatchRowNorms) {
    std::mt19937_64 rng(5);
    const auto x = testing::random_matrix(9, 70, rng);
    const auto g = accumulate_gram(std::span(&x, 1));
    const auto norms = feature_norms(g);
    for (std::size_t j = 0; j < 9; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < 70; ++k) s += x(j, k) * x(j, k);
        EXPECT_LT(testing::rel_diff(norms[j], std::sqrt(s)), 1e-12);
        // Squaring a correctly rounded sqrt is within a couple of ulps.
        EXPECT_LT(testing::rel_diff(norms[j] * norms[j], g(j, j)), 1e-15);
    }
}

TEST(Gram, FeatureNormsClampNegativeDiagonal) {
    const auto g = GramMatrix::from_matrix(DenseMatrix(2, 2, {-1e-18, 0.0, 0.0, 4.0}));
    EXPECT_EQ(feature_norms(g), (std::vector<double>{0.0, 2.0}));
    // G itself keeps the raw value.
    EXPECT_EQ(g(0, 0), -1e-18);
}

TEST(SvdCheck, IdentityIsExact) {
    const auto x = DenseMatrix::identity(4);
    const std::vector<double> wp{1.0, -2.0, 0.0, 3.0};
    const auto r = svd_equivalence_check(x, wp, 1e-12);
    EXPECT_TRUE(r.passed);
    EXPECT_NEAR(r.loss_direct, 14.0, 1e-12);
    EXPECT_NEAR(r.loss_compressed, 14.0, 1e-12);
}

TEST(SvdCheck, ZeroWeightsGiveZeroLoss) {
    std::mt19937_64 rng(6);
    const auto x = testing::random_matrix(5, 12, rng);
    const auto r = svd_equivalence_check(x, std::vector<double>(5, 0.0), 1e-8);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.loss_direct, 0.0);
    EXPECT_EQ(r.loss_compressed, 0.0);
}

TEST(SvdCheck, RandomInstancesAgree) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = testing::random_matrix(16, 64, rng);
        const auto wp = testing::random_vector(16, rng);
        const auto r = svd_equivalence_check(x, wp, 1e-8);
        EXPECT_TRUE(r.passed) << "loss diff " << r.loss_rel_diff << " gram diff " << r.gram_rel_diff;
    }
}

TEST(SvdCheck, RejectsBadShapes) {
    EXPECT_THROW(svd_equivalence_check(DenseMatrix(4, 3), std::vector<double>(4), 1e-8), Error);
    EXPECT_THROW(svd_equivalence_check(DenseMatrix(4, 8), std::vector<double>(3), 1e-8), Error);
}

TEST(Calibration, TotalColumns) {
    const auto meta = CalibrationMeta::make(128, 4096);
    EXPECT_EQ(meta.total_cols(), 524288u);
    EXPECT_THROW(CalibrationMeta::make(0, 16), Error);
}

}  // namespace
}  // namespace sparseswaps
