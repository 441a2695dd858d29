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
#include "sparseswaps/objective.hpp"
#include "test_support.hpp"

namespace sparseswaps {
namespace {

TEST(RowLoss, CounterexampleIs81) {
    const testing::Counterexample ce;
    EXPECT_EQ(row_loss_gram(ce.w, ce.mask, ce.gram), 81.0);
    EXPECT_EQ(row_loss_direct(ce.w, ce.mask, ce.x), 81.0);
}

TEST(RowLoss, NothingPrunedIsZero) {
    std::mt19937_64 rng(1);
    const auto x = testing::random_matrix(6, 10, rng);
    const auto g = testing::gram_of(x);
    const auto w = testing::random_vector(6, rng);
    const std::vector<std::uint8_t> ones(6, 1);
    EXPECT_EQ(row_loss_gram(w, ones, g), 0.0);
    EXPECT_EQ(row_loss_direct(w, ones, x), 0.0);
}

TEST(RowLoss, ZeroWeightsAreZero) {
    std::mt19937_64 rng(2);
    const auto g = testing::gram_of(testing::random_matrix(5, 9, rng));
    EXPECT_EQ(row_loss_gram(std::vector<double>(5, 0.0), std::vector<std::uint8_t>(5, 0), g), 0.0);
}

TEST(RowLoss, GramAgreesWithDirect) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> pruned_count(0, 20);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto x = testing::correlated_activations(20, 30, 4, rng);
        const auto g = testing::gram_of(x);
        const auto w = testing::random_vector(20, rng);
        const auto m = testing::random_perrow_mask(20, pruned_count(rng), rng);
        const double via_gram = row_loss_gram(w, m, g);
        const double direct = row_loss_direct(w, m, x);
        ASSERT_GE(via_gram, 0.0);
        ASSERT_LT(testing::rel_diff(via_gram, direct), 1e-10) << "trial " << trial;
    }
}

TEST(RowLoss, ShapeMismatch) {
    const testing::Counterexample ce;
    EXPECT_THROW(row_loss_gram(std::vector<double>(3), ce.mask, ce.gram), Error);
    EXPECT_THROW(row_loss_gram(ce.w, std::vector<std::uint8_t>(5), ce.gram), Error);
    EXPECT_THROW(row_loss_direct(ce.w, ce.mask, DenseMatrix(3, 1)), Error);
}

TEST(FullLoss, AllOnesMaskIsZero) {
    std::mt19937_64 rng(4);
    const auto w = testing::random_matrix(4, 6, rng);
    const auto g = testing::gram_of(testing::random_matrix(6, 8, rng));
    const auto loss = full_loss(w, PruningMask(4, 6, 1), g);
    EXPECT_EQ(loss.total, 0.0);
    ASSERT_EQ(loss.rows.size(), 4u);
    for (const auto& r : loss.rows) EXPECT_EQ(r.pruned_count, 0u);
}

TEST(FullLoss, ZeroRowContributesNothing) {
    const testing::Counterexample ce;
    DenseMatrix w(2, 4, {10, -1, 9, -9, 0, 0, 0, 0});
    PruningMask m(2, 4, 1);
    m(0, 0) = m(0, 1) = 0;
    m(1, 2) = m(1, 3) = 0;
    const auto loss = full_loss(w, m, ce.gram);
    EXPECT_EQ(loss.total, 81.0);
    EXPECT_EQ(loss.rows[0].loss, 81.0);
    EXPECT_EQ(loss.rows[1].loss, 0.0);
    EXPECT_EQ(loss.rows[1].pruned_count, 2u);
}

// ||W X - (M.W) X||_F^2 evaluated with dense products.
double frobenius_oracle(const DenseMatrix& w, const PruningMask& m, const DenseMatrix& x) {
    double total = 0.0;
    for (std::size_t i = 0; i < w.rows(); ++i) {
        for (std::size_t k = 0; k < x.cols(); ++k) {
            double full = 0.0;
            double masked = 0.0;
            for (std::size_t j = 0; j < w.cols(); ++j) {
                full += w(i, j) * x(j, k);
                masked += (m(i, j) ? w(i, j) : 0.0) * x(j, k);
            }
            total += (full - masked) * (full - masked);
        }
    }
    return total;
}

TEST(FullLoss, MatchesFrobeniusOracle) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto w = testing::random_matrix(8, 16, rng);
        const auto x = testing::correlated_activations(16, 24, 3, rng);
        const auto g = testing::gram_of(x);
        PruningMask m(8, 16);
        for (std::size_t i = 0; i < 8; ++i) {
            const auto row = testing::random_perrow_mask(16, 8, rng);
            std::copy(row.begin(), row.end(), m.row(i).begin());
        }
        const auto loss = full_loss(w, m, g);
        EXPECT_LT(testing::rel_diff(loss.total, frobenius_oracle(w, m, x)), 1e-10);

        double sum = 0.0;
        for (const auto& r : loss.rows) sum += r.loss;
        EXPECT_EQ(sum, loss.total);
        // Parallel evaluation gives the same bits.
        EXPECT_EQ(full_loss(w, m, g, 4).total, loss.total);
    }
}

TEST(FullLoss, ShapeMismatch) {
    const testing::Counterexample ce;
    EXPECT_THROW(full_loss(DenseMatrix(2, 4), PruningMask(2, 3), ce.gram), Error);
    EXPECT_THROW(full_loss(DenseMatrix(2, 5), PruningMask(2, 5), ce.gram), Error);
}

}  // namespace
}  // namespace sparseswaps
