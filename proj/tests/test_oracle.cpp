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

#include <map>

#include "sparseswaps/error.hpp"
#include "sparseswaps/objective.hpp"
#include "sparseswaps/oracle.hpp"
#include "sparseswaps/swapengine.hpp"
#include "sparseswaps/warmstart.hpp"
#include "test_support.hpp"

namespace sparseswaps {
namespace {

TEST(BruteForce, CounterexampleOptimum) {
    const testing::Counterexample ce;
    const auto r = oracle::brute_force_row(ce.w, ce.gram, ce.constraint);
    EXPECT_EQ(r.best_mask, (std::vector<std::uint8_t>{1, 1, 0, 0}));
    EXPECT_EQ(r.best_loss, 0.0);
    EXPECT_EQ(r.n_evaluated, 6u);
}

TEST(BruteForce, NothingPruned) {
    const testing::Counterexample ce;
    const auto r = oracle::brute_force_row(ce.w, ce.gram, SparsityConstraint(PerRow{0}));
    EXPECT_EQ(r.n_evaluated, 1u);
    EXPECT_EQ(r.best_loss, 0.0);
    EXPECT_EQ(r.best_mask, std::vector<std::uint8_t>(4, 1));
}

TEST(BruteForce, FirstOptimumWinsOnTies) {
    const auto g = GramMatrix::from_matrix(DenseMatrix::identity(4));
    const std::vector<double> w{2, 1, 1, 1};
    const auto r = oracle::brute_force_row(w, g, SparsityConstraint(PerRow{1}));
    EXPECT_EQ(r.best_mask, (std::vector<std::uint8_t>{1, 0, 1, 1}));
    EXPECT_EQ(r.best_loss, 1.0);
}

TEST(BruteForce, CountsMatchBinomials) {
    EXPECT_EQ(oracle::feasible_mask_count(10, SparsityConstraint(PerRow{5})), 252u);
    EXPECT_EQ(oracle::feasible_mask_count(16, SparsityConstraint(BlockNM{2, 4})), 1296u);
    EXPECT_EQ(oracle::feasible_mask_count(4096, SparsityConstraint(PerRow{2048})),
              std::numeric_limits<std::uint64_t>::max());

    std::mt19937_64 rng(1);
    const auto w = testing::random_vector(8, rng);
    const auto g = testing::gram_of(testing::random_matrix(8, 16, rng));
    EXPECT_EQ(oracle::brute_force_row(w, g, SparsityConstraint(PerRow{3})).n_evaluated, 56u);
    EXPECT_EQ(oracle::brute_force_row(w, g, SparsityConstraint(BlockNM{2, 4})).n_evaluated, 36u);
}

TEST(BruteForce, TooLarge) {
    std::mt19937_64 rng(2);
    const auto w = testing::random_vector(32, rng);
    const auto g = GramMatrix::from_matrix(DenseMatrix::identity(32));
    try {
        oracle::brute_force_row(w, g, SparsityConstraint(PerRow{16}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TooLarge);
    }
    // 6^8 block choices fit; 6^16 do not.
    const auto g64 = GramMatrix::from_matrix(DenseMatrix::identity(64));
    EXPECT_THROW(oracle::brute_force_row(testing::random_vector(64, rng), g64, SparsityConstraint(BlockNM{2, 4})),
                 Error);
}

TEST(BruteForce, DiagonalGramPrunesSmallestMagnitudes) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto w = testing::random_vector(10, rng);
        const auto g = GramMatrix::from_matrix(DenseMatrix::identity(10));
        const auto r = oracle::brute_force_row(w, g, SparsityConstraint(PerRow{4}));
        std::vector<double> sq;
        for (double v : w) sq.push_back(v * v);
        std::sort(sq.begin(), sq.end());
        EXPECT_NEAR(r.best_loss, sq[0] + sq[1] + sq[2] + sq[3], 1e-12);
    }
}

TEST(BruteForce, BlockOptimumMatchesPerBlockSearch) {
    // With a block-diagonal Gram the blocks decouple, so the best N:M mask is
    // the best choice in each block on its own.
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        DenseMatrix dense(12, 12);
        for (std::size_t b = 0; b < 3; ++b) {
            const auto xb = testing::random_matrix(4, 8, rng);
            const auto gb = testing::naive_gram(xb);
            for (std::size_t i = 0; i < 4; ++i) {
                for (std::size_t j = 0; j < 4; ++j) dense(4 * b + i, 4 * b + j) = gb(i, j);
            }
        }
        const auto g = GramMatrix::from_matrix(dense);
        const auto w = testing::random_vector(12, rng);
        const auto r = oracle::brute_force_row(w, g, SparsityConstraint(BlockNM{2, 4}));
        EXPECT_EQ(r.n_evaluated, 216u);

        double expected = 0.0;
        for (std::size_t b = 0; b < 3; ++b) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < 4; ++a) {
                for (std::size_t c = a + 1; c < 4; ++c) {
                    const std::size_t i = 4 * b + a;
                    const std::size_t j = 4 * b + c;
                    best = std::min(best, w[i] * w[i] * g(i, i) + 2 * w[i] * w[j] * g(i, j) + w[j] * w[j] * g(j, j));
                }
            }
            expected += best;
        }
        EXPECT_LT(testing::rel_diff(r.best_loss, expected), 1e-12);
        EXPECT_TRUE(SparsityConstraint(BlockNM{2, 4}).satisfied_by(r.best_mask));
    }
}

TEST(Sandwich, OptimumBelowRefinedBelowWarmStart) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        std::mt19937_64 rng(seed);
        const auto x = testing::correlated_activations(10, 20, 3, rng);
        const auto g = testing::gram_of(x);
        DenseMatrix w(1, 10, testing::random_vector(10, rng));
        const SparsityConstraint c(PerRow{5});
        const auto warm = select_mask(score_wanda(w, g), c);
        const auto refined = refine_row(w.row(0), warm.row(0), g, c, RefineConfig{100, 0.0});

        const double l_warm = row_loss_gram(w.row(0), warm.row(0), g);
        const double l_refined = row_loss_gram(w.row(0), refined.mask, g);
        const double l_opt = oracle::brute_force_row(w.row(0), g, c).best_loss;
        const double slack = 1e-12 * l_warm;
        EXPECT_LE(l_opt, l_refined + slack) << "seed " << seed;
        EXPECT_LE(l_refined, l_warm + slack) << "seed " << seed;
    }
}

TEST(OneSwapOptimal, Cases) {
    const testing::Counterexample ce;
    EXPECT_FALSE(oracle::is_one_swap_optimal(ce.w, ce.mask, ce.gram, ce.constraint, 0.0));
    EXPECT_TRUE(oracle::is_one_swap_optimal(ce.w, std::vector<std::uint8_t>{1, 1, 0, 0}, ce.gram, ce.constraint, 0.0));
    // The best single swap gains 80, so a threshold of 80 accepts the warm start.
    EXPECT_TRUE(oracle::is_one_swap_optimal(ce.w, ce.mask, ce.gram, ce.constraint, 80.0));
    EXPECT_FALSE(oracle::is_one_swap_optimal(ce.w, ce.mask, ce.gram, ce.constraint, 79.0));
    // Nothing to swap.
    EXPECT_TRUE(oracle::is_one_swap_optimal(ce.w, std::vector<std::uint8_t>(4, 1), ce.gram,
                                            SparsityConstraint(PerRow{0}), 0.0));
}

TEST(OneSwapOptimal, GlobalOptimumIsLocallyOptimal) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = testing::gram_of(testing::correlated_activations(9, 18, 3, rng));
        const auto w = testing::random_vector(9, rng);
        const SparsityConstraint c(PerRow{4});
        const auto r = oracle::brute_force_row(w, g, c);
        EXPECT_TRUE(oracle::is_one_swap_optimal(w, r.best_mask, g, c, 1e-12 * (1 + r.best_loss)));
    }
}

TEST(SwapTable, CounterexampleEntries) {
    const testing::Counterexample ce;
    const auto table = oracle::enumerate_swap_deltas(ce.w, ce.mask, ce.gram, ce.constraint);
    ASSERT_EQ(table.size(), 4u);
    std::map<std::pair<std::size_t, std::size_t>, double> expected{
        {{2, 0}, -17.0}, {{2, 1}, 280.0}, {{3, 0}, 19.0}, {{3, 1}, -80.0}};
    for (const auto& e : table) {
        const auto it = expected.find({e.u, e.p});
        ASSERT_NE(it, expected.end());
        EXPECT_EQ(e.delta_direct, it->second);
        EXPECT_EQ(e.delta_formula, it->second);
    }
}

TEST(SwapTable, EmptyWhenNothingPruned) {
    const testing::Counterexample ce;
    EXPECT_TRUE(oracle::enumerate_swap_deltas(ce.w, std::vector<std::uint8_t>(4, 1), ce.gram,
                                              SparsityConstraint(PerRow{0}))
                    .empty());
}

TEST(SwapTable, FormulaMatchesRecomputation) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = testing::gram_of(testing::correlated_activations(16, 32, 4, rng));
        const auto w = testing::random_vector(16, rng);
        const auto m = testing::random_perrow_mask(16, 8, rng);
        const auto table = oracle::enumerate_swap_deltas(w, m, g, SparsityConstraint(PerRow{8}));
        ASSERT_EQ(table.size(), 64u);
        for (const auto& e : table) EXPECT_LT(testing::rel_diff(e.delta_formula, e.delta_direct), 1e-9);
    }
}

TEST(SwapTable, BlockTableStaysInBlocks) {
    std::mt19937_64 rng(7);
    const auto g = testing::gram_of(testing::random_matrix(8, 16, rng));
    const auto w = testing::random_vector(8, rng);
    const auto m = testing::random_nm_mask(8, 2, 4, rng);
    const auto table = oracle::enumerate_swap_deltas(w, m, g, SparsityConstraint(BlockNM{2, 4}));
    EXPECT_EQ(table.size(), 8u);
    for (const auto& e : table) EXPECT_EQ(e.u / 4, e.p / 4);
}

}  // namespace
}  // namespace sparseswaps
