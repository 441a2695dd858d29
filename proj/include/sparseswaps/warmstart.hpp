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
#include <string>
#include <string_view>

#include "sparseswaps/constraint.hpp"
#include "sparseswaps/gram.hpp"
#include "sparseswaps/matrix.hpp"

namespace sparseswaps {

// Nonnegative importance score per weight; higher means keep.
struct ScoreMatrix {
    DenseMatrix values;
};

enum class Criterion { Magnitude, Wanda, Ria };

Criterion parse_criterion(std::string_view name);
std::string_view to_string(Criterion c);

inline constexpr double kDefaultRiaExponent = 0.5;

// |W_ij|
ScoreMatrix score_magnitude(const DenseMatrix& weights);

// |W_ij| * ||X_{j,:}||_2, the activation norm taken from sqrt(G_jj).
ScoreMatrix score_wanda(const DenseMatrix& weights, const GramMatrix& gram);

// Relative importance:
//   (|W_ij| / sum_i' |W_i'j| + |W_ij| / sum_j' |W_ij'|) * sqrt(G_jj)^exponent
// A zero row or column sum makes the matching ratio term 0.
ScoreMatrix score_ria(const DenseMatrix& weights, const GramMatrix& gram,
                      double exponent = kDefaultRiaExponent);

// Keeps the highest-scoring entries of each row (PerRow) or of each aligned
// block (N:M). Ties keep the lower column index.
PruningMask select_mask(const ScoreMatrix& scores, const SparsityConstraint& constraint);

// floor(fraction * d_in); throws InvalidConfig unless 0 <= fraction <= 1.
std::size_t prune_count_from_fraction(std::size_t d_in, double fraction);

ScoreMatrix score(Criterion criterion, const DenseMatrix& weights, const GramMatrix& gram,
                  double ria_exponent = kDefaultRiaExponent);

}  // namespace sparseswaps
