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
#include <span>
#include <vector>

#include "sparseswaps/matrix.hpp"

namespace sparseswaps {

// Symmetric d_in x d_in matrix G = X X^T of calibration activations. The
// pruning loss of any row depends on the calibration data only through G.
class GramMatrix {
public:
    GramMatrix() = default;

    // Stores (m + m^T) / 2. Throws ShapeMismatch unless m is square.
    static GramMatrix from_matrix(const DenseMatrix& m);

    std::size_t dim() const noexcept { return values_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
    // Row i; equal to column i by symmetry.
    std::span<const double> row(std::size_t i) const { return values_.row(i); }
    const DenseMatrix& values() const noexcept { return values_; }

    double trace() const noexcept;

private:
    explicit GramMatrix(DenseMatrix values) : values_(std::move(values)) {}

    DenseMatrix values_;
};

// G = sum over blocks of X_b X_b^T. Blocks are processed in parallel and
// combined with a fixed pairwise tree over block indices, so the result does
// not depend on the thread count.
GramMatrix accumulate_gram(std::span<const DenseMatrix> blocks, std::size_t threads = 1);

// ||X_{j,:}||_2 = sqrt(max(G_jj, 0)).
std::vector<double> feature_norms(const GramMatrix& gram);

struct SvdCheckReport {
    bool passed = false;
    double loss_direct = 0.0;       // ||w_p^T X||^2
    double loss_compressed = 0.0;   // ||w_p^T X'||^2 with X' = U Sigma'
    double loss_rel_diff = 0.0;
    double gram_rel_diff = 0.0;     // max |X'X'^T - XX^T| / max |XX^T|
};

// Checks that the d_in x d_in compression X' = U Sigma' of X (B >= d_in)
// reproduces both the row loss and the Gram matrix. Validation only; the
// pruning pipeline never forms X'.
SvdCheckReport svd_equivalence_check(const DenseMatrix& x, std::span<const double> pruned_weights,
                                     double tol);

}  // namespace sparseswaps
