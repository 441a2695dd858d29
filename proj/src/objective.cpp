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

#include "sparseswaps/objective.hpp"

#include <string>

#include "sparseswaps/error.hpp"
#include "sparseswaps/parallel.hpp"

namespace sparseswaps {

namespace {

void check_row_shapes(std::size_t w, std::size_t m, std::size_t d, const char* what) {
    if (w != d || m != d) {
        throw Error(ErrorCode::ShapeMismatch, std::string(what) + ": weights " + std::to_string(w) +
                                                  ", mask " + std::to_string(m) + ", expected " +
                                                  std::to_string(d));
    }
}

}  // namespace

double row_loss_gram(std::span<const double> w, std::span<const std::uint8_t> mask,
                     const GramMatrix& gram) {
    const std::size_t d = gram.dim();
    check_row_shapes(w.size(), mask.size(), d, "row_loss_gram");

    std::vector<std::size_t> pruned;
    for (std::size_t j = 0; j < d; ++j) {
        if (!mask[j]) pruned.push_back(j);
    }
    double loss = 0.0;
    for (std::size_t i : pruned) {
        const auto gi = gram.row(i);
        double gv = 0.0;
        for (std::size_t j : pruned) gv += gi[j] * w[j];
        loss += w[i] * gv;
    }
    // G is PSD; a negative value can only be rounding noise around zero.
    return loss < 0.0 ? 0.0 : loss;
}

LayerLoss full_loss(const DenseMatrix& weights, const PruningMask& mask, const GramMatrix& gram,
                    std::size_t threads) {
    if (mask.rows() != weights.rows() || mask.cols() != weights.cols()) {
        throw Error(ErrorCode::ShapeMismatch, "mask " + std::to_string(mask.rows()) + "x" +
                                                  std::to_string(mask.cols()) + " vs weights " +
                                                  std::to_string(weights.rows()) + "x" +
                                                  std::to_string(weights.cols()));
    }
    if (weights.cols() != gram.dim()) {
        throw Error(ErrorCode::ShapeMismatch, "weights have " + std::to_string(weights.cols()) +
                                                  " columns, Gram dimension is " +
                                                  std::to_string(gram.dim()));
    }

    LayerLoss out;
    out.rows.resize(weights.rows());
    parallel_for(weights.rows(), threads, [&](std::size_t i) {
        const auto m = mask.row(i);
        std::size_t pruned = 0;
        for (auto bit : m) pruned += bit ? 0 : 1;
        out.rows[i] = RowLossBreakdown{i, row_loss_gram(weights.row(i), m, gram), pruned};
    });
    for (const auto& r : out.rows) out.total += r.loss;
    return out;
}

double row_loss_direct(std::span<const double> w, std::span<const std::uint8_t> mask,
                       const DenseMatrix& x) {
    check_row_shapes(w.size(), mask.size(), x.rows(), "row_loss_direct");
    double loss = 0.0;
    for (std::size_t k = 0; k < x.cols(); ++k) {
        double residual = 0.0;
        for (std::size_t j = 0; j < x.rows(); ++j) {
            residual += (mask[j] ? 0.0 : 1.0) * w[j] * x(j, k);
        }
        loss += residual * residual;
    }
    return loss;
}

}  // namespace sparseswaps
