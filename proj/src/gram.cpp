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

#include "sparseswaps/gram.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "sparseswaps/error.hpp"
#include "sparseswaps/parallel.hpp"

namespace sparseswaps {

namespace {

DenseMatrix block_product(const DenseMatrix& x) {
    const std::size_t d = x.rows();
    DenseMatrix g(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        const auto xi = x.row(i);
        for (std::size_t j = i; j < d; ++j) {
            const auto xj = x.row(j);
            double s = 0.0;
            for (std::size_t k = 0; k < xi.size(); ++k) s += xi[k] * xj[k];
            g(i, j) = s;
            g(j, i) = s;
        }
    }
    return g;
}

void add_into(DenseMatrix& acc, const DenseMatrix& other) {
    auto a = acc.data();
    auto b = other.data();
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
}

}  // namespace

GramMatrix GramMatrix::from_matrix(const DenseMatrix& m) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorCode::ShapeMismatch, "Gram matrix must be square, got " +
                                                  std::to_string(m.rows()) + "x" +
                                                  std::to_string(m.cols()));
    }
    DenseMatrix sym(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) sym(i, j) = 0.5 * (m(i, j) + m(j, i));
    }
    return GramMatrix(std::move(sym));
}

double GramMatrix::trace() const noexcept {
    double t = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) t += values_(i, i);
    return t;
}

GramMatrix accumulate_gram(std::span<const DenseMatrix> blocks, std::size_t threads) {
    if (blocks.empty()) throw Error(ErrorCode::ShapeMismatch, "no calibration blocks");
    const std::size_t d = blocks.front().rows();
    std::size_t total_cols = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].rows() != d) {
            throw Error(ErrorCode::ShapeMismatch, "block " + std::to_string(b) + " has " +
                                                      std::to_string(blocks[b].rows()) +
                                                      " rows, expected " + std::to_string(d));
        }
        total_cols += blocks[b].cols();
    }
    if (d == 0 || total_cols == 0) {
        throw Error(ErrorCode::ShapeMismatch, "calibration data must have at least one column");
    }

    std::vector<DenseMatrix> partial(blocks.size());
    parallel_for(blocks.size(), threads, [&](std::size_t b) { partial[b] = block_product(blocks[b]); });

    // Pairwise tree: level by level, slot 2k absorbs slot 2k+1.
    for (std::size_t stride = 1; stride < partial.size(); stride *= 2) {
        const std::size_t pairs = (partial.size() + 2 * stride - 1) / (2 * stride);
        parallel_for(pairs, threads, [&](std::size_t k) {
            const std::size_t left = 2 * stride * k;
            const std::size_t right = left + stride;
            if (right < partial.size()) add_into(partial[left], partial[right]);
        });
    }
    return GramMatrix::from_matrix(partial.front());
}

std::vector<double> feature_norms(const GramMatrix& gram) {
    std::vector<double> norms(gram.dim());
    for (std::size_t j = 0; j < gram.dim(); ++j) norms[j] = std::sqrt(std::max(gram(j, j), 0.0));
    return norms;
}

SvdCheckReport svd_equivalence_check(const DenseMatrix& x, std::span<const double> pruned_weights,
                                     double tol) {
    const std::size_t d = x.rows();
    const std::size_t b = x.cols();
    if (pruned_weights.size() != d) {
        throw Error(ErrorCode::ShapeMismatch, "weight vector has " +
                                                  std::to_string(pruned_weights.size()) +
                                                  " entries, X has " + std::to_string(d) + " rows");
    }
    if (b < d) {
        throw Error(ErrorCode::ShapeMismatch, "compression needs B >= d_in, got B=" +
                                                  std::to_string(b) + " d_in=" + std::to_string(d));
    }

    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> xm(x.data().data(), static_cast<Eigen::Index>(d),
                                        static_cast<Eigen::Index>(b));
    const Eigen::Map<const Eigen::VectorXd> wp(pruned_weights.data(), static_cast<Eigen::Index>(d));

    Eigen::BDCSVD<Eigen::MatrixXd> svd(xm, Eigen::ComputeThinU);
    if (svd.info() != Eigen::Success) {
        throw Error(ErrorCode::DecompositionFailure, "SVD did not converge");
    }
    // Thin U is d x d here because B >= d.
    const Eigen::MatrixXd compressed = svd.matrixU() * svd.singularValues().asDiagonal();

    SvdCheckReport report;
    report.loss_direct = (wp.transpose() * xm).squaredNorm();
    report.loss_compressed = (wp.transpose() * compressed).squaredNorm();
    const double loss_scale = std::max(std::abs(report.loss_direct), std::abs(report.loss_compressed));
    report.loss_rel_diff =
        loss_scale > 0.0 ? std::abs(report.loss_direct - report.loss_compressed) / loss_scale : 0.0;

    const Eigen::MatrixXd gram = xm * xm.transpose();
    const Eigen::MatrixXd gram_compressed = compressed * compressed.transpose();
    const double gram_scale = gram.cwiseAbs().maxCoeff();
    report.gram_rel_diff =
        gram_scale > 0.0 ? (gram - gram_compressed).cwiseAbs().maxCoeff() / gram_scale : 0.0;

    report.passed = report.loss_rel_diff <= tol && report.gram_rel_diff <= tol;
    return report;
}

}  // namespace sparseswaps
