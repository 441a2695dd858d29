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
#include <cstdint>
#include <span>
#include <vector>

namespace sparseswaps {

// Row-major matrix of doubles. Carries weights (d_out x d_in), calibration
// activations (d_in x B) and Gram matrices (d_in x d_in).
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Binary keep (1) / prune (0) matrix with the shape of the weight matrix it masks.
class PruningMask {
public:
    PruningMask() = default;
    PruningMask(std::size_t rows, std::size_t cols, std::uint8_t fill = 1);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    std::uint8_t& operator()(std::size_t i, std::size_t j) { return bits_[i * cols_ + j]; }
    std::uint8_t operator()(std::size_t i, std::size_t j) const { return bits_[i * cols_ + j]; }

    std::span<std::uint8_t> row(std::size_t i) { return {bits_.data() + i * cols_, cols_}; }
    std::span<const std::uint8_t> row(std::size_t i) const { return {bits_.data() + i * cols_, cols_}; }

    std::size_t count_pruned() const noexcept;

    // 0.0 / 1.0 reals, the on-disk representation.
    DenseMatrix to_dense() const;
    // Throws NonBinaryEntry for any value other than exactly 0.0 or 1.0.
    static PruningMask from_dense(const DenseMatrix& m);

    bool operator==(const PruningMask&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> bits_;
};

struct CalibrationMeta {
    std::size_t n_samples = 0;
    std::size_t seq_len = 0;

    // Throws InvalidConfig when either count is zero.
    static CalibrationMeta make(std::size_t n_samples, std::size_t seq_len);

    std::size_t total_cols() const noexcept { return n_samples * seq_len; }
};

}  // namespace sparseswaps
