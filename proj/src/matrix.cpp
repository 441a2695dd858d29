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

#include "sparseswaps/matrix.hpp"

#include <algorithm>
#include <string>

#include "sparseswaps/error.hpp"

namespace sparseswaps {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw Error(ErrorCode::ShapeMismatch, "data length " + std::to_string(data_.size()) +
                                                  " does not match " + std::to_string(rows_) + "x" +
                                                  std::to_string(cols_));
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

PruningMask::PruningMask(std::size_t rows, std::size_t cols, std::uint8_t fill)
    : rows_(rows), cols_(cols), bits_(rows * cols, fill ? 1 : 0) {}

std::size_t PruningMask::count_pruned() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{0}));
}

DenseMatrix PruningMask::to_dense() const {
    std::vector<double> values(bits_.size());
    std::transform(bits_.begin(), bits_.end(), values.begin(),
                   [](std::uint8_t b) { return b ? 1.0 : 0.0; });
    return DenseMatrix(rows_, cols_, std::move(values));
}

PruningMask PruningMask::from_dense(const DenseMatrix& m) {
    PruningMask mask(m.rows(), m.cols(), 0);
    auto values = m.data();
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (values[k] == 1.0) {
            mask.bits_[k] = 1;
        } else if (values[k] != 0.0) {
            throw Error(ErrorCode::NonBinaryEntry,
                        "entry (" + std::to_string(k / m.cols()) + ", " +
                            std::to_string(k % m.cols()) + ") is " + std::to_string(values[k]));
        }
    }
    return mask;
}

CalibrationMeta CalibrationMeta::make(std::size_t n_samples, std::size_t seq_len) {
    if (n_samples == 0 || seq_len == 0) {
        throw Error(ErrorCode::InvalidConfig, "calibration needs at least one sample and one position");
    }
    return CalibrationMeta{n_samples, seq_len};
}

}  // namespace sparseswaps
