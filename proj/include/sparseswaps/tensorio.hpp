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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sparseswaps/matrix.hpp"

// SSWT container, all fields little-endian, no padding:
//
//   "SSWT"            4 bytes magic
//   version   u32     = 1
//   dtype     u32     = 1 (f64)
//   ndim      u32     = 2
//   dims      2 x u64 rows, cols
//   payload   rows*cols f64, row-major
//
// Masks use the same container with entries restricted to 0.0 / 1.0.
namespace sparseswaps::tensorio {

inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::uint32_t kDtypeF64 = 1;
inline constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 4 + 8 + 8;

std::vector<std::byte> encode_matrix(const DenseMatrix& m);
DenseMatrix decode_matrix(std::span<const std::byte> bytes);

DenseMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(const DenseMatrix& m, const std::filesystem::path& path);

PruningMask load_mask(const std::filesystem::path& path);
void save_mask(const PruningMask& mask, const std::filesystem::path& path);

}  // namespace sparseswaps::tensorio
