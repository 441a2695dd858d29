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

#include "sparseswaps/tensorio.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "sparseswaps/error.hpp"

namespace sparseswaps::tensorio {

namespace {

constexpr char kMagic[4] = {'S', 'S', 'W', 'T'};

template <typename T>
void put_le(std::vector<std::byte>& out, T value) {
    for (std::size_t k = 0; k < sizeof(T); ++k) {
        out.push_back(static_cast<std::byte>((value >> (8 * k)) & 0xFF));
    }
}

template <typename T>
T get_le(std::span<const std::byte> bytes, std::size_t offset) {
    T value = 0;
    for (std::size_t k = 0; k < sizeof(T); ++k) {
        value |= static_cast<T>(std::to_integer<std::uint8_t>(bytes[offset + k])) << (8 * k);
    }
    return value;
}

}  // namespace

std::vector<std::byte> encode_matrix(const DenseMatrix& m) {
    std::vector<std::byte> out;
    out.reserve(kHeaderBytes + 8 * m.size());
    for (char ch : kMagic) out.push_back(static_cast<std::byte>(ch));
    put_le<std::uint32_t>(out, kFormatVersion);
    put_le<std::uint32_t>(out, kDtypeF64);
    put_le<std::uint32_t>(out, 2);
    put_le<std::uint64_t>(out, m.rows());
    put_le<std::uint64_t>(out, m.cols());
    for (double v : m.data()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
    return out;
}

DenseMatrix decode_matrix(std::span<const std::byte> bytes) {
    if (bytes.size() < kHeaderBytes) {
        throw Error(ErrorCode::MalformedHeader,
                    "file has " + std::to_string(bytes.size()) + " bytes, header needs " +
                        std::to_string(kHeaderBytes));
    }
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw Error(ErrorCode::MalformedHeader, "bad magic, expected SSWT");
    }
    const auto version = get_le<std::uint32_t>(bytes, 4);
    const auto dtype = get_le<std::uint32_t>(bytes, 8);
    const auto ndim = get_le<std::uint32_t>(bytes, 12);
    if (version != kFormatVersion) {
        throw Error(ErrorCode::MalformedHeader, "unsupported version " + std::to_string(version));
    }
    if (dtype != kDtypeF64) {
        throw Error(ErrorCode::MalformedHeader, "unsupported dtype code " + std::to_string(dtype));
    }
    if (ndim != 2) {
        throw Error(ErrorCode::MalformedHeader, "expected ndim 2, got " + std::to_string(ndim));
    }
    const auto rows = get_le<std::uint64_t>(bytes, 16);
    const auto cols = get_le<std::uint64_t>(bytes, 24);
    if (rows == 0 || cols == 0) {
        throw Error(ErrorCode::MalformedHeader, "dimensions must be positive");
    }
    constexpr std::uint64_t kMaxElements = std::numeric_limits<std::uint64_t>::max() / 8;
    if (rows > kMaxElements / cols) {
        throw Error(ErrorCode::DimensionOverflow,
                    std::to_string(rows) + "x" + std::to_string(cols) + " overflows");
    }
    const std::uint64_t count = rows * cols;
    const std::size_t payload = bytes.size() - kHeaderBytes;
    if (payload / 8 < count) {
        throw Error(ErrorCode::TruncatedPayload, "declared " + std::to_string(count) +
                                                     " values, found " + std::to_string(payload / 8));
    }
    if (payload != count * 8) {
        throw Error(ErrorCode::MalformedHeader,
                    std::to_string(payload - count * 8) + " trailing bytes after payload");
    }

    std::vector<double> data(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        const double v = std::bit_cast<double>(get_le<std::uint64_t>(bytes, kHeaderBytes + 8 * k));
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NonFiniteValue,
                        "entry (" + std::to_string(k / cols) + ", " + std::to_string(k % cols) + ")");
        }
        data[k] = v;
    }
    return DenseMatrix(rows, cols, std::move(data));
}

DenseMatrix load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(ErrorCode::IoFailure, "read failed for " + path.string());
    return decode_matrix(std::as_bytes(std::span(raw)));
}

void save_matrix(const DenseMatrix& m, const std::filesystem::path& path) {
    const auto bytes = encode_matrix(m);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

PruningMask load_mask(const std::filesystem::path& path) {
    return PruningMask::from_dense(load_matrix(path));
}

void save_mask(const PruningMask& mask, const std::filesystem::path& path) {
    save_matrix(mask.to_dense(), path);
}

}  // namespace sparseswaps::tensorio
