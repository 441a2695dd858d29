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

#include "sparseswaps/constraint.hpp"

#include <charconv>
#include <vector>

#include "sparseswaps/error.hpp"

namespace sparseswaps {

namespace {

std::size_t parse_count(std::string_view text, std::string_view whole) {
    std::size_t value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end) {
        throw Error(ErrorCode::InvalidConfig,
                    "bad count '" + std::string(text) + "' in constraint '" + std::string(whole) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

}  // namespace

SparsityConstraint SparsityConstraint::parse(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() == 2 && parts[0] == "perrow") {
        return PerRow{parse_count(parts[1], text)};
    }
    if (parts.size() == 3 && parts[0] == "nm") {
        const auto n = parse_count(parts[1], text);
        const auto m = parse_count(parts[2], text);
        if (n == 0 || m == 0 || n > m) {
            throw Error(ErrorCode::InvalidConfig,
                        "N:M constraint needs 0 < N <= M, got '" + std::string(text) + "'");
        }
        return BlockNM{n, m};
    }
    throw Error(ErrorCode::InvalidConfig,
                "constraint must be 'perrow:<p>' or 'nm:<N>:<M>', got '" + std::string(text) + "'");
}

void SparsityConstraint::validate(std::size_t d_in) const {
    if (const auto* c = per_row()) {
        if (c->prune_count > d_in) {
            throw Error(ErrorCode::IncompatibleConstraint,
                        "cannot prune " + std::to_string(c->prune_count) + " of " +
                            std::to_string(d_in) + " weights per row");
        }
        return;
    }
    const auto& c = *block_nm();
    if (c.n_keep == 0 || c.n_keep > c.m_block) {
        throw Error(ErrorCode::IncompatibleConstraint, "N:M needs 0 < N <= M, got " + to_string());
    }
    if (d_in % c.m_block != 0) {
        throw Error(ErrorCode::IncompatibleConstraint,
                    "d_in " + std::to_string(d_in) + " not divisible by block size " +
                        std::to_string(c.m_block));
    }
}

std::size_t SparsityConstraint::group_size(std::size_t d_in) const {
    if (per_row()) return d_in;
    return block_nm()->m_block;
}

std::size_t SparsityConstraint::pruned_per_row(std::size_t d_in) const {
    if (const auto* c = per_row()) return c->prune_count;
    const auto& c = *block_nm();
    return (d_in / c.m_block) * (c.m_block - c.n_keep);
}

bool SparsityConstraint::satisfied_by(std::span<const std::uint8_t> row) const {
    if (const auto* c = per_row()) {
        std::size_t pruned = 0;
        for (auto bit : row) pruned += bit ? 0 : 1;
        return pruned == c->prune_count;
    }
    const auto& c = *block_nm();
    if (c.m_block == 0 || row.size() % c.m_block != 0) return false;
    for (std::size_t start = 0; start < row.size(); start += c.m_block) {
        std::size_t kept = 0;
        for (std::size_t j = start; j < start + c.m_block; ++j) kept += row[j] ? 1 : 0;
        if (kept != c.n_keep) return false;
    }
    return true;
}

std::optional<std::size_t> SparsityConstraint::first_violation(const PruningMask& mask) const {
    for (std::size_t i = 0; i < mask.rows(); ++i) {
        if (!satisfied_by(mask.row(i))) return i;
    }
    return std::nullopt;
}

std::string SparsityConstraint::to_string() const {
    if (const auto* c = per_row()) return "perrow:" + std::to_string(c->prune_count);
    const auto& c = *block_nm();
    return "nm:" + std::to_string(c.n_keep) + ":" + std::to_string(c.m_block);
}

}  // namespace sparseswaps
