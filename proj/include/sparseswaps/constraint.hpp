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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "sparseswaps/matrix.hpp"

namespace sparseswaps {

// Exactly prune_count zeros in every row.
struct PerRow {
    std::size_t prune_count = 0;
    bool operator==(const PerRow&) const = default;
};

// Exactly n_keep ones in every aligned block of m_block columns.
struct BlockNM {
    std::size_t n_keep = 0;
    std::size_t m_block = 0;
    bool operator==(const BlockNM&) const = default;
};

class SparsityConstraint {
public:
    SparsityConstraint(PerRow c) : pattern_(c) {}
    SparsityConstraint(BlockNM c) : pattern_(c) {}

    // "perrow:<p>" or "nm:<N>:<M>". Throws InvalidConfig on syntax errors.
    static SparsityConstraint parse(std::string_view text);

    const PerRow* per_row() const noexcept { return std::get_if<PerRow>(&pattern_); }
    const BlockNM* block_nm() const noexcept { return std::get_if<BlockNM>(&pattern_); }

    // Throws IncompatibleConstraint if the pattern cannot apply to rows of
    // length d_in.
    void validate(std::size_t d_in) const;

    // Width of the independent swap groups: d_in for PerRow, m_block for N:M.
    std::size_t group_size(std::size_t d_in) const;
    std::size_t pruned_per_row(std::size_t d_in) const;

    bool satisfied_by(std::span<const std::uint8_t> row) const;
    // First violating row, if any.
    std::optional<std::size_t> first_violation(const PruningMask& mask) const;

    std::string to_string() const;

    bool operator==(const SparsityConstraint&) const = default;

private:
    std::variant<PerRow, BlockNM> pattern_;
};

}  // namespace sparseswaps
