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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sparseswaps/swapengine.hpp"

namespace sparseswaps::cli {

// "%.17g" in the C locale: '.' decimals, round-trips exactly.
std::string format_double(double v);

// RFC-4180: fields containing ',', '"', CR or LF are quoted, quotes doubled.
std::string csv_field(const std::string& field);
std::string csv_line(std::span<const std::string> fields);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void add(std::vector<std::string> fields);
    std::string str() const;

private:
    std::size_t width_;
    std::string text_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

std::string sha256_hex(std::span<const std::byte> bytes);
std::string sha256_file(const std::filesystem::path& path);

// Columns: layer,row,loss_before,loss_after,swaps,converged,reduction_pct.
// reduction_pct is empty for rows whose warm-start loss is zero.
std::string refine_report_csv(const RefineReport& report, const std::string& layer);
nlohmann::json refine_report_json(const RefineReport& report);

}  // namespace sparseswaps::cli
