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

#include "report_io.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "sparseswaps/error.hpp"

namespace sparseswaps::cli {

std::string format_double(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

std::string csv_field(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::string csv_line(std::span<const std::string> fields) {
    std::string line;
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (k) line += ',';
        line += csv_field(fields[k]);
    }
    line += "\r\n";
    return line;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()), text_(csv_line(header)) {}

void CsvWriter::add(std::vector<std::string> fields) {
    if (fields.size() != width_) throw std::logic_error("CSV record width differs from header");
    text_ += csv_line(fields);
}

std::string CsvWriter::str() const { return text_; }

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

std::string sha256_hex(std::span<const std::byte> bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < len; ++k) {
        out += kHex[digest[k] >> 4];
        out += kHex[digest[k] & 0xF];
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return sha256_hex(std::as_bytes(std::span(raw)));
}

std::string refine_report_csv(const RefineReport& report, const std::string& layer) {
    CsvWriter csv({"layer", "row", "loss_before", "loss_after", "swaps", "converged", "reduction_pct"});
    for (const auto& r : report.rows) {
        csv.add({layer, std::to_string(r.row), format_double(r.loss_before), format_double(r.loss_after),
                 std::to_string(r.swaps), r.converged ? "1" : "0",
                 r.reduction_pct ? format_double(*r.reduction_pct) : ""});
    }
    return csv.str();
}

nlohmann::json refine_report_json(const RefineReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"row", r.row},
                        {"loss_before", r.loss_before},
                        {"loss_after", r.loss_after},
                        {"swaps", r.swaps},
                        {"converged", r.converged},
                        {"reduction_pct", r.reduction_pct ? nlohmann::json(*r.reduction_pct)
                                                          : nlohmann::json(nullptr)}});
    }
    return {{"rows", rows},
            {"summary",
             {{"total_before", report.total_before},
              {"total_after", report.total_after},
              {"mean_reduction_pct", report.mean_reduction_pct},
              {"zero_loss_rows", report.zero_loss_rows},
              {"wall_time_ms", report.wall_time_ms}}}};
}

}  // namespace sparseswaps::cli
