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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "report_io.hpp"
#include "sparseswaps/constraint.hpp"
#include "sparseswaps/error.hpp"
#include "sparseswaps/gram.hpp"
#include "sparseswaps/objective.hpp"
#include "sparseswaps/oracle.hpp"
#include "sparseswaps/swapengine.hpp"
#include "sparseswaps/synth.hpp"
#include "sparseswaps/tensorio.hpp"
#include "sparseswaps/warmstart.hpp"

namespace sparseswaps::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kThreadsEnv = "SPARSESWAPS_THREADS";

class Stopwatch {
public:
    double lap_ms() {
        const auto now = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
        return ms;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

std::size_t threads_from_env() {
    const char* raw = std::getenv(kThreadsEnv);
    if (raw == nullptr || *raw == '\0') return 0;
    std::string_view text(raw);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::InvalidConfig,
                    std::string(kThreadsEnv) + " must be a non-negative integer, got '" + raw + "'");
    }
    return value;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::TooLarge:
            return kExitResource;
        case ErrorCode::DecompositionFailure:
        case ErrorCode::IndexNotInSet:
        case ErrorCode::EmptySet:
            return kExitInternal;
        default:
            return kExitUsage;
    }
}

GramMatrix load_gram(const fs::path& path) {
    return GramMatrix::from_matrix(tensorio::load_matrix(path));
}

void check_layer(const DenseMatrix& weights, const GramMatrix& gram) {
    if (weights.cols() != gram.dim()) {
        throw Error(ErrorCode::ShapeMismatch, "weights have " + std::to_string(weights.cols()) +
                                                  " columns, Gram dimension is " +
                                                  std::to_string(gram.dim()));
    }
}

void check_mask(const DenseMatrix& weights, const PruningMask& mask) {
    if (mask.rows() != weights.rows() || mask.cols() != weights.cols()) {
        throw Error(ErrorCode::ShapeMismatch,
                    "mask is " + std::to_string(mask.rows()) + "x" + std::to_string(mask.cols()) +
                        ", weights are " + std::to_string(weights.rows()) + "x" +
                        std::to_string(weights.cols()));
    }
}

// --constraint wins; otherwise --sparsity s becomes perrow:floor(s * d_in).
SparsityConstraint resolve_constraint(const std::string& text, std::optional<double> sparsity,
                                      std::size_t d_in) {
    std::optional<SparsityConstraint> c;
    if (!text.empty()) {
        c = SparsityConstraint::parse(text);
    } else if (sparsity) {
        c = SparsityConstraint(PerRow{prune_count_from_fraction(d_in, *sparsity)});
    } else {
        throw Error(ErrorCode::InvalidConfig, "one of --constraint or --sparsity is required");
    }
    c->validate(d_in);
    return *c;
}

std::pair<fs::path, fs::path> report_paths(const fs::path& base) {
    if (base.extension() == ".json") {
        auto csv = base;
        csv.replace_extension(".csv");
        return {base, csv};
    }
    return {fs::path(base.string() + ".json"), fs::path(base.string() + ".csv")};
}

// ---------------------------------------------------------------- gram

struct GramArgs {
    std::vector<std::string> activations;
    std::string out;
};

int cmd_gram(const GramArgs& a, std::size_t threads, std::ostream& out) {
    std::vector<DenseMatrix> blocks;
    blocks.reserve(a.activations.size());
    std::size_t total_cols = 0;
    for (const auto& path : a.activations) {
        blocks.push_back(tensorio::load_matrix(path));
        total_cols += blocks.back().cols();
    }
    const auto gram = accumulate_gram(blocks, threads);
    tensorio::save_matrix(gram.values(), a.out);
    out << "d_in=" << gram.dim() << " total_cols=" << total_cols
        << " trace=" << format_double(gram.trace()) << "\n";
    return kExitOk;
}

// ----------------------------------------------------------- warmstart

struct WarmstartArgs {
    std::string weights;
    std::string gram;
    std::string criterion = "wanda";
    std::string constraint;
    std::optional<double> sparsity;
    double ria_exponent = kDefaultRiaExponent;
    std::string mask_out;
};

int cmd_warmstart(const WarmstartArgs& a, std::ostream& out) {
    const auto criterion = parse_criterion(a.criterion);
    const auto weights = tensorio::load_matrix(a.weights);
    const auto gram = load_gram(a.gram);
    check_layer(weights, gram);
    const auto constraint = resolve_constraint(a.constraint, a.sparsity, weights.cols());

    const auto scores = score(criterion, weights, gram, a.ria_exponent);
    for (double s : scores.values.data()) {
        if (!std::isfinite(s) || s < 0.0) {
            throw Error(ErrorCode::InvalidConfig, "criterion produced a non-finite or negative score");
        }
    }
    const auto mask = select_mask(scores, constraint);
    tensorio::save_mask(mask, a.mask_out);

    const std::size_t pruned = mask.count_pruned();
    const std::size_t total = mask.rows() * mask.cols();
    out << "criterion=" << to_string(criterion) << " constraint=" << constraint.to_string()
        << " pruned=" << pruned << " total=" << total
        << " realized_sparsity=" << format_double(static_cast<double>(pruned) / static_cast<double>(total))
        << "\n";
    return kExitOk;
}

// -------------------------------------------------------------- refine

struct RefineArgs {
    std::string weights;
    std::string gram;
    std::string mask_in;
    std::string constraint;
    std::optional<double> sparsity;
    std::size_t t_max = 100;
    double epsilon = 0.0;
    std::string mask_out;
    std::string report;
};

int cmd_refine(const RefineArgs& a, std::size_t threads, std::ostream& out) {
    Stopwatch clock;
    const auto weights = tensorio::load_matrix(a.weights);
    const auto gram = load_gram(a.gram);
    const auto mask_in = tensorio::load_mask(a.mask_in);
    check_layer(weights, gram);
    check_mask(weights, mask_in);
    const auto constraint = resolve_constraint(a.constraint, a.sparsity, weights.cols());
    const double load_ms = clock.lap_ms();

    const RefineConfig config{a.t_max, a.epsilon};
    const auto result = refine_matrix(weights, mask_in, gram, constraint, config, threads);
    const double refine_ms = clock.lap_ms();
    tensorio::save_mask(result.mask, a.mask_out);

    std::size_t swaps = 0;
    for (const auto& r : result.report.rows) swaps += r.swaps;

    if (!a.report.empty()) {
        const auto [json_path, csv_path] = report_paths(a.report);
        json doc = refine_report_json(result.report);
        doc["config"] = {{"weights", a.weights},       {"gram", a.gram},
                         {"mask_in", a.mask_in},       {"mask_out", a.mask_out},
                         {"constraint", constraint.to_string()},
                         {"t_max", a.t_max},           {"epsilon", a.epsilon},
                         {"threads", threads}};
        doc["artifacts"] = {{"weights_sha256", sha256_file(a.weights)},
                            {"gram_sha256", sha256_file(a.gram)},
                            {"mask_in_sha256", sha256_file(a.mask_in)},
                            {"mask_out_sha256", sha256_file(a.mask_out)}};
        doc["timing_ms"] = {{"load", load_ms}, {"refine", refine_ms}};
        write_text(json_path, doc.dump(2) + "\n");
        write_text(csv_path, refine_report_csv(result.report, fs::path(a.weights).stem().string()));
    }

    out << "rows=" << weights.rows() << " swaps=" << swaps
        << " total_before=" << format_double(result.report.total_before)
        << " total_after=" << format_double(result.report.total_after)
        << " mean_reduction_pct=" << format_double(result.report.mean_reduction_pct) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
    std::string weights;
    std::string gram;
    std::string mask_in;
};

int cmd_eval(const EvalArgs& a, std::size_t threads, std::ostream& out) {
    const auto weights = tensorio::load_matrix(a.weights);
    const auto gram = load_gram(a.gram);
    const auto mask = tensorio::load_mask(a.mask_in);
    check_layer(weights, gram);
    check_mask(weights, mask);

    const auto loss = full_loss(weights, mask, gram, threads);
    json rows = json::array();
    for (const auto& r : loss.rows) {
        rows.push_back({{"row", r.row_index}, {"loss", r.loss}, {"pruned_count", r.pruned_count}});
    }
    out << json{{"total", loss.total}, {"rows", rows}}.dump(2) << "\n";
    return kExitOk;
}

// -------------------------------------------------------------- oracle

struct OracleArgs {
    std::string weights;
    std::string gram;
    std::string constraint;
    std::optional<double> sparsity;
    std::string mask_in;
    double epsilon = 0.0;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out) {
    const auto weights = tensorio::load_matrix(a.weights);
    const auto gram = load_gram(a.gram);
    check_layer(weights, gram);
    const auto constraint = resolve_constraint(a.constraint, a.sparsity, weights.cols());

    std::optional<PruningMask> mask;
    if (!a.mask_in.empty()) {
        mask = tensorio::load_mask(a.mask_in);
        check_mask(weights, *mask);
        if (const auto bad = constraint.first_violation(*mask)) {
            throw Error(ErrorCode::InfeasibleWarmstart,
                        "row " + std::to_string(*bad) + " of the supplied mask violates " +
                            constraint.to_string());
        }
    }

    const auto count = oracle::feasible_mask_count(weights.cols(), constraint);
    const auto budget = constraint.per_row() ? oracle::kPerRowBudget : oracle::kBlockBudget;
    if (count > budget) {
        throw Error(ErrorCode::TooLarge, std::to_string(count) + " feasible masks per row exceed the budget of " +
                                             std::to_string(budget));
    }

    json rows = json::array();
    double optimum_total = 0.0;
    double mask_total = 0.0;
    bool all_one_swap_optimal = true;
    for (std::size_t i = 0; i < weights.rows(); ++i) {
        const auto best = oracle::brute_force_row(weights.row(i), gram, constraint);
        optimum_total += best.best_loss;
        std::vector<std::size_t> pruned;
        for (std::size_t j = 0; j < best.best_mask.size(); ++j) {
            if (!best.best_mask[j]) pruned.push_back(j);
        }
        json row = {{"row", i},
                    {"optimum", best.best_loss},
                    {"optimal_pruned", pruned},
                    {"n_evaluated", best.n_evaluated}};
        if (mask) {
            const double loss = row_loss_gram(weights.row(i), mask->row(i), gram);
            const bool local = oracle::is_one_swap_optimal(weights.row(i), mask->row(i), gram,
                                                           constraint, a.epsilon);
            mask_total += loss;
            all_one_swap_optimal = all_one_swap_optimal && local;
            row["mask_loss"] = loss;
            row["one_swap_optimal"] = local;
            row["gap"] = loss - best.best_loss;
        }
        rows.push_back(row);
    }

    json doc = {{"constraint", constraint.to_string()}, {"optimum_total", optimum_total}, {"rows", rows}};
    if (mask) {
        doc["mask_total"] = mask_total;
        doc["gap_total"] = mask_total - optimum_total;
        doc["one_swap_optimal"] = all_one_swap_optimal;
    }
    out << doc.dump(2) << "\n";
    return kExitOk;
}

// --------------------------------------------------------------- bench

struct BenchArgs {
    synth::SynthConfig synth;
    std::vector<std::string> criteria{"magnitude", "wanda"};
    std::vector<std::size_t> t_max_list;
    std::string constraint;
    double sparsity = 0.6;
    double epsilon = 0.0;
    double ria_exponent = kDefaultRiaExponent;
    std::size_t group_size = 8;
    std::string out_dir = "bench_out";
};

int cmd_bench(const BenchArgs& a, std::size_t threads, std::ostream& out) {
    if (a.group_size == 0) throw Error(ErrorCode::InvalidConfig, "--group-size must be >= 1");
    std::vector<Criterion> criteria;
    for (const auto& name : a.criteria) criteria.push_back(parse_criterion(name));
    if (criteria.empty()) throw Error(ErrorCode::InvalidConfig, "--criteria needs at least one value");

    Stopwatch clock;
    const auto layer = synth::generate_layer(a.synth);
    const double synth_ms = clock.lap_ms();
    const DenseMatrix blocks[] = {layer.activations};
    const auto gram = accumulate_gram(blocks, threads);
    const double gram_ms = clock.lap_ms();
    const auto constraint = resolve_constraint(a.constraint, a.sparsity, a.synth.d_in);

    fs::create_directories(a.out_dir);
    const fs::path dir(a.out_dir);
    tensorio::save_matrix(layer.weights, dir / "weights.sswt");
    tensorio::save_matrix(layer.activations, dir / "activations.sswt");
    tensorio::save_matrix(gram.values(), dir / "gram.sswt");

    CsvWriter rows_csv({"criterion", "t_max", "layer", "row", "loss_warm", "loss_refined", "swaps",
                        "converged", "reduction_pct"});
    CsvWriter groups_csv({"criterion", "t_max", "layer", "group", "row_begin", "row_end",
                          "rows_counted", "mean_reduction_pct"});
    json records = json::array();
    const std::string layer_name = "synthetic";

    for (const auto criterion : criteria) {
        clock.lap_ms();
        const auto warm = select_mask(score(criterion, layer.weights, gram, a.ria_exponent), constraint);
        const double warm_ms = clock.lap_ms();

        for (const auto t_max : a.t_max_list) {
            const auto result =
                refine_matrix(layer.weights, warm, gram, constraint, RefineConfig{t_max, a.epsilon}, threads);
            const auto& report = result.report;
            std::size_t improved = 0;
            std::size_t swaps = 0;
            for (const auto& r : report.rows) {
                improved += (r.reduction_pct && *r.reduction_pct > 0.0) ? 1 : 0;
                swaps += r.swaps;
                rows_csv.add({std::string(to_string(criterion)), std::to_string(t_max), layer_name,
                              std::to_string(r.row), format_double(r.loss_before),
                              format_double(r.loss_after), std::to_string(r.swaps),
                              r.converged ? "1" : "0",
                              r.reduction_pct ? format_double(*r.reduction_pct) : ""});
            }
            for (std::size_t begin = 0, g = 0; begin < report.rows.size(); begin += a.group_size, ++g) {
                const std::size_t end = std::min(begin + a.group_size, report.rows.size());
                double sum = 0.0;
                std::size_t counted = 0;
                for (std::size_t i = begin; i < end; ++i) {
                    if (report.rows[i].reduction_pct) {
                        sum += *report.rows[i].reduction_pct;
                        ++counted;
                    }
                }
                groups_csv.add({std::string(to_string(criterion)), std::to_string(t_max), layer_name,
                                std::to_string(g), std::to_string(begin), std::to_string(end),
                                std::to_string(counted),
                                counted ? format_double(sum / static_cast<double>(counted)) : ""});
            }
            records.push_back({{"criterion", to_string(criterion)},
                               {"t_max", t_max},
                               {"total_warm", report.total_before},
                               {"total_refined", report.total_after},
                               {"mean_reduction_pct", report.mean_reduction_pct},
                               {"rows_improved", improved},
                               {"zero_loss_rows", report.zero_loss_rows},
                               {"swaps", swaps},
                               {"wall_time_ms", {{"warmstart", warm_ms}, {"refine", report.wall_time_ms}}}});
            out << "criterion=" << to_string(criterion) << " t_max=" << t_max
                << " total_warm=" << format_double(report.total_before)
                << " total_refined=" << format_double(report.total_after)
                << " mean_reduction_pct=" << format_double(report.mean_reduction_pct)
                << " rows_improved=" << improved << "/" << report.rows.size() << "\n";
        }
    }

    write_text(dir / "bench_rows.csv", rows_csv.str());
    write_text(dir / "bench_groups.csv", groups_csv.str());

    const auto& s = a.synth;
    json summary = {
        {"config",
         {{"d_in", s.d_in},
          {"d_out", s.d_out},
          {"n_cols", s.n_cols},
          {"corr_rank", s.corr_rank},
          {"outliers", s.outlier_count},
          {"outlier_scale", s.outlier_scale},
          {"noise_sigma", synth::kNoiseSigma},
          {"criteria", a.criteria},
          {"t_max_list", a.t_max_list},
          {"constraint", constraint.to_string()},
          {"epsilon", a.epsilon},
          {"ria_exponent", a.ria_exponent},
          {"group_size", a.group_size},
          {"threads", threads}}},
        {"seed", s.seed},
        {"artifacts",
         {{"weights_sha256", sha256_file(dir / "weights.sswt")},
          {"activations_sha256", sha256_file(dir / "activations.sswt")},
          {"gram_sha256", sha256_file(dir / "gram.sswt")}}},
        {"outlier_rows", layer.outlier_rows},
        {"wall_time_ms", {{"synth", synth_ms}, {"gram", gram_ms}}},
        {"records", records}};
    write_text(dir / "bench_summary.json", summary.dump(2) + "\n");
    return kExitOk;
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& tok) {
        return tok == flag || tok.rfind(flag + "=", 0) == 0;
    });
}

std::string json_scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

}  // namespace

std::vector<std::string> merge_config_file(const std::vector<std::string>& args) {
    std::optional<std::string> path;
    for (std::size_t k = 0; k < args.size(); ++k) {
        if (args[k] == "--config" && k + 1 < args.size()) path = args[k + 1];
        if (args[k].rfind("--config=", 0) == 0) path = args[k].substr(9);
    }
    if (!path) return args;

    std::ifstream in(*path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open config " + *path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::InvalidConfig, "config " + *path + ": " + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::InvalidConfig, "config " + *path + " is not a JSON object");

    auto merged = args;
    for (const auto& [key, value] : doc.items()) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (flag == "--config" || has_flag(args, flag)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) merged.push_back(flag);
        } else if (value.is_array()) {
            if (value.empty()) continue;
            std::string joined;
            for (const auto& item : value) joined += (joined.empty() ? "" : ",") + json_scalar(item);
            merged.push_back(flag);
            merged.push_back(joined);
        } else if (!value.is_null()) {
            merged.push_back(flag);
            merged.push_back(json_scalar(value));
        }
    }
    return merged;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Layer-wise pruning mask selection with exact 1-swap refinement", "sparseswaps"};
    app.require_subcommand(1);
    std::string config_path;

    GramArgs gram_args;
    auto* gram = app.add_subcommand("gram", "Accumulate G = X X^T from activation blocks");
    gram->add_option("--activations", gram_args.activations, "SSWT d_in x b activation blocks")
        ->required()
        ->expected(1, -1);
    gram->add_option("--out", gram_args.out, "Output SSWT Gram matrix")->required();

    WarmstartArgs warm_args;
    auto* warm = app.add_subcommand("warmstart", "Select a feasible mask from importance scores");
    warm->add_option("--weights", warm_args.weights)->required();
    warm->add_option("--gram", warm_args.gram)->required();
    warm->add_option("--criterion", warm_args.criterion, "magnitude | wanda | ria")->capture_default_str();
    warm->add_option("--constraint", warm_args.constraint, "perrow:<p> | nm:<N>:<M>");
    warm->add_option("--sparsity", warm_args.sparsity, "Per-row pruned fraction, used without --constraint");
    warm->add_option("--ria-exponent", warm_args.ria_exponent)->capture_default_str();
    warm->add_option("--mask-out", warm_args.mask_out)->required();

    RefineArgs refine_args;
    auto* refine = app.add_subcommand("refine", "Greedy 1-swap refinement of a warm-start mask");
    refine->add_option("--weights", refine_args.weights)->required();
    refine->add_option("--gram", refine_args.gram)->required();
    refine->add_option("--mask-in", refine_args.mask_in)->required();
    refine->add_option("--constraint", refine_args.constraint, "perrow:<p> | nm:<N>:<M>");
    refine->add_option("--sparsity", refine_args.sparsity);
    refine->add_option("--t-max", refine_args.t_max, "Maximum swaps per row")->capture_default_str();
    refine->add_option("--epsilon", refine_args.epsilon, "Accept swaps with delta < -epsilon")
        ->capture_default_str();
    refine->add_option("--mask-out", refine_args.mask_out)->required();
    refine->add_option("--report", refine_args.report, "Report path; writes .json and .csv");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Print the pruning loss of a mask");
    eval->add_option("--weights", eval_args.weights)->required();
    eval->add_option("--gram", eval_args.gram)->required();
    eval->add_option("--mask-in,--mask", eval_args.mask_in)->required();

    OracleArgs oracle_args;
    auto* orc = app.add_subcommand("oracle", "Exhaustive optimum for small rows");
    orc->add_option("--weights", oracle_args.weights)->required();
    orc->add_option("--gram", oracle_args.gram)->required();
    orc->add_option("--constraint", oracle_args.constraint);
    orc->add_option("--sparsity", oracle_args.sparsity);
    orc->add_option("--mask-in,--mask", oracle_args.mask_in, "Mask to certify against the optimum");
    orc->add_option("--epsilon", oracle_args.epsilon)->capture_default_str();

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "Synthetic warm-start vs refinement sweep");
    bench->add_option("--d-in", bench_args.synth.d_in)->capture_default_str();
    bench->add_option("--d-out", bench_args.synth.d_out)->capture_default_str();
    bench->add_option("--n-cols", bench_args.synth.n_cols)->capture_default_str();
    bench->add_option("--corr-rank", bench_args.synth.corr_rank)->capture_default_str();
    bench->add_option("--outliers", bench_args.synth.outlier_count)->capture_default_str();
    bench->add_option("--outlier-scale", bench_args.synth.outlier_scale)->capture_default_str();
    bench->add_option("--seed", bench_args.synth.seed)->capture_default_str();
    bench->add_option("--criteria", bench_args.criteria)->delimiter(',')->capture_default_str();
    bench->add_option("--t-max-list,--t-max", bench_args.t_max_list, "Comma-separated iteration budgets")
        ->delimiter(',');
    bench->add_option("--constraint", bench_args.constraint);
    bench->add_option("--sparsity", bench_args.sparsity)->capture_default_str();
    bench->add_option("--epsilon", bench_args.epsilon)->capture_default_str();
    bench->add_option("--ria-exponent", bench_args.ria_exponent)->capture_default_str();
    bench->add_option("--group-size", bench_args.group_size, "Rows per aggregation group")
        ->capture_default_str();
    bench->add_option("--out-dir", bench_args.out_dir)->capture_default_str();

    for (auto* sub : {gram, warm, refine, eval, orc, bench}) {
        sub->add_option("--config", config_path, "JSON file of flag defaults; flags take precedence");
    }

    try {
        auto merged = merge_config_file(args);
        std::reverse(merged.begin(), merged.end());
        app.parse(merged);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    }

    try {
        const std::size_t threads = threads_from_env();
        if (gram->parsed()) return cmd_gram(gram_args, threads, out);
        if (warm->parsed()) return cmd_warmstart(warm_args, out);
        if (refine->parsed()) return cmd_refine(refine_args, threads, out);
        if (eval->parsed()) return cmd_eval(eval_args, threads, out);
        if (orc->parsed()) return cmd_oracle(oracle_args, out);
        if (bench->parsed()) {
            if (bench_args.t_max_list.empty()) {
                err << "error: --t-max-list needs at least one value\n" << bench->help();
                return kExitUsage;
            }
            return cmd_bench(bench_args, threads, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}

}  // namespace sparseswaps::cli
