// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "csqp/commands.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <iostream>
#include <string>
#include <vector>

namespace {

bool parse_crop(const std::string& text, csqp::CropRect& rect) {
    int values[4];
    const char* cursor = text.data();
    const char* end = text.data() + text.size();
    for (int i = 0; i < 4; ++i) {
        const auto [ptr, ec] = std::from_chars(cursor, end, values[i]);
        if (ec != std::errc()) {
            return false;
        }
        cursor = ptr;
        if (i < 3) {
            if (cursor == end || *cursor != ',') {
                return false;
            }
            ++cursor;
        }
    }
    if (cursor != end) {
        return false;
    }
    rect = {values[0], values[1], values[2], values[3]};
    return true;
}

bool parse_anmrr_k(const std::string& text, csqp::AnmrrKPolicy& policy, std::size_t& fixed_k) {
    if (text == "maxclass" || text == "max-class-size") {
        policy = csqp::AnmrrKPolicy::MaxClassSize;
        return true;
    }
    if (text == "2ng") {
        policy = csqp::AnmrrKPolicy::TwiceNg;
        return true;
    }
    if (text.rfind("fixed:", 0) == 0) {
        const std::string number = text.substr(6);
        const auto [ptr, ec] =
            std::from_chars(number.data(), number.data() + number.size(), fixed_k);
        if (ec != std::errc() || ptr != number.data() + number.size() || fixed_k == 0) {
            return false;
        }
        policy = csqp::AnmrrKPolicy::Fixed;
        return true;
    }
    return false;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local-descriptor extraction and retrieval/recognition benchmarks"};
    app.set_version_flag("--version", "csqpbench 1.0.0");
    app.require_subcommand(1);

    csqp::ExtractConfig extract;
    csqp::BenchmarkConfig benchmark;
    csqp::AnalyzeConfig analyze;
    csqp::ExportConfig exports;

    std::string benchmark_cache;
    std::string analyze_out;
    std::string export_out;
    std::string anmrr_k_text = "maxclass";
    std::vector<std::string> crop_texts;
    bool raw_counts = false;
    bool no_mirror = false;

    CLI::App* cmd_ext = app.add_subcommand("extract", "Describe a dataset into a cache file");
    cmd_ext->add_option("-d,--descriptor", extract.descriptor,
                        "Descriptor id: csqp, lbp, cslbp, csltp, slbp")
        ->capture_default_str();
    cmd_ext->add_option("--dataset", extract.dataset_root, "Dataset root directory")
        ->required();
    cmd_ext->add_option("-o,--out", extract.out_path, "Cache file to write")->required();
    cmd_ext->add_option("--poses", extract.poses, "Keep only these pose codes")
        ->delimiter(',');
    cmd_ext->add_option("--csltp-threshold", extract.csltp_threshold,
                        "CSLTP ternary threshold")
        ->capture_default_str();
    cmd_ext->add_option("-j,--jobs", extract.jobs, "Worker threads (0 = all cores)")
        ->capture_default_str();

    CLI::App* cmd_bench = app.add_subcommand(
        "benchmark", "Leave-one-out retrieval and recognition benchmark");
    cmd_bench->add_option("-d,--descriptor", benchmark.descriptor,
                          "Descriptor id: csqp, lbp, cslbp, csltp, slbp")
        ->capture_default_str();
    cmd_bench->add_option("--dataset", benchmark.dataset_root, "Dataset root directory")
        ->required();
    cmd_bench->add_option("--cache", benchmark_cache,
                          "Cache file to reuse or create (default: "
                          "<dataset>.<descriptor>.qpfc in the working directory)");
    cmd_bench->add_option("--out-prefix", benchmark.out_prefix,
                          "Prefix for <prefix>.retrieval.csv and <prefix>.summary.json")
        ->capture_default_str();
    cmd_bench->add_flag("--raw-counts", raw_counts,
                        "Compare raw histograms instead of L1-normalized ones");
    cmd_bench->add_option("--anmrr-k", anmrr_k_text,
                          "ANMRR cutoff policy: maxclass, 2ng, or fixed:<K>")
        ->capture_default_str();
    cmd_bench->add_option("--n-max", benchmark.n_max,
                          "Largest rank cutoff in the retrieval table")
        ->capture_default_str();
    cmd_bench->add_option("--poses", benchmark.poses, "Keep only these pose codes")
        ->delimiter(',');
    cmd_bench->add_option("--csltp-threshold", benchmark.csltp_threshold,
                          "CSLTP ternary threshold")
        ->capture_default_str();
    cmd_bench->add_option("-j,--jobs", benchmark.jobs, "Worker threads (0 = all cores)")
        ->capture_default_str();

    CLI::App* cmd_ana = app.add_subcommand("analyze", "Average feature-image entropy report");
    cmd_ana->add_option("--descriptors", analyze.descriptors,
                        "Rows to compute (default: all implemented descriptors)")
        ->delimiter(',');
    cmd_ana->add_option("--dataset", analyze.dataset_root, "Dataset root directory")
        ->required();
    cmd_ana->add_option("-o,--out", analyze_out, "CSV file to write (default: stdout)");
    cmd_ana->add_option("--poses", analyze.poses, "Keep only these pose codes")
        ->delimiter(',');
    cmd_ana->add_option("--csltp-threshold", analyze.csltp_threshold,
                        "CSLTP ternary threshold")
        ->capture_default_str();
    cmd_ana->add_option("-j,--jobs", analyze.jobs, "Worker threads (0 = all cores)")
        ->capture_default_str();

    CLI::App* cmd_exp = app.add_subcommand(
        "export", "Write a feature image, or compare two crops with --diff");
    cmd_exp->add_option("-d,--descriptor", exports.descriptor,
                        "Descriptor id: csqp, lbp, cslbp, csltp, slbp")
        ->capture_default_str();
    cmd_exp->add_option("--image", exports.image_path, "Input image")->required();
    cmd_exp->add_option("-o,--out", export_out, "Output file (.pgm or .png)");
    cmd_exp->add_option("--crop", crop_texts,
                        "Crop rectangle x,y,w,h; twice with --diff for a left/right pair");
    cmd_exp->add_flag("--diff", exports.diff,
                      "Print difference-histogram variance of two crops");
    cmd_exp->add_flag("--no-mirror", no_mirror,
                      "Do not mirror the second crop before comparing");
    cmd_exp->add_option("--csltp-threshold", exports.csltp_threshold,
                        "CSLTP ternary threshold")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (cmd_ext->parsed()) {
        return csqp::cmd_extract(extract, std::cout, std::cerr);
    }
    if (cmd_bench->parsed()) {
        if (!benchmark_cache.empty()) {
            benchmark.cache_path = benchmark_cache;
        }
        benchmark.normalization =
            raw_counts ? csqp::Normalization::RawCounts : csqp::Normalization::L1;
        if (!parse_anmrr_k(anmrr_k_text, benchmark.anmrr_policy, benchmark.anmrr_fixed_k)) {
            std::cerr << "error: --anmrr-k must be maxclass, 2ng, or fixed:<K> with K >= 1\n";
            return 2;
        }
        return csqp::cmd_benchmark(benchmark, std::cout, std::cerr);
    }
    if (cmd_ana->parsed()) {
        if (!analyze_out.empty()) {
            analyze.out_path = analyze_out;
        }
        return csqp::cmd_analyze(analyze, std::cout, std::cerr);
    }
    if (cmd_exp->parsed()) {
        if (!export_out.empty()) {
            exports.out_path = export_out;
        }
        exports.mirror_right = !no_mirror;
        for (const std::string& text : crop_texts) {
            csqp::CropRect rect;
            if (!parse_crop(text, rect)) {
                std::cerr << "error: --crop expects x,y,w,h integers, got '" << text
                          << "'\n";
                return 2;
            }
            exports.crops.push_back(rect);
        }
        return csqp::cmd_export(exports, std::cout, std::cerr);
    }
    return 2;
}
