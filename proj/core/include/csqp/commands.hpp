// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "csqp/evaluation.hpp"
#include "csqp/matching.hpp"
#include "csqp/metrics.hpp"

namespace csqp {

/// The four subcommand entry points. Each validates its configuration, does
/// the work, writes progress to `out` and problems to `err`, and returns the
/// process exit code: 0 success, 1 runtime or data error, 2 usage error.
/// Nothing here reads flags; the CLI layer maps flags onto these structs.

struct ExtractConfig {
    std::string descriptor = "csqp";
    std::filesystem::path dataset_root;
    std::filesystem::path out_path;
    std::vector<std::string> poses; // empty = all
    int csltp_threshold = 5;
    unsigned jobs = 1;
};

struct BenchmarkConfig {
    std::string descriptor = "csqp";
    std::filesystem::path dataset_root;
    std::optional<std::filesystem::path> cache_path; // default: <stem>.<descriptor>.qpfc
    std::string out_prefix = "csqpbench";
    Normalization normalization = Normalization::L1;
    AnmrrKPolicy anmrr_policy = AnmrrKPolicy::MaxClassSize;
    std::size_t anmrr_fixed_k = 0;
    std::size_t n_max = 10;
    std::vector<std::string> poses;
    int csltp_threshold = 5;
    unsigned jobs = 1;
};

struct AnalyzeConfig {
    std::vector<std::string> descriptors; // empty = all implemented
    std::filesystem::path dataset_root;
    std::optional<std::filesystem::path> out_path; // default: stdout
    std::vector<std::string> poses;
    int csltp_threshold = 5;
    unsigned jobs = 1;
};

struct CropRect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
};

struct ExportConfig {
    std::string descriptor = "csqp";
    std::filesystem::path image_path;
    std::optional<std::filesystem::path> out_path;
    std::vector<CropRect> crops; // 0, 1, or (with diff) exactly 2
    bool diff = false;
    bool mirror_right = true;
    int csltp_threshold = 5;
};

int cmd_extract(const ExtractConfig& config, std::ostream& out, std::ostream& err);
int cmd_benchmark(const BenchmarkConfig& config, std::ostream& out, std::ostream& err);
int cmd_analyze(const AnalyzeConfig& config, std::ostream& out, std::ostream& err);
int cmd_export(const ExportConfig& config, std::ostream& out, std::ostream& err);

/// Cache path used by cmd_benchmark when none is given: the dataset directory
/// name and descriptor id joined as `<stem>.<descriptor>.qpfc` in the current
/// directory, so caches never pollute the dataset tree.
std::filesystem::path default_cache_path(const std::filesystem::path& dataset_root,
                                         const std::string& descriptor);

} // namespace csqp
