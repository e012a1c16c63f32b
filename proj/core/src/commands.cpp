// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "csqp/commands.hpp"

#include "csqp/analysis.hpp"
#include "csqp/dataset.hpp"
#include "csqp/errors.hpp"
#include "csqp/image_io.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace csqp {

namespace {

DescriptorId require_descriptor(const std::string& name) {
    if (const auto id = parse_descriptor(name)) {
        return *id;
    }
    throw ConfigError("unknown descriptor '" + name + "'");
}

Dataset scan_and_filter(const std::filesystem::path& root,
                        std::span<const std::string> poses, std::ostream& err) {
    Dataset ds = scan_dataset(root);
    for (const std::string& w : ds.warnings) {
        err << "warning: " << w << "\n";
    }
    if (!poses.empty()) {
        ds = filter_poses(ds, poses);
        if (ds.items.empty()) {
            throw Error("pose filter removed every item of " + root.string());
        }
    }
    return ds;
}

/// Runs `body` and maps library errors onto exit codes. ConfigError means the
/// request itself was bad (usage, exit 2); everything else is a runtime or
/// data failure (exit 1).
int guarded(std::ostream& err, const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

std::string format_fixed(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    out << content;
    if (!out.good()) {
        throw IoError("write failure: " + path.string());
    }
}

} // namespace

std::filesystem::path default_cache_path(const std::filesystem::path& dataset_root,
                                         const std::string& descriptor) {
    // lexically_normal so "faces/" and "faces" name the same cache; a
    // trailing separator leaves an empty filename, so step up once.
    std::filesystem::path normal = dataset_root.lexically_normal();
    if (!normal.has_filename()) {
        normal = normal.parent_path();
    }
    std::string stem = normal.filename().string();
    if (stem.empty() || stem == "." || stem == "..") {
        stem = "dataset";
    }
    return std::filesystem::path(stem + "." + descriptor + ".qpfc");
}

int cmd_extract(const ExtractConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const DescriptorId id = require_descriptor(config.descriptor);
        DescriptorParams params;
        params.csltp_threshold = config.csltp_threshold;

        const Dataset ds = scan_and_filter(config.dataset_root, config.poses, err);
        const ExtractResult result = extract_all(ds, id, params, config.jobs);
        save_cache(result.cache, config.out_path);

        out << "extracted " << result.cache.records.size() << " of " << ds.items.size()
            << " items (" << ds.classes.size() << " classes) to "
            << config.out_path.string() << "\n";
        if (!result.skipped.empty()) {
            const std::filesystem::path skip_path =
                config.out_path.string() + ".skips.json";
            std::ostringstream skips;
            write_skip_report_json(skips, result.skipped);
            write_text_file(skip_path, skips.str());
            out << "skipped " << result.skipped.size() << " items, reasons in "
                << skip_path.string() << "\n";
        }
    });
}

int cmd_benchmark(const BenchmarkConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const DescriptorId id = require_descriptor(config.descriptor);
        if (config.n_max == 0) {
            throw ConfigError("n-max must be at least 1");
        }
        DescriptorParams params;
        params.csltp_threshold = config.csltp_threshold;

        const Dataset ds = scan_and_filter(config.dataset_root, config.poses, err);
        const std::filesystem::path cache_path =
            config.cache_path ? *config.cache_path
                              : default_cache_path(config.dataset_root, config.descriptor);

        FeatureCache cache;
        if (std::filesystem::exists(cache_path)) {
            cache = load_cache(cache_path);
            if (cache.descriptor != id) {
                throw IncompatibleError("cache " + cache_path.string() + " holds " +
                                        std::string(to_string(cache.descriptor)) +
                                        " features, benchmark wants " +
                                        std::string(to_string(id)));
            }
            require_cache_matches(cache, ds);
            out << "reusing cache " << cache_path.string() << " ("
                << cache.records.size() << " records)\n";
        } else {
            ExtractResult result = extract_all(ds, id, params, config.jobs);
            save_cache(result.cache, cache_path);
            out << "extracted " << result.cache.records.size() << " of "
                << ds.items.size() << " items to " << cache_path.string() << "\n";
            if (!result.skipped.empty()) {
                out << "skipped " << result.skipped.size() << " items\n";
            }
            cache = std::move(result.cache);
        }

        EvaluationOptions options;
        options.normalization = config.normalization;
        options.anmrr_policy = config.anmrr_policy;
        options.anmrr_fixed_k = config.anmrr_fixed_k;
        options.n_max = config.n_max;
        options.jobs = config.jobs;
        const EvaluationResult eval = evaluate_leave_one_out(cache, options);

        SummaryContext context;
        context.descriptor = std::string(to_string(id));
        context.normalization = std::string(to_string(config.normalization));
        context.anmrr_k_policy = std::string(to_string(config.anmrr_policy));
        if (config.anmrr_policy == AnmrrKPolicy::Fixed) {
            context.anmrr_fixed_k = config.anmrr_fixed_k;
        }
        context.csltp_threshold = config.csltp_threshold;
        context.dataset_root = config.dataset_root.string();
        context.cache_path = cache_path.string();
        context.dataset_fingerprint = fingerprint_hex(cache.fingerprint);
        context.items = cache.records.size();
        context.classes = ds.classes.size();

        const std::filesystem::path csv_path = config.out_prefix + ".retrieval.csv";
        const std::filesystem::path json_path = config.out_prefix + ".summary.json";
        std::ostringstream csv;
        write_retrieval_csv(csv, eval.retrieval);
        write_text_file(csv_path, csv.str());
        std::ostringstream json;
        write_summary_json(json, eval.retrieval, eval.recognition, context);
        write_text_file(json_path, json.str());

        double max_arp = 0.0;
        std::size_t max_arp_rank = 0;
        for (const RetrievalRow& row : eval.retrieval.per_rank) {
            if (row.arp > max_arp) {
                max_arp = row.arp;
                max_arp_rank = row.rank;
            }
        }

        out << "descriptor       " << context.descriptor << "\n";
        out << "normalization    " << context.normalization << "\n";
        out << "anmrr-k          " << context.anmrr_k_policy;
        if (context.anmrr_fixed_k) {
            out << " (k=" << *context.anmrr_fixed_k << ")";
        }
        out << "\n";
        out << "csltp-threshold  " << context.csltp_threshold << "\n";
        out << "dataset          " << context.dataset_root << " (items="
            << context.items << ", classes=" << context.classes << ", fingerprint="
            << context.dataset_fingerprint << ")\n";
        out << "probes           " << eval.recognition.total_probes << " (excluded "
            << eval.excluded_probes.size() << " singleton-class)\n";
        out << "anmrr            " << format_fixed(eval.retrieval.anmrr, 6) << "\n";
        out << "recognition      " << format_fixed(eval.recognition.recognition_rate, 2)
            << "% (" << eval.recognition.matches << "/" << eval.recognition.total_probes
            << ")\n";
        out << "max-arp          " << format_fixed(100.0 * max_arp, 2) << "% at rank "
            << max_arp_rank << "\n";
        out << "wrote            " << csv_path.string() << "\n";
        out << "wrote            " << json_path.string() << "\n";
    });
}

int cmd_analyze(const AnalyzeConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::vector<std::string> names = config.descriptors;
        if (names.empty()) {
            for (DescriptorId id : all_descriptors()) {
                names.emplace_back(to_string(id));
            }
        }
        DescriptorParams params;
        params.csltp_threshold = config.csltp_threshold;

        const Dataset ds = scan_and_filter(config.dataset_root, config.poses, err);
        const EntropyReport report = average_entropy(ds, names, params, config.jobs);

        std::ostringstream csv;
        write_entropy_csv(csv, report);
        if (config.out_path) {
            write_text_file(*config.out_path, csv.str());
            out << "wrote " << config.out_path->string() << " (" << report.rows.size()
                << " descriptors over " << report.image_count << " images)\n";
        } else {
            out << csv.str();
        }
    });
}

int cmd_export(const ExportConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const DescriptorId id = require_descriptor(config.descriptor);
        DescriptorParams params;
        params.csltp_threshold = config.csltp_threshold;
        const GrayImage img = load_image(config.image_path);

        std::vector<GrayImage> regions;
        for (const CropRect& r : config.crops) {
            regions.push_back(crop(img, r.x, r.y, r.w, r.h));
        }

        if (config.diff) {
            if (regions.size() != 2) {
                throw ConfigError("--diff needs exactly two --crop rectangles");
            }
            SymmetryOptions sym;
            sym.mirror_right = config.mirror_right;
            sym.normalized = true;
            const DifferenceHistogram normalized =
                symmetry_variance(regions[0], regions[1], id, sym, params);
            sym.normalized = false;
            const DifferenceHistogram raw =
                symmetry_variance(regions[0], regions[1], id, sym, params);
            char line[128];
            std::snprintf(line, sizeof(line), "diff-variance normalized %.9g\n",
                          normalized.variance);
            out << line;
            std::snprintf(line, sizeof(line), "diff-variance raw-counts %.9g\n",
                          raw.variance);
            out << line;
            return;
        }

        if (regions.size() > 1) {
            throw ConfigError("multiple --crop rectangles need --diff");
        }
        if (!config.out_path) {
            throw ConfigError("feature-image export needs --out");
        }
        const GrayImage& source = regions.empty() ? img : regions.front();
        const FeatureImage fi = export_feature_image(source, id, *config.out_path, params);
        out << "wrote " << config.out_path->string() << " (" << fi.width() << "x"
            << fi.height() << ", " << fi.bins() << " bins)\n";
    });
}

} // namespace csqp
