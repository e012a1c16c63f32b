// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "csqp/analysis.hpp"

#include "csqp/errors.hpp"
#include "csqp/image_io.hpp"
#include "csqp/parallel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>

namespace csqp {

namespace {

const std::set<std::string>& unimplemented_descriptors() {
    static const std::set<std::string> kNames = {"ldp", "ldgp", "lqpat", "lghp"};
    return kNames;
}

} // namespace

double feature_entropy(const FeatureVector& fv) {
    const std::uint64_t total = fv.total();
    if (total == 0) {
        throw ConfigError("entropy of an empty histogram is undefined");
    }
    const double inv = 1.0 / static_cast<double>(total);
    double bits = 0.0;
    for (std::uint64_t c : fv.counts) {
        if (c == 0) {
            continue;
        }
        const double p = static_cast<double>(c) * inv;
        bits -= p * std::log2(p);
    }
    return bits;
}

EntropyReport average_entropy(const Dataset& ds, std::span<const std::string> descriptor_names,
                              const DescriptorParams& params, unsigned jobs) {
    if (ds.items.empty()) {
        throw ConfigError("entropy report needs a non-empty dataset");
    }
    if (descriptor_names.empty()) {
        throw ConfigError("entropy report needs at least one descriptor");
    }

    struct Request {
        std::string name;
        std::optional<DescriptorId> id; // empty for recognized but unimplemented
    };
    std::vector<Request> requests;
    std::vector<DescriptorId> implemented;
    for (const std::string& name : descriptor_names) {
        if (const auto id = parse_descriptor(name)) {
            requests.push_back({name, *id});
            implemented.push_back(*id);
        } else if (unimplemented_descriptors().count(name)) {
            requests.push_back({name, std::nullopt});
        } else {
            throw ConfigError("unknown descriptor '" + name + "'");
        }
    }

    // One load per image; every implemented descriptor is evaluated on the
    // freshly loaded image before it is dropped.
    std::vector<std::vector<double>> per_image(ds.items.size());
    parallel_for_index(ds.items.size(), jobs, [&](std::size_t i) {
        const GrayImage img = load_image(ds.items[i].path);
        std::vector<double> bits(implemented.size());
        for (std::size_t d = 0; d < implemented.size(); ++d) {
            bits[d] = feature_entropy(describe(img, implemented[d], params));
        }
        per_image[i] = std::move(bits);
    });

    std::vector<double> sums(implemented.size(), 0.0);
    for (const std::vector<double>& bits : per_image) {
        for (std::size_t d = 0; d < implemented.size(); ++d) {
            sums[d] += bits[d];
        }
    }

    EntropyReport report;
    report.image_count = ds.items.size();
    std::size_t next_implemented = 0;
    for (const Request& req : requests) {
        EntropyReport::Row row;
        row.descriptor = req.name;
        if (req.id) {
            row.average_entropy = sums[next_implemented++] / static_cast<double>(ds.items.size());
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

void write_entropy_csv(std::ostream& out, const EntropyReport& report) {
    out << "descriptor,average_entropy,images\n";
    for (const EntropyReport::Row& row : report.rows) {
        if (row.average_entropy) {
            char value[32];
            std::snprintf(value, sizeof(value), "%.6f", *row.average_entropy);
            out << row.descriptor << "," << value << "," << report.image_count << "\n";
        } else {
            out << row.descriptor << ",not-implemented," << report.image_count << "\n";
        }
    }
}

DifferenceHistogram symmetry_variance(const GrayImage& left, const GrayImage& right,
                                      DescriptorId id, const SymmetryOptions& options,
                                      const DescriptorParams& params) {
    const FeatureVector lv = describe(left, id, params);
    const FeatureVector rv = options.mirror_right
                                 ? describe(mirror_horizontal(right), id, params)
                                 : describe(right, id, params);

    const auto as_values = [&](const FeatureVector& fv) {
        std::vector<double> values(fv.counts.begin(), fv.counts.end());
        if (options.normalized) {
            const double total = static_cast<double>(fv.total());
            if (total > 0.0) {
                for (double& v : values) {
                    v /= total;
                }
            }
        }
        return values;
    };

    const std::vector<double> lh = as_values(lv);
    const std::vector<double> rh = as_values(rv);

    DifferenceHistogram diff;
    diff.per_bin_differences.resize(lh.size());
    for (std::size_t b = 0; b < lh.size(); ++b) {
        diff.per_bin_differences[b] = lh[b] - rh[b];
    }

    double mean = 0.0;
    for (double d : diff.per_bin_differences) {
        mean += d;
    }
    mean /= static_cast<double>(diff.per_bin_differences.size());
    double acc = 0.0;
    for (double d : diff.per_bin_differences) {
        acc += (d - mean) * (d - mean);
    }
    diff.variance = acc / static_cast<double>(diff.per_bin_differences.size());
    return diff;
}

FeatureImage export_feature_image(const GrayImage& img, DescriptorId id,
                                  const std::filesystem::path& path,
                                  const DescriptorParams& params) {
    FeatureImage fi = feature_image(img, id, params);
    const int bins = fi.bins();
    GrayImage out(fi.width(), fi.height());
    for (int i = 0; i < fi.height(); ++i) {
        for (int j = 0; j < fi.width(); ++j) {
            const long display = std::lround(fi.at(i, j) * 255.0 / (bins - 1));
            out.set(i, j, static_cast<std::uint8_t>(display));
        }
    }

    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".pgm") {
        write_pgm(out, path);
    } else if (ext == ".png") {
        write_png(out, path);
    } else {
        throw ConfigError("unsupported export extension '" + ext + "' (use .pgm or .png)");
    }
    return fi;
}

} // namespace csqp
