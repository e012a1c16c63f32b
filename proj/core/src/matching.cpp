// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "csqp/matching.hpp"

#include "csqp/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace csqp {

std::string_view to_string(Normalization n) {
    return n == Normalization::L1 ? "l1" : "raw-counts";
}

namespace {

void require_compatible(const FeatureVector& x, const FeatureVector& y) {
    if (x.bins() != y.bins()) {
        throw IncompatibleError("histogram bin counts differ: " +
                                std::to_string(x.bins()) + " vs " +
                                std::to_string(y.bins()));
    }
    if (x.descriptor != y.descriptor) {
        throw IncompatibleError(std::string("descriptor ids differ: ") +
                                std::string(to_string(x.descriptor)) + " vs " +
                                std::string(to_string(y.descriptor)));
    }
}

} // namespace

double chi_square(const FeatureVector& x, const FeatureVector& y, Normalization norm) {
    require_compatible(x, y);
    return chi_square_rows(prepare_row(x, norm), prepare_row(y, norm));
}

double chi_square_rows(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw IncompatibleError("row lengths differ: " + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()));
    }
    double acc = 0.0;
    for (std::size_t b = 0; b < x.size(); ++b) {
        const double sum = x[b] + y[b];
        if (sum > 0.0) {
            const double diff = x[b] - y[b];
            acc += diff * diff / sum;
        }
    }
    return 0.5 * acc;
}

std::vector<double> prepare_row(const FeatureVector& fv, Normalization norm) {
    const double total = static_cast<double>(fv.total());
    const double scale = (norm == Normalization::L1 && total > 0) ? 1.0 / total : 1.0;
    std::vector<double> row(fv.bins());
    for (std::size_t b = 0; b < fv.bins(); ++b) {
        row[b] = static_cast<double>(fv.counts[b]) * scale;
    }
    return row;
}

RankedList rank_gallery(const FeatureVector& query,
                        std::span<const GalleryItem> gallery,
                        std::string_view query_label,
                        std::string_view query_id,
                        Normalization norm) {
    if (gallery.empty()) {
        throw ConfigError("cannot rank an empty gallery");
    }
    std::vector<double> distances(gallery.size());
    for (std::size_t g = 0; g < gallery.size(); ++g) {
        distances[g] = chi_square(query, gallery[g].features, norm);
    }
    std::vector<std::size_t> order(gallery.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (distances[a] != distances[b]) {
            return distances[a] < distances[b];
        }
        return a < b; // tie: earlier insertion index first
    });

    RankedList out;
    out.query_id = std::string(query_id);
    out.query_label = std::string(query_label);
    out.entries.reserve(gallery.size());
    for (std::size_t g : order) {
        out.entries.push_back({g, gallery[g].id, gallery[g].label, distances[g],
                               gallery[g].label == query_label});
    }
    return out;
}

const std::string& classify_1nn(const RankedList& ranked) {
    if (ranked.entries.empty()) {
        throw ConfigError("cannot classify from an empty ranking");
    }
    return ranked.entries.front().gallery_label;
}

} // namespace csqp
