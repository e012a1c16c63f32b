// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csqp/feature.hpp"

namespace csqp {

/// Histogram treatment before the chi-square sum. L1 divides each histogram
/// by its total count so distances are comparable across image sizes;
/// RawCounts feeds the integer counts in unchanged.
enum class Normalization { L1, RawCounts };

std::string_view to_string(Normalization n);

/// Chi-square distance between two histograms:
///   1/2 * sum_i (x_i - y_i)^2 / (x_i + y_i)
/// Bins whose sum is zero contribute nothing. Throws IncompatibleError when
/// the bin counts or descriptor ids differ.
double chi_square(const FeatureVector& x, const FeatureVector& y,
                  Normalization norm = Normalization::L1);

/// The chi-square kernel on already-prepared rows (counts, or counts scaled
/// by the reciprocal of their total). chi_square delegates here, so batch
/// evaluation over precomputed rows reproduces its values bit for bit.
double chi_square_rows(std::span<const double> x, std::span<const double> y);

/// Scales counts into a row for chi_square_rows under the given mode.
std::vector<double> prepare_row(const FeatureVector& fv, Normalization norm);

/// One gallery image: a stable id, its class label, and its descriptor.
struct GalleryItem {
    std::string id;
    std::string label;
    FeatureVector features;
};

struct RankedEntry {
    std::size_t gallery_index; // insertion index into the gallery
    std::string gallery_id;
    std::string gallery_label;
    double distance;
    bool relevant; // gallery label equals the query label
};

/// Gallery ordered by ascending chi-square distance from one query. Distance
/// ties keep gallery insertion order, which makes rankings reproducible.
struct RankedList {
    std::string query_id;
    std::string query_label;
    std::vector<RankedEntry> entries;
};

RankedList rank_gallery(const FeatureVector& query,
                        std::span<const GalleryItem> gallery,
                        std::string_view query_label,
                        std::string_view query_id = {},
                        Normalization norm = Normalization::L1);

/// Nearest-neighbor label: the label of the first ranked entry.
/// Throws ConfigError on an empty ranking.
const std::string& classify_1nn(const RankedList& ranked);

} // namespace csqp
