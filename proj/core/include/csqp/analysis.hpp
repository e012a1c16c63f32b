// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csqp/dataset.hpp"
#include "csqp/descriptors.hpp"
#include "csqp/feature.hpp"
#include "csqp/image.hpp"

namespace csqp {

/// Shannon entropy of the histogram in bits, with 0 * log 0 taken as 0.
/// Throws ConfigError on an all-zero histogram.
double feature_entropy(const FeatureVector& fv);

/// Mean feature-image entropy per descriptor over a dataset. Rows keep the
/// order the descriptors were requested in; descriptors this library knows of
/// but does not implement get a row without a value, so they show up as
/// "not-implemented" in reports instead of disappearing.
struct EntropyReport {
    struct Row {
        std::string descriptor;
        std::optional<double> average_entropy;
    };

    std::vector<Row> rows;
    std::size_t image_count = 0;
};

/// Computes EntropyReport over every dataset image. Descriptor names are the
/// lowercase ids accepted by parse_descriptor, plus the recognized but
/// unimplemented ones (ldp, ldgp, lqpat, lghp). Unknown names throw
/// ConfigError; image load failures propagate.
EntropyReport average_entropy(const Dataset& ds, std::span<const std::string> descriptor_names,
                              const DescriptorParams& params = {}, unsigned jobs = 1);

/// CSV with header `descriptor,average_entropy,images`; unimplemented rows
/// carry the marker `not-implemented`.
void write_entropy_csv(std::ostream& out, const EntropyReport& report);

/// Per-bin difference of two histograms and its population variance.
struct DifferenceHistogram {
    std::vector<double> per_bin_differences; // left minus right
    double variance = 0.0;
};

struct SymmetryOptions {
    bool mirror_right = true; // flip the right crop so both share an orientation
    bool normalized = true;   // L1-normalize histograms before differencing
};

/// Describes two crops (typically left/right eye regions) with one descriptor
/// and returns the difference histogram with its variance. Undersized crops
/// throw DimensionError.
DifferenceHistogram symmetry_variance(const GrayImage& left, const GrayImage& right,
                                      DescriptorId id, const SymmetryOptions& options = {},
                                      const DescriptorParams& params = {});

/// Writes the feature image of `img` to `path` as PGM or PNG (chosen by the
/// file extension) and returns it. Codes of descriptors with fewer than 256
/// bins are linearly rescaled to [0,255] for display.
FeatureImage export_feature_image(const GrayImage& img, DescriptorId id,
                                  const std::filesystem::path& path,
                                  const DescriptorParams& params = {});

} // namespace csqp
