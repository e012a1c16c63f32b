// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "csqp/image.hpp"

namespace csqp {

/// Descriptors implemented by this library.
enum class DescriptorId { Csqp, Lbp, Cslbp, Csltp, Slbp };

/// Static shape of a descriptor: histogram length and the number of
/// neighborhood pixels one code is computed from.
struct DescriptorSpec {
    DescriptorId id;
    int bins;
    int encoded_pixels;
};

DescriptorSpec descriptor_spec(DescriptorId id);

std::string_view to_string(DescriptorId id);
std::optional<DescriptorId> parse_descriptor(std::string_view name);

/// All implemented descriptor ids, in a fixed order.
std::span<const DescriptorId> all_descriptors();

/// Histogram of code frequencies over a feature image; the final descriptor
/// of an image. The counts always sum to the number of encoded positions.
struct FeatureVector {
    DescriptorId descriptor = DescriptorId::Csqp;
    std::vector<std::uint64_t> counts;

    std::size_t bins() const noexcept { return counts.size(); }
    std::uint64_t total() const noexcept {
        return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    }

    bool operator==(const FeatureVector&) const = default;
};

/// Counts code frequencies of a feature image into a histogram of
/// fi.bins() bins.
FeatureVector histogram_of(const FeatureImage& fi, DescriptorId id);

} // namespace csqp
