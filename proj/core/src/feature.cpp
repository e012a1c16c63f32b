// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "csqp/feature.hpp"

#include "csqp/errors.hpp"

#include <array>
#include <string>

namespace csqp {

namespace {
constexpr std::array<DescriptorId, 5> kAll = {
    DescriptorId::Csqp, DescriptorId::Lbp, DescriptorId::Cslbp,
    DescriptorId::Csltp, DescriptorId::Slbp};
} // namespace

DescriptorSpec descriptor_spec(DescriptorId id) {
    switch (id) {
    case DescriptorId::Csqp:
        return {id, 256, 16}; // 4x4 neighborhood
    case DescriptorId::Lbp:
        return {id, 256, 8};
    case DescriptorId::Cslbp:
        return {id, 16, 8};
    case DescriptorId::Csltp:
        return {id, 9, 8};
    case DescriptorId::Slbp:
        return {id, 256, 16}; // 4x4 neighborhood through 2x2 block means
    }
    throw ConfigError("unknown descriptor id");
}

std::string_view to_string(DescriptorId id) {
    switch (id) {
    case DescriptorId::Csqp:
        return "csqp";
    case DescriptorId::Lbp:
        return "lbp";
    case DescriptorId::Cslbp:
        return "cslbp";
    case DescriptorId::Csltp:
        return "csltp";
    case DescriptorId::Slbp:
        return "slbp";
    }
    return "?";
}

std::optional<DescriptorId> parse_descriptor(std::string_view name) {
    for (DescriptorId id : kAll) {
        if (name == to_string(id)) {
            return id;
        }
    }
    return std::nullopt;
}

std::span<const DescriptorId> all_descriptors() { return kAll; }

FeatureVector histogram_of(const FeatureImage& fi, DescriptorId id) {
    const int bins = descriptor_spec(id).bins;
    if (fi.bins() != bins) {
        throw IncompatibleError("feature image has " + std::to_string(fi.bins()) +
                                " bins, descriptor " + std::string(to_string(id)) +
                                " expects " + std::to_string(bins));
    }
    FeatureVector fv;
    fv.descriptor = id;
    fv.counts.assign(static_cast<std::size_t>(bins), 0);
    for (std::uint8_t code : fi.codes()) {
        ++fv.counts[code];
    }
    return fv;
}

} // namespace csqp
