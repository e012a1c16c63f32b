// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "csqp/descriptors.hpp"
#include "csqp/feature.hpp"

namespace csqp {

/// One labeled image. The id is the path relative to the dataset root with
/// '/' separators, which keeps ids stable across platforms. For filenames in
/// the FERET convention <subject>_<session>_<pose...> the pose code is kept
/// as metadata so runs can filter on it.
struct DatasetItem {
    std::string id;
    std::filesystem::path path;
    std::string label;
    std::string pose; // empty when the filename carries no pose code
};

/// Ordered collection of labeled images discovered under one root directory:
/// one class per immediate subdirectory, images found recursively inside it.
/// Iteration order is lexicographic by id, so the same tree always produces
/// the same dataset on any platform.
struct Dataset {
    std::filesystem::path root;
    std::vector<DatasetItem> items;
    std::map<std::string, std::vector<std::size_t>> classes; // label -> item indices
    std::vector<std::string> warnings; // entries skipped during the scan

    std::size_t max_class_size() const;
};

Dataset scan_dataset(const std::filesystem::path& root);

/// Keeps only items whose pose code is in `poses` (and reindexes classes).
Dataset filter_poses(const Dataset& ds, std::span<const std::string> poses);

/// 64-bit FNV-1a over the sorted item ids, each followed by '\n'.
std::uint64_t dataset_fingerprint(const Dataset& ds);
std::string fingerprint_hex(std::uint64_t fp);

/// One item that could not be described, with the reason.
struct SkipRecord {
    std::string id;
    std::string path;
    std::string reason;
};

/// Extracted descriptors for a dataset, persistable as a QPFC1 file.
/// Raw counts are stored, never normalized values, so normalization stays a
/// benchmark-time choice.
struct FeatureCache {
    struct Record {
        std::string id;
        std::string label;
        std::vector<std::uint64_t> counts;
    };

    DescriptorId descriptor = DescriptorId::Csqp;
    int bins = 0;
    std::uint64_t fingerprint = 0;
    std::vector<Record> records;
};

struct ExtractResult {
    FeatureCache cache;
    std::vector<SkipRecord> skipped;
};

/// Describes every dataset image with the given descriptor. Records follow
/// dataset iteration order; images that fail to load or are under the
/// descriptor minimum size go to the skip list, never silently missing.
/// Throws when every item fails.
ExtractResult extract_all(const Dataset& ds, DescriptorId id,
                          const DescriptorParams& params = {}, unsigned jobs = 1);

/// QPFC1 text format: a magic line, a header line
/// `descriptor_id,bins,normalized,item_count,fingerprint`, then one record
/// per line `id,label,c0,...,c{bins-1}`. Save and load round-trip bit-exact.
void save_cache(const FeatureCache& cache, const std::filesystem::path& path);
FeatureCache load_cache(const std::filesystem::path& path);

/// Fails with a stale-cache error when the cache fingerprint does not match
/// the dataset's.
void require_cache_matches(const FeatureCache& cache, const Dataset& ds);

void write_skip_report_json(std::ostream& out, std::span<const SkipRecord> skipped);

} // namespace csqp
