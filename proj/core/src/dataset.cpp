// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "csqp/dataset.hpp"

#include "csqp/errors.hpp"
#include "csqp/image_io.hpp"
#include "csqp/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <string_view>

namespace csqp {

namespace fs = std::filesystem;

namespace {

bool has_image_extension(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    static const std::set<std::string> kKnown = {".png", ".jpg", ".jpeg", ".bmp",
                                                 ".pgm", ".ppm", ".pnm"};
    return kKnown.count(ext) > 0;
}

// FERET-style names: <subject>_<session>_<pose>[_<flag>].<ext>, pose being a
// short lowercase code such as fa, fb, hl, qr, ra.
std::string parse_pose_code(const fs::path& p) {
    const std::string stem = p.stem().string();
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= stem.size()) {
        const std::size_t sep = stem.find('_', start);
        if (sep == std::string::npos) {
            parts.push_back(stem.substr(start));
            break;
        }
        parts.push_back(stem.substr(start, sep - start));
        start = sep + 1;
    }
    if (parts.size() < 3) {
        return {};
    }
    const auto all_digits = [](const std::string& s) {
        return !s.empty() &&
               std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
    };
    const std::string& pose = parts[2];
    const bool pose_like =
        pose.size() >= 2 && pose.size() <= 3 && std::islower(static_cast<unsigned char>(pose[0])) &&
        std::all_of(pose.begin(), pose.end(),
                    [](unsigned char c) { return std::islower(c) || std::isdigit(c); });
    if (all_digits(parts[0]) && all_digits(parts[1]) && pose_like) {
        return pose;
    }
    return {};
}

std::string relative_id(const fs::path& root, const fs::path& p) {
    return p.lexically_relative(root).generic_string();
}

void rebuild_class_index(Dataset& ds) {
    ds.classes.clear();
    for (std::size_t i = 0; i < ds.items.size(); ++i) {
        ds.classes[ds.items[i].label].push_back(i);
    }
}

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv1a_append(std::uint64_t& h, std::string_view s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= kFnvPrime;
    }
}

} // namespace

std::size_t Dataset::max_class_size() const {
    std::size_t best = 0;
    for (const auto& [label, members] : classes) {
        best = std::max(best, members.size());
    }
    return best;
}

Dataset scan_dataset(const fs::path& root) {
    if (!fs::exists(root)) {
        throw IoError("dataset root does not exist: " + root.string());
    }
    if (!fs::is_directory(root)) {
        throw IoError("dataset root is not a directory: " + root.string());
    }

    Dataset ds;
    ds.root = root;
    bool any_class_dir = false;
    for (const fs::directory_entry& class_entry : fs::directory_iterator(root)) {
        if (!class_entry.is_directory()) {
            continue; // stray files at the root are not class directories
        }
        any_class_dir = true;
        const std::string label = class_entry.path().filename().string();
        try {
            for (const fs::directory_entry& entry :
                 fs::recursive_directory_iterator(class_entry.path())) {
                std::error_code status_ec;
                const fs::file_status st = entry.status(status_ec);
                if (status_ec) {
                    ds.warnings.push_back("unreadable entry " + entry.path().string() +
                                          ": " + status_ec.message());
                    continue;
                }
                if (!fs::is_regular_file(st)) {
                    continue;
                }
                if (!has_image_extension(entry.path())) {
                    continue;
                }
                DatasetItem item;
                item.id = relative_id(root, entry.path());
                item.path = entry.path();
                item.label = label;
                item.pose = parse_pose_code(entry.path());
                ds.items.push_back(std::move(item));
            }
        } catch (const fs::filesystem_error& e) {
            ds.warnings.push_back("unreadable class directory " +
                                  class_entry.path().string() + ": " + e.what());
        }
    }
    if (!any_class_dir) {
        throw IoError("no classes found under " + root.string());
    }
    std::sort(ds.items.begin(), ds.items.end(),
              [](const DatasetItem& a, const DatasetItem& b) { return a.id < b.id; });
    rebuild_class_index(ds);
    return ds;
}

Dataset filter_poses(const Dataset& ds, std::span<const std::string> poses) {
    if (poses.empty()) {
        return ds;
    }
    const std::set<std::string> wanted(poses.begin(), poses.end());
    Dataset out;
    out.root = ds.root;
    out.warnings = ds.warnings;
    for (const DatasetItem& item : ds.items) {
        if (!item.pose.empty() && wanted.count(item.pose)) {
            out.items.push_back(item);
        }
    }
    rebuild_class_index(out);
    return out;
}

std::uint64_t dataset_fingerprint(const Dataset& ds) {
    // Items are already sorted by id.
    std::uint64_t h = kFnvOffset;
    for (const DatasetItem& item : ds.items) {
        fnv1a_append(h, item.id);
        fnv1a_append(h, "\n");
    }
    return h;
}

std::string fingerprint_hex(std::uint64_t fp) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fp));
    return buf;
}

ExtractResult extract_all(const Dataset& ds, DescriptorId id,
                          const DescriptorParams& params, unsigned jobs) {
    if (ds.items.empty()) {
        throw ConfigError("dataset has no items to extract");
    }
    const int bins = descriptor_spec(id).bins;

    struct Slot {
        bool ok = false;
        std::vector<std::uint64_t> counts;
        std::string reason;
    };
    std::vector<Slot> slots(ds.items.size());
    parallel_for_index(ds.items.size(), jobs, [&](std::size_t i) {
        Slot& slot = slots[i];
        try {
            const GrayImage img = load_image(ds.items[i].path);
            slot.counts = describe(img, id, params).counts;
            slot.ok = true;
        } catch (const Error& e) {
            slot.reason = e.what();
        }
    });

    ExtractResult result;
    result.cache.descriptor = id;
    result.cache.bins = bins;
    result.cache.fingerprint = dataset_fingerprint(ds);
    for (std::size_t i = 0; i < ds.items.size(); ++i) {
        if (slots[i].ok) {
            result.cache.records.push_back(
                {ds.items[i].id, ds.items[i].label, std::move(slots[i].counts)});
        } else {
            result.skipped.push_back(
                {ds.items[i].id, ds.items[i].path.string(), slots[i].reason});
        }
    }
    if (result.cache.records.empty()) {
        throw Error("no dataset item could be described; first failure: " +
                    result.skipped.front().reason);
    }
    return result;
}

void save_cache(const FeatureCache& cache, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open cache for writing: " + path.string());
    }
    for (const FeatureCache::Record& rec : cache.records) {
        if (rec.id.find(',') != std::string::npos ||
            rec.label.find(',') != std::string::npos) {
            throw FormatError("cache ids and labels must not contain ',': " + rec.id);
        }
    }
    out << "QPFC1\n";
    out << to_string(cache.descriptor) << "," << cache.bins << ",0,"
        << cache.records.size() << "," << fingerprint_hex(cache.fingerprint) << "\n";
    for (const FeatureCache::Record& rec : cache.records) {
        out << rec.id << "," << rec.label;
        for (std::uint64_t c : rec.counts) {
            out << "," << c;
        }
        out << "\n";
    }
    if (!out.good()) {
        throw IoError("write failure: " + path.string());
    }
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::uint64_t parse_u64(const std::string& s, const fs::path& path, const char* what) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw FormatError(std::string("cache field '") + what + "' is not a number in " +
                          path.string());
    }
    return v;
}

} // namespace

FeatureCache load_cache(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open cache: " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError("empty cache file: " + path.string());
    }
    if (line != "QPFC1") {
        throw FormatError("cache magic/version mismatch (expected QPFC1): " + path.string());
    }
    if (!std::getline(in, line)) {
        throw FormatError("cache header missing: " + path.string());
    }
    const std::vector<std::string> header = split(line, ',');
    if (header.size() != 5) {
        throw FormatError("cache header malformed: " + path.string());
    }
    FeatureCache cache;
    const auto id = parse_descriptor(header[0]);
    if (!id) {
        throw FormatError("cache names unknown descriptor '" + header[0] + "': " +
                          path.string());
    }
    cache.descriptor = *id;
    cache.bins = static_cast<int>(parse_u64(header[1], path, "bins"));
    if (cache.bins != descriptor_spec(cache.descriptor).bins) {
        throw FormatError("cache bins disagree with descriptor " + header[0] + ": " +
                          path.string());
    }
    if (parse_u64(header[2], path, "normalized") != 0) {
        throw FormatError("cache stores normalized values; only raw counts are supported: " +
                          path.string());
    }
    const std::uint64_t item_count = parse_u64(header[3], path, "item_count");
    if (header[4].size() != 16 ||
        header[4].find_first_not_of("0123456789abcdef") != std::string::npos) {
        throw FormatError("cache fingerprint malformed: " + path.string());
    }
    cache.fingerprint = std::stoull(header[4], nullptr, 16);

    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> fields = split(line, ',');
        if (fields.size() != static_cast<std::size_t>(cache.bins) + 2) {
            throw FormatError("cache record has " + std::to_string(fields.size()) +
                              " fields, expected " + std::to_string(cache.bins + 2) + ": " +
                              path.string());
        }
        FeatureCache::Record rec;
        rec.id = fields[0];
        rec.label = fields[1];
        rec.counts.reserve(cache.bins);
        for (int b = 0; b < cache.bins; ++b) {
            rec.counts.push_back(parse_u64(fields[2 + b], path, "count"));
        }
        cache.records.push_back(std::move(rec));
    }
    if (cache.records.size() != item_count) {
        throw FormatError("cache truncated: header says " + std::to_string(item_count) +
                          " records, found " + std::to_string(cache.records.size()) + ": " +
                          path.string());
    }
    return cache;
}

void require_cache_matches(const FeatureCache& cache, const Dataset& ds) {
    const std::uint64_t fp = dataset_fingerprint(ds);
    if (fp != cache.fingerprint) {
        throw IncompatibleError(
            "stale cache: dataset fingerprint " + fingerprint_hex(fp) +
            " does not match cache fingerprint " + fingerprint_hex(cache.fingerprint));
    }
}

void write_skip_report_json(std::ostream& out, std::span<const SkipRecord> skipped) {
    nlohmann::ordered_json j;
    j["skipped_count"] = skipped.size();
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const SkipRecord& s : skipped) {
        nlohmann::ordered_json rec;
        rec["id"] = s.id;
        rec["path"] = s.path;
        rec["reason"] = s.reason;
        list.push_back(std::move(rec));
    }
    j["skipped"] = list;
    out << j.dump(2) << "\n";
}

} // namespace csqp
