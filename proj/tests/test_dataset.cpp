// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include <doctest.h>

#include "csqp/dataset.hpp"
#include "csqp/errors.hpp"
#include "csqp/image_io.hpp"
#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

#include <json.hpp>

#include <fstream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;

namespace {

void put_image(const fs::path& p, unsigned seed, int size = 8) {
    std::mt19937 rng(seed);
    fs::create_directories(p.parent_path());
    csqp::write_pgm(synthetic::random_image(rng, size, size), p);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// 64-bit FNV-1a written out longhand as a reference for the fingerprint.
std::uint64_t reference_fnv1a(const std::vector<std::string>& lines) {
    std::uint64_t h = 14695981039346656037ull;
    for (const std::string& line : lines) {
        for (unsigned char c : line) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= static_cast<unsigned char>('\n');
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

TEST_CASE("scan finds class directories and orders items by id") {
    testutil::TempDir dir("scan");
    put_image(dir.path() / "bob" / "2.pgm", 1);
    put_image(dir.path() / "alice" / "b.pgm", 2);
    put_image(dir.path() / "alice" / "a.pgm", 3);
    put_image(dir.path() / "bob" / "1.pgm", 4);
    put_image(dir.path() / "bob" / "3.pgm", 5);
    // Stray root-level file and a non-image inside a class: both ignored.
    std::ofstream(dir.path() / "readme.txt") << "not an image";
    std::ofstream(dir.path() / "alice" / "notes.md") << "skip me";

    const csqp::Dataset ds = csqp::scan_dataset(dir.path());
    REQUIRE(ds.items.size() == 5);
    CHECK(ds.items[0].id == "alice/a.pgm");
    CHECK(ds.items[1].id == "alice/b.pgm");
    CHECK(ds.items[2].id == "bob/1.pgm");
    CHECK(ds.items[3].id == "bob/2.pgm");
    CHECK(ds.items[4].id == "bob/3.pgm");
    CHECK(ds.items[0].label == "alice");
    CHECK(ds.items[2].label == "bob");
    REQUIRE(ds.classes.size() == 2);
    CHECK(ds.classes.at("alice") == std::vector<std::size_t>{0, 1});
    CHECK(ds.classes.at("bob") == std::vector<std::size_t>{2, 3, 4});
    CHECK(ds.max_class_size() == 3);
    CHECK(ds.warnings.empty());

    SUBCASE("a second scan reproduces the same dataset") {
        const csqp::Dataset again = csqp::scan_dataset(dir.path());
        REQUIRE(again.items.size() == ds.items.size());
        for (std::size_t i = 0; i < ds.items.size(); ++i) {
            CHECK(again.items[i].id == ds.items[i].id);
            CHECK(again.items[i].label == ds.items[i].label);
        }
        CHECK(csqp::dataset_fingerprint(again) == csqp::dataset_fingerprint(ds));
    }
}

TEST_CASE("scan recurses into nested directories within a class") {
    testutil::TempDir dir("nested");
    put_image(dir.path() / "carol" / "sessions" / "s1" / "x.pgm", 7);
    put_image(dir.path() / "carol" / "y.pgm", 8);
    const csqp::Dataset ds = csqp::scan_dataset(dir.path());
    REQUIRE(ds.items.size() == 2);
    CHECK(ds.items[0].id == "carol/sessions/s1/x.pgm");
    CHECK(ds.items[0].label == "carol");
    CHECK(ds.items[1].id == "carol/y.pgm");
}

TEST_CASE("extension filter is case-insensitive and exclusive") {
    testutil::TempDir dir("ext");
    put_image(dir.path() / "c" / "keep.pgm", 1);
    fs::copy_file(dir.path() / "c" / "keep.pgm", dir.path() / "c" / "upper.PGM");
    fs::copy_file(dir.path() / "c" / "keep.pgm", dir.path() / "c" / "skip.raw");
    const csqp::Dataset ds = csqp::scan_dataset(dir.path());
    REQUIRE(ds.items.size() == 2);
    CHECK(ds.items[0].id == "c/keep.pgm");
    CHECK(ds.items[1].id == "c/upper.PGM");
}

TEST_CASE("scan failure modes") {
    testutil::TempDir dir("scanfail");
    SUBCASE("missing root") {
        CHECK_THROWS_AS(csqp::scan_dataset(dir.path() / "nope"), csqp::IoError);
        CHECK_THROWS_WITH(csqp::scan_dataset(dir.path() / "nope"),
                          doctest::Contains("nope"));
    }
    SUBCASE("root without class directories") {
        std::ofstream(dir.path() / "stray.png") << "x";
        CHECK_THROWS_WITH(csqp::scan_dataset(dir.path()),
                          doctest::Contains("no classes found"));
    }
    SUBCASE("root that is a file") {
        std::ofstream(dir.path() / "f") << "x";
        CHECK_THROWS_AS(csqp::scan_dataset(dir.path() / "f"), csqp::IoError);
    }
}

TEST_CASE("FERET-style filenames carry a pose code") {
    testutil::TempDir dir("pose");
    put_image(dir.path() / "p00001" / "00001_930831_fa.pgm", 1);
    put_image(dir.path() / "p00001" / "00001_930831_fb_a.pgm", 2);
    put_image(dir.path() / "p00001" / "00001_940128_hl.pgm", 3);
    put_image(dir.path() / "p00002" / "portrait.pgm", 4);
    put_image(dir.path() / "p00002" / "00002_940422_ql.pgm", 5);

    const csqp::Dataset ds = csqp::scan_dataset(dir.path());
    REQUIRE(ds.items.size() == 5);
    CHECK(ds.items[0].pose == "fa");
    CHECK(ds.items[1].pose == "fb");
    CHECK(ds.items[2].pose == "hl");
    CHECK(ds.items[3].pose == "ql");
    CHECK(ds.items[4].pose.empty());

    SUBCASE("pose filter keeps matching items and reindexes") {
        const std::vector<std::string> wanted = {"fa", "ql"};
        const csqp::Dataset filtered = csqp::filter_poses(ds, wanted);
        REQUIRE(filtered.items.size() == 2);
        CHECK(filtered.items[0].pose == "fa");
        CHECK(filtered.items[1].pose == "ql");
        CHECK(filtered.classes.size() == 2);
        CHECK(filtered.classes.at("p00001") == std::vector<std::size_t>{0});
        CHECK(filtered.classes.at("p00002") == std::vector<std::size_t>{1});
    }
    SUBCASE("empty pose list keeps everything") {
        const csqp::Dataset same = csqp::filter_poses(ds, {});
        CHECK(same.items.size() == ds.items.size());
    }
    SUBCASE("filtering on an unseen pose leaves no items") {
        const std::vector<std::string> wanted = {"zz"};
        CHECK(csqp::filter_poses(ds, wanted).items.empty());
    }
}

TEST_CASE("dataset fingerprint matches a longhand FNV-1a and tracks ids") {
    testutil::TempDir dir("fp");
    put_image(dir.path() / "a" / "one.pgm", 1);
    put_image(dir.path() / "b" / "two.pgm", 2);
    const csqp::Dataset ds = csqp::scan_dataset(dir.path());
    const std::uint64_t expected = reference_fnv1a({"a/one.pgm", "b/two.pgm"});
    CHECK(csqp::dataset_fingerprint(ds) == expected);

    SUBCASE("hex form is 16 lowercase hex digits") {
        const std::string hex = csqp::fingerprint_hex(expected);
        CHECK(hex.size() == 16);
        CHECK(hex.find_first_not_of("0123456789abcdef") == std::string::npos);
        CHECK(csqp::fingerprint_hex(0) == "0000000000000000");
    }
    SUBCASE("renaming one file changes the fingerprint") {
        fs::rename(dir.path() / "b" / "two.pgm", dir.path() / "b" / "three.pgm");
        const csqp::Dataset renamed = csqp::scan_dataset(dir.path());
        CHECK(csqp::dataset_fingerprint(renamed) != expected);
    }
}

TEST_CASE("extract_all describes every item and reports the rest") {
    testutil::TempDir dir("extract");
    put_image(dir.path() / "a" / "ok1.pgm", 1, 8);
    put_image(dir.path() / "a" / "ok2.pgm", 2, 8);
    put_image(dir.path() / "b" / "tiny.pgm", 3, 2); // below every descriptor minimum
    put_image(dir.path() / "b" / "ok3.pgm", 4, 8);
    const csqp::Dataset ds = csqp::scan_dataset(dir.path());

    const csqp::ExtractResult result = csqp::extract_all(ds, csqp::DescriptorId::Csqp);
    CHECK(result.cache.records.size() + result.skipped.size() == ds.items.size());
    REQUIRE(result.cache.records.size() == 3);
    REQUIRE(result.skipped.size() == 1);
    CHECK(result.skipped[0].id == "b/tiny.pgm");
    CHECK_FALSE(result.skipped[0].reason.empty());
    CHECK(result.cache.records[0].id == "a/ok1.pgm");
    CHECK(result.cache.records[1].id == "a/ok2.pgm");
    CHECK(result.cache.records[2].id == "b/ok3.pgm");
    CHECK(result.cache.bins == 256);
    CHECK(result.cache.fingerprint == csqp::dataset_fingerprint(ds));
    for (const auto& rec : result.cache.records) {
        std::uint64_t total = 0;
        for (std::uint64_t c : rec.counts) {
            total += c;
        }
        CHECK(total == 25); // (8-3)^2 positions
    }

    SUBCASE("skip report JSON lists each failure") {
        std::ostringstream out;
        csqp::write_skip_report_json(out, result.skipped);
        const auto j = nlohmann::json::parse(out.str());
        CHECK(j["skipped_count"] == 1);
        CHECK(j["skipped"][0]["id"] == "b/tiny.pgm");
        CHECK_FALSE(j["skipped"][0]["reason"].get<std::string>().empty());
    }
    SUBCASE("worker count does not reorder records") {
        const csqp::ExtractResult par = csqp::extract_all(ds, csqp::DescriptorId::Csqp, {}, 4);
        REQUIRE(par.cache.records.size() == result.cache.records.size());
        for (std::size_t i = 0; i < par.cache.records.size(); ++i) {
            CHECK(par.cache.records[i].id == result.cache.records[i].id);
            CHECK(par.cache.records[i].counts == result.cache.records[i].counts);
        }
    }
}

TEST_CASE("extract_all fails loudly when nothing is usable") {
    testutil::TempDir dir("allfail");
    put_image(dir.path() / "a" / "tiny1.pgm", 1, 2);
    put_image(dir.path() / "a" / "tiny2.pgm", 2, 2);
    const csqp::Dataset ds = csqp::scan_dataset(dir.path());
    CHECK_THROWS_WITH(csqp::extract_all(ds, csqp::DescriptorId::Csqp),
                      doctest::Contains("no dataset item could be described"));
}

TEST_CASE("cache save/load round-trips bit-exact") {
    testutil::TempDir dir("cache");
    synthetic::make_noisy_dataset(dir.path() / "data", 2, 2, 8, 99);
    const csqp::Dataset ds = csqp::scan_dataset(dir.path() / "data");
    const csqp::ExtractResult result = csqp::extract_all(ds, csqp::DescriptorId::Cslbp);

    const fs::path cache_path = dir.path() / "features.qpfc";
    csqp::save_cache(result.cache, cache_path);
    const csqp::FeatureCache loaded = csqp::load_cache(cache_path);
    CHECK(loaded.descriptor == result.cache.descriptor);
    CHECK(loaded.bins == result.cache.bins);
    CHECK(loaded.fingerprint == result.cache.fingerprint);
    REQUIRE(loaded.records.size() == result.cache.records.size());
    for (std::size_t i = 0; i < loaded.records.size(); ++i) {
        CHECK(loaded.records[i].id == result.cache.records[i].id);
        CHECK(loaded.records[i].label == result.cache.records[i].label);
        CHECK(loaded.records[i].counts == result.cache.records[i].counts);
    }

    SUBCASE("re-saving the loaded cache writes identical bytes") {
        const fs::path second = dir.path() / "again.qpfc";
        csqp::save_cache(loaded, second);
        CHECK(slurp(second) == slurp(cache_path));
    }
    SUBCASE("the file starts with the magic line") {
        CHECK(slurp(cache_path).rfind("QPFC1\n", 0) == 0);
    }
    SUBCASE("matching dataset passes the staleness check") {
        CHECK_NOTHROW(csqp::require_cache_matches(loaded, ds));
    }
    SUBCASE("a changed dataset is rejected as stale") {
        put_image(dir.path() / "data" / "class00" / "new.pgm", 5);
        const csqp::Dataset grown = csqp::scan_dataset(dir.path() / "data");
        CHECK_THROWS_AS(csqp::require_cache_matches(loaded, grown),
                        csqp::IncompatibleError);
        CHECK_THROWS_WITH(csqp::require_cache_matches(loaded, grown),
                          doctest::Contains("stale cache"));
    }
}

TEST_CASE("cache format violations are rejected") {
    testutil::TempDir dir("badcache");
    const fs::path path = dir.path() / "bad.qpfc";

    SUBCASE("missing file") {
        CHECK_THROWS_AS(csqp::load_cache(path), csqp::IoError);
    }
    SUBCASE("wrong magic") {
        std::ofstream(path) << "QPFC9\ncslbp,16,0,0,0000000000000000\n";
        CHECK_THROWS_AS(csqp::load_cache(path), csqp::FormatError);
    }
    SUBCASE("unknown descriptor") {
        std::ofstream(path) << "QPFC1\nhog,16,0,0,0000000000000000\n";
        CHECK_THROWS_AS(csqp::load_cache(path), csqp::FormatError);
    }
    SUBCASE("bins disagree with the descriptor") {
        std::ofstream(path) << "QPFC1\ncslbp,9,0,0,0000000000000000\n";
        CHECK_THROWS_AS(csqp::load_cache(path), csqp::FormatError);
    }
    SUBCASE("normalized caches are not supported") {
        std::ofstream(path) << "QPFC1\ncsltp,9,1,0,0000000000000000\n";
        CHECK_THROWS_AS(csqp::load_cache(path), csqp::FormatError);
    }
    SUBCASE("record count below the header count") {
        std::ofstream(path) << "QPFC1\ncsltp,9,0,2,0000000000000000\n"
                            << "a/x.pgm,a,1,0,0,0,0,0,0,0,0\n";
        CHECK_THROWS_WITH(csqp::load_cache(path), doctest::Contains("truncated"));
    }
    SUBCASE("record with missing fields") {
        std::ofstream(path) << "QPFC1\ncsltp,9,0,1,0000000000000000\n"
                            << "a/x.pgm,a,1,0,0\n";
        CHECK_THROWS_AS(csqp::load_cache(path), csqp::FormatError);
    }
    SUBCASE("non-numeric count") {
        std::ofstream(path) << "QPFC1\ncsltp,9,0,1,0000000000000000\n"
                            << "a/x.pgm,a,1,0,0,x,0,0,0,0,0\n";
        CHECK_THROWS_AS(csqp::load_cache(path), csqp::FormatError);
    }
    SUBCASE("malformed fingerprint") {
        std::ofstream(path) << "QPFC1\ncsltp,9,0,0,abc\n";
        CHECK_THROWS_AS(csqp::load_cache(path), csqp::FormatError);
    }
    SUBCASE("commas in labels cannot be saved") {
        csqp::FeatureCache cache;
        cache.descriptor = csqp::DescriptorId::Cslbp;
        cache.bins = 16;
        cache.records.push_back({"x.pgm", "smith, jane", std::vector<std::uint64_t>(16, 0)});
        CHECK_THROWS_AS(csqp::save_cache(cache, path), csqp::FormatError);
    }
}
