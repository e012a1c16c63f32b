// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include <doctest.h>

#include "csqp/commands.hpp"
#include "csqp/dataset.hpp"
#include "csqp/image_io.hpp"
#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

#include <json.hpp>

#include <fstream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Streams {
    std::ostringstream out;
    std::ostringstream err;
};

} // namespace

TEST_CASE("default cache paths live in the working directory") {
    CHECK(csqp::default_cache_path("faces", "csqp") == fs::path("faces.csqp.qpfc"));
    CHECK(csqp::default_cache_path("data/faces/", "lbp") == fs::path("faces.lbp.qpfc"));
    CHECK(csqp::default_cache_path(".", "csqp") == fs::path("dataset.csqp.qpfc"));
}

TEST_CASE("cmd_extract writes a loadable cache and a skip report") {
    testutil::TempDir dir("cmdextract");
    synthetic::make_duplicate_dataset(dir.path() / "data", 2, 2, 10, 31);
    std::mt19937 rng(1);
    fs::create_directories(dir.path() / "data" / "class00");
    csqp::write_pgm(synthetic::random_image(rng, 2, 2),
                    dir.path() / "data" / "class00" / "toosmall.pgm");

    csqp::ExtractConfig config;
    config.dataset_root = dir.path() / "data";
    config.out_path = dir.path() / "features.qpfc";
    Streams s;
    CHECK(csqp::cmd_extract(config, s.out, s.err) == 0);

    const csqp::FeatureCache cache = csqp::load_cache(config.out_path);
    CHECK(cache.records.size() == 4);
    CHECK(cache.descriptor == csqp::DescriptorId::Csqp);

    const fs::path skips = dir.path() / "features.qpfc.skips.json";
    REQUIRE(fs::exists(skips));
    const auto j = nlohmann::json::parse(slurp(skips));
    CHECK(j["skipped_count"] == 1);
    CHECK(j["skipped"][0]["id"] == "class00/toosmall.pgm");
}

TEST_CASE("cmd_extract failure modes") {
    testutil::TempDir dir("extractfail");
    Streams s;

    SUBCASE("unknown descriptor is a usage error") {
        csqp::ExtractConfig config;
        config.descriptor = "hog";
        config.dataset_root = dir.path();
        config.out_path = dir.path() / "x.qpfc";
        CHECK(csqp::cmd_extract(config, s.out, s.err) == 2);
        CHECK(s.err.str().find("error:") != std::string::npos);
    }
    SUBCASE("missing dataset is a runtime error") {
        csqp::ExtractConfig config;
        config.dataset_root = dir.path() / "absent";
        config.out_path = dir.path() / "x.qpfc";
        CHECK(csqp::cmd_extract(config, s.out, s.err) == 1);
        CHECK(s.err.str().find("absent") != std::string::npos);
    }
    SUBCASE("pose filter that removes everything is a runtime error") {
        synthetic::make_duplicate_dataset(dir.path() / "data", 2, 2, 10, 3);
        csqp::ExtractConfig config;
        config.dataset_root = dir.path() / "data";
        config.out_path = dir.path() / "x.qpfc";
        config.poses = {"fa"};
        CHECK(csqp::cmd_extract(config, s.out, s.err) == 1);
    }
}

TEST_CASE("cmd_benchmark produces the report pair and reuses caches") {
    testutil::TempDir dir("cmdbench");
    synthetic::make_noisy_dataset(dir.path() / "data", 4, 5, 12, 404);

    csqp::BenchmarkConfig config;
    config.dataset_root = dir.path() / "data";
    config.cache_path = dir.path() / "bench.qpfc";
    config.out_prefix = (dir.path() / "run1").string();
    config.n_max = 6;

    Streams s1;
    REQUIRE(csqp::cmd_benchmark(config, s1.out, s1.err) == 0);
    const fs::path csv1 = dir.path() / "run1.retrieval.csv";
    const fs::path json1 = dir.path() / "run1.summary.json";
    REQUIRE(fs::exists(csv1));
    REQUIRE(fs::exists(json1));
    REQUIRE(fs::exists(*config.cache_path));
    CHECK(s1.out.str().find("anmrr") != std::string::npos);

    const auto j = nlohmann::json::parse(slurp(json1));
    CHECK(j["config"]["descriptor"] == "csqp");
    CHECK(j["dataset"]["items"] == 20);
    CHECK(j["dataset"]["evaluated_probes"] == 20);
    CHECK(j["recognition"]["cmc"].size() == 6);
    CHECK(j["reference_results"]["max_arp_percent"].size() == 3);

    SUBCASE("second run reuses the cache and reproduces both files byte for byte") {
        csqp::BenchmarkConfig rerun = config;
        rerun.out_prefix = (dir.path() / "run2").string();
        rerun.jobs = 4;
        Streams s2;
        REQUIRE(csqp::cmd_benchmark(rerun, s2.out, s2.err) == 0);
        CHECK(s2.out.str().find("reusing cache") != std::string::npos);
        CHECK(slurp(dir.path() / "run2.retrieval.csv") == slurp(csv1));
        CHECK(slurp(dir.path() / "run2.summary.json") == slurp(json1));
    }
    SUBCASE("a cache built for another descriptor is rejected") {
        csqp::BenchmarkConfig wrong = config;
        wrong.descriptor = "lbp";
        wrong.out_prefix = (dir.path() / "run3").string();
        Streams s2;
        CHECK(csqp::cmd_benchmark(wrong, s2.out, s2.err) == 1);
        CHECK(s2.err.str().find("error:") != std::string::npos);
    }
    SUBCASE("a stale cache is rejected") {
        std::mt19937 rng(9);
        csqp::write_pgm(synthetic::random_image(rng, 12, 12),
                        dir.path() / "data" / "class00" / "late.pgm");
        csqp::BenchmarkConfig stale = config;
        stale.out_prefix = (dir.path() / "run4").string();
        Streams s2;
        CHECK(csqp::cmd_benchmark(stale, s2.out, s2.err) == 1);
        CHECK(s2.err.str().find("stale cache") != std::string::npos);
    }
}

TEST_CASE("cmd_benchmark usage and data errors") {
    testutil::TempDir dir("benchfail");
    Streams s;

    SUBCASE("n_max of zero is a usage error") {
        synthetic::make_duplicate_dataset(dir.path() / "data", 2, 2, 10, 8);
        csqp::BenchmarkConfig config;
        config.dataset_root = dir.path() / "data";
        config.cache_path = dir.path() / "c.qpfc";
        config.out_prefix = (dir.path() / "r").string();
        config.n_max = 0;
        CHECK(csqp::cmd_benchmark(config, s.out, s.err) == 2);
    }
    SUBCASE("unknown descriptor is a usage error") {
        csqp::BenchmarkConfig config;
        config.descriptor = "sift";
        config.dataset_root = dir.path();
        CHECK(csqp::cmd_benchmark(config, s.out, s.err) == 2);
    }
    SUBCASE("missing dataset is a runtime error") {
        csqp::BenchmarkConfig config;
        config.dataset_root = dir.path() / "absent";
        config.out_prefix = (dir.path() / "r").string();
        CHECK(csqp::cmd_benchmark(config, s.out, s.err) == 1);
    }
    SUBCASE("a dataset of singletons is a runtime error") {
        synthetic::make_duplicate_dataset(dir.path() / "data", 3, 1, 10, 8);
        csqp::BenchmarkConfig config;
        config.dataset_root = dir.path() / "data";
        config.cache_path = dir.path() / "c.qpfc";
        config.out_prefix = (dir.path() / "r").string();
        CHECK(csqp::cmd_benchmark(config, s.out, s.err) == 1);
        CHECK(s.err.str().find("no evaluable probes") != std::string::npos);
    }
}

TEST_CASE("cmd_benchmark on the adversarial construction bottoms out the metrics") {
    testutil::TempDir dir("adversarial");
    synthetic::make_adversarial_dataset(dir.path() / "data", 5, 12, 606);

    csqp::BenchmarkConfig config;
    config.dataset_root = dir.path() / "data";
    config.cache_path = dir.path() / "adv.qpfc";
    config.out_prefix = (dir.path() / "adv").string();
    config.n_max = 4;
    Streams s;
    REQUIRE(csqp::cmd_benchmark(config, s.out, s.err) == 0);

    const auto j = nlohmann::json::parse(slurp(dir.path() / "adv.summary.json"));
    CHECK(j["recognition"]["recognition_rate_percent"].get<double>() == 0.0);
    CHECK(j["recognition"]["matches"] == 0);
    CHECK(j["retrieval"]["anmrr"].get<double>() == 1.0);
}

TEST_CASE("cmd_analyze writes the entropy table") {
    testutil::TempDir dir("cmdanalyze");
    synthetic::make_noisy_dataset(dir.path() / "data", 2, 3, 16, 55);

    SUBCASE("to stdout with all implemented descriptors by default") {
        csqp::AnalyzeConfig config;
        config.dataset_root = dir.path() / "data";
        Streams s;
        REQUIRE(csqp::cmd_analyze(config, s.out, s.err) == 0);
        const std::string text = s.out.str();
        CHECK(text.find("descriptor,average_entropy,images") != std::string::npos);
        CHECK(text.find("csqp,") != std::string::npos);
        CHECK(text.find("lbp,") != std::string::npos);
        CHECK(text.find("cslbp,") != std::string::npos);
        CHECK(text.find("csltp,") != std::string::npos);
        CHECK(text.find("slbp,") != std::string::npos);
    }
    SUBCASE("to a file with explicit descriptors including unimplemented ones") {
        csqp::AnalyzeConfig config;
        config.dataset_root = dir.path() / "data";
        config.descriptors = {"csqp", "ldp"};
        config.out_path = dir.path() / "entropy.csv";
        Streams s;
        REQUIRE(csqp::cmd_analyze(config, s.out, s.err) == 0);
        const std::string text = slurp(*config.out_path);
        CHECK(text.find("csqp,") != std::string::npos);
        CHECK(text.find("ldp,not-implemented,6") != std::string::npos);
    }
    SUBCASE("unknown descriptor is a usage error") {
        csqp::AnalyzeConfig config;
        config.dataset_root = dir.path() / "data";
        config.descriptors = {"sift"};
        Streams s;
        CHECK(csqp::cmd_analyze(config, s.out, s.err) == 2);
    }
}

TEST_CASE("cmd_export writes feature images and symmetry diagnostics") {
    testutil::TempDir dir("cmdexport");
    std::mt19937 rng(717);
    const csqp::GrayImage face = synthetic::textured_face(rng, 32);
    const fs::path img_path = dir.path() / "face.pgm";
    csqp::write_pgm(face, img_path);

    SUBCASE("whole-image export") {
        csqp::ExportConfig config;
        config.image_path = img_path;
        config.out_path = dir.path() / "face.code.pgm";
        Streams s;
        REQUIRE(csqp::cmd_export(config, s.out, s.err) == 0);
        const csqp::GrayImage fi = csqp::load_image(*config.out_path);
        CHECK(fi.width() == 29);
        CHECK(fi.height() == 29);
        CHECK(s.out.str().find("29x29") != std::string::npos);
    }
    SUBCASE("single-crop export") {
        csqp::ExportConfig config;
        config.image_path = img_path;
        config.out_path = dir.path() / "crop.pgm";
        config.crops = {{0, 0, 12, 12}};
        Streams s;
        REQUIRE(csqp::cmd_export(config, s.out, s.err) == 0);
        const csqp::GrayImage fi = csqp::load_image(*config.out_path);
        CHECK(fi.width() == 9);
    }
    SUBCASE("diff mode prints both variance figures and writes nothing") {
        csqp::ExportConfig config;
        config.image_path = img_path;
        config.crops = {{0, 0, 14, 14}, {18, 0, 14, 14}};
        config.diff = true;
        Streams s;
        REQUIRE(csqp::cmd_export(config, s.out, s.err) == 0);
        const std::string text = s.out.str();
        CHECK(text.find("diff-variance normalized") != std::string::npos);
        CHECK(text.find("diff-variance raw-counts") != std::string::npos);
    }
    SUBCASE("mirrored symmetric halves have zero variance") {
        const csqp::GrayImage left = csqp::crop(face, 0, 0, 16, 32);
        csqp::GrayImage symmetric(32, 32);
        for (int i = 0; i < 32; ++i) {
            for (int j = 0; j < 16; ++j) {
                symmetric.set(i, j, left.at(i, j));
                symmetric.set(i, 31 - j, left.at(i, j));
            }
        }
        const fs::path sym_path = dir.path() / "sym.pgm";
        csqp::write_pgm(symmetric, sym_path);
        csqp::ExportConfig config;
        config.image_path = sym_path;
        config.crops = {{0, 0, 16, 32}, {16, 0, 16, 32}};
        config.diff = true;
        Streams s;
        REQUIRE(csqp::cmd_export(config, s.out, s.err) == 0);
        CHECK(s.out.str().find("diff-variance normalized 0") != std::string::npos);
    }
    SUBCASE("usage errors") {
        Streams s;
        csqp::ExportConfig no_out;
        no_out.image_path = img_path;
        CHECK(csqp::cmd_export(no_out, s.out, s.err) == 2);

        csqp::ExportConfig two_crops_no_diff;
        two_crops_no_diff.image_path = img_path;
        two_crops_no_diff.out_path = dir.path() / "x.pgm";
        two_crops_no_diff.crops = {{0, 0, 8, 8}, {8, 0, 8, 8}};
        CHECK(csqp::cmd_export(two_crops_no_diff, s.out, s.err) == 2);

        csqp::ExportConfig diff_one_crop;
        diff_one_crop.image_path = img_path;
        diff_one_crop.crops = {{0, 0, 8, 8}};
        diff_one_crop.diff = true;
        CHECK(csqp::cmd_export(diff_one_crop, s.out, s.err) == 2);

        csqp::ExportConfig bad_crop;
        bad_crop.image_path = img_path;
        bad_crop.out_path = dir.path() / "x.pgm";
        bad_crop.crops = {{30, 30, 10, 10}};
        CHECK(csqp::cmd_export(bad_crop, s.out, s.err) == 2);
    }
    SUBCASE("missing image is a runtime error") {
        csqp::ExportConfig config;
        config.image_path = dir.path() / "ghost.pgm";
        config.out_path = dir.path() / "x.pgm";
        Streams s;
        CHECK(csqp::cmd_export(config, s.out, s.err) == 1);
    }
}
