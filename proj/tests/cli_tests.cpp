#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <string>

#include "json.hpp"

#include "scd/change.hpp"
#include "scd/io.hpp"
#include "scd/mask.hpp"
#include "scd/sim.hpp"
#include "scd/tracking.hpp"

#include "helpers.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

RunResult run_cli(const fs::path& workdir, const std::string& args) {
    const fs::path out = workdir / "_stdout.txt";
    const fs::path err = workdir / "_stderr.txt";
    const std::string cmd = "cd '" + workdir.string() + "' && '" + SCD_CLI_PATH + "' " + args +
                            " > '" + out.string() + "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = helpers::read_bytes(out);
    r.err = helpers::read_bytes(err);
    return r;
}

void write_world(const fs::path& path) {
    std::ofstream f(path);
    f << R"({
  "width": 48, "height": 32,
  "objects": [
    {"id": 1, "rect": [4, 4, 8, 6]},
    {"id": 2, "rect": [20, 12, 10, 10], "query": false},
    {"id": 3, "rect": [36, 4, 6, 8], "ref": false}
  ]
})";
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("synth is deterministic and validates its arguments") {
    helpers::TempDir dir("cli_synth");
    write_world(dir.path() / "world.json");

    CHECK(run_cli(dir.path(), "synth --world world.json --frames 4 --out a").exit_code == 0);
    CHECK(run_cli(dir.path(), "synth --world world.json --frames 4 --out b").exit_code == 0);

    CHECK(helpers::read_bytes(dir.path() / "a/manifest.json") ==
          helpers::read_bytes(dir.path() / "b/manifest.json"));
    for (const char* rel : {"ref/000001.pgm", "query/000003.pgm", "gt/000002.pgm"})
        CHECK(helpers::read_bytes(dir.path() / "a" / rel) ==
              helpers::read_bytes(dir.path() / "b" / rel));

    const scd::SequenceManifest m = scd::read_manifest(dir.path() / "a/manifest.json");
    CHECK(m.frames() == 4);
    CHECK(m.has_gt());

    SUBCASE("zero frames is a usage error") {
        const RunResult r = run_cli(dir.path(), "synth --world world.json --frames 0 --out c");
        CHECK(r.exit_code != 0);
    }
    SUBCASE("a broken world is a clean error line") {
        std::ofstream(dir.path() / "bad.json") << "{\"width\": 0}";
        const RunResult r = run_cli(dir.path(), "synth --world bad.json --frames 1 --out c");
        CHECK(r.exit_code == 1);
        CHECK(r.err.rfind("error: ", 0) == 0);
    }
}

TEST_CASE("pair detection on a rebuilt change scenario") {
    helpers::TempDir dir("cli_detect");
    write_world(dir.path() / "world.json");
    REQUIRE(run_cli(dir.path(), "synth --world world.json --frames 1 --out seq").exit_code == 0);

    SUBCASE("identical images give an all-static map") {
        const RunResult r = run_cli(dir.path(),
                                    "detect --ref seq/ref/000001.pgm --query seq/ref/000001.pgm "
                                    "--tracker oracle --world world.json --min-area 1 "
                                    "--out static.pgm");
        REQUIRE(r.exit_code == 0);
        const scd::ChangeMap map = scd::read_change_map(dir.path() / "static.pgm");
        for (scd::ChangeClass c : map.codes) CHECK(c == scd::ChangeClass::kStatic);
    }
    SUBCASE("one missing and one new object land on their footprints") {
        const RunResult r = run_cli(dir.path(),
                                    "detect --ref seq/ref/000001.pgm --query seq/query/000001.pgm "
                                    "--tracker oracle --world world.json --min-area 1 "
                                    "--out change.pgm");
        REQUIRE(r.exit_code == 0);
        const scd::ChangeMap map = scd::read_change_map(dir.path() / "change.pgm");
        const scd::ChangeMap gt = scd::read_change_map(dir.path() / "seq/gt/000001.pgm");
        CHECK(map.codes == gt.codes);
        CHECK(map.at(20, 12) == scd::ChangeClass::kMissing);
        CHECK(map.at(36, 4) == scd::ChangeClass::kNew);
    }
    SUBCASE("tau 0 makes everything static") {
        const RunResult r = run_cli(dir.path(),
                                    "detect --ref seq/ref/000001.pgm --query seq/query/000001.pgm "
                                    "--tau 0 --tracker oracle --world world.json --min-area 1 "
                                    "--out zero.pgm");
        REQUIRE(r.exit_code == 0);
        const scd::ChangeMap map = scd::read_change_map(dir.path() / "zero.pgm");
        for (scd::ChangeClass c : map.codes) CHECK(c == scd::ChangeClass::kStatic);
    }
}

TEST_CASE("detect-seq matches detect byte for byte on one frame") {
    helpers::TempDir dir("cli_pairseq");
    write_world(dir.path() / "world.json");
    REQUIRE(run_cli(dir.path(), "synth --world world.json --frames 1 --out seq").exit_code == 0);

    REQUIRE(run_cli(dir.path(),
                    "detect --ref seq/ref/000001.pgm --query seq/query/000001.pgm "
                    "--tracker oracle --world world.json --min-area 1 --out pair.pgm")
                .exit_code == 0);
    REQUIRE(run_cli(dir.path(),
                    "detect-seq --manifest seq/manifest.json --tracker oracle --world world.json "
                    "--min-area 1 --out seq_pred")
                .exit_code == 0);

    CHECK(helpers::read_bytes(dir.path() / "pair.pgm") ==
          helpers::read_bytes(dir.path() / "seq_pred/000001.pgm"));
}

TEST_CASE("detect-seq plus eval closes the loop at mIoU 1") {
    helpers::TempDir dir("cli_seq");
    write_world(dir.path() / "world.json");
    REQUIRE(run_cli(dir.path(), "synth --world world.json --frames 6 --out seq").exit_code == 0);
    REQUIRE(run_cli(dir.path(),
                    "detect-seq --manifest seq/manifest.json --tracker oracle --world world.json "
                    "--frames 6 --min-area 1 --out pred")
                .exit_code == 0);

    const RunResult r =
        run_cli(dir.path(), "eval --pred pred --gt seq/gt --report report.json");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json report =
        nlohmann::json::parse(helpers::read_bytes(dir.path() / "report.json"));
    CHECK(report.at("miou").get<double>() == 1.0);
    CHECK(report.at("f1").get<double>() == 1.0);
    CHECK(report.at("per_class_iou").at("missing").get<double>() == 1.0);
    CHECK(report.at("pixel_counts").at("frames").get<int>() == 6);

    SUBCASE("binary mode reports two classes") {
        const RunResult rb = run_cli(dir.path(), "eval --pred pred --gt seq/gt --binary");
        REQUIRE(rb.exit_code == 0);
        const nlohmann::json doc = nlohmann::json::parse(rb.out);
        CHECK(doc.at("per_class_iou").contains("changed"));
        CHECK(doc.at("f1").get<double>() == 1.0);
    }
    SUBCASE("mismatched frame counts fail") {
        fs::remove(dir.path() / "pred/000006.pgm");
        CHECK(run_cli(dir.path(), "eval --pred pred --gt seq/gt").exit_code == 1);
    }
}

TEST_CASE("greedy tracker needs no world description") {
    helpers::TempDir dir("cli_greedy");
    write_world(dir.path() / "world.json");
    REQUIRE(run_cli(dir.path(), "synth --world world.json --frames 5 --out seq").exit_code == 0);
    REQUIRE(run_cli(dir.path(),
                    "detect-seq --manifest seq/manifest.json --tracker greedy --min-area 1 "
                    "--out pred")
                .exit_code == 0);
    const RunResult r = run_cli(dir.path(), "eval --pred pred --gt seq/gt");
    REQUIRE(r.exit_code == 0);
    CHECK(nlohmann::json::parse(r.out).at("miou").get<double>() == 1.0);
}

TEST_CASE("postproc resolves the canonical overlap fixture") {
    helpers::TempDir dir("cli_post");
    fs::create_directories(dir.path() / "props");

    // A: 2x5 bar losing 6 px to B -> folded into B (104 px total)
    scd::LabelRaster a(20, 20), b(20, 20);
    for (int y = 7; y < 12; ++y)
        for (int x = 8; x < 10; ++x) a.at(x, y) = 1;
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 10; ++x) b.at(x, y) = 1;
    scd::write_label_raster(a, dir.path() / "props/00_a.pgm");
    scd::write_label_raster(b, dir.path() / "props/01_b.pgm");

    const RunResult r =
        run_cli(dir.path(), "postproc --proposals props --min-area 1 --out masks.pgm");
    REQUIRE(r.exit_code == 0);
    const scd::MaskSet out = scd::from_label_raster(scd::read_label_raster(dir.path() / "masks.pgm"));
    CHECK(out.size() == 1);
    CHECK(area(out.masks()[0]) == 104);

    SUBCASE("an invalid region can drop a mask") {
        scd::LabelRaster inv(20, 20);
        for (int y = 0; y < 20; ++y)
            for (int x = 0; x < 12; ++x) inv.at(x, y) = 1;
        scd::write_label_raster(inv, dir.path() / "invalid.pgm");
        REQUIRE(run_cli(dir.path(),
                        "postproc --proposals props --min-area 1 --invalid-region invalid.pgm "
                        "--out empty.pgm")
                    .exit_code == 0);
        CHECK(scd::from_label_raster(scd::read_label_raster(dir.path() / "empty.pgm")).empty());
    }
}

TEST_CASE("external-files tracking consumes pre-tracked rasters") {
    helpers::TempDir dir("cli_ext");
    write_world(dir.path() / "world.json");
    REQUIRE(run_cli(dir.path(), "synth --world world.json --frames 1 --out seq").exit_code == 0);

    // Build the four per-frame mask files with the oracle, then hand them over.
    const scd::SyntheticWorld world = scd::load_world(dir.path() / "world.json");
    const scd::SequenceData data = scd::generate(world, 1);
    const scd::MaskSet mr = scd::from_label_raster(data.ref[0]);
    const scd::MaskSet mq = scd::from_label_raster(data.query[0]);
    auto t1 = scd::make_oracle_tracker(world, 1, 0.0);
    auto t2 = scd::make_oracle_tracker(world, 1, 0.0);
    const scd::TrackerGating frozen{.update_memory = false, .detect_new = false};
    const scd::MaskSet mr_to_q = t1->step(data.ref[0], data.query[0], mr, frozen);
    const scd::MaskSet mq_to_r = t2->step(data.query[0], data.ref[0], mq, frozen);

    fs::create_directories(dir.path() / "tracks");
    scd::write_label_raster(scd::to_label_raster(mr), dir.path() / "tracks/ref_spine_000001.pgm");
    scd::write_label_raster(scd::to_label_raster(mr_to_q),
                            dir.path() / "tracks/query_from_ref_000001.pgm");
    scd::write_label_raster(scd::to_label_raster(mq), dir.path() / "tracks/query_spine_000001.pgm");
    scd::write_label_raster(scd::to_label_raster(mq_to_r),
                            dir.path() / "tracks/ref_from_query_000001.pgm");

    REQUIRE(run_cli(dir.path(),
                    "detect --ref seq/ref/000001.pgm --query seq/query/000001.pgm "
                    "--tracker external-files --tracks tracks --out ext.pgm")
                .exit_code == 0);
    const scd::ChangeMap map = scd::read_change_map(dir.path() / "ext.pgm");
    const scd::ChangeMap gt = scd::read_change_map(dir.path() / "seq/gt/000001.pgm");
    CHECK(map.codes == gt.codes);

    SUBCASE("the sequence form consumes the same directory") {
        REQUIRE(run_cli(dir.path(),
                        "detect-seq --manifest seq/manifest.json --tracker external-files "
                        "--tracks tracks --out ext_seq")
                    .exit_code == 0);
        CHECK(helpers::read_bytes(dir.path() / "ext.pgm") ==
              helpers::read_bytes(dir.path() / "ext_seq/000001.pgm"));
    }
    SUBCASE("missing track files are reported") {
        CHECK(run_cli(dir.path(),
                      "detect --ref seq/ref/000001.pgm --query seq/query/000001.pgm "
                      "--tracker external-files --tracks nowhere --out x.pgm")
                  .exit_code == 1);
    }
}

TEST_CASE("a JSON config file feeds subcommand options") {
    helpers::TempDir dir("cli_cfg");
    write_world(dir.path() / "world.json");
    REQUIRE(run_cli(dir.path(), "synth --world world.json --frames 3 --out seq").exit_code == 0);

    std::ofstream(dir.path() / "cfg.json") << R"({
  "detect-seq": {
    "tracker": "oracle",
    "world": "world.json",
    "frames": 3,
    "min-area": 1,
    "out": "pred_cfg"
  }
})";
    REQUIRE(run_cli(dir.path(),
                    "--config cfg.json detect-seq --manifest seq/manifest.json")
                .exit_code == 0);
    CHECK(fs::exists(dir.path() / "pred_cfg/000003.pgm"));

    // command-line flags win over the config file
    REQUIRE(run_cli(dir.path(),
                    "--config cfg.json detect-seq --manifest seq/manifest.json --out pred_cli")
                .exit_code == 0);
    CHECK(fs::exists(dir.path() / "pred_cli/000001.pgm"));
}

TEST_CASE("the bundled demo world carries a full 60-frame sequence") {
    helpers::TempDir dir("cli_demo");
    const std::string world = std::string(SCD_DATA_DIR) + "/demo_world.json";
    REQUIRE(run_cli(dir.path(),
                    "synth --world '" + world + "' --frames 60 --seed 3 --out seq")
                .exit_code == 0);
    const scd::SequenceManifest m = scd::read_manifest(dir.path() / "seq/manifest.json");
    CHECK(m.frames() == 60);
    CHECK(m.has_gt());

    REQUIRE(run_cli(dir.path(),
                    "detect-seq --manifest seq/manifest.json --tracker oracle --world '" + world +
                    "' --frames 60 --seed 3 --min-area 1 --out pred")
                .exit_code == 0);
    const RunResult r = run_cli(dir.path(), "eval --pred pred --gt seq/gt");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json report = nlohmann::json::parse(r.out);
    CHECK(report.at("miou").get<double>() == 1.0);
    CHECK(report.at("per_class_iou").at("replaced").get<double>() == 1.0);
}

TEST_CASE("sbl-demo emits a strictly decreasing distance table") {
    helpers::TempDir dir("cli_sbl");
    const RunResult r = run_cli(dir.path(), "sbl-demo --layers 4 --out table.csv");
    REQUIRE(r.exit_code == 0);

    std::ifstream csv(dir.path() / "table.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "sbl_count,final_layer_distance");
    double prev = 0.0;
    int rows = 0;
    for (std::string line; std::getline(csv, line) && !line.empty(); ++rows) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        CHECK(std::stoi(line.substr(0, comma)) == rows);
        const double d = std::stod(line.substr(comma + 1));
        if (rows > 0) CHECK(d < prev);
        prev = d;
    }
    CHECK(rows == 5);
}

} // TEST_SUITE
