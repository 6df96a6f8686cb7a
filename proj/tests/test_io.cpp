#include "doctest.h"

#include <cstring>
#include <fstream>
#include <random>

#include "scd/error.hpp"
#include "scd/io.hpp"

#include "helpers.hpp"

using namespace scd;

TEST_SUITE("io") {

TEST_CASE("label raster golden bytes") {
    helpers::TempDir dir("pgm");
    LabelRaster r(2, 2);
    r.labels = {0, 1, 1, 2};
    const auto path = dir.path() / "g.pgm";
    write_label_raster(r, path);

    // header + big-endian 16-bit samples 0000 0001 0001 0002
    const char expected[] = "P5\n2 2\n65535\n\x00\x00\x00\x01\x00\x01\x00\x02";
    const std::string bytes = helpers::read_bytes(path);
    CHECK(bytes == std::string(expected, sizeof expected - 1));
    CHECK(read_label_raster(path) == r);
}

TEST_CASE("label raster round-trip on random rasters") {
    helpers::TempDir dir("pgm_rt");
    std::mt19937_64 rng(9);
    for (int iter = 0; iter < 40; ++iter) {
        const int w = 1 + static_cast<int>(rng() % 33);
        const int h = 1 + static_cast<int>(rng() % 33);
        LabelRaster r = helpers::random_raster(rng, w, h, 65535);
        const auto path = dir.path() / ("r" + std::to_string(iter) + ".pgm");
        write_label_raster(r, path);
        CHECK(read_label_raster(path) == r);

        // identical input -> identical bytes
        const auto path2 = dir.path() / "again.pgm";
        write_label_raster(r, path2);
        CHECK(helpers::read_bytes(path) == helpers::read_bytes(path2));
    }
}

TEST_CASE("oversized labels are rejected at write time") {
    helpers::TempDir dir("pgm_big");
    LabelRaster r(1, 1);
    r.labels = {65536};
    CHECK_THROWS_AS(write_label_raster(r, dir.path() / "x.pgm"), std::invalid_argument);
}

TEST_CASE("truncated payload reports the byte offset") {
    helpers::TempDir dir("pgm_trunc");
    LabelRaster r(4, 4);
    for (std::size_t i = 0; i < r.labels.size(); ++i) r.labels[i] = static_cast<int>(i);
    const auto path = dir.path() / "t.pgm";
    write_label_raster(r, path);

    std::string bytes = helpers::read_bytes(path);
    bytes.resize(bytes.size() - 5);
    std::ofstream(path, std::ios::binary | std::ios::trunc) << bytes;

    try {
        read_label_raster(path);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.byte_offset() > 0);
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
        CHECK(std::string(e.what()).find("truncated") != std::string::npos);
    }
}

TEST_CASE("malformed headers are rejected") {
    helpers::TempDir dir("pgm_bad");
    const auto path = dir.path() / "bad.pgm";
    SUBCASE("wrong magic") {
        std::ofstream(path, std::ios::binary) << "P6\n2 2\n255\n....";
        CHECK_THROWS_AS(read_label_raster(path), ParseError);
    }
    SUBCASE("missing dimensions") {
        std::ofstream(path, std::ios::binary) << "P5\nhello\n";
        CHECK_THROWS_AS(read_label_raster(path), ParseError);
    }
    SUBCASE("unsupported maxval") {
        std::ofstream(path, std::ios::binary) << "P5\n2 2\n70000\n";
        CHECK_THROWS_AS(read_label_raster(path), ParseError);
    }
    SUBCASE("dimension overflow") {
        std::ofstream(path, std::ios::binary) << "P5\n100000 100000\n255\n";
        CHECK_THROWS_AS(read_label_raster(path), ParseError);
    }
    SUBCASE("zero dimensions") {
        std::ofstream(path, std::ios::binary) << "P5\n0 4\n255\n";
        CHECK_THROWS_AS(read_label_raster(path), ParseError);
    }
    SUBCASE("comments in the header are fine") {
        std::ofstream(path, std::ios::binary)
            << "P5\n# a comment\n2 1\n255\n" << std::string("\x05\x09", 2);
        const LabelRaster r = read_label_raster(path);
        CHECK(r.width == 2);
        CHECK(r.labels == std::vector<std::uint32_t>{5, 9});
    }
}

TEST_CASE("change map codes survive a round-trip and reject junk") {
    helpers::TempDir dir("cm");
    ChangeMap map(3, 2);
    map.codes = {ChangeClass::kStatic,  ChangeClass::kNew,      ChangeClass::kMissing,
                 ChangeClass::kReplaced, ChangeClass::kStatic,  ChangeClass::kNew};
    const auto path = dir.path() / "c.pgm";
    write_change_map(map, path);
    const ChangeMap back = read_change_map(path);
    CHECK(back.codes == map.codes);

    // value 4 is not a change code
    std::string bytes = helpers::read_bytes(path);
    bytes[bytes.size() - 1] = 4;
    std::ofstream(path, std::ios::binary | std::ios::trunc) << bytes;
    CHECK_THROWS(read_change_map(path));
}

TEST_CASE("manifest parsing") {
    helpers::TempDir dir("man");
    SUBCASE("one-frame pair without ground truth") {
        const auto path = dir.path() / "m.json";
        std::ofstream(path) << R"({"ref":["r1.pgm"],"query":["q1.pgm"]})";
        const SequenceManifest m = read_manifest(path);
        CHECK(m.frames() == 1);
        CHECK(!m.has_gt());
        CHECK(m.ref_path(1) == dir.path() / "r1.pgm");
    }
    SUBCASE("mismatched lengths fail validation") {
        const auto path = dir.path() / "bad.json";
        std::ofstream(path) << R"({"ref":["a.pgm","b.pgm"],"query":["c.pgm"]})";
        CHECK_THROWS_AS(read_manifest(path), std::invalid_argument);
    }
    SUBCASE("missing keys are reported") {
        const auto path = dir.path() / "nokeys.json";
        std::ofstream(path) << R"({"reference":[]})";
        CHECK_THROWS(read_manifest(path));
    }
    SUBCASE("missing file is reported") {
        CHECK_THROWS(read_manifest(dir.path() / "absent.json"));
    }
}

TEST_CASE("manifest writing is deterministic and stable over 60 frames") {
    helpers::TempDir dir("man_rt");
    SequenceManifest m;
    for (int t = 1; t <= 60; ++t) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%06d.pgm", t);
        m.ref.push_back(std::string("ref/") + buf);
        m.query.push_back(std::string("query/") + buf);
        m.gt.push_back(std::string("gt/") + buf);
    }
    const auto p1 = dir.path() / "m1.json";
    const auto p2 = dir.path() / "m2.json";
    write_manifest(m, p1);
    SequenceManifest parsed = read_manifest(p1);
    CHECK(parsed.frames() == 60);
    write_manifest(parsed, p2);
    CHECK(helpers::read_bytes(p1) == helpers::read_bytes(p2));
}

} // TEST_SUITE
