#include "scd/io.hpp"

#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "scd/error.hpp"

namespace scd {

namespace {

constexpr std::int64_t kMaxPixels = std::int64_t{1} << 28;

class PgmReader {
public:
    PgmReader(const std::filesystem::path& path) : path_(path.string()) {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open " + path_);
        std::ostringstream buf;
        buf << in.rdbuf();
        data_ = buf.str();
    }

    LabelRaster read() {
        expect_magic();
        const long long width = read_number("width");
        const long long height = read_number("height");
        const long long maxval = read_number("maxval");
        if (width < 1 || height < 1 || width * height > kMaxPixels)
            throw ParseError(path_ + ": raster dimensions out of range", pos_);
        if (maxval < 1 || maxval > 65535)
            throw ParseError(path_ + ": unsupported maxval " + std::to_string(maxval), pos_);
        skip_single_whitespace();

        LabelRaster raster(static_cast<int>(width), static_cast<int>(height));
        const bool wide = maxval > 255;
        const std::size_t sample_bytes = wide ? 2 : 1;
        for (std::size_t i = 0; i < raster.labels.size(); ++i) {
            if (pos_ + sample_bytes > data_.size())
                throw ParseError(path_ + ": truncated pixel data", pos_);
            if (wide) {
                raster.labels[i] = (static_cast<std::uint32_t>(byte(pos_)) << 8) |
                                   static_cast<std::uint32_t>(byte(pos_ + 1));
            } else {
                raster.labels[i] = byte(pos_);
            }
            pos_ += sample_bytes;
        }
        return raster;
    }

private:
    std::uint8_t byte(std::size_t i) const { return static_cast<std::uint8_t>(data_[i]); }

    void expect_magic() {
        if (data_.size() < 2 || data_[0] != 'P' || data_[1] != '5')
            throw ParseError(path_ + ": not a binary PGM (missing P5 magic)", 0);
        pos_ = 2;
    }

    // Whitespace and '#' comments are allowed between header tokens.
    void skip_separators() {
        while (pos_ < data_.size()) {
            const char c = data_[pos_];
            if (c == '#') {
                while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                ++pos_;
            } else {
                return;
            }
        }
    }

    long long read_number(const char* field) {
        skip_separators();
        if (pos_ >= data_.size() || data_[pos_] < '0' || data_[pos_] > '9')
            throw ParseError(path_ + ": expected " + field + " in header", pos_);
        long long value = 0;
        while (pos_ < data_.size() && data_[pos_] >= '0' && data_[pos_] <= '9') {
            value = value * 10 + (data_[pos_] - '0');
            if (value > std::numeric_limits<int>::max())
                throw ParseError(path_ + ": header value overflow", pos_);
            ++pos_;
        }
        return value;
    }

    // Exactly one whitespace byte separates the header from the payload.
    void skip_single_whitespace() {
        if (pos_ >= data_.size())
            throw ParseError(path_ + ": missing pixel data", pos_);
        const char c = data_[pos_];
        if (c != ' ' && c != '\t' && c != '\r' && c != '\n')
            throw ParseError(path_ + ": malformed header/payload separator", pos_);
        ++pos_;
    }

    std::string path_;
    std::string data_;
    std::size_t pos_ = 0;
};

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw std::runtime_error("short write to " + path.string());
}

std::string pgm_header(int width, int height, int maxval) {
    return "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n" +
           std::to_string(maxval) + "\n";
}

} // namespace

LabelRaster read_label_raster(const std::filesystem::path& path) {
    return PgmReader(path).read();
}

void write_label_raster(const LabelRaster& raster, const std::filesystem::path& path) {
    if (raster.width < 1 || raster.height < 1)
        throw std::invalid_argument("write_label_raster: empty raster");
    if (raster.labels.size() != static_cast<std::size_t>(raster.width) * raster.height)
        throw std::invalid_argument("write_label_raster: label count mismatch");

    std::string bytes = pgm_header(raster.width, raster.height, 65535);
    bytes.reserve(bytes.size() + raster.labels.size() * 2);
    for (std::uint32_t label : raster.labels) {
        if (label > 65535)
            throw std::invalid_argument("write_label_raster: label " + std::to_string(label) +
                                        " exceeds 65535");
        bytes.push_back(static_cast<char>((label >> 8) & 0xff));
        bytes.push_back(static_cast<char>(label & 0xff));
    }
    write_file(path, bytes);
}

ChangeMap read_change_map(const std::filesystem::path& path) {
    const LabelRaster raster = PgmReader(path).read();
    ChangeMap map(raster.width, raster.height);
    for (std::size_t i = 0; i < raster.labels.size(); ++i) {
        if (raster.labels[i] >= kNumChangeClasses)
            throw std::runtime_error(path.string() + ": change code " +
                                     std::to_string(raster.labels[i]) + " out of range");
        map.codes[i] = static_cast<ChangeClass>(raster.labels[i]);
    }
    return map;
}

void write_change_map(const ChangeMap& map, const std::filesystem::path& path) {
    if (map.width < 1 || map.height < 1)
        throw std::invalid_argument("write_change_map: empty map");

    std::string bytes = pgm_header(map.width, map.height, 255);
    bytes.reserve(bytes.size() + map.codes.size());
    for (ChangeClass c : map.codes) bytes.push_back(static_cast<char>(c));
    write_file(path, bytes);
}

std::filesystem::path SequenceManifest::ref_path(int frame) const {
    return base_dir / ref.at(static_cast<std::size_t>(frame) - 1);
}
std::filesystem::path SequenceManifest::query_path(int frame) const {
    return base_dir / query.at(static_cast<std::size_t>(frame) - 1);
}
std::filesystem::path SequenceManifest::gt_path(int frame) const {
    return base_dir / gt.at(static_cast<std::size_t>(frame) - 1);
}

void SequenceManifest::validate() const {
    if (ref.empty())
        throw std::invalid_argument("manifest: no frames");
    if (ref.size() != query.size())
        throw std::invalid_argument("manifest: ref has " + std::to_string(ref.size()) +
                                    " frames but query has " + std::to_string(query.size()));
    if (!gt.empty() && gt.size() != ref.size())
        throw std::invalid_argument("manifest: gt has " + std::to_string(gt.size()) +
                                    " frames but sequences have " + std::to_string(ref.size()));
}

SequenceManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("ref") || !doc.contains("query"))
        throw std::runtime_error(path.string() + ": manifest needs \"ref\" and \"query\" lists");

    SequenceManifest m;
    m.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    m.ref = doc.at("ref").get<std::vector<std::string>>();
    m.query = doc.at("query").get<std::vector<std::string>>();
    if (doc.contains("gt")) m.gt = doc.at("gt").get<std::vector<std::string>>();
    m.validate();
    return m;
}

void write_manifest(const SequenceManifest& manifest, const std::filesystem::path& path) {
    manifest.validate();
    nlohmann::ordered_json doc;
    doc["ref"] = manifest.ref;
    doc["query"] = manifest.query;
    if (manifest.has_gt()) doc["gt"] = manifest.gt;
    write_file(path, doc.dump(2) + "\n");
}

} // namespace scd
