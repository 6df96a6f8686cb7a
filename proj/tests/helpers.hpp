#ifndef SCD_TESTS_HELPERS_HPP
#define SCD_TESTS_HELPERS_HPP

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

#include "scd/bitmap.hpp"
#include "scd/mask.hpp"

namespace helpers {

// Naive bool-grid mirror of the packed bitmap, used as the independent
// reference for pixel-count properties.
struct Grid {
    int w = 0, h = 0;
    std::vector<std::uint8_t> cells;

    Grid(int w, int h) : w(w), h(h), cells(static_cast<std::size_t>(w) * h, 0) {}
    std::uint8_t& at(int x, int y) { return cells[static_cast<std::size_t>(y) * w + x]; }
    std::uint8_t at(int x, int y) const { return cells[static_cast<std::size_t>(y) * w + x]; }

    long long count() const {
        long long n = 0;
        for (auto c : cells) n += c != 0;
        return n;
    }
    long long intersect_count(const Grid& o) const {
        long long n = 0;
        for (std::size_t i = 0; i < cells.size(); ++i) n += cells[i] && o.cells[i];
        return n;
    }
    long long union_count(const Grid& o) const {
        long long n = 0;
        for (std::size_t i = 0; i < cells.size(); ++i) n += cells[i] || o.cells[i];
        return n;
    }
};

inline scd::Bitmap to_bitmap(const Grid& g) {
    scd::Bitmap b(g.w, g.h);
    for (int y = 0; y < g.h; ++y)
        for (int x = 0; x < g.w; ++x)
            if (g.at(x, y)) b.set(x, y);
    return b;
}

inline std::pair<Grid, scd::Bitmap> random_region(std::mt19937_64& rng, int w, int h,
                                                  double density, bool nonempty = true) {
    Grid g(w, h);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (u(rng) < density) g.at(x, y) = 1;
    if (nonempty && g.count() == 0)
        g.at(static_cast<int>(rng() % w), static_cast<int>(rng() % h)) = 1;
    return {g, to_bitmap(g)};
}

inline scd::Bitmap rect_bitmap(int w, int h, int x0, int y0, int rw, int rh) {
    scd::Bitmap b(w, h);
    for (int y = y0; y < y0 + rh; ++y)
        for (int x = x0; x < x0 + rw; ++x) b.set(x, y);
    return b;
}

inline scd::Mask rect_mask(scd::MaskId id, int w, int h, int x0, int y0, int rw, int rh) {
    return scd::Mask(id, rect_bitmap(w, h, x0, y0, rw, rh));
}

inline scd::LabelRaster random_raster(std::mt19937_64& rng, int w, int h, int max_label) {
    scd::LabelRaster r(w, h);
    for (auto& cell : r.labels)
        cell = static_cast<std::uint32_t>(rng() % static_cast<std::uint64_t>(max_label + 1));
    return r;
}

inline scd::MaskSet random_mask_set(std::mt19937_64& rng, int w, int h, int max_label) {
    return scd::from_label_raster(random_raster(rng, w, h, max_label));
}

// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("scd_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string read_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace helpers

#endif // SCD_TESTS_HELPERS_HPP
