#ifndef SCD_BITMAP_HPP
#define SCD_BITMAP_HPP

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace scd {

/// Fixed-size binary raster, row-major, packed into 64-bit words.
/// Bits past width*height stay zero so popcounts over whole words are exact.
class Bitmap {
public:
    Bitmap() = default;

    Bitmap(int width, int height) : width_(width), height_(height) {
        if (width < 0 || height < 0)
            throw std::invalid_argument("Bitmap: negative dimensions");
        words_.assign((static_cast<std::size_t>(width) * height + 63) / 64, 0u);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::int64_t size() const noexcept {
        return static_cast<std::int64_t>(width_) * height_;
    }

    bool get(int x, int y) const {
        check_coord(x, y);
        const std::size_t i = index(x, y);
        return (words_[i >> 6] >> (i & 63u)) & 1u;
    }

    void set(int x, int y, bool value = true) {
        check_coord(x, y);
        const std::size_t i = index(x, y);
        const std::uint64_t bit = std::uint64_t{1} << (i & 63u);
        if (value)
            words_[i >> 6] |= bit;
        else
            words_[i >> 6] &= ~bit;
    }

    std::int64_t count() const noexcept {
        std::int64_t n = 0;
        for (std::uint64_t w : words_) n += std::popcount(w);
        return n;
    }

    bool any() const noexcept {
        for (std::uint64_t w : words_)
            if (w) return true;
        return false;
    }

    Bitmap& operator|=(const Bitmap& other) {
        check_same_dims(other);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
        return *this;
    }

    Bitmap& operator&=(const Bitmap& other) {
        check_same_dims(other);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
        return *this;
    }

    /// Removes all pixels that are set in `other`.
    Bitmap& subtract(const Bitmap& other) {
        check_same_dims(other);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
        return *this;
    }

    friend std::int64_t intersect_count(const Bitmap& a, const Bitmap& b) {
        a.check_same_dims(b);
        std::int64_t n = 0;
        for (std::size_t i = 0; i < a.words_.size(); ++i)
            n += std::popcount(a.words_[i] & b.words_[i]);
        return n;
    }

    bool intersects(const Bitmap& other) const {
        check_same_dims(other);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & other.words_[i]) return true;
        return false;
    }

    bool is_subset_of(const Bitmap& other) const {
        check_same_dims(other);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~other.words_[i]) return false;
        return true;
    }

    /// Calls fn(x, y) for every set pixel in row-major order.
    template <class Fn>
    void for_each_set(Fn&& fn) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                const int b = std::countr_zero(bits);
                const std::size_t i = (w << 6) + static_cast<std::size_t>(b);
                fn(static_cast<int>(i % static_cast<std::size_t>(width_)),
                   static_cast<int>(i / static_cast<std::size_t>(width_)));
                bits &= bits - 1;
            }
        }
    }

    friend bool operator==(const Bitmap&, const Bitmap&) = default;

    const std::vector<std::uint64_t>& words() const noexcept { return words_; }

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    void check_coord(int x, int y) const {
        if (x < 0 || x >= width_ || y < 0 || y >= height_)
            throw std::out_of_range("Bitmap: coordinate outside raster");
    }

    void check_same_dims(const Bitmap& other) const {
        if (width_ != other.width_ || height_ != other.height_)
            throw std::invalid_argument("Bitmap: dimension mismatch");
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint64_t> words_;
};

inline double iou(const Bitmap& a, const Bitmap& b) {
    const std::int64_t inter = intersect_count(a, b);
    const std::int64_t uni = a.count() + b.count() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

} // namespace scd

#endif // SCD_BITMAP_HPP
