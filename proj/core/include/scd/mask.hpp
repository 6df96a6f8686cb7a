#ifndef SCD_MASK_HPP
#define SCD_MASK_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "scd/bitmap.hpp"

namespace scd {

using MaskId = std::uint32_t;

/// One tracked object mask: a non-empty pixel region tagged with a track id.
/// The region may be spatially disconnected. Immutable after construction.
class Mask {
public:
    Mask(MaskId id, Bitmap pixels);

    MaskId id() const noexcept { return id_; }
    const Bitmap& pixels() const noexcept { return pixels_; }
    int width() const noexcept { return pixels_.width(); }
    int height() const noexcept { return pixels_.height(); }

    friend bool operator==(const Mask&, const Mask&) = default;

private:
    MaskId id_;
    Bitmap pixels_;
};

inline std::int64_t area(const Mask& m) { return m.pixels().count(); }
std::int64_t intersect_area(const Mask& a, const Mask& b);
double iou(const Mask& a, const Mask& b);

/// Pixel-wise union of a mask collection over a width x height frame.
/// An empty collection yields an all-zero bitmap.
Bitmap union_pixels(int width, int height, std::span<const Mask> masks);

/// A set of pairwise-disjoint masks over one frame, keyed by id.
/// Disjointness and id uniqueness are validated at construction; all
/// operations producing MaskSets preserve them. Immutable after construction.
class MaskSet {
public:
    MaskSet() = default;
    MaskSet(int width, int height);
    MaskSet(int width, int height, std::vector<Mask> masks);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return masks_.size(); }
    bool empty() const noexcept { return masks_.empty(); }

    /// Masks in ascending id order.
    const std::vector<Mask>& masks() const noexcept { return masks_; }

    bool contains(MaskId id) const noexcept { return find(id) != nullptr; }
    const Mask* find(MaskId id) const noexcept;
    std::int64_t area_of(MaskId id) const noexcept; // 0 when absent

    std::vector<MaskId> ids() const;
    MaskId max_id() const noexcept; // 0 when empty

    Bitmap union_all() const;

    friend bool operator==(const MaskSet&, const MaskSet&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<Mask> masks_; // sorted by id
};

/// Per-pixel id raster: 0 = background, k > 0 = pixel of mask id k.
struct LabelRaster {
    int width = 0;
    int height = 0;
    std::vector<std::uint32_t> labels; // row-major, width*height entries

    LabelRaster() = default;
    LabelRaster(int width, int height);

    std::uint32_t at(int x, int y) const {
        return labels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint32_t& at(int x, int y) {
        return labels[static_cast<std::size_t>(y) * width + x];
    }

    friend bool operator==(const LabelRaster&, const LabelRaster&) = default;
};

/// Decodes a raster into one mask per distinct nonzero label.
MaskSet from_label_raster(const LabelRaster& raster);

/// Encodes a MaskSet as a label raster; exact inverse of from_label_raster.
LabelRaster to_label_raster(const MaskSet& set);

} // namespace scd

#endif // SCD_MASK_HPP
