#include "scd/mask.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace scd {

Mask::Mask(MaskId id, Bitmap pixels) : id_(id), pixels_(std::move(pixels)) {
    if (id_ == 0)
        throw std::invalid_argument("Mask: id must be positive");
    if (!pixels_.any())
        throw std::invalid_argument("Mask: empty pixel set (id " + std::to_string(id_) + ")");
}

std::int64_t intersect_area(const Mask& a, const Mask& b) {
    return intersect_count(a.pixels(), b.pixels());
}

double iou(const Mask& a, const Mask& b) { return iou(a.pixels(), b.pixels()); }

Bitmap union_pixels(int width, int height, std::span<const Mask> masks) {
    Bitmap out(width, height);
    for (const Mask& m : masks) out |= m.pixels();
    return out;
}

MaskSet::MaskSet(int width, int height) : width_(width), height_(height) {
    if (width < 0 || height < 0)
        throw std::invalid_argument("MaskSet: negative dimensions");
}

MaskSet::MaskSet(int width, int height, std::vector<Mask> masks)
    : width_(width), height_(height), masks_(std::move(masks)) {
    if (width < 0 || height < 0)
        throw std::invalid_argument("MaskSet: negative dimensions");
    std::sort(masks_.begin(), masks_.end(),
              [](const Mask& a, const Mask& b) { return a.id() < b.id(); });

    std::int64_t total = 0;
    Bitmap occupied(width_, height_);
    for (std::size_t i = 0; i < masks_.size(); ++i) {
        const Mask& m = masks_[i];
        if (m.width() != width_ || m.height() != height_)
            throw std::invalid_argument("MaskSet: member dimensions differ from set");
        if (i > 0 && masks_[i - 1].id() == m.id())
            throw std::invalid_argument("MaskSet: duplicate id " + std::to_string(m.id()));
        total += m.pixels().count();
        occupied |= m.pixels();
    }
    // Disjoint members cover exactly the sum of their areas.
    if (total != occupied.count())
        throw std::invalid_argument("MaskSet: masks overlap");
}

const Mask* MaskSet::find(MaskId id) const noexcept {
    auto it = std::lower_bound(masks_.begin(), masks_.end(), id,
                               [](const Mask& m, MaskId v) { return m.id() < v; });
    if (it == masks_.end() || it->id() != id) return nullptr;
    return &*it;
}

std::int64_t MaskSet::area_of(MaskId id) const noexcept {
    const Mask* m = find(id);
    return m ? area(*m) : 0;
}

std::vector<MaskId> MaskSet::ids() const {
    std::vector<MaskId> out;
    out.reserve(masks_.size());
    for (const Mask& m : masks_) out.push_back(m.id());
    return out;
}

MaskId MaskSet::max_id() const noexcept {
    return masks_.empty() ? 0 : masks_.back().id();
}

Bitmap MaskSet::union_all() const {
    return union_pixels(width_, height_, masks_);
}

LabelRaster::LabelRaster(int width, int height) : width(width), height(height) {
    if (width < 0 || height < 0)
        throw std::invalid_argument("LabelRaster: negative dimensions");
    labels.assign(static_cast<std::size_t>(width) * height, 0u);
}

MaskSet from_label_raster(const LabelRaster& raster) {
    if (raster.labels.size() != static_cast<std::size_t>(raster.width) * raster.height)
        throw std::invalid_argument("LabelRaster: label count does not match dimensions");

    std::map<std::uint32_t, Bitmap> regions; // ordered so output is id-sorted
    for (int y = 0; y < raster.height; ++y) {
        for (int x = 0; x < raster.width; ++x) {
            const std::uint32_t label = raster.at(x, y);
            if (label == 0) continue;
            auto [it, inserted] = regions.try_emplace(label, raster.width, raster.height);
            it->second.set(x, y);
        }
    }

    std::vector<Mask> masks;
    masks.reserve(regions.size());
    for (auto& [id, bits] : regions) masks.emplace_back(id, std::move(bits));
    return MaskSet(raster.width, raster.height, std::move(masks));
}

LabelRaster to_label_raster(const MaskSet& set) {
    LabelRaster out(set.width(), set.height());
    for (const Mask& m : set.masks()) {
        m.pixels().for_each_set([&](int x, int y) {
            std::uint32_t& cell = out.at(x, y);
            if (cell != 0)
                throw std::logic_error("to_label_raster: overlapping masks (ids " +
                                       std::to_string(cell) + ", " + std::to_string(m.id()) + ")");
            cell = m.id();
        });
    }
    return out;
}

} // namespace scd
