#ifndef SCD_POSTPROC_HPP
#define SCD_POSTPROC_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "scd/mask.hpp"

namespace scd {

/// Raw segmenter output: masks may overlap each other arbitrarily and carry
/// provisional ids (unique within the set). invalid_region marks pixels with
/// no usable content, e.g. black borders.
class ProposalSet {
public:
    ProposalSet(int width, int height, std::vector<Mask> proposals,
                std::optional<Bitmap> invalid_region = std::nullopt);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    const std::vector<Mask>& proposals() const noexcept { return proposals_; }
    const std::optional<Bitmap>& invalid_region() const noexcept { return invalid_region_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<Mask> proposals_;
    std::optional<Bitmap> invalid_region_;
};

/// Resolves overlapping proposals into a disjoint object-level MaskSet:
///   1. sort proposals by ascending area (ties by ascending id),
///   2. paint them in that order so larger masks win contested pixels,
///   3. any proposal that lost more than merge_thresh of its area is folded
///      into the largest proposal overlaying it (single pass, no cascading
///      re-evaluation),
///   4. masks lying entirely inside invalid_region are dropped,
///   5. masks whose final area is below min_area are dropped.
MaskSet postprocess(const ProposalSet& input, double merge_thresh = 0.5,
                    std::int64_t min_area = 100);

} // namespace scd

#endif // SCD_POSTPROC_HPP
