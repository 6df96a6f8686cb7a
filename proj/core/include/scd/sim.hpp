#ifndef SCD_SIM_HPP
#define SCD_SIM_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "scd/change.hpp"
#include "scd/mask.hpp"
#include "scd/tracking.hpp"

namespace scd {

/// Photometric transform applied to the query sequence only: v -> scale*v + offset,
/// rounded and clamped to the 16-bit sample range.
struct StyleTransform {
    double scale = 1.0;
    double offset = 0.0;

    bool is_identity() const { return scale == 1.0 && offset == 0.0; }
    std::uint32_t apply(std::uint32_t value) const;
};

/// One scripted scene object. Rendering paints its pixels with `color`
/// (defaults to the object id, which keeps segmenter proposal ids aligned
/// with track ids). Presence can be a constant per sequence or a per-frame
/// schedule; drift is constant-velocity and clamps at the frame border.
struct ObjectSpec {
    enum class Shape { kRect, kBlob };

    MaskId id = 0;
    std::uint32_t color = 0; // 0 -> use id
    Shape shape = Shape::kRect;
    int x = 0, y = 0;            // rect corner, or blob growth origin
    int w = 1, h = 1;            // rect extent
    std::int64_t blob_area = 0;  // blob pixel count
    double vel_x = 0.0, vel_y = 0.0;
    bool in_ref = true;
    bool in_query = true;
    std::vector<std::uint8_t> ref_schedule;   // empty = constant in_ref
    std::vector<std::uint8_t> query_schedule; // empty = constant in_query

    std::uint32_t paint_color() const { return color != 0 ? color : id; }
    bool present(bool query_side, int frame) const; // frame is 1-based
};

/// Fully scripted scene: camera pan, object roster, query-side style.
/// Everything downstream (rendering, ground truth, the oracle tracker) is a
/// deterministic function of this description plus a seed for blob shapes.
struct SyntheticWorld {
    int width = 0;
    int height = 0;
    double pan_vx = 0.0;
    double pan_vy = 0.0;
    StyleTransform style;
    std::vector<ObjectSpec> objects;
};

SyntheticWorld load_world(const std::filesystem::path& json_path);

/// Rendered sequences plus exact per-frame ground truth. A pixel is coded
/// missing when its object appears somewhere in the reference sequence but
/// nowhere in the query sequence, new in the converse case, replaced where
/// such footprints coincide.
struct SequenceData {
    std::vector<LabelRaster> ref;
    std::vector<LabelRaster> query;
    std::vector<ChangeMap> gt;
};

SequenceData generate(const SyntheticWorld& world, int frames, std::uint64_t seed = 0);

/// Connected-component segmenter for synthetic frames: one proposal per
/// maximal same-color 4-connected region, background excluded. Background is
/// the most frequent pixel value (ties to the smaller value). A proposal
/// takes its region's color as provisional id where possible. noise_rate
/// randomly splits or merges proposals, reproducibly for a given seed.
class CcSegmenter final : public Segmenter {
public:
    explicit CcSegmenter(double noise_rate = 0.0, std::uint64_t seed = 0);

    ProposalSet segment(const LabelRaster& image) const override;

private:
    double noise_rate_;
    std::uint64_t seed_;
};

/// Ground-truth-backed tracker. Surviving objects propagate their exact
/// footprints; a vanished object leaves a residual fragment of
/// ceil(residual_fraction * previous area) pixels at its old location
/// (none when the fraction is 0), emulating how trackers smear masks across
/// abrupt content changes. `frames` and `seed` must match the generate()
/// call that produced the images this tracker will see.
std::unique_ptr<Tracker> make_oracle_tracker(const SyntheticWorld& world, int frames,
                                             double residual_fraction,
                                             std::uint64_t seed = 0);

/// Model-free baseline tracker: segments the current frame, matches previous
/// ids to proposals by maximum IoU (> 0.5, ties to the lower proposal id),
/// drops unmatched ids, and promotes unmatched proposals to fresh ids when
/// new-object detection is on.
std::unique_ptr<Tracker> make_greedy_overlap_tracker(CcSegmenter segmenter = CcSegmenter());

/// Deterministic random world for stress tests and benchmarks: disjoint
/// rectangles with mixed ref/query presence, optional replaced pairs, and
/// drift bounded so nothing collides or leaves the frame within `frames`.
SyntheticWorld make_random_world(std::uint64_t seed, int frames);

} // namespace scd

#endif // SCD_SIM_HPP
