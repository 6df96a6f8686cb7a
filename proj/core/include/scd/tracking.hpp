#ifndef SCD_TRACKING_HPP
#define SCD_TRACKING_HPP

#include <cstdint>
#include <functional>
#include <memory>

#include "scd/mask.hpp"
#include "scd/postproc.hpp"

namespace scd {

/// Which tracker functions are active during one step. Both stay on while
/// walking along one sequence; both are switched off for the per-frame hop
/// into the other sequence.
struct TrackerGating {
    bool update_memory = true;
    bool detect_new = true;
};

/// Produces raw mask proposals for a single frame.
class Segmenter {
public:
    virtual ~Segmenter() = default;
    virtual ProposalSet segment(const LabelRaster& image) const = 0;
};

/// Propagates a mask set from one frame to the next. Output ids are a subset
/// of the input ids, plus fresh ids only when detect_new is on. With
/// update_memory off a step must leave the tracker's internal state intact.
class Tracker {
public:
    virtual ~Tracker() = default;

    virtual MaskSet step(const LabelRaster& prev_image, const LabelRaster& cur_image,
                         const MaskSet& prev_masks, const TrackerGating& gating) = 0;

    virtual std::unique_ptr<Tracker> clone() const = 0;

    /// Digest of the internal state; used to assert the gating contract.
    virtual std::uint64_t state_hash() const = 0;
};

using TrackerFactory = std::function<std::unique_ptr<Tracker>()>;

} // namespace scd

#endif // SCD_TRACKING_HPP
