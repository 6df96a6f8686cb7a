#ifndef SCD_PIPELINE_HPP
#define SCD_PIPELINE_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "scd/change.hpp"
#include "scd/io.hpp"
#include "scd/mask.hpp"
#include "scd/tracking.hpp"

namespace scd {

struct SequenceConfig {
    int t_max = 60;
    int detect_every = 5;
    bool adaptive_threshold = true;
    double fixed_tau = 0.05; // used when adaptive_threshold is false

    // Accepted for interface compatibility with full tracking stacks; the
    // simulated trackers have no voting or miss-count machinery behind them.
    int voting_frames = 3;
    int max_missed_detection_count = 5;

    // Proposal post-processing applied wherever the segmenter feeds the spine.
    double merge_thresh = 0.5;
    std::int64_t min_area = 100;

    void validate() const;
    double resolve_tau(int chunk_length) const;
};

/// Greedy split into full t_max chunks plus a shorter trailing chunk.
std::vector<int> chunk_sequence(int total_frames, int t_max);

/// Incremental tracking state along one sequence (the spine), able to hop
/// into the paired sequence at the current frame (a branch step). Spine steps
/// run the tracker with memory updates and new-object detection enabled and
/// fold fresh segmentations in every detect_every frames; branch steps run
/// with both disabled and leave the state untouched.
class PropagationState {
public:
    PropagationState(const Segmenter& segmenter, std::unique_ptr<Tracker> tracker,
                     SequenceConfig config);

    PropagationState(PropagationState&&) noexcept = default;
    PropagationState& operator=(PropagationState&&) noexcept = default;

    void start(const LabelRaster& first_frame);
    void advance(const LabelRaster& next_frame);
    MaskSet track_branch(const LabelRaster& branch_frame);

    const MaskSet& spine() const { return spine_; }
    int frame() const { return frame_; } // 1-based; 0 before start()

    /// Deep copy; resuming from it must replay identically.
    PropagationState checkpoint() const;

    const Tracker& tracker() const { return *tracker_; }

private:
    void merge_detections(const LabelRaster& frame_image);

    const Segmenter* segmenter_;
    std::unique_ptr<Tracker> tracker_;
    SequenceConfig config_;
    MaskSet spine_;
    LabelRaster last_frame_;
    int frame_ = 0;
};

struct DirectionResult {
    std::vector<MaskSet> spine;  // tracked set along the primary sequence, per frame
    std::vector<MaskSet> branch; // per-frame hop into the paired sequence
};

/// Walks one chunk in one direction: primary frames feed the spine, and each
/// frame is hopped into the paired (branch) sequence.
DirectionResult run_direction(std::span<const LabelRaster> primary,
                              std::span<const LabelRaster> branch,
                              const Segmenter& segmenter, Tracker& tracker,
                              const SequenceConfig& config);

/// Ids of masks in `spine_at_t` below the survival threshold against every
/// branch output of the chunk; surviving in a single frame is a veto.
std::vector<MaskId> missing_masks_at(const MaskSet& spine_at_t,
                                     std::span<const MaskSet> branch_outputs, double tau);

/// Both directions over one chunk, producing one change map per frame.
std::vector<ChangeMap> run_chunk(std::span<const LabelRaster> ref,
                                 std::span<const LabelRaster> query,
                                 const Segmenter& segmenter, const TrackerFactory& trackers,
                                 const SequenceConfig& config);

/// Full sequence: frames are read from the manifest, split into chunks, and
/// processed independently per chunk with the threshold resolved from the
/// actual chunk length.
std::vector<ChangeMap> run_sequence(const SequenceManifest& manifest,
                                    const Segmenter& segmenter, const TrackerFactory& trackers,
                                    const SequenceConfig& config);

/// Pre-tracked mask sets supplied by an external segmenter/tracker stack,
/// one entry per frame: the two spines and the two cross-sequence hops.
struct ExternalTracks {
    std::vector<MaskSet> ref_spine;      // M at frame t along the reference
    std::vector<MaskSet> query_from_ref; // reference spine hopped into query t
    std::vector<MaskSet> query_spine;
    std::vector<MaskSet> ref_from_query;

    int frames() const { return static_cast<int>(ref_spine.size()); }
    void validate() const;
};

std::vector<ChangeMap> run_sequence_external(const ExternalTracks& tracks,
                                             const SequenceConfig& config);

} // namespace scd

#endif // SCD_PIPELINE_HPP
