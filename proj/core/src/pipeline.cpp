#include "scd/pipeline.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "scd/postproc.hpp"

namespace scd {

void SequenceConfig::validate() const {
    if (t_max < 1)
        throw std::invalid_argument("config: t_max must be >= 1");
    if (detect_every < 1)
        throw std::invalid_argument("config: detect_every must be >= 1");
    if (!adaptive_threshold && (!(fixed_tau >= 0.0) || fixed_tau >= 0.5))
        throw std::invalid_argument("config: fixed tau must lie in [0, 0.5)");
    if (min_area < 1)
        throw std::invalid_argument("config: min_area must be >= 1");
    if (!(merge_thresh >= 0.0) || merge_thresh > 1.0)
        throw std::invalid_argument("config: merge_thresh must lie in [0, 1]");
}

double SequenceConfig::resolve_tau(int chunk_length) const {
    return adaptive_threshold ? adaptive_tau(chunk_length) : fixed_tau;
}

std::vector<int> chunk_sequence(int total_frames, int t_max) {
    if (total_frames < 1)
        throw std::invalid_argument("chunk_sequence: need at least one frame");
    if (t_max < 1)
        throw std::invalid_argument("chunk_sequence: t_max must be >= 1");
    std::vector<int> chunks(static_cast<std::size_t>(total_frames / t_max), t_max);
    if (total_frames % t_max != 0) chunks.push_back(total_frames % t_max);
    return chunks;
}

PropagationState::PropagationState(const Segmenter& segmenter, std::unique_ptr<Tracker> tracker,
                                   SequenceConfig config)
    : segmenter_(&segmenter), tracker_(std::move(tracker)), config_(std::move(config)) {
    if (!tracker_)
        throw std::invalid_argument("PropagationState: null tracker");
    config_.validate();
}

void PropagationState::start(const LabelRaster& first_frame) {
    spine_ = postprocess(segmenter_->segment(first_frame), config_.merge_thresh,
                         config_.min_area);
    last_frame_ = first_frame;
    frame_ = 1;
}

void PropagationState::advance(const LabelRaster& next_frame) {
    if (frame_ < 1)
        throw std::logic_error("PropagationState: advance() before start()");
    frame_ += 1;
    spine_ = tracker_->step(last_frame_, next_frame, spine_,
                            TrackerGating{.update_memory = true, .detect_new = true});
    if (frame_ % config_.detect_every == 0) merge_detections(next_frame);
    last_frame_ = next_frame;
}

MaskSet PropagationState::track_branch(const LabelRaster& branch_frame) {
    if (frame_ < 1)
        throw std::logic_error("PropagationState: track_branch() before start()");
    return tracker_->step(last_frame_, branch_frame, spine_,
                          TrackerGating{.update_memory = false, .detect_new = false});
}

PropagationState PropagationState::checkpoint() const {
    PropagationState copy(*segmenter_, tracker_->clone(), config_);
    copy.spine_ = spine_;
    copy.last_frame_ = last_frame_;
    copy.frame_ = frame_;
    return copy;
}

void PropagationState::merge_detections(const LabelRaster& frame_image) {
    const MaskSet fresh = postprocess(segmenter_->segment(frame_image), config_.merge_thresh,
                                      config_.min_area);
    if (fresh.empty()) return;

    Bitmap occupied = spine_.union_all();
    std::vector<Mask> merged = spine_.masks();
    std::unordered_set<MaskId> used;
    MaskId next = spine_.max_id();
    for (const Mask& m : merged) used.insert(m.id());

    for (const Mask& candidate : fresh.masks()) {
        double best = 0.0;
        for (const Mask& existing : spine_.masks())
            best = std::max(best, iou(candidate, existing));
        if (best > 0.5) continue; // already tracked under a spine id

        Bitmap free = candidate.pixels();
        free.subtract(occupied);
        if (!free.any()) continue;

        MaskId id = candidate.id();
        if (used.count(id)) id = ++next;
        next = std::max(next, id);
        used.insert(id);
        occupied |= free;
        merged.emplace_back(id, std::move(free));
    }
    spine_ = MaskSet(spine_.width(), spine_.height(), std::move(merged));
}

DirectionResult run_direction(std::span<const LabelRaster> primary,
                              std::span<const LabelRaster> branch,
                              const Segmenter& segmenter, Tracker& tracker,
                              const SequenceConfig& config) {
    if (primary.empty() || primary.size() != branch.size())
        throw std::invalid_argument("run_direction: sequences must be nonempty and equal-length");

    // The state borrows the caller's tracker for the duration of the walk.
    struct Borrowed final : Tracker {
        Tracker* inner;
        explicit Borrowed(Tracker* t) : inner(t) {}
        MaskSet step(const LabelRaster& a, const LabelRaster& b, const MaskSet& m,
                     const TrackerGating& g) override {
            return inner->step(a, b, m, g);
        }
        std::unique_ptr<Tracker> clone() const override { return inner->clone(); }
        std::uint64_t state_hash() const override { return inner->state_hash(); }
    };

    PropagationState state(segmenter, std::make_unique<Borrowed>(&tracker), config);
    DirectionResult result;
    result.spine.reserve(primary.size());
    result.branch.reserve(primary.size());

    for (std::size_t i = 0; i < primary.size(); ++i) {
        const int frame = static_cast<int>(i) + 1;
        try {
            if (i == 0)
                state.start(primary[0]);
            else
                state.advance(primary[i]);
            result.spine.push_back(state.spine());
            result.branch.push_back(state.track_branch(branch[i]));
        } catch (const std::exception& e) {
            throw std::runtime_error("frame " + std::to_string(frame) + ": " + e.what());
        }
    }
    return result;
}

std::vector<MaskId> missing_masks_at(const MaskSet& spine_at_t,
                                     std::span<const MaskSet> branch_outputs, double tau) {
    if (branch_outputs.empty())
        throw std::invalid_argument("missing_masks_at: no branch outputs");

    std::vector<MaskId> result = tau_difference(spine_at_t, branch_outputs[0], tau);
    for (std::size_t k = 1; k < branch_outputs.size() && !result.empty(); ++k) {
        const std::vector<MaskId> next = tau_difference(spine_at_t, branch_outputs[k], tau);
        std::vector<MaskId> kept;
        std::set_intersection(result.begin(), result.end(), next.begin(), next.end(),
                              std::back_inserter(kept));
        result = std::move(kept);
    }
    return result;
}

std::vector<ChangeMap> run_chunk(std::span<const LabelRaster> ref,
                                 std::span<const LabelRaster> query,
                                 const Segmenter& segmenter, const TrackerFactory& trackers,
                                 const SequenceConfig& config) {
    config.validate();
    const double tau = config.resolve_tau(static_cast<int>(ref.size()));

    auto missing_tracker = trackers();
    const DirectionResult missing_dir =
        run_direction(ref, query, segmenter, *missing_tracker, config);

    auto new_tracker = trackers();
    const DirectionResult new_dir = run_direction(query, ref, segmenter, *new_tracker, config);

    std::vector<ChangeMap> maps;
    maps.reserve(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const std::vector<MaskId> missing =
            missing_masks_at(missing_dir.spine[i], missing_dir.branch, tau);
        const std::vector<MaskId> fresh =
            missing_masks_at(new_dir.spine[i], new_dir.branch, tau);
        maps.push_back(make_change_map(missing_dir.spine[i], missing, new_dir.spine[i], fresh));
    }
    return maps;
}

std::vector<ChangeMap> run_sequence(const SequenceManifest& manifest,
                                    const Segmenter& segmenter, const TrackerFactory& trackers,
                                    const SequenceConfig& config) {
    manifest.validate();
    config.validate();

    std::vector<ChangeMap> maps;
    maps.reserve(static_cast<std::size_t>(manifest.frames()));

    int first = 1;
    for (int length : chunk_sequence(manifest.frames(), config.t_max)) {
        std::vector<LabelRaster> ref, query;
        ref.reserve(static_cast<std::size_t>(length));
        query.reserve(static_cast<std::size_t>(length));
        for (int t = first; t < first + length; ++t) {
            try {
                ref.push_back(read_label_raster(manifest.ref_path(t)));
                query.push_back(read_label_raster(manifest.query_path(t)));
            } catch (const std::exception& e) {
                throw std::runtime_error("frame " + std::to_string(t) + ": " + e.what());
            }
            if (ref.back().width != ref.front().width ||
                ref.back().height != ref.front().height ||
                query.back().width != ref.front().width ||
                query.back().height != ref.front().height)
                throw std::runtime_error("frame " + std::to_string(t) +
                                         ": dimensions differ from first frame");
        }

        std::vector<ChangeMap> chunk_maps;
        try {
            chunk_maps = run_chunk(ref, query, segmenter, trackers, config);
        } catch (const std::exception& e) {
            throw std::runtime_error("chunk starting at frame " + std::to_string(first) + ": " +
                                     e.what());
        }
        for (ChangeMap& m : chunk_maps) maps.push_back(std::move(m));
        first += length;
    }
    return maps;
}

void ExternalTracks::validate() const {
    if (ref_spine.empty())
        throw std::invalid_argument("external tracks: no frames");
    if (query_from_ref.size() != ref_spine.size() || query_spine.size() != ref_spine.size() ||
        ref_from_query.size() != ref_spine.size())
        throw std::invalid_argument("external tracks: per-frame set counts differ");
}

std::vector<ChangeMap> run_sequence_external(const ExternalTracks& tracks,
                                             const SequenceConfig& config) {
    tracks.validate();
    config.validate();

    std::vector<ChangeMap> maps;
    maps.reserve(tracks.ref_spine.size());

    int first = 0; // 0-based chunk start
    for (int length : chunk_sequence(tracks.frames(), config.t_max)) {
        const double tau = config.resolve_tau(length);
        const std::span<const MaskSet> q_branch(&tracks.query_from_ref[first],
                                                static_cast<std::size_t>(length));
        const std::span<const MaskSet> r_branch(&tracks.ref_from_query[first],
                                                static_cast<std::size_t>(length));
        for (int i = first; i < first + length; ++i) {
            const std::vector<MaskId> missing =
                missing_masks_at(tracks.ref_spine[i], q_branch, tau);
            const std::vector<MaskId> fresh =
                missing_masks_at(tracks.query_spine[i], r_branch, tau);
            maps.push_back(
                make_change_map(tracks.ref_spine[i], missing, tracks.query_spine[i], fresh));
        }
        first += length;
    }
    return maps;
}

} // namespace scd
