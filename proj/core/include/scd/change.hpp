#ifndef SCD_CHANGE_HPP
#define SCD_CHANGE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "scd/mask.hpp"

namespace scd {

/// Per-pixel change classes. The numeric codes are the on-disk contract and
/// must never be renumbered.
enum class ChangeClass : std::uint8_t {
    kStatic = 0,
    kNew = 1,
    kMissing = 2,
    kReplaced = 3,
};

inline constexpr int kNumChangeClasses = 4;

/// Survival-ratio threshold for the size comparison before/after tracking.
/// tau = 0.5 - 0.9 / (sqrt(length) + 1), rising from 0.05 at a single frame
/// toward (but never reaching) 0.5 for long clips.
double adaptive_tau(int length);

struct ContentThreshold {
    double value = 0.05;
    bool is_adaptive = false;
    int length = 0; // clip length the adaptive value was resolved for

    static ContentThreshold fixed(double value);
    static ContentThreshold adaptive(int length);
};

/// Ids of masks in `before` whose area ratio after tracking falls below tau:
/// { m in before : area(after[id]) / area(m) < tau }, with area 0 for ids the
/// tracked set lost entirely. Ids present only in `after` are ignored.
std::vector<MaskId> tau_difference(const MaskSet& before, const MaskSet& after, double tau);

/// Pixel classification from the two change unions: both set -> replaced,
/// only missing -> missing, only new -> new, neither -> static.
std::vector<ChangeClass> classify_pixels(const Bitmap& p_missing, const Bitmap& p_new);

/// Result of pair-level detection: the class raster plus the contributing
/// mask ids on each side.
struct ChangeMap {
    int width = 0;
    int height = 0;
    std::vector<ChangeClass> codes; // row-major, width*height entries
    std::vector<MaskId> missing_ids;
    std::vector<MaskId> new_ids;

    ChangeMap() = default;
    ChangeMap(int width, int height);

    ChangeClass at(int x, int y) const {
        return codes[static_cast<std::size_t>(y) * width + x];
    }

    friend bool operator==(const ChangeMap&, const ChangeMap&) = default;
};

/// Pair-level scene change detection from four mask sets: the segmented
/// reference and query sets plus the two cross-tracked sets. Tracked ids
/// must be a subset of the corresponding source set's ids.
ChangeMap detect_pair(const MaskSet& ref, const MaskSet& ref_tracked_to_query,
                      const MaskSet& query, const MaskSet& query_tracked_to_ref,
                      double tau);

/// Builds the change map for one frame from already-selected id subsets.
ChangeMap make_change_map(const MaskSet& ref, std::span<const MaskId> missing_ids,
                          const MaskSet& query, std::span<const MaskId> new_ids);

} // namespace scd

#endif // SCD_CHANGE_HPP
