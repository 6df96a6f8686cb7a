#include "scd/change.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace scd {

double adaptive_tau(int length) {
    if (length < 1)
        throw std::invalid_argument("adaptive_tau: length must be >= 1");
    const double s = std::sqrt(static_cast<double>(length));
    // Rearranged form of 0.5 - 0.9/(s + 1); evaluates to exactly 0.05 at
    // length 1 and exactly 0.2 at length 4 in double arithmetic.
    return (5.0 * s - 4.0) / (10.0 * (s + 1.0));
}

ContentThreshold ContentThreshold::fixed(double value) {
    if (!(value >= 0.0) || value >= 0.5)
        throw std::invalid_argument("ContentThreshold: fixed value must lie in [0, 0.5)");
    return ContentThreshold{value, false, 0};
}

ContentThreshold ContentThreshold::adaptive(int length) {
    return ContentThreshold{adaptive_tau(length), true, length};
}

std::vector<MaskId> tau_difference(const MaskSet& before, const MaskSet& after, double tau) {
    std::vector<MaskId> out;
    for (const Mask& m : before.masks()) {
        const double ratio = static_cast<double>(after.area_of(m.id())) /
                             static_cast<double>(area(m));
        if (ratio < tau) out.push_back(m.id());
    }
    return out;
}

std::vector<ChangeClass> classify_pixels(const Bitmap& p_missing, const Bitmap& p_new) {
    if (p_missing.width() != p_new.width() || p_missing.height() != p_new.height())
        throw std::invalid_argument("classify_pixels: dimension mismatch");

    std::vector<ChangeClass> codes(static_cast<std::size_t>(p_missing.size()),
                                   ChangeClass::kStatic);
    const int w = p_missing.width();
    p_missing.for_each_set([&](int x, int y) {
        codes[static_cast<std::size_t>(y) * w + x] = ChangeClass::kMissing;
    });
    p_new.for_each_set([&](int x, int y) {
        auto& c = codes[static_cast<std::size_t>(y) * w + x];
        c = (c == ChangeClass::kMissing) ? ChangeClass::kReplaced : ChangeClass::kNew;
    });
    return codes;
}

ChangeMap::ChangeMap(int width, int height) : width(width), height(height) {
    if (width < 0 || height < 0)
        throw std::invalid_argument("ChangeMap: negative dimensions");
    codes.assign(static_cast<std::size_t>(width) * height, ChangeClass::kStatic);
}

namespace {

Bitmap union_of_ids(const MaskSet& set, std::span<const MaskId> ids) {
    Bitmap out(set.width(), set.height());
    for (MaskId id : ids) {
        const Mask* m = set.find(id);
        if (m) out |= m->pixels();
    }
    return out;
}

void check_id_subset(const MaskSet& tracked, const MaskSet& source, const char* which) {
    for (const Mask& m : tracked.masks()) {
        if (!source.contains(m.id()))
            throw std::invalid_argument(std::string("detect_pair: tracked set ") + which +
                                        " contains id " + std::to_string(m.id()) +
                                        " absent from its source set");
    }
}

} // namespace

ChangeMap make_change_map(const MaskSet& ref, std::span<const MaskId> missing_ids,
                          const MaskSet& query, std::span<const MaskId> new_ids) {
    if (ref.width() != query.width() || ref.height() != query.height())
        throw std::invalid_argument("make_change_map: dimension mismatch");

    ChangeMap map(ref.width(), ref.height());
    map.codes = classify_pixels(union_of_ids(ref, missing_ids), union_of_ids(query, new_ids));
    map.missing_ids.assign(missing_ids.begin(), missing_ids.end());
    map.new_ids.assign(new_ids.begin(), new_ids.end());
    std::sort(map.missing_ids.begin(), map.missing_ids.end());
    std::sort(map.new_ids.begin(), map.new_ids.end());
    return map;
}

ChangeMap detect_pair(const MaskSet& ref, const MaskSet& ref_tracked_to_query,
                      const MaskSet& query, const MaskSet& query_tracked_to_ref,
                      double tau) {
    if (ref.width() != query.width() || ref.height() != query.height() ||
        ref.width() != ref_tracked_to_query.width() ||
        ref.height() != ref_tracked_to_query.height() ||
        ref.width() != query_tracked_to_ref.width() ||
        ref.height() != query_tracked_to_ref.height())
        throw std::invalid_argument("detect_pair: all mask sets must share dimensions");
    check_id_subset(ref_tracked_to_query, ref, "ref->query");
    check_id_subset(query_tracked_to_ref, query, "query->ref");

    const std::vector<MaskId> missing = tau_difference(ref, ref_tracked_to_query, tau);
    const std::vector<MaskId> fresh = tau_difference(query, query_tracked_to_ref, tau);
    return make_change_map(ref, missing, query, fresh);
}

} // namespace scd
