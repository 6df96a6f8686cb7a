#include "scd/postproc.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace scd {

ProposalSet::ProposalSet(int width, int height, std::vector<Mask> proposals,
                         std::optional<Bitmap> invalid_region)
    : width_(width), height_(height), proposals_(std::move(proposals)),
      invalid_region_(std::move(invalid_region)) {
    if (width < 0 || height < 0)
        throw std::invalid_argument("ProposalSet: negative dimensions");
    std::unordered_set<MaskId> seen;
    for (const Mask& p : proposals_) {
        if (p.width() != width_ || p.height() != height_)
            throw std::invalid_argument("ProposalSet: proposal dimensions differ from frame");
        if (!seen.insert(p.id()).second)
            throw std::invalid_argument("ProposalSet: duplicate provisional id " +
                                        std::to_string(p.id()));
    }
    if (invalid_region_ &&
        (invalid_region_->width() != width_ || invalid_region_->height() != height_))
        throw std::invalid_argument("ProposalSet: invalid_region dimensions differ from frame");
}

MaskSet postprocess(const ProposalSet& input, double merge_thresh, std::int64_t min_area) {
    const int w = input.width();
    const int h = input.height();

    // Ascending paint order; later (larger) proposals overwrite earlier ones.
    std::vector<const Mask*> order;
    order.reserve(input.proposals().size());
    for (const Mask& p : input.proposals()) order.push_back(&p);
    std::sort(order.begin(), order.end(), [](const Mask* a, const Mask* b) {
        const std::int64_t aa = area(*a), ab = area(*b);
        return aa != ab ? aa < ab : a->id() < b->id();
    });

    LabelRaster canvas(w, h);
    for (const Mask* p : order) {
        p->pixels().for_each_set([&](int x, int y) { canvas.at(x, y) = p->id(); });
    }

    std::unordered_map<MaskId, std::int64_t> original_area;
    for (const Mask* p : order) original_area.emplace(p->id(), area(*p));

    // Ratio tests and overlay targets are fixed by the paint result before
    // any relabeling happens.
    struct MergePlan { MaskId from; MaskId into; };
    std::vector<MergePlan> merges;
    for (const Mask* p : order) {
        std::int64_t survived = 0;
        std::map<MaskId, std::int64_t> coverers;
        p->pixels().for_each_set([&](int x, int y) {
            const MaskId owner = canvas.at(x, y);
            if (owner == p->id())
                ++survived;
            else
                coverers[owner] += 1;
        });
        const double lost_fraction =
            static_cast<double>(area(*p) - survived) / static_cast<double>(area(*p));
        if (lost_fraction > merge_thresh && !coverers.empty()) {
            MaskId target = 0;
            std::int64_t target_area = -1;
            for (const auto& [id, n] : coverers) {
                const std::int64_t oa = original_area.at(id);
                if (oa > target_area || (oa == target_area && id > target)) {
                    target = id;
                    target_area = oa;
                }
            }
            merges.push_back({p->id(), target});
        }
    }

    std::unordered_map<MaskId, MaskId> remap;
    for (const MergePlan& m : merges) remap[m.from] = m.into;
    if (!remap.empty()) {
        // A fold target may itself have been folded; follow the chain. Chains
        // terminate because targets are strictly larger in paint order.
        auto resolve = [&remap](MaskId id) {
            auto it = remap.find(id);
            while (it != remap.end()) {
                id = it->second;
                it = remap.find(id);
            }
            return id;
        };
        for (std::uint32_t& cell : canvas.labels) {
            if (cell != 0) cell = resolve(cell);
        }
    }

    MaskSet assembled = from_label_raster(canvas);

    std::vector<Mask> kept;
    for (const Mask& m : assembled.masks()) {
        if (input.invalid_region() && m.pixels().is_subset_of(*input.invalid_region()))
            continue; // carries no usable content
        if (area(m) < min_area) continue;
        kept.push_back(m);
    }
    return MaskSet(w, h, std::move(kept));
}

} // namespace scd
