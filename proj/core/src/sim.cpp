#include "scd/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "json.hpp"

namespace scd {

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t raster_digest(const LabelRaster& r) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    feed(static_cast<std::uint64_t>(r.width) << 32 | static_cast<std::uint32_t>(r.height));
    for (std::uint32_t v : r.labels) feed(v);
    return h;
}

double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) / 9007199254740992.0; // [0, 1)
}

struct PixelRun {
    std::vector<std::pair<int, int>> pixels; // (x, y), base position
    int min_x = 0, max_x = 0, min_y = 0, max_y = 0;
};

PixelRun rect_pixels(const ObjectSpec& o) {
    PixelRun run;
    run.pixels.reserve(static_cast<std::size_t>(o.w) * o.h);
    for (int y = o.y; y < o.y + o.h; ++y)
        for (int x = o.x; x < o.x + o.w; ++x) run.pixels.emplace_back(x, y);
    run.min_x = o.x;
    run.max_x = o.x + o.w - 1;
    run.min_y = o.y;
    run.max_y = o.y + o.h - 1;
    return run;
}

// Randomized connected growth from the origin; shape depends only on
// (seed, object id), never on call order.
PixelRun blob_pixels(const ObjectSpec& o, int width, int height, std::uint64_t seed) {
    if (o.blob_area < 1)
        throw std::invalid_argument("object " + std::to_string(o.id) + ": blob area must be >= 1");

    std::mt19937_64 rng(mix64(seed ^ (std::uint64_t{o.id} * 0x517cc1b727220a95ULL)));
    Bitmap taken(width, height);
    std::vector<std::pair<int, int>> frontier;
    std::vector<std::pair<int, int>> chosen;

    auto push = [&](int x, int y) {
        if (x < 0 || x >= width || y < 0 || y >= height || taken.get(x, y)) return;
        taken.set(x, y);
        frontier.emplace_back(x, y);
    };
    push(o.x, o.y);
    while (!frontier.empty() && static_cast<std::int64_t>(chosen.size()) < o.blob_area) {
        const std::size_t pick = rng() % frontier.size();
        std::swap(frontier[pick], frontier.back());
        auto [x, y] = frontier.back();
        frontier.pop_back();
        chosen.emplace_back(x, y);
        push(x + 1, y);
        push(x - 1, y);
        push(x, y + 1);
        push(x, y - 1);
    }
    if (static_cast<std::int64_t>(chosen.size()) < o.blob_area)
        throw std::invalid_argument("object " + std::to_string(o.id) +
                                    ": blob does not fit in frame");

    PixelRun run;
    run.pixels = std::move(chosen);
    run.min_x = run.max_x = run.pixels.front().first;
    run.min_y = run.max_y = run.pixels.front().second;
    for (auto [x, y] : run.pixels) {
        run.min_x = std::min(run.min_x, x);
        run.max_x = std::max(run.max_x, x);
        run.min_y = std::min(run.min_y, y);
        run.max_y = std::max(run.max_y, y);
    }
    return run;
}

struct FrameObjects {
    std::vector<std::pair<MaskId, Bitmap>> footprints; // ascending id
};

struct Rendering {
    std::vector<LabelRaster> ref;          // as the tracker sees them
    std::vector<LabelRaster> query;        // styled
    std::vector<FrameObjects> ref_objects; // per frame
    std::vector<FrameObjects> query_objects;
};

void validate_world(const SyntheticWorld& world, int frames) {
    if (world.width < 1 || world.height < 1)
        throw std::invalid_argument("world: frame dimensions must be >= 1");
    if (frames < 1)
        throw std::invalid_argument("world: frame count must be >= 1");

    std::unordered_set<MaskId> ids;
    std::unordered_set<std::uint32_t> colors;
    std::unordered_set<std::uint32_t> styled;
    const std::uint32_t styled_bg = world.style.apply(0);
    for (const ObjectSpec& o : world.objects) {
        if (o.id == 0)
            throw std::invalid_argument("world: object ids must be positive");
        if (!ids.insert(o.id).second)
            throw std::invalid_argument("world: duplicate object id " + std::to_string(o.id));
        const std::uint32_t c = o.paint_color();
        if (c == 0 || c > 65535)
            throw std::invalid_argument("object " + std::to_string(o.id) +
                                        ": color must lie in [1, 65535]");
        if (!colors.insert(c).second)
            throw std::invalid_argument("world: duplicate color " + std::to_string(c));
        const std::uint32_t sc = world.style.apply(c);
        if (sc == styled_bg || !styled.insert(sc).second)
            throw std::invalid_argument("world: style transform makes colors indistinguishable");
        if (!o.ref_schedule.empty() && static_cast<int>(o.ref_schedule.size()) < frames)
            throw std::invalid_argument("object " + std::to_string(o.id) +
                                        ": ref schedule shorter than sequence");
        if (!o.query_schedule.empty() && static_cast<int>(o.query_schedule.size()) < frames)
            throw std::invalid_argument("object " + std::to_string(o.id) +
                                        ": query schedule shorter than sequence");
    }
}

Rendering render_world(const SyntheticWorld& world, int frames, std::uint64_t seed) {
    validate_world(world, frames);

    std::vector<PixelRun> base;
    base.reserve(world.objects.size());
    for (const ObjectSpec& o : world.objects) {
        PixelRun run = o.shape == ObjectSpec::Shape::kRect
                           ? rect_pixels(o)
                           : blob_pixels(o, world.width, world.height, seed);
        if (run.min_x < 0 || run.min_y < 0 || run.max_x >= world.width ||
            run.max_y >= world.height)
            throw std::invalid_argument("object " + std::to_string(o.id) +
                                        ": geometry out of bounds");
        base.push_back(std::move(run));
    }

    Rendering out;
    out.ref.reserve(static_cast<std::size_t>(frames));
    out.query.reserve(static_cast<std::size_t>(frames));
    out.ref_objects.resize(static_cast<std::size_t>(frames));
    out.query_objects.resize(static_cast<std::size_t>(frames));

    for (int t = 1; t <= frames; ++t) {
        for (int side = 0; side < 2; ++side) {
            const bool query_side = side == 1;
            LabelRaster raster(world.width, world.height);
            FrameObjects& objs = query_side ? out.query_objects[t - 1] : out.ref_objects[t - 1];

            for (std::size_t k = 0; k < world.objects.size(); ++k) {
                const ObjectSpec& o = world.objects[k];
                if (!o.present(query_side, t)) continue;

                const PixelRun& run = base[k];
                long dx = std::lround((o.vel_x + world.pan_vx) * (t - 1));
                long dy = std::lround((o.vel_y + world.pan_vy) * (t - 1));
                // Drift stops at the frame border instead of leaving the scene.
                dx = std::clamp<long>(dx, -run.min_x, world.width - 1 - run.max_x);
                dy = std::clamp<long>(dy, -run.min_y, world.height - 1 - run.max_y);

                Bitmap fp(world.width, world.height);
                for (auto [x, y] : run.pixels) {
                    const int px = x + static_cast<int>(dx);
                    const int py = y + static_cast<int>(dy);
                    if (raster.at(px, py) != 0)
                        throw std::invalid_argument(
                            "world: objects overlap in frame " + std::to_string(t) +
                            " (" + std::to_string(raster.at(px, py)) + " vs " +
                            std::to_string(o.paint_color()) + ")");
                    raster.at(px, py) = o.paint_color();
                    fp.set(px, py);
                }
                objs.footprints.emplace_back(o.id, std::move(fp));
            }
            std::sort(objs.footprints.begin(), objs.footprints.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            if (query_side) {
                if (!world.style.is_identity())
                    for (std::uint32_t& v : raster.labels) v = world.style.apply(v);
                out.query.push_back(std::move(raster));
            } else {
                out.ref.push_back(std::move(raster));
            }
        }
    }
    return out;
}

} // namespace

std::uint32_t StyleTransform::apply(std::uint32_t value) const {
    const double styled = scale * static_cast<double>(value) + offset;
    const long rounded = std::lround(styled);
    return static_cast<std::uint32_t>(std::clamp<long>(rounded, 0, 65535));
}

bool ObjectSpec::present(bool query_side, int frame) const {
    const auto& schedule = query_side ? query_schedule : ref_schedule;
    if (!schedule.empty()) return schedule[static_cast<std::size_t>(frame) - 1] != 0;
    return query_side ? in_query : in_ref;
}

SequenceData generate(const SyntheticWorld& world, int frames, std::uint64_t seed) {
    Rendering rendering = render_world(world, frames, seed);

    std::unordered_set<MaskId> ever_ref, ever_query;
    for (int t = 0; t < frames; ++t) {
        for (const auto& [id, fp] : rendering.ref_objects[t].footprints) ever_ref.insert(id);
        for (const auto& [id, fp] : rendering.query_objects[t].footprints) ever_query.insert(id);
    }

    SequenceData data;
    data.ref = std::move(rendering.ref);
    data.query = std::move(rendering.query);
    data.gt.reserve(static_cast<std::size_t>(frames));

    for (int t = 0; t < frames; ++t) {
        Bitmap p_missing(world.width, world.height);
        Bitmap p_new(world.width, world.height);
        ChangeMap gt(world.width, world.height);
        for (const auto& [id, fp] : rendering.ref_objects[t].footprints) {
            if (!ever_query.count(id)) {
                p_missing |= fp;
                gt.missing_ids.push_back(id);
            }
        }
        for (const auto& [id, fp] : rendering.query_objects[t].footprints) {
            if (!ever_ref.count(id)) {
                p_new |= fp;
                gt.new_ids.push_back(id);
            }
        }
        gt.codes = classify_pixels(p_missing, p_new);
        data.gt.push_back(std::move(gt));
    }
    return data;
}

SyntheticWorld load_world(const std::filesystem::path& json_path) {
    std::ifstream in(json_path);
    if (!in)
        throw std::runtime_error("cannot open " + json_path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(json_path.string() + ": " + e.what());
    }

    SyntheticWorld world;
    try {
        world.width = doc.at("width").get<int>();
        world.height = doc.at("height").get<int>();
        if (doc.contains("pan")) {
            world.pan_vx = doc["pan"].value("vx", 0.0);
            world.pan_vy = doc["pan"].value("vy", 0.0);
        }
        if (doc.contains("style")) {
            world.style.scale = doc["style"].value("scale", 1.0);
            world.style.offset = doc["style"].value("offset", 0.0);
        }
        for (const auto& item : doc.value("objects", nlohmann::json::array())) {
            ObjectSpec o;
            o.id = item.at("id").get<MaskId>();
            o.color = item.value("color", 0u);
            if (item.contains("rect")) {
                const auto r = item["rect"].get<std::vector<int>>();
                if (r.size() != 4)
                    throw std::runtime_error("rect needs [x, y, w, h]");
                o.shape = ObjectSpec::Shape::kRect;
                o.x = r[0];
                o.y = r[1];
                o.w = r[2];
                o.h = r[3];
                if (o.w < 1 || o.h < 1)
                    throw std::runtime_error("rect extent must be >= 1");
            } else if (item.contains("blob")) {
                o.shape = ObjectSpec::Shape::kBlob;
                o.x = item["blob"].at("x").get<int>();
                o.y = item["blob"].at("y").get<int>();
                o.blob_area = item["blob"].at("area").get<std::int64_t>();
            } else {
                throw std::runtime_error("object needs \"rect\" or \"blob\" geometry");
            }
            if (item.contains("velocity")) {
                const auto v = item["velocity"].get<std::vector<double>>();
                if (v.size() != 2)
                    throw std::runtime_error("velocity needs [vx, vy]");
                o.vel_x = v[0];
                o.vel_y = v[1];
            }
            auto read_presence = [&](const char* key, bool& constant,
                                     std::vector<std::uint8_t>& schedule) {
                if (!item.contains(key)) return;
                const auto& p = item[key];
                if (p.is_boolean())
                    constant = p.get<bool>();
                else
                    schedule = p.get<std::vector<std::uint8_t>>();
            };
            read_presence("ref", o.in_ref, o.ref_schedule);
            read_presence("query", o.in_query, o.query_schedule);
            world.objects.push_back(std::move(o));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(json_path.string() + ": " + e.what());
    }
    return world;
}

namespace {

class OracleTracker final : public Tracker {
public:
    OracleTracker(const SyntheticWorld& world, int frames, double rho, std::uint64_t seed)
        : rho_(rho) {
        if (rho < 0.0 || rho >= 1.0)
            throw std::invalid_argument("oracle tracker: residual fraction must lie in [0, 1)");
        Rendering rendering = render_world(world, frames, seed);

        auto index = std::make_shared<std::unordered_map<std::uint64_t, FrameObjects>>();
        auto insert = [&](const LabelRaster& raster, const FrameObjects& objects) {
            const std::uint64_t key = raster_digest(raster);
            auto [it, inserted] = index->try_emplace(key, objects);
            // Two visually identical frames with different rosters would make
            // ground-truth lookup ambiguous.
            if (!inserted && it->second.footprints != objects.footprints)
                throw std::invalid_argument(
                    "oracle tracker: indistinguishable frames with different objects");
        };
        for (int t = 0; t < frames; ++t) {
            insert(rendering.ref[t], rendering.ref_objects[t]);
            insert(rendering.query[t], rendering.query_objects[t]);
        }
        index_ = std::move(index);

        auto ids = std::make_shared<std::unordered_set<MaskId>>();
        for (const ObjectSpec& o : world.objects) ids->insert(o.id);
        known_ids_ = std::move(ids);
    }

    MaskSet step(const LabelRaster& prev_image, const LabelRaster& cur_image,
                 const MaskSet& prev_masks, const TrackerGating& gating) override {
        (void)prev_image;
        auto it = index_->find(raster_digest(cur_image));
        if (it == index_->end())
            throw std::invalid_argument("oracle tracker: frame was not generated by this world");
        const FrameObjects& cur = it->second;

        std::unordered_map<MaskId, const Bitmap*> present;
        for (const auto& [id, fp] : cur.footprints) present.emplace(id, &fp);

        std::vector<Mask> out;
        Bitmap occupied(cur_image.width, cur_image.height);

        for (const Mask& prev : prev_masks.masks()) {
            if (!known_ids_->count(prev.id()))
                throw std::invalid_argument("oracle tracker: unknown id " +
                                            std::to_string(prev.id()));
            auto hit = present.find(prev.id());
            if (hit != present.end()) {
                out.emplace_back(prev.id(), *hit->second);
                occupied |= *hit->second;
            }
        }
        if (gating.detect_new) {
            for (const auto& [id, fp] : cur.footprints) {
                if (!prev_masks.contains(id)) {
                    out.emplace_back(id, fp);
                    occupied |= fp;
                }
            }
        }
        if (rho_ > 0.0) {
            for (const Mask& prev : prev_masks.masks()) {
                if (present.count(prev.id())) continue;
                // ceil(rho * area); the tiny bias keeps exact integer
                // products from rounding one pixel up.
                const std::int64_t target = static_cast<std::int64_t>(
                    std::ceil(rho_ * static_cast<double>(area(prev)) - 1e-9));
                if (target < 1) continue;
                Bitmap available = prev.pixels();
                available.subtract(occupied);
                Bitmap residual(cur_image.width, cur_image.height);
                std::int64_t taken = 0;
                available.for_each_set([&](int x, int y) {
                    if (taken < target) {
                        residual.set(x, y);
                        ++taken;
                    }
                });
                if (taken > 0) {
                    occupied |= residual;
                    out.emplace_back(prev.id(), std::move(residual));
                }
            }
        }

        MaskSet result(cur_image.width, cur_image.height, std::move(out));
        if (gating.update_memory) {
            for (const Mask& m : result.masks()) memory_[m.id()] += 1;
        }
        return result;
    }

    std::unique_ptr<Tracker> clone() const override {
        return std::make_unique<OracleTracker>(*this);
    }

    std::uint64_t state_hash() const override {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (const auto& [id, count] : memory_) {
            h = (h ^ id) * 0x100000001b3ULL;
            h = (h ^ static_cast<std::uint64_t>(count)) * 0x100000001b3ULL;
        }
        return h;
    }

private:
    double rho_;
    std::shared_ptr<const std::unordered_map<std::uint64_t, FrameObjects>> index_;
    std::shared_ptr<const std::unordered_set<MaskId>> known_ids_;
    std::map<MaskId, int> memory_; // id -> times reinforced
};

class GreedyOverlapTracker final : public Tracker {
public:
    explicit GreedyOverlapTracker(CcSegmenter segmenter) : segmenter_(std::move(segmenter)) {}

    MaskSet step(const LabelRaster& prev_image, const LabelRaster& cur_image,
                 const MaskSet& prev_masks, const TrackerGating& gating) override {
        (void)prev_image;
        const ProposalSet proposals = segmenter_.segment(cur_image);

        std::vector<const Mask*> pool;
        for (const Mask& p : proposals.proposals()) pool.push_back(&p);
        std::sort(pool.begin(), pool.end(),
                  [](const Mask* a, const Mask* b) { return a->id() < b->id(); });

        std::vector<bool> claimed(pool.size(), false);
        std::vector<Mask> out;
        MaskId next_id = prev_masks.max_id();

        for (const Mask& prev : prev_masks.masks()) {
            double best_iou = 0.0;
            std::size_t best = pool.size();
            for (std::size_t i = 0; i < pool.size(); ++i) {
                if (claimed[i]) continue;
                const double v = iou(prev, *pool[i]);
                if (v > best_iou) {
                    best_iou = v;
                    best = i;
                }
            }
            if (best != pool.size() && best_iou > 0.5) {
                claimed[best] = true;
                out.emplace_back(prev.id(), pool[best]->pixels());
            }
        }
        if (gating.detect_new) {
            for (std::size_t i = 0; i < pool.size(); ++i) {
                if (!claimed[i]) out.emplace_back(++next_id, pool[i]->pixels());
            }
        }
        return MaskSet(cur_image.width, cur_image.height, std::move(out));
    }

    std::unique_ptr<Tracker> clone() const override {
        return std::make_unique<GreedyOverlapTracker>(*this);
    }

    std::uint64_t state_hash() const override { return 0; } // carries no state

private:
    CcSegmenter segmenter_;
};

} // namespace

CcSegmenter::CcSegmenter(double noise_rate, std::uint64_t seed)
    : noise_rate_(noise_rate), seed_(seed) {
    if (noise_rate < 0.0 || noise_rate > 1.0)
        throw std::invalid_argument("CcSegmenter: noise rate must lie in [0, 1]");
}

ProposalSet CcSegmenter::segment(const LabelRaster& image) const {
    const int w = image.width;
    const int h = image.height;
    if (w < 1 || h < 1)
        throw std::invalid_argument("CcSegmenter: empty image");

    std::map<std::uint32_t, std::int64_t> histogram;
    for (std::uint32_t v : image.labels) histogram[v] += 1;
    std::uint32_t background = 0;
    std::int64_t best_count = -1;
    for (const auto& [value, count] : histogram) {
        if (count > best_count) { // map order makes ties resolve to smaller value
            best_count = count;
            background = value;
        }
    }

    struct Region {
        MaskId id;
        Bitmap pixels;
        int min_y, max_y;
    };
    std::vector<Region> regions;
    std::uint32_t max_value = 0;
    for (std::uint32_t v : image.labels) max_value = std::max(max_value, v);
    MaskId fresh = max_value; // fresh ids are allocated past every color

    Bitmap visited(w, h);
    std::unordered_set<MaskId> used_ids;
    std::vector<std::pair<int, int>> queue;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::uint32_t value = image.at(x, y);
            if (value == background || visited.get(x, y)) continue;

            Region region{0, Bitmap(w, h), y, y};
            queue.clear();
            queue.emplace_back(x, y);
            visited.set(x, y);
            while (!queue.empty()) {
                auto [cx, cy] = queue.back();
                queue.pop_back();
                region.pixels.set(cx, cy);
                region.min_y = std::min(region.min_y, cy);
                region.max_y = std::max(region.max_y, cy);
                const std::pair<int, int> neighbors[4] = {
                    {cx + 1, cy}, {cx - 1, cy}, {cx, cy + 1}, {cx, cy - 1}};
                for (auto [nx, ny] : neighbors) {
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    if (visited.get(nx, ny) || image.at(nx, ny) != value) continue;
                    visited.set(nx, ny);
                    queue.emplace_back(nx, ny);
                }
            }
            region.id = (value >= 1 && !used_ids.count(value)) ? value : ++fresh;
            used_ids.insert(region.id);
            regions.push_back(std::move(region));
        }
    }

    if (noise_rate_ > 0.0 && !regions.empty()) {
        std::mt19937_64 rng(mix64(seed_ ^ raster_digest(image)));
        std::vector<Region> noisy;
        for (Region& region : regions) {
            const double u = unit_double(rng);
            if (u < noise_rate_ / 2.0 && region.max_y > region.min_y) {
                // Split into upper/lower halves along the vertical midline.
                const int cut = (region.min_y + region.max_y) / 2;
                Region upper{region.id, Bitmap(w, h), region.min_y, cut};
                Region lower{++fresh, Bitmap(w, h), cut + 1, region.max_y};
                region.pixels.for_each_set([&](int px, int py) {
                    (py <= cut ? upper.pixels : lower.pixels).set(px, py);
                });
                if (upper.pixels.any()) noisy.push_back(std::move(upper));
                if (lower.pixels.any()) noisy.push_back(std::move(lower));
            } else if (u < noise_rate_ && !noisy.empty()) {
                noisy.back().pixels |= region.pixels; // merge into predecessor
            } else {
                noisy.push_back(std::move(region));
            }
        }
        regions = std::move(noisy);
    }

    std::vector<Mask> proposals;
    proposals.reserve(regions.size());
    for (Region& region : regions) proposals.emplace_back(region.id, std::move(region.pixels));
    return ProposalSet(w, h, std::move(proposals));
}

std::unique_ptr<Tracker> make_oracle_tracker(const SyntheticWorld& world, int frames,
                                             double residual_fraction, std::uint64_t seed) {
    return std::make_unique<OracleTracker>(world, frames, residual_fraction, seed);
}

std::unique_ptr<Tracker> make_greedy_overlap_tracker(CcSegmenter segmenter) {
    return std::make_unique<GreedyOverlapTracker>(std::move(segmenter));
}

SyntheticWorld make_random_world(std::uint64_t seed, int frames) {
    std::mt19937_64 rng(mix64(seed + 0x5eedULL));
    SyntheticWorld world;
    world.width = 64;
    world.height = 48;

    const double horizon = std::max(frames - 1, 1);
    world.pan_vx = (unit_double(rng) * 2.0 - 1.0) * 2.0 / horizon;
    world.pan_vy = (unit_double(rng) * 2.0 - 1.0) * 2.0 / horizon;

    // 16x16 placement cells with a 4 px margin keep drifting objects apart.
    std::vector<std::pair<int, int>> cells;
    for (int cy = 0; cy < 3; ++cy)
        for (int cx = 0; cx < 4; ++cx) cells.emplace_back(cx * 16, cy * 16);
    for (std::size_t i = cells.size(); i > 1; --i)
        std::swap(cells[i - 1], cells[rng() % i]);

    const int count = 4 + static_cast<int>(rng() % 6); // 4..9 objects
    MaskId next_id = 1;
    for (int k = 0; k < count && !cells.empty(); ++k) {
        auto [cx, cy] = cells.back();
        cells.pop_back();

        ObjectSpec o;
        o.id = next_id++;
        const int ow = 5 + static_cast<int>(rng() % 4);
        const int oh = 5 + static_cast<int>(rng() % 4);
        o.x = cx + 4 + static_cast<int>(rng() % std::max(1, 16 - 8 - ow + 1));
        o.y = cy + 4 + static_cast<int>(rng() % std::max(1, 16 - 8 - oh + 1));
        o.w = ow;
        o.h = oh;
        o.vel_x = (unit_double(rng) * 2.0 - 1.0) * 2.0 / horizon;
        o.vel_y = (unit_double(rng) * 2.0 - 1.0) * 2.0 / horizon;

        const double roll = unit_double(rng);
        if (roll < 0.25) {
            o.in_query = false; // a missing object
        } else if (roll < 0.5) {
            o.in_ref = false; // a new object
        } // else present on both sides

        world.objects.push_back(o);

        // Occasionally stack a query-only twin on a ref-only object so the
        // replaced class appears in the ground truth.
        if (!o.in_query && unit_double(rng) < 0.5) {
            ObjectSpec twin = o;
            twin.id = next_id++;
            twin.in_ref = false;
            twin.in_query = true;
            world.objects.push_back(twin);
        }
    }
    return world;
}

} // namespace scd
