#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "scd/change.hpp"
#include "scd/eval.hpp"
#include "scd/io.hpp"
#include "scd/pipeline.hpp"
#include "scd/postproc.hpp"
#include "scd/sbl.hpp"
#include "scd/sim.hpp"

namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// JSON config files: a flat object of option names, with nested objects for
// subcommand sections, e.g. {"detect-seq": {"t-max": 30}}.
// ---------------------------------------------------------------------------

class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        return render(app, default_also).dump(2) + "\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(input);
        } catch (const nlohmann::json::parse_error& e) {
            throw CLI::FileError(std::string("config: ") + e.what());
        }
        if (!doc.is_object())
            throw CLI::FileError("config: top level must be a JSON object");
        std::vector<CLI::ConfigItem> items;
        flatten({}, doc, items);
        return items;
    }

private:
    static std::string scalar(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    static void flatten(std::vector<std::string> parents, const nlohmann::json& node,
                        std::vector<CLI::ConfigItem>& items) {
        for (const auto& [key, value] : node.items()) {
            if (value.is_object()) {
                std::vector<std::string> deeper = parents;
                deeper.push_back(key);
                flatten(std::move(deeper), value, items);
            } else {
                CLI::ConfigItem item;
                item.parents = parents;
                item.name = key;
                if (value.is_array())
                    for (const auto& entry : value) item.inputs.push_back(scalar(entry));
                else
                    item.inputs.push_back(scalar(value));
                items.push_back(std::move(item));
            }
        }
    }

    static nlohmann::ordered_json render(const CLI::App* app, bool default_also) {
        nlohmann::ordered_json out = nlohmann::ordered_json::object();
        for (const CLI::Option* opt : app->get_options({})) {
            if (!opt->get_configurable()) continue;
            const std::string name = opt->get_single_name();
            if (name.empty() || name == "config") continue;
            if (opt->count() > 0) {
                if (opt->results().size() == 1)
                    out[name] = opt->results().front();
                else
                    out[name] = opt->results();
            } else if (default_also) {
                out[name] = opt->get_default_str();
            }
        }
        for (const CLI::App* sub : app->get_subcommands([](const CLI::App*) { return true; })) {
            nlohmann::ordered_json section = render(sub, default_also);
            if (!section.empty()) out[sub->get_name()] = section;
        }
        return out;
    }
};

std::string frame_name(int frame) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06d.pgm", frame);
    return buf;
}

std::vector<fs::path> list_pgm(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw std::runtime_error(dir.string() + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".pgm")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

// ---------------------------------------------------------------------------
// Shared tracker/segmenter wiring
// ---------------------------------------------------------------------------

struct TrackerOptions {
    std::string kind = "greedy"; // greedy | oracle | external-files
    std::string world_path;
    double rho = 0.0;
    int frames = 1;       // rendering horizon for the oracle
    std::uint64_t seed = 0;
    double noise_rate = 0.0;
    std::string tracks_dir;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--tracker", kind, "Tracker: greedy, oracle or external-files")
            ->check(CLI::IsMember({"greedy", "oracle", "external-files"}))
            ->capture_default_str();
        cmd->add_option("--world", world_path,
                        "World description (required by the oracle tracker)");
        cmd->add_option("--rho", rho, "Oracle residual fraction in [0, 1)")
            ->capture_default_str();
        cmd->add_option("--frames", frames, "Oracle rendering horizon (frames)")
            ->capture_default_str();
        cmd->add_option("--seed", seed, "Seed for segmenter noise and world rendering")
            ->capture_default_str();
        cmd->add_option("--noise-rate", noise_rate, "Segmenter split/merge noise rate")
            ->capture_default_str();
        cmd->add_option("--tracks", tracks_dir,
                        "Directory of pre-tracked mask rasters (external-files tracker)");
    }

    scd::TrackerFactory make_factory() const {
        if (kind == "oracle") {
            if (world_path.empty())
                throw std::runtime_error("the oracle tracker needs --world");
            auto world = std::make_shared<scd::SyntheticWorld>(scd::load_world(world_path));
            const int horizon = frames;
            const double fraction = rho;
            const std::uint64_t world_seed = seed;
            return [world, horizon, fraction, world_seed] {
                return scd::make_oracle_tracker(*world, horizon, fraction, world_seed);
            };
        }
        const scd::CcSegmenter segmenter(noise_rate, seed);
        return [segmenter] { return scd::make_greedy_overlap_tracker(segmenter); };
    }
};

// Pre-tracked mask sets are read as one 16-bit PGM per frame and role:
//   ref_spine_%06d.pgm       tracked set along the reference at frame t
//   query_from_ref_%06d.pgm  that set hopped into query frame t
//   query_spine_%06d.pgm     tracked set along the query at frame t
//   ref_from_query_%06d.pgm  that set hopped into reference frame t
scd::ExternalTracks load_external_tracks(const fs::path& dir, int frames) {
    auto load = [&](const char* role, int t) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%s_%06d.pgm", role, t);
        return scd::from_label_raster(scd::read_label_raster(dir / buf));
    };
    scd::ExternalTracks tracks;
    for (int t = 1; t <= frames; ++t) {
        tracks.ref_spine.push_back(load("ref_spine", t));
        tracks.query_from_ref.push_back(load("query_from_ref", t));
        tracks.query_spine.push_back(load("query_spine", t));
        tracks.ref_from_query.push_back(load("ref_from_query", t));
    }
    return tracks;
}

void apply_tau_flag(scd::SequenceConfig& config, const std::string& tau) {
    if (tau == "adaptive") {
        config.adaptive_threshold = true;
        return;
    }
    config.adaptive_threshold = false;
    try {
        config.fixed_tau = std::stod(tau);
    } catch (const std::exception&) {
        throw std::runtime_error("--tau expects a number or \"adaptive\"");
    }
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthArgs {
    std::string world_path;
    int frames = 0;
    std::uint64_t seed = 0;
    std::string out_dir;
};

void run_synth(const SynthArgs& args) {
    const scd::SyntheticWorld world = scd::load_world(args.world_path);
    const scd::SequenceData data = scd::generate(world, args.frames, args.seed);

    const fs::path out(args.out_dir);
    fs::create_directories(out / "ref");
    fs::create_directories(out / "query");
    fs::create_directories(out / "gt");

    scd::SequenceManifest manifest;
    for (int t = 1; t <= args.frames; ++t) {
        const std::string name = frame_name(t);
        scd::write_label_raster(data.ref[t - 1], out / "ref" / name);
        scd::write_label_raster(data.query[t - 1], out / "query" / name);
        scd::write_change_map(data.gt[t - 1], out / "gt" / name);
        manifest.ref.push_back("ref/" + name);
        manifest.query.push_back("query/" + name);
        manifest.gt.push_back("gt/" + name);
    }
    scd::write_manifest(manifest, out / "manifest.json");
    std::cout << "wrote " << args.frames << " frame pairs to " << out.string() << "\n";
}

// ---------------------------------------------------------------------------
// detect (single pair)
// ---------------------------------------------------------------------------

struct DetectArgs {
    std::string ref_path;
    std::string query_path;
    std::string tau = "adaptive";
    std::string out_path;
    double merge_thresh = 0.5;
    std::int64_t min_area = 100;
    TrackerOptions tracker;
};

void run_detect(const DetectArgs& args) {
    scd::SequenceConfig config;
    config.merge_thresh = args.merge_thresh;
    config.min_area = args.min_area;
    apply_tau_flag(config, args.tau);

    scd::ChangeMap map;
    if (args.tracker.kind == "external-files") {
        if (args.tracker.tracks_dir.empty())
            throw std::runtime_error("external-files tracking needs --tracks");
        const scd::ExternalTracks tracks = load_external_tracks(args.tracker.tracks_dir, 1);
        map = scd::detect_pair(tracks.ref_spine[0], tracks.query_from_ref[0],
                               tracks.query_spine[0], tracks.ref_from_query[0],
                               config.resolve_tau(1));
    } else {
        const std::vector<scd::LabelRaster> ref{scd::read_label_raster(args.ref_path)};
        const std::vector<scd::LabelRaster> query{scd::read_label_raster(args.query_path)};
        const scd::CcSegmenter segmenter(args.tracker.noise_rate, args.tracker.seed);
        map = scd::run_chunk(ref, query, segmenter, args.tracker.make_factory(), config)[0];
    }
    scd::write_change_map(map, args.out_path);
}

// ---------------------------------------------------------------------------
// detect-seq
// ---------------------------------------------------------------------------

struct DetectSeqArgs {
    std::string manifest_path;
    std::string out_dir;
    std::string tau = "adaptive";
    int t_max = 60;
    int detect_every = 5;
    double merge_thresh = 0.5;
    std::int64_t min_area = 100;
    TrackerOptions tracker;
};

void run_detect_seq(const DetectSeqArgs& args) {
    scd::SequenceConfig config;
    config.t_max = args.t_max;
    config.detect_every = args.detect_every;
    config.merge_thresh = args.merge_thresh;
    config.min_area = args.min_area;
    apply_tau_flag(config, args.tau);

    const scd::SequenceManifest manifest = scd::read_manifest(args.manifest_path);

    std::vector<scd::ChangeMap> maps;
    if (args.tracker.kind == "external-files") {
        if (args.tracker.tracks_dir.empty())
            throw std::runtime_error("external-files tracking needs --tracks");
        maps = scd::run_sequence_external(
            load_external_tracks(args.tracker.tracks_dir, manifest.frames()), config);
    } else {
        const scd::CcSegmenter segmenter(args.tracker.noise_rate, args.tracker.seed);
        maps = scd::run_sequence(manifest, segmenter, args.tracker.make_factory(), config);
    }

    fs::create_directories(args.out_dir);
    for (std::size_t i = 0; i < maps.size(); ++i)
        scd::write_change_map(maps[i], fs::path(args.out_dir) / frame_name(static_cast<int>(i) + 1));
    std::cout << "wrote " << maps.size() << " change maps to " << args.out_dir << "\n";
}

// ---------------------------------------------------------------------------
// postproc
// ---------------------------------------------------------------------------

struct PostprocArgs {
    std::string proposals_dir;
    std::string out_path;
    double merge_thresh = 0.5;
    std::int64_t min_area = 100;
    std::string invalid_region_path;
};

void run_postproc(const PostprocArgs& args) {
    // Every distinct nonzero label in every raster becomes one proposal;
    // provisional ids are assigned in (file, label) order.
    std::vector<scd::Mask> proposals;
    int width = 0, height = 0;
    scd::MaskId next_id = 0;
    for (const fs::path& file : list_pgm(args.proposals_dir)) {
        const scd::LabelRaster raster = scd::read_label_raster(file);
        if (width == 0) {
            width = raster.width;
            height = raster.height;
        } else if (raster.width != width || raster.height != height) {
            throw std::runtime_error(file.string() + ": dimensions differ from first raster");
        }
        const scd::MaskSet decoded = scd::from_label_raster(raster);
        for (const scd::Mask& m : decoded.masks())
            proposals.emplace_back(++next_id, m.pixels());
    }
    if (width == 0)
        throw std::runtime_error("no .pgm proposals found in " + args.proposals_dir);

    std::optional<scd::Bitmap> invalid;
    if (!args.invalid_region_path.empty()) {
        const scd::LabelRaster raster = scd::read_label_raster(args.invalid_region_path);
        if (raster.width != width || raster.height != height)
            throw std::runtime_error("invalid-region dimensions differ from proposals");
        scd::Bitmap bits(width, height);
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                if (raster.at(x, y) != 0) bits.set(x, y);
        invalid = std::move(bits);
    }

    const scd::ProposalSet input(width, height, std::move(proposals), std::move(invalid));
    const scd::MaskSet result = scd::postprocess(input, args.merge_thresh, args.min_area);
    scd::write_label_raster(scd::to_label_raster(result), args.out_path);
    std::cout << "kept " << result.size() << " masks\n";
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
    std::string pred_dir;
    std::string gt_dir;
    std::string report_path;
    bool binary = false;
    bool per_frame = false;
    bool zero_empty = false;
};

void run_eval(const EvalArgs& args) {
    const std::vector<fs::path> pred_files = list_pgm(args.pred_dir);
    const std::vector<fs::path> gt_files = list_pgm(args.gt_dir);
    if (pred_files.empty())
        throw std::runtime_error("no predictions in " + args.pred_dir);
    if (pred_files.size() != gt_files.size())
        throw std::runtime_error("prediction/ground-truth frame counts differ (" +
                                 std::to_string(pred_files.size()) + " vs " +
                                 std::to_string(gt_files.size()) + ")");

    const std::vector<std::string> class_names =
        args.binary ? std::vector<std::string>{"unchanged", "changed"}
                    : std::vector<std::string>{"static", "new", "missing", "replaced"};

    scd::ConfusionMatrix total(args.binary ? 2 : scd::kNumChangeClasses);
    double miou_sum = 0.0, f1_sum = 0.0;
    for (std::size_t i = 0; i < pred_files.size(); ++i) {
        const scd::ChangeMap pred = scd::read_change_map(pred_files[i]);
        const scd::ChangeMap gt = scd::read_change_map(gt_files[i]);
        scd::ConfusionMatrix cm = scd::confusion(pred, gt);
        if (args.binary) cm = scd::collapse_binary(cm);
        if (args.per_frame) {
            miou_sum += scd::miou(cm, args.zero_empty).mean;
            f1_sum += scd::f1_binary(cm);
        }
        total.accumulate(cm);
    }

    const scd::IouReport report = scd::miou(total, args.zero_empty);
    const double mean_iou =
        args.per_frame ? miou_sum / static_cast<double>(pred_files.size()) : report.mean;
    const double f1 =
        args.per_frame ? f1_sum / static_cast<double>(pred_files.size()) : scd::f1_binary(total);

    nlohmann::ordered_json doc;
    nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < class_names.size(); ++k) {
        if (report.per_class[k])
            per_class[class_names[k]] = *report.per_class[k];
        else
            per_class[class_names[k]] = nullptr;
    }
    doc["per_class_iou"] = per_class;
    doc["miou"] = mean_iou;
    doc["f1"] = f1;
    nlohmann::ordered_json counts;
    counts["frames"] = pred_files.size();
    counts["pixels"] = total.total();
    std::vector<std::vector<std::uint64_t>> cm_rows;
    for (int g = 0; g < total.num_classes(); ++g) {
        std::vector<std::uint64_t> row;
        for (int p = 0; p < total.num_classes(); ++p) row.push_back(total.at(g, p));
        cm_rows.push_back(std::move(row));
    }
    counts["confusion"] = cm_rows;
    doc["pixel_counts"] = counts;

    const std::string text = doc.dump(2) + "\n";
    if (!args.report_path.empty()) {
        std::ofstream out(args.report_path, std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + args.report_path);
        out << text;
    }
    std::cout << text;
}

// ---------------------------------------------------------------------------
// sbl-demo
// ---------------------------------------------------------------------------

struct SblDemoArgs {
    int layers = 4;
    std::string out_path;
    double style_scale = 1.4;
    double style_offset = 20.0;
};

scd::LabelRaster sbl_demo_image() {
    // Gradient background with a few rectangles; enough structure that every
    // channel sees nontrivial statistics.
    scd::LabelRaster img(32, 32);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x) img.at(x, y) = static_cast<std::uint32_t>(2 * x + 3 * y);
    for (int y = 4; y < 12; ++y)
        for (int x = 5; x < 15; ++x) img.at(x, y) = 140;
    for (int y = 18; y < 28; ++y)
        for (int x = 16; x < 27; ++x) img.at(x, y) = 40;
    return img;
}

void run_sbl_demo(const SblDemoArgs& args) {
    const scd::LabelRaster reference = sbl_demo_image();
    scd::LabelRaster styled = reference;
    const scd::StyleTransform style{args.style_scale, args.style_offset};
    for (std::uint32_t& v : styled.labels) v = style.apply(v);

    const scd::ToyEncoder encoder(args.layers);
    const scd::EncodeResult recorded = encoder.encode_record(reference);

    std::string csv = "sbl_count,final_layer_distance\n";
    for (int k = 0; k <= args.layers; ++k) {
        const std::vector<scd::FeatureTensor> bridged =
            encoder.encode_apply(styled, recorded.stats, k);
        const double d = scd::feature_distance(recorded.features.back(), bridged.back());
        char line[64];
        std::snprintf(line, sizeof line, "%d,%.9g\n", k, d);
        csv += line;
    }

    if (!args.out_path.empty()) {
        std::ofstream out(args.out_path, std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + args.out_path);
        out << csv;
    }
    std::cout << csv;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Training-free scene change detection over object-mask streams"};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config file mirroring option names");

    SynthArgs synth;
    CLI::App* synth_cmd =
        app.add_subcommand("synth", "Render a synthetic sequence pair with ground truth");
    synth_cmd->configurable(true);
    synth_cmd->add_option("--world", synth.world_path, "World description (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    synth_cmd->add_option("--frames", synth.frames, "Frames per sequence")
        ->required()
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--seed", synth.seed, "Blob-shape seed")->capture_default_str();
    synth_cmd->add_option("--out", synth.out_dir, "Output directory")->required();
    synth_cmd->callback([&] { run_synth(synth); });

    DetectArgs detect;
    CLI::App* detect_cmd =
        app.add_subcommand("detect", "Change detection on one reference/query image pair");
    detect_cmd->configurable(true);
    detect_cmd->add_option("--ref", detect.ref_path, "Reference image (PGM)")->required();
    detect_cmd->add_option("--query", detect.query_path, "Query image (PGM)")->required();
    detect_cmd->add_option("--tau", detect.tau, "Content threshold: number or \"adaptive\"")
        ->capture_default_str();
    detect_cmd->add_option("--merge-thresh", detect.merge_thresh, "Proposal merge threshold")
        ->capture_default_str();
    detect_cmd->add_option("--min-area", detect.min_area, "Minimum mask area (pixels)")
        ->capture_default_str();
    detect_cmd->add_option("--out", detect.out_path, "Output change map (PGM)")->required();
    detect.tracker.add_flags(detect_cmd);
    detect_cmd->callback([&] { run_detect(detect); });

    DetectSeqArgs seq;
    CLI::App* seq_cmd =
        app.add_subcommand("detect-seq", "Change detection over a sequence pair manifest");
    seq_cmd->configurable(true);
    seq_cmd->add_option("--manifest", seq.manifest_path, "Sequence manifest (JSON)")->required();
    seq_cmd->add_option("--out", seq.out_dir, "Output directory for change maps")->required();
    seq_cmd->add_option("--tau", seq.tau, "Content threshold: number or \"adaptive\"")
        ->capture_default_str();
    seq_cmd->add_option("--t-max", seq.t_max, "Maximum chunk length")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    seq_cmd->add_option("--detect-every", seq.detect_every, "Frames between fresh segmentations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    seq_cmd->add_option("--merge-thresh", seq.merge_thresh, "Proposal merge threshold")
        ->capture_default_str();
    seq_cmd->add_option("--min-area", seq.min_area, "Minimum mask area (pixels)")
        ->capture_default_str();
    seq.tracker.add_flags(seq_cmd);
    seq_cmd->callback([&] { run_detect_seq(seq); });

    PostprocArgs post;
    CLI::App* post_cmd =
        app.add_subcommand("postproc", "Resolve overlapping proposals into disjoint masks");
    post_cmd->configurable(true);
    post_cmd->add_option("--proposals", post.proposals_dir, "Directory of proposal rasters")
        ->required();
    post_cmd->add_option("--out", post.out_path, "Output mask raster (PGM)")->required();
    post_cmd->add_option("--merge-thresh", post.merge_thresh, "Overlap merge threshold")
        ->capture_default_str();
    post_cmd->add_option("--min-area", post.min_area, "Minimum mask area (pixels)")
        ->capture_default_str();
    post_cmd->add_option("--invalid-region", post.invalid_region_path,
                         "Raster of pixels carrying no information (nonzero = invalid)");
    post_cmd->callback([&] { run_postproc(post); });

    EvalArgs eval;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Score predictions against ground truth");
    eval_cmd->configurable(true);
    eval_cmd->add_option("--pred", eval.pred_dir, "Directory of predicted change maps")
        ->required();
    eval_cmd->add_option("--gt", eval.gt_dir, "Directory of ground-truth change maps")
        ->required();
    eval_cmd->add_option("--report", eval.report_path, "Write the JSON report here");
    eval_cmd->add_flag("--binary", eval.binary, "Collapse classes to changed/unchanged");
    eval_cmd->add_flag("--per-frame", eval.per_frame, "Average metrics per frame");
    eval_cmd->add_flag("--zero-empty", eval.zero_empty,
                       "Score classes with an empty union as 0 instead of excluding them");
    eval_cmd->callback([&] { run_eval(eval); });

    SblDemoArgs sbl;
    CLI::App* sbl_cmd = app.add_subcommand(
        "sbl-demo", "Style-bridging demo: feature distance vs. number of bridged layers");
    sbl_cmd->configurable(true);
    sbl_cmd->add_option("--layers", sbl.layers, "Encoder depth (normalization slots)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sbl_cmd->add_option("--out", sbl.out_path, "Write the CSV table here");
    sbl_cmd->add_option("--style-scale", sbl.style_scale, "Query-side affine scale")
        ->capture_default_str();
    sbl_cmd->add_option("--style-offset", sbl.style_offset, "Query-side affine offset")
        ->capture_default_str();
    sbl_cmd->callback([&] { run_sbl_demo(sbl); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
