#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "sceneforge/compose.hpp"
#include "sceneforge/config.hpp"
#include "sceneforge/dataset_ops.hpp"
#include "sceneforge/errors.hpp"
#include "sceneforge/eval.hpp"
#include "sceneforge/image_io.hpp"
#include "sceneforge/labels.hpp"
#include "sceneforge/sprite_extract.hpp"
#include "sceneforge/textio.hpp"

namespace fs = std::filesystem;
using namespace sceneforge;

namespace {

std::vector<fs::path> list_files_with_ext(const fs::path& dir, const std::string& ext) {
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ext) {
            files.push_back(entry.path());
        }
    }
    if (ec) throw IoError("cannot scan " + dir.string() + ": " + ec.message());
    std::sort(files.begin(), files.end());
    return files;
}

std::map<int, int> parse_class_mapping(const std::string& text) {
    std::map<int, int> mapping;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string::npos) end = text.size();
        const std::string item = text.substr(pos, end - pos);
        const std::size_t colon = item.find(':');
        if (colon == std::string::npos) {
            throw CLI::ValidationError("--map", "expected from:to pairs, got \"" + item + "\"");
        }
        try {
            const int from = std::stoi(item.substr(0, colon));
            const int to = std::stoi(item.substr(colon + 1));
            mapping[from] = to;
        } catch (const std::exception&) {
            throw CLI::ValidationError("--map", "non-integer id in \"" + item + "\"");
        }
        pos = end + 1;
    }
    if (mapping.empty()) throw CLI::ValidationError("--map", "no mappings given");
    return mapping;
}

std::pair<int, int> parse_size(const std::string& text, const std::string& flag) {
    const std::size_t x = text.find('x');
    if (x != std::string::npos) {
        try {
            const int w = std::stoi(text.substr(0, x));
            const int h = std::stoi(text.substr(x + 1));
            if (w >= 1 && h >= 1) return {w, h};
        } catch (const std::exception&) {
        }
    }
    throw CLI::ValidationError(flag, "expected WIDTHxHEIGHT, got \"" + text + "\"");
}

int run_extract(const std::string& input, const std::string& output, int class_id,
                const std::string& config_path, const std::vector<int>& background,
                const std::vector<int>& tolerance, const std::vector<int>& area,
                int remove_outline, bool remove_outline_set, const std::string& prefix) {
    KeyParams params;
    if (!config_path.empty()) {
        const RunConfig cfg = load_config(config_path);
        params.background_color = cfg.key_params.background_color;
        params.tolerance = cfg.key_params.tolerance;
        params.remove_outline = cfg.key_params.remove_outline;
    }
    if (!background.empty()) {
        for (int c : background) {
            if (c < 0 || c > 255) throw CLI::ValidationError("--background", "channel outside 0..255");
        }
        params.background_color = {static_cast<std::uint8_t>(background[0]),
                                   static_cast<std::uint8_t>(background[1]),
                                   static_cast<std::uint8_t>(background[2])};
    }
    if (!tolerance.empty()) {
        for (int c : tolerance) {
            if (c < 0 || c > 255) throw CLI::ValidationError("--tolerance", "value outside 0..255");
        }
        params.tolerance = {tolerance[0], tolerance[1], tolerance[2]};
    }
    if (!area.empty()) params.area = RectI{area[0], area[1], area[2], area[3]};
    if (remove_outline_set) params.remove_outline = remove_outline;

    const ExtractStats stats = extract_sprites(input, params, class_id, output, prefix);
    std::printf("wrote %d sprites to %s (%d empty frames skipped)\n", stats.written,
                output.c_str(), stats.skipped_empty);
    return 0;
}

int run_compose(const std::string& config_path, std::uint64_t seed, bool seed_set, int count,
                bool count_set, int jobs, bool jobs_set, bool dry_run) {
    RunConfig cfg = load_config(config_path);
    if (seed_set) cfg.job.scene.seed = seed;
    if (count_set) cfg.job.scene.dataset_size = count;
    if (jobs_set) cfg.job.jobs = jobs;

    const LoadedAssets assets = load_assets(cfg.job);
    if (dry_run) {
        std::printf("config ok: %zu backgrounds, %zu ui panels, %zu cursors\n",
                    assets.backgrounds.size(), assets.ui.size(), assets.cursors.size());
        for (const SpritePool& pool : assets.pools) {
            std::printf("  class %d: %zu sprites, %d..%d per scene%s\n", pool.config.class_id,
                        pool.sprites.size(), pool.config.min_count, pool.config.max_count,
                        pool.config.labeled ? "" : " (unlabeled)");
        }
        std::printf("would write %d images to %s\n", cfg.job.scene.dataset_size,
                    cfg.job.output_dir.string().c_str());
        return 0;
    }
    const GenerateSummary summary = generate_dataset(cfg.job, assets);
    std::printf("wrote %d images and %d label files to %s\n", summary.images_written,
                summary.labels_written, cfg.job.output_dir.string().c_str());
    return 0;
}

int run_sample_frames(const std::string& input, const std::string& output, int stride,
                      const std::string& resize, const std::string& prefix) {
    std::optional<std::pair<int, int>> size;
    if (!resize.empty()) size = parse_size(resize, "--resize");
    const int n = sample_frames(input, stride, size, prefix, output);
    std::printf("wrote %d frames to %s\n", n, output.c_str());
    return 0;
}

int run_split(const std::string& dir, double fraction, std::uint64_t seed,
              const std::string& train_out, const std::string& test_out) {
    const DatasetIndex index = build_index(dir);
    const SplitResult result = split_train_test(index, fraction, seed);
    const fs::path train_path = train_out.empty() ? fs::path(dir) / "train.txt" : fs::path(train_out);
    const fs::path test_path = test_out.empty() ? fs::path(dir) / "test.txt" : fs::path(test_out);
    write_manifest(train_path, result.train);
    write_manifest(test_path, result.test);
    std::printf("split %zu pairs: %zu train -> %s, %zu test -> %s\n", index.size(),
                result.train.size(), train_path.string().c_str(), result.test.size(),
                test_path.string().c_str());
    return 0;
}

int run_rename(const std::string& labels_dir, const std::string& map_text,
               const std::string& output) {
    const std::map<int, int> mapping = parse_class_mapping(map_text);
    const fs::path out_dir = output.empty() ? fs::path(labels_dir) : fs::path(output);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    int written = 0;
    for (const fs::path& file : list_files_with_ext(labels_dir, ".txt")) {
        const LabelFile renamed = rename_classes(read_label_file(file), mapping);
        write_label_file(out_dir / file.filename(), renamed);
        ++written;
    }
    std::printf("rewrote %d label files into %s\n", written, out_dir.string().c_str());
    return 0;
}

int run_check(const std::string& dir) {
    const IntegrityReport report = check_integrity(dir);
    if (report.clean()) {
        std::printf("ok: every image has a parsable label file and vice versa\n");
        return 0;
    }
    for (const auto& stem : report.missing_labels) {
        std::printf("missing label: %s\n", stem.c_str());
    }
    for (const auto& stem : report.missing_images) {
        std::printf("missing image: %s\n", stem.c_str());
    }
    for (const auto& entry : report.malformed) {
        std::printf("malformed %s (line %d): %s\n", entry.stem.c_str(), entry.line_no,
                    entry.message.c_str());
    }
    return 1;
}

int run_convert(const std::string& input, const std::string& classes_path,
                const std::string& output) {
    const ClassMap classes = ClassMap::read_file(classes_path);
    std::vector<fs::path> files;
    if (fs::is_directory(input)) {
        files = list_files_with_ext(input, ".xml");
    } else {
        files.push_back(input);
    }
    std::error_code ec;
    fs::create_directories(output, ec);
    if (ec) throw IoError("cannot create " + output + ": " + ec.message());

    int written = 0;
    for (const fs::path& file : files) {
        LabelFile converted = convert_voc(read_voc_file(file), classes);
        converted.stem = file.stem().string();
        write_label_file(fs::path(output) / (converted.stem + ".txt"), converted);
        ++written;
    }
    std::printf("converted %d annotation files into %s\n", written, output.c_str());
    return 0;
}

int run_eval_map(const std::string& truth_dir, const std::string& preds_dir, double iou_threshold,
                 const std::string& json_out) {
    EvalAccumulator acc;
    int files = 0;
    for (const fs::path& truth_file : list_files_with_ext(truth_dir, ".txt")) {
        const LabelFile truth = read_label_file(truth_file);
        std::vector<GroundTruth> truths;
        for (const LabelRecord& r : truth.records) {
            truths.push_back(GroundTruth{r.class_id, denormalize(r, 1.0, 1.0)});
        }
        std::vector<Detection> preds;
        const fs::path pred_file = fs::path(preds_dir) / truth_file.filename();
        if (fs::exists(pred_file)) preds = parse_predictions(read_text_file(pred_file));
        acc.add(truths, match_detections(preds, truths, iou_threshold));
        ++files;
    }
    const EvalReport report = acc.report();
    std::printf("evaluated %d images at IoU >= %.2f\n", files, iou_threshold);
    for (const ClassEval& c : report.classes) {
        std::printf("class %d: total %lld correct %lld wrong %lld missed %lld map %.4f\n",
                    c.class_id, c.total, c.correct, c.wrong, c.missed, c.map());
    }
    std::printf("overall: total %lld correct %lld map %.4f\n", report.total_truths(),
                report.total_correct(), report.overall_map());
    if (!json_out.empty()) {
        nlohmann::json doc;
        doc["iou_threshold"] = iou_threshold;
        doc["images"] = files;
        doc["classes"] = nlohmann::json::array();
        for (const ClassEval& c : report.classes) {
            doc["classes"].push_back({{"class_id", c.class_id},
                                      {"total", c.total},
                                      {"correct", c.correct},
                                      {"wrong", c.wrong},
                                      {"missed", c.missed},
                                      {"map", c.map()}});
        }
        doc["overall"] = {{"total", report.total_truths()},
                          {"correct", report.total_correct()},
                          {"map", report.overall_map()}};
        write_text_file(json_out, doc.dump(2) + "\n");
    }
    return 0;
}

int run_eval_track(const std::string& preds_dir, int target_class, const std::string& json_out) {
    std::vector<std::vector<Detection>> frames;
    for (const fs::path& file : list_files_with_ext(preds_dir, ".txt")) {
        frames.push_back(parse_predictions(read_text_file(file)));
    }
    const TrackReport report = tracking_report(frames, target_class);
    std::printf("frames %lld: single %.2f%% multiple %.2f%% none %.2f%%\n", report.frames_total,
                report.pct_single, report.pct_multiple, report.pct_none);
    if (!json_out.empty()) {
        nlohmann::json doc{{"frames_total", report.frames_total},
                           {"frames_single", report.frames_single},
                           {"frames_multiple", report.frames_multiple},
                           {"frames_none", report.frames_none},
                           {"pct_single", report.pct_single},
                           {"pct_multiple", report.pct_multiple},
                           {"pct_none", report.pct_none}};
        write_text_file(json_out, doc.dump(2) + "\n");
    }
    return 0;
}

int run_stats(const std::string& dir) {
    const DatasetStats stats = dataset_stats(build_index(dir));
    std::printf("%lld images, %lld objects\n", stats.total_images, stats.total_objects);
    for (const auto& [class_id, count] : stats.per_class) {
        std::printf("class %d: %lld objects\n", class_id, count);
    }
    for (const auto& [objects, images] : stats.objects_per_image) {
        std::printf("%d objects/image: %lld images\n", objects, images);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic object-detection dataset toolkit"};
    app.require_subcommand(1);

    // extract
    auto* extract = app.add_subcommand("extract", "key out sprite frames into cropped PNGs");
    std::string ex_input, ex_output, ex_config, ex_prefix;
    int ex_class = 0, ex_outline = 0;
    std::vector<int> ex_background, ex_tolerance, ex_area;
    extract->add_option("--input", ex_input, "directory of raw frames")->required();
    extract->add_option("--output", ex_output, "sprite output directory")->required();
    extract->add_option("--class-id", ex_class, "class id for the sprite names")->required();
    extract->add_option("--config", ex_config, "config file supplying key_params defaults");
    extract->add_option("--background", ex_background, "background color r,g,b")
        ->delimiter(',')
        ->expected(3);
    extract->add_option("--tolerance", ex_tolerance, "per-channel tolerance r,g,b")
        ->delimiter(',')
        ->expected(3);
    extract->add_option("--area", ex_area, "content region x,y,w,h")->delimiter(',')->expected(4);
    extract->add_option("--remove-outline", ex_outline, "erosion layers after keying");
    extract->add_option("--prefix", ex_prefix, "output name prefix (default \"<class-id>_\")");

    // compose
    auto* compose = app.add_subcommand("compose", "generate a labeled synthetic dataset");
    std::string co_config;
    std::uint64_t co_seed = 0;
    int co_count = 0, co_jobs = 0;
    bool co_dry = false;
    compose->add_option("--config", co_config, "JSON configuration file")->required();
    compose->add_option("--seed", co_seed, "override the configured seed");
    compose->add_option("--count", co_count, "override the configured dataset size");
    compose->add_option("--jobs", co_jobs, "compose threads (0 = all cores)");
    compose->add_flag("--dry-run", co_dry, "validate config and assets, write nothing");

    // sample-frames
    auto* sample = app.add_subcommand("sample-frames", "keep every n-th frame of a recording");
    std::string sf_input, sf_output, sf_resize, sf_prefix = "frame_";
    int sf_stride = 1;
    sample->add_option("--input", sf_input, "directory of frames")->required();
    sample->add_option("--output", sf_output, "output directory")->required();
    sample->add_option("--stride", sf_stride, "keep every stride-th frame (default 1)");
    sample->add_option("--resize", sf_resize, "resize kept frames to WIDTHxHEIGHT");
    sample->add_option("--prefix", sf_prefix, "output name prefix (default frame_)");

    // split
    auto* split = app.add_subcommand("split", "write train/test manifests for a dataset");
    std::string sp_dir, sp_train, sp_test;
    double sp_fraction = 0.2;
    std::uint64_t sp_seed = 0;
    split->add_option("--dir", sp_dir, "dataset directory (images + labels)")->required();
    split->add_option("--test-fraction", sp_fraction, "fraction of pairs in the test set")
        ->check(CLI::Range(0.0, 1.0));
    split->add_option("--seed", sp_seed, "shuffle seed");
    split->add_option("--train-out", sp_train, "train manifest path (default <dir>/train.txt)");
    split->add_option("--test-out", sp_test, "test manifest path (default <dir>/test.txt)");

    // rename
    auto* rename = app.add_subcommand("rename", "rewrite class ids in label files");
    std::string rn_labels, rn_map, rn_output;
    rename->add_option("--labels", rn_labels, "directory of label files")->required();
    rename->add_option("--map", rn_map, "id mapping, e.g. 3:1,4:1")->required();
    rename->add_option("--output", rn_output, "output directory (default: rewrite in place)");

    // check
    auto* check = app.add_subcommand("check", "verify image/label pairing and label syntax");
    std::string ck_dir;
    check->add_option("--dir", ck_dir, "dataset directory")->required();

    // convert
    auto* convert = app.add_subcommand("convert", "corner-box XML annotations to label files");
    std::string cv_input, cv_classes, cv_output;
    convert->add_option("--input", cv_input, "XML file or directory")->required();
    convert->add_option("--classes", cv_classes, "class list, one name per line")->required();
    convert->add_option("--output", cv_output, "label output directory")->required();

    // eval-map
    auto* evalmap = app.add_subcommand("eval-map", "score detections against ground truth");
    std::string em_truth, em_preds, em_config, em_json;
    double em_iou = 0.5;
    evalmap->add_option("--truth", em_truth, "ground-truth label directory")->required();
    evalmap->add_option("--preds", em_preds, "prediction file directory")->required();
    evalmap->add_option("--iou-threshold", em_iou, "match threshold (default 0.5)")
        ->check(CLI::Range(0.0, 1.0));
    evalmap->add_option("--config", em_config, "config file supplying eval defaults");
    evalmap->add_option("--json-out", em_json, "also write the report as JSON to this path");

    // eval-track
    auto* evaltrack = app.add_subcommand("eval-track", "per-frame detection count report");
    std::string et_preds, et_json;
    int et_class = 0;
    evaltrack->add_option("--preds", et_preds, "prediction file directory, one file per frame")
        ->required();
    evaltrack->add_option("--target-class", et_class, "class id to track")->required();
    evaltrack->add_option("--json-out", et_json, "also write the report as JSON to this path");

    // stats
    auto* stats = app.add_subcommand("stats", "label counts for a dataset");
    std::string st_dir;
    stats->add_option("--dir", st_dir, "dataset directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (extract->parsed()) {
            return run_extract(ex_input, ex_output, ex_class, ex_config, ex_background,
                               ex_tolerance, ex_area, ex_outline,
                               extract->count("--remove-outline") > 0, ex_prefix);
        }
        if (compose->parsed()) {
            return run_compose(co_config, co_seed, compose->count("--seed") > 0, co_count,
                               compose->count("--count") > 0, co_jobs,
                               compose->count("--jobs") > 0, co_dry);
        }
        if (sample->parsed()) {
            return run_sample_frames(sf_input, sf_output, sf_stride, sf_resize, sf_prefix);
        }
        if (split->parsed()) return run_split(sp_dir, sp_fraction, sp_seed, sp_train, sp_test);
        if (rename->parsed()) return run_rename(rn_labels, rn_map, rn_output);
        if (check->parsed()) return run_check(ck_dir);
        if (convert->parsed()) return run_convert(cv_input, cv_classes, cv_output);
        if (evalmap->parsed()) {
            double threshold = em_iou;
            if (!em_config.empty() && evalmap->count("--iou-threshold") == 0) {
                threshold = load_config(em_config).eval.iou_threshold;
            }
            return run_eval_map(em_truth, em_preds, threshold, em_json);
        }
        if (evaltrack->parsed()) return run_eval_track(et_preds, et_class, et_json);
        if (stats->parsed()) return run_stats(st_dir);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
