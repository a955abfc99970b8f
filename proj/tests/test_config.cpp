#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "sceneforge/compose.hpp"
#include "sceneforge/config.hpp"
#include "sceneforge/labels.hpp"
#include "sceneforge/textio.hpp"
#include "testutil.hpp"

using namespace sceneforge;
using nlohmann::json;

namespace {

/// Smallest complete document against real asset directories.
json minimal_doc(const testutil::TempDir& tmp) {
    testutil::write_pool(tmp / "sprites", 1, 4, 4, Rgba{200, 0, 0, 255});
    testutil::write_backgrounds(tmp / "bgs", 1, 32, 32);
    json pool = {{"class_id", 0}, {"sprite_dir", (tmp / "sprites").string()}, {"max_count", 2}};
    json doc = {
        {"dataset_size", 2},
        {"seed", 7},
        {"output_dir", (tmp / "out").string()},
        {"output_size", {32, 32}},
        {"backgrounds_dir", (tmp / "bgs").string()},
    };
    doc["class_pools"] = json::array({pool});
    return doc;
}

std::vector<std::string> violations_of(const std::string& text,
                                       const std::filesystem::path& base) {
    try {
        parse_config(text, base);
    } catch (const ConfigError& e) {
        return e.violations;
    }
    return {};
}

bool mentions(const std::vector<std::string>& violations, const std::string& needle) {
    for (const std::string& v : violations) {
        if (v.find(needle) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST(Config, MinimalDocumentAndDefaults) {
    testutil::TempDir tmp;
    const RunConfig cfg = parse_config(minimal_doc(tmp).dump(), tmp.path());
    EXPECT_EQ(cfg.job.scene.dataset_size, 2);
    EXPECT_EQ(cfg.job.scene.seed, 7u);
    EXPECT_EQ(cfg.job.scene.output_width, 32);
    EXPECT_EQ(cfg.job.scene.output_height, 32);
    EXPECT_EQ(cfg.job.prefix, "synth_");
    EXPECT_EQ(cfg.job.image_format, "png");
    EXPECT_EQ(cfg.job.jpeg_quality, 90);
    EXPECT_EQ(cfg.job.jobs, 0);
    EXPECT_EQ(cfg.job.scene.sampling_method, Sampling::bilinear);
    EXPECT_DOUBLE_EQ(cfg.job.scene.min_visible_fraction, 0.25);
    EXPECT_EQ(cfg.job.scene.noise, (std::array<int, 3>{0, 0, 0}));
    ASSERT_EQ(cfg.job.scene.class_pools.size(), 1u);
    const PoolConfig& pool = cfg.job.scene.class_pools[0];
    EXPECT_EQ(pool.class_id, 0);
    EXPECT_EQ(pool.min_count, 0);
    EXPECT_EQ(pool.max_count, 2);
    EXPECT_TRUE(pool.labeled);
    EXPECT_DOUBLE_EQ(pool.base_scale, 1.0);
    EXPECT_FALSE(pool.grouped);
    EXPECT_EQ(cfg.key_params.background_color, (std::array<std::uint8_t, 3>{0, 255, 0}));
    EXPECT_DOUBLE_EQ(cfg.eval.iou_threshold, 0.5);
}

TEST(Config, FullDocumentRoundTrip) {
    testutil::TempDir tmp;
    json doc = minimal_doc(tmp);
    std::filesystem::create_directories(tmp / "ui");
    save_image(tmp / "ui" / "panel.png", Image(8, 4, Rgba{1, 1, 1, 200}));
    testutil::write_pool(tmp / "cursors", 1, 2, 2, Rgba{0, 0, 255, 255});
    doc["prefix"] = "scene_";
    doc["image_format"] = "jpeg";  // canonicalized to jpg
    doc["jpeg_quality"] = 75;
    doc["jobs"] = 3;
    doc["sampling_method"] = "bicubic";
    doc["min_visible_fraction"] = 0.5;
    doc["bias_strength"] = 80.0;
    doc["group_chance"] = 0.9;
    doc["overlay_chance"] = 0.8;
    doc["fog_of_war_chance"] = 0.3;
    doc["noise"] = {10, 11, 12};
    doc["blur_strength"] = 1.5;
    doc["ui_dir"] = (tmp / "ui").string();
    doc["cursors_dir"] = (tmp / "cursors").string();
    doc["cursor_min"] = 1;
    doc["cursor_max"] = 3;
    doc["key_params"] = {{"background_color", {10, 20, 30}}, {"tolerance", {5, 6, 7}},
                         {"remove_outline", 2}};
    doc["eval"] = {{"iou_threshold", 0.3}};
    doc["class_pools"][0]["min_count"] = 1;
    doc["class_pools"][0]["labeled"] = false;
    doc["class_pools"][0]["base_scale"] = 0.8;
    doc["class_pools"][0]["max_scale"] = 0.2;
    doc["class_pools"][0]["base_rotation"] = 45.0;
    doc["class_pools"][0]["max_rotation"] = 90.0;
    doc["class_pools"][0]["grouped"] = true;

    const RunConfig cfg = parse_config(doc.dump(), tmp.path());
    EXPECT_EQ(cfg.job.prefix, "scene_");
    EXPECT_EQ(cfg.job.image_format, "jpg");
    EXPECT_EQ(cfg.job.jpeg_quality, 75);
    EXPECT_EQ(cfg.job.jobs, 3);
    EXPECT_EQ(cfg.job.scene.sampling_method, Sampling::bicubic);
    EXPECT_DOUBLE_EQ(cfg.job.scene.min_visible_fraction, 0.5);
    EXPECT_DOUBLE_EQ(cfg.job.scene.bias_strength, 80.0);
    EXPECT_EQ(cfg.job.scene.noise, (std::array<int, 3>{10, 11, 12}));
    EXPECT_TRUE(cfg.job.ui_dir.has_value());
    EXPECT_TRUE(cfg.job.cursors_dir.has_value());
    EXPECT_EQ(cfg.job.cursor_min, 1);
    EXPECT_EQ(cfg.job.cursor_max, 3);
    EXPECT_EQ(cfg.key_params.background_color, (std::array<std::uint8_t, 3>{10, 20, 30}));
    EXPECT_EQ(cfg.key_params.tolerance, (std::array<int, 3>{5, 6, 7}));
    EXPECT_EQ(cfg.key_params.remove_outline, 2);
    EXPECT_DOUBLE_EQ(cfg.eval.iou_threshold, 0.3);
    const PoolConfig& pool = cfg.job.scene.class_pools[0];
    EXPECT_FALSE(pool.labeled);
    EXPECT_DOUBLE_EQ(pool.base_scale, 0.8);
    EXPECT_DOUBLE_EQ(pool.base_rotation, 45.0);
    EXPECT_TRUE(pool.grouped);
}

TEST(Config, CollectsEveryViolation) {
    testutil::TempDir tmp;
    json doc = minimal_doc(tmp);
    doc["dataset_size"] = -5;                          // out of range
    doc["output_size"] = {32};                         // wrong arity
    doc["image_format"] = "gif";                       // unsupported
    doc["min_visible_fraction"] = 0.0;                 // must be > 0
    doc["made_up_key"] = 1;                            // unknown key
    doc["class_pools"][0]["max_count"] = 9;
    doc["class_pools"][0]["min_count"] = 10;           // min > max
    doc["class_pools"][0]["base_scale"] = 0.5;
    doc["class_pools"][0]["max_scale"] = 0.5;          // scale can reach 0
    const auto violations = violations_of(doc.dump(), tmp.path());
    EXPECT_EQ(violations.size(), 7u);
    EXPECT_TRUE(mentions(violations, "dataset_size"));
    EXPECT_TRUE(mentions(violations, "output_size"));
    EXPECT_TRUE(mentions(violations, "image_format"));
    EXPECT_TRUE(mentions(violations, "min_visible_fraction"));
    EXPECT_TRUE(mentions(violations, "made_up_key"));
    EXPECT_TRUE(mentions(violations, "class_pools[0].max_count"));
    EXPECT_TRUE(mentions(violations, "class_pools[0].max_scale"));
}

TEST(Config, MissingRequiredKeys) {
    const auto violations = violations_of("{}", ".");
    EXPECT_TRUE(mentions(violations, "dataset_size: missing required key"));
    EXPECT_TRUE(mentions(violations, "seed: missing required key"));
    EXPECT_TRUE(mentions(violations, "output_dir: missing required key"));
    EXPECT_TRUE(mentions(violations, "output_size: missing required key"));
    EXPECT_TRUE(mentions(violations, "backgrounds_dir: missing required key"));
    EXPECT_TRUE(mentions(violations, "class_pools: missing required key"));
}

TEST(Config, RejectsUnknownKeysAtEveryLevel) {
    testutil::TempDir tmp;
    json doc = minimal_doc(tmp);
    doc["bogus_top"] = 1;
    doc["class_pools"][0]["bogus_pool"] = 2;
    doc["key_params"] = {{"bogus_kp", 3}};
    doc["eval"] = {{"bogus_eval", 4}};
    const auto violations = violations_of(doc.dump(), tmp.path());
    EXPECT_EQ(violations.size(), 4u);
    EXPECT_TRUE(mentions(violations, "bogus_top: unknown key"));
    EXPECT_TRUE(mentions(violations, "class_pools[0].bogus_pool: unknown key"));
    EXPECT_TRUE(mentions(violations, "key_params.bogus_kp: unknown key"));
    EXPECT_TRUE(mentions(violations, "eval.bogus_eval: unknown key"));
}

TEST(Config, InputDirectoriesMustExist) {
    testutil::TempDir tmp;
    json doc = minimal_doc(tmp);
    doc["backgrounds_dir"] = (tmp / "no_such_dir").string();
    doc["class_pools"][0]["sprite_dir"] = (tmp / "also_missing").string();
    const auto violations = violations_of(doc.dump(), tmp.path());
    EXPECT_EQ(violations.size(), 2u);
    EXPECT_TRUE(mentions(violations, "backgrounds_dir: not a directory"));
    EXPECT_TRUE(mentions(violations, "class_pools[0].sprite_dir: not a directory"));
}

TEST(Config, CursorsRequireDirectory) {
    testutil::TempDir tmp;
    json doc = minimal_doc(tmp);
    doc["cursor_max"] = 2;
    const auto violations = violations_of(doc.dump(), tmp.path());
    EXPECT_TRUE(mentions(violations, "cursors_dir is required"));
    doc["cursor_min"] = 3;
    EXPECT_TRUE(mentions(violations_of(doc.dump(), tmp.path()), "cursor_max: must be >= cursor_min"));
}

TEST(Config, BadJsonAndBadTopLevel) {
    EXPECT_TRUE(mentions(violations_of("{not json", "."), "document:"));
    EXPECT_TRUE(mentions(violations_of("[1,2,3]", "."), "top level must be a JSON object"));
}

TEST(Config, TypeErrorsAreFieldSpecific) {
    testutil::TempDir tmp;
    json doc = minimal_doc(tmp);
    doc["seed"] = -4;
    doc["prefix"] = 12;
    doc["class_pools"][0]["labeled"] = "yes";
    const auto violations = violations_of(doc.dump(), tmp.path());
    EXPECT_EQ(violations.size(), 3u);
    EXPECT_TRUE(mentions(violations, "seed: expected a non-negative integer"));
    EXPECT_TRUE(mentions(violations, "prefix: expected a string"));
    EXPECT_TRUE(mentions(violations, "class_pools[0].labeled: expected true or false"));
}

TEST(Config, SamplingMethodNames) {
    testutil::TempDir tmp;
    for (const auto& [name, method] : {std::pair<const char*, Sampling>{"nearest", Sampling::nearest},
                                       {"bilinear", Sampling::bilinear},
                                       {"bicubic", Sampling::bicubic}}) {
        json doc = minimal_doc(tmp);
        doc["sampling_method"] = name;
        EXPECT_EQ(parse_config(doc.dump(), tmp.path()).job.scene.sampling_method, method);
    }
    json doc = minimal_doc(tmp);
    doc["sampling_method"] = "lanczos";
    EXPECT_TRUE(mentions(violations_of(doc.dump(), tmp.path()), "sampling_method"));
}

TEST(Config, LoadResolvesRelativePaths) {
    testutil::TempDir tmp;
    json doc = minimal_doc(tmp);
    doc["backgrounds_dir"] = "bgs";  // relative to the config file
    doc["output_dir"] = "out";
    doc["class_pools"][0]["sprite_dir"] = "sprites";
    write_text_file(tmp / "config.json", doc.dump());
    const RunConfig cfg = load_config(tmp / "config.json");
    EXPECT_EQ(cfg.job.backgrounds_dir, (tmp / "bgs").lexically_normal());
    EXPECT_EQ(cfg.job.output_dir, (tmp / "out").lexically_normal());
    EXPECT_EQ(cfg.job.scene.class_pools[0].sprite_dir,
              (tmp / "sprites").lexically_normal().string());
}

TEST(Config, AcceptedDocumentsCanCompose) {
    // anything validate lets through must run the pipeline without
    // configuration-related failures
    testutil::TempDir tmp;
    json doc = minimal_doc(tmp);
    doc["noise"] = {5, 5, 5};
    doc["fog_of_war_chance"] = 1.0;
    doc["blur_strength"] = 0.5;
    doc["class_pools"][0]["max_rotation"] = 45.0;
    const RunConfig cfg = parse_config(doc.dump(), tmp.path());
    const GenerateSummary summary = generate_dataset(cfg.job);
    EXPECT_EQ(summary.images_written, 2);
    EXPECT_TRUE(std::filesystem::exists(cfg.job.output_dir / "synth_000001.png"));
}
