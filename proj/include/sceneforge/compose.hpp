#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sceneforge/image.hpp"
#include "sceneforge/labels.hpp"
#include "sceneforge/resample.hpp"
#include "sceneforge/rng.hpp"
#include "sceneforge/sprite_extract.hpp"

namespace sceneforge {

/// One sprite pool: how many instances to place per scene and how they are
/// transformed. scale = base_scale + uniform(-max_scale, +max_scale),
/// rotation = base_rotation + uniform(-max_rotation, +max_rotation).
struct PoolConfig {
    int class_id = 0;
    std::string sprite_dir;
    int min_count = 0;
    int max_count = 0;
    bool labeled = true;
    double base_scale = 1.0;
    double base_rotation = 0.0;  // degrees
    double max_scale = 0.0;
    double max_rotation = 0.0;  // degrees
    bool grouped = false;
};

struct SceneConfig {
    int dataset_size = 0;
    std::uint64_t seed = 0;
    std::vector<PoolConfig> class_pools;
    double bias_strength = 0.0;  // std deviation of the grouping normal, pixels
    double group_chance = 0.0;
    double overlay_chance = 0.0;
    double fog_of_war_chance = 0.0;
    std::array<int, 3> noise{0, 0, 0};  // max per-channel perturbation
    double blur_strength = 0.0;         // Gaussian sigma, pixels
    Sampling sampling_method = Sampling::bilinear;
    double min_visible_fraction = 0.25;
    int output_width = 0;
    int output_height = 0;
};

struct SpritePool {
    PoolConfig config;
    std::vector<Sprite> sprites;
};

/// An object fixed into a scene: where it landed and what of it is visible.
struct PlacedObject {
    int class_id = 0;
    int x = 0, y = 0;  // center, pixels
    double scale = 1.0;
    double rotation = 0.0;
    RectI visible_box;
};

/// Outcome of blitting one transformed raster onto a canvas.
struct BlitResult {
    RectI box;                 // tight box of drawn pixels, clipped to canvas
    long long content_px = 0;  // alpha > 0 pixels in the raster
    long long drawn_px = 0;    // of those, how many landed on the canvas

    bool drawn() const { return drawn_px > 0; }
    double visible_fraction() const {
        return content_px > 0 ? static_cast<double>(drawn_px) / static_cast<double>(content_px) : 0.0;
    }
};

/// Scales then rotates (in that order). Output size is
/// (ceil(scale*w), ceil(scale*h)) before rotation; rotation expands the
/// canvas so nothing is cropped. Whenever resampling happened, the output
/// alpha is re-binarized at threshold 128. scale 1 + rotation 0 returns
/// the raster unchanged; exact quarter turns permute pixels losslessly.
Image transform_sprite(const Image& raster, double scale, double rotation_deg, Sampling method);

/// Draws a transformed raster centered at (center_x, center_y): every
/// canvas pixel covered by a raster pixel with alpha > 0 is replaced by
/// that pixel's color. Off-canvas parts are clipped.
BlitResult add_object(Image& canvas, const Image& raster, int center_x, int center_y);

/// Source-over alpha blending at (x0, y0), for UI overlays with soft alpha.
void blend_overlay(Image& canvas, const Image& overlay, int x0, int y0);

struct Point {
    int x = 0, y = 0;
};

/// Ungrouped: uniform over [0,w) x [0,h). Grouped: per-coordinate
/// Normal(bias, bias_strength^2), rounded and clamped to the canvas.
/// Consumes 2 uniform draws or 2 normal draws respectively.
Point sample_position(Rng& rng, int canvas_w, int canvas_h, bool grouped,
                      Point bias_point, double bias_strength);

/// Adds an independent uniform integer in [-noise_c, +noise_c] to every
/// color channel of every pixel, clamped to [0,255]. Alpha untouched.
/// Skips the pass (and all draws) when every component is zero.
void apply_noise(Image& image, const std::array<int, 3>& noise, Rng& rng);

/// Separable Gaussian blur, kernel radius ceil(3*sigma), kernel normalized
/// to sum 1, borders clamped. sigma 0 is the identity. Color channels only.
void apply_blur(Image& image, double sigma);

inline constexpr double kFogDarkening = 0.45;

/// Darkens everything outside a random corner-anchored ellipse (semi-axes
/// uniform in [1/4, 3/4] of each canvas dimension) by kFogDarkening.
/// Applied unconditionally; the per-scene probability lives in compose_scene.
void apply_fog_of_war(Image& image, Rng& rng);

/// With probability overlay_chance blends one UI sprite bottom-centered at
/// native size, then places a uniform number of cursors in [cursor_min,
/// cursor_max] at uniform positions, drawn like objects. Neither
/// contributes labels. Empty pools switch the corresponding part off.
void overlay_ui(Image& image, std::span<const Image> ui_sprites,
                std::span<const Sprite> cursor_sprites, Rng& rng,
                double overlay_chance, int cursor_min, int cursor_max);

struct ComposeResult {
    Image image;
    std::vector<LabelRecord> labels;
    std::vector<PlacedObject> objects;  // placed class_pool objects, labeled or not
};

/// Builds the normalized label for a visible box on a canvas.
LabelRecord label_from_box(int class_id, const RectI& box, int canvas_w, int canvas_h);

/// Composes one scene onto a copy of `background` (its dimensions must
/// already match the configured output size).
///
/// Draw order from `rng` is part of the contract (determinism depends on
/// it): bias point x,y; grouping coin; then per pool in config order: the
/// instance count, then per object sprite index, position, scale offset,
/// rotation offset; then overlay_ui; then the fog coin (corner and
/// semi-axes only when it hits); then noise. Objects are always blended,
/// even barely-visible ones; a label is emitted iff the pool is labeled
/// and the visible fraction of the transformed sprite's content is at
/// least min_visible_fraction. Later objects draw over earlier ones and
/// labels are not shrunk by occlusion.
ComposeResult compose_scene(const SceneConfig& config,
                            std::span<const SpritePool> pools,
                            std::span<const Image> ui_sprites,
                            std::span<const Sprite> cursor_sprites,
                            const Image& background, Rng& rng,
                            int cursor_min = 0, int cursor_max = 0);

/// Everything generate_dataset needs: the scene parameters plus asset
/// directories and output conventions.
struct DatasetJob {
    SceneConfig scene;
    std::filesystem::path backgrounds_dir;
    std::filesystem::path output_dir;
    std::optional<std::filesystem::path> ui_dir;
    std::optional<std::filesystem::path> cursors_dir;
    int cursor_min = 0;
    int cursor_max = 0;
    std::string prefix = "synth_";
    std::string image_format = "png";  // "png" | "jpg"
    int jpeg_quality = 90;
    int jobs = 0;  // compose threads; 0 = hardware concurrency
};

struct LoadedAssets {
    std::vector<SpritePool> pools;
    std::vector<Image> backgrounds;  // resized to the output size
    std::vector<Image> ui;
    std::vector<Sprite> cursors;
};

/// Loads sprite pools, backgrounds (resized to output_size with bilinear
/// sampling when needed), UI panels and cursors. Throws EmptyPool when a
/// pool with max_count > 0 has no usable sprite (same for cursors),
/// NoBackgrounds when the background directory yields nothing.
LoadedAssets load_assets(const DatasetJob& job);

std::vector<Sprite> load_sprite_pool(const std::filesystem::path& dir, int class_id);

/// Zero-padded output stem for one image index, e.g. "synth_000007".
std::string image_stem(const std::string& prefix, int index);

struct GenerateSummary {
    int images_written = 0;
    int labels_written = 0;
};

/// Runs the whole pipeline: dataset_size scenes, each written as
/// <stem>.<format> plus <stem>.txt into output_dir. Scene i draws all of
/// its randomness from Rng::for_image(seed, i), so outputs are identical
/// for any thread count. The background for scene i is drawn uniformly
/// from the loaded backgrounds as the stream's first draw.
GenerateSummary generate_dataset(const DatasetJob& job);

/// generate_dataset on already-loaded assets (fixtures, repeated runs).
GenerateSummary generate_dataset(const DatasetJob& job, const LoadedAssets& assets);

}  // namespace sceneforge
