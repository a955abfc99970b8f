#include "sceneforge/compose.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "sceneforge/errors.hpp"
#include "sceneforge/image_io.hpp"

namespace sceneforge {

namespace {

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

inline std::uint8_t clamp_u8(long v) {
    return static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
}

void binarize_alpha(Image& img) {
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            std::uint8_t* p = img.px(x, y);
            if (p[3] >= 128) {
                p[3] = 255;
            } else {
                p[0] = p[1] = p[2] = p[3] = 0;
            }
        }
    }
}

}  // namespace

Image transform_sprite(const Image& raster, double scale, double rotation_deg, Sampling method) {
    if (!(scale > 0.0)) throw std::invalid_argument("sprite scale must be > 0");
    Image cur = raster;
    bool resampled = false;
    if (scale != 1.0) {
        const int ow = std::max(1, static_cast<int>(std::ceil(scale * raster.width() - 1e-9)));
        const int oh = std::max(1, static_cast<int>(std::ceil(scale * raster.height() - 1e-9)));
        cur = resample(cur, ow, oh, method);
        resampled = true;
    }
    const double deg = normalize_degrees(rotation_deg);
    if (deg != 0.0) {
        if (quarter_turns(deg) < 0) resampled = true;
        cur = rotate_image(cur, deg, method);
    }
    if (resampled) binarize_alpha(cur);
    return cur;
}

BlitResult add_object(Image& canvas, const Image& raster, int center_x, int center_y) {
    const int x0 = center_x - raster.width() / 2;
    const int y0 = center_y - raster.height() / 2;
    BlitResult result;
    int min_x = canvas.width(), min_y = canvas.height(), max_x = -1, max_y = -1;
    for (int y = 0; y < raster.height(); ++y) {
        for (int x = 0; x < raster.width(); ++x) {
            const std::uint8_t* s = raster.px(x, y);
            if (s[3] == 0) continue;
            ++result.content_px;
            const int tx = x0 + x;
            const int ty = y0 + y;
            if (!canvas.in_bounds(tx, ty)) continue;
            std::uint8_t* d = canvas.px(tx, ty);
            d[0] = s[0];
            d[1] = s[1];
            d[2] = s[2];
            d[3] = 255;
            ++result.drawn_px;
            min_x = std::min(min_x, tx);
            min_y = std::min(min_y, ty);
            max_x = std::max(max_x, tx);
            max_y = std::max(max_y, ty);
        }
    }
    if (result.drawn_px > 0) {
        result.box = RectI{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
    }
    return result;
}

void blend_overlay(Image& canvas, const Image& overlay, int x0, int y0) {
    for (int y = 0; y < overlay.height(); ++y) {
        const int ty = y0 + y;
        if (ty < 0 || ty >= canvas.height()) continue;
        for (int x = 0; x < overlay.width(); ++x) {
            const int tx = x0 + x;
            if (tx < 0 || tx >= canvas.width()) continue;
            const std::uint8_t* s = overlay.px(x, y);
            const int a = s[3];
            if (a == 0) continue;
            std::uint8_t* d = canvas.px(tx, ty);
            for (int c = 0; c < 3; ++c) {
                d[c] = static_cast<std::uint8_t>((s[c] * a + d[c] * (255 - a) + 127) / 255);
            }
        }
    }
}

Point sample_position(Rng& rng, int canvas_w, int canvas_h, bool grouped, Point bias_point,
                      double bias_strength) {
    if (!grouped) {
        return Point{static_cast<int>(rng.uniform_u32(static_cast<std::uint32_t>(canvas_w))),
                     static_cast<int>(rng.uniform_u32(static_cast<std::uint32_t>(canvas_h)))};
    }
    const long x = std::lround(rng.normal(bias_point.x, bias_strength));
    const long y = std::lround(rng.normal(bias_point.y, bias_strength));
    return Point{clampi(static_cast<int>(x), 0, canvas_w - 1),
                 clampi(static_cast<int>(y), 0, canvas_h - 1)};
}

void apply_noise(Image& image, const std::array<int, 3>& noise, Rng& rng) {
    if (noise[0] == 0 && noise[1] == 0 && noise[2] == 0) return;
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            std::uint8_t* p = image.px(x, y);
            for (int c = 0; c < 3; ++c) {
                const int d = rng.uniform_int(-noise[c], noise[c]);
                p[c] = clamp_u8(long(p[c]) + d);
            }
        }
    }
}

void apply_blur(Image& image, double sigma) {
    if (sigma <= 0.0 || image.empty()) return;
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double w = std::exp(-(double(i) * i) / (2.0 * sigma * sigma));
        kernel[static_cast<std::size_t>(i + radius)] = w;
        sum += w;
    }
    for (double& w : kernel) w /= sum;

    const int w = image.width();
    const int h = image.height();
    std::vector<float> mid(static_cast<std::size_t>(w) * h * 3);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc[3] = {0, 0, 0};
            for (int i = -radius; i <= radius; ++i) {
                const int sx = clampi(x + i, 0, w - 1);
                const std::uint8_t* p = image.px(sx, y);
                const double kw = kernel[static_cast<std::size_t>(i + radius)];
                acc[0] += kw * p[0];
                acc[1] += kw * p[1];
                acc[2] += kw * p[2];
            }
            float* m = &mid[(static_cast<std::size_t>(y) * w + x) * 3];
            m[0] = static_cast<float>(acc[0]);
            m[1] = static_cast<float>(acc[1]);
            m[2] = static_cast<float>(acc[2]);
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc[3] = {0, 0, 0};
            for (int i = -radius; i <= radius; ++i) {
                const int sy = clampi(y + i, 0, h - 1);
                const float* m = &mid[(static_cast<std::size_t>(sy) * w + x) * 3];
                const double kw = kernel[static_cast<std::size_t>(i + radius)];
                acc[0] += kw * m[0];
                acc[1] += kw * m[1];
                acc[2] += kw * m[2];
            }
            std::uint8_t* p = image.px(x, y);
            p[0] = clamp_u8(std::lround(acc[0]));
            p[1] = clamp_u8(std::lround(acc[1]));
            p[2] = clamp_u8(std::lround(acc[2]));
        }
    }
}

void apply_fog_of_war(Image& image, Rng& rng) {
    const int w = image.width();
    const int h = image.height();
    const std::uint32_t corner = rng.uniform_u32(4);
    const double cx = (corner & 1u) ? double(w) : 0.0;
    const double cy = (corner & 2u) ? double(h) : 0.0;
    const double a = rng.uniform_real(0.25 * w, 0.75 * w);
    const double b = rng.uniform_real(0.25 * h, 0.75 * h);
    for (int y = 0; y < h; ++y) {
        const double dy = (y + 0.5 - cy) / b;
        for (int x = 0; x < w; ++x) {
            const double dx = (x + 0.5 - cx) / a;
            if (dx * dx + dy * dy <= 1.0) continue;
            std::uint8_t* p = image.px(x, y);
            p[0] = clamp_u8(std::lround(p[0] * kFogDarkening));
            p[1] = clamp_u8(std::lround(p[1] * kFogDarkening));
            p[2] = clamp_u8(std::lround(p[2] * kFogDarkening));
        }
    }
}

void overlay_ui(Image& image, std::span<const Image> ui_sprites,
                std::span<const Sprite> cursor_sprites, Rng& rng, double overlay_chance,
                int cursor_min, int cursor_max) {
    if (!ui_sprites.empty()) {
        if (rng.bernoulli(overlay_chance)) {
            const Image& ui = ui_sprites[rng.uniform_u32(static_cast<std::uint32_t>(ui_sprites.size()))];
            blend_overlay(image, ui, (image.width() - ui.width()) / 2, image.height() - ui.height());
        }
    }
    if (!cursor_sprites.empty() && cursor_max > 0) {
        const int n = rng.uniform_int(cursor_min, cursor_max);
        for (int i = 0; i < n; ++i) {
            const Sprite& cur =
                cursor_sprites[rng.uniform_u32(static_cast<std::uint32_t>(cursor_sprites.size()))];
            const int x = static_cast<int>(rng.uniform_u32(static_cast<std::uint32_t>(image.width())));
            const int y = static_cast<int>(rng.uniform_u32(static_cast<std::uint32_t>(image.height())));
            add_object(image, cur.image, x, y);
        }
    }
}

LabelRecord label_from_box(int class_id, const RectI& box, int canvas_w, int canvas_h) {
    LabelRecord r;
    r.class_id = class_id;
    r.x_center = (box.x + box.w / 2.0) / canvas_w;
    r.y_center = (box.y + box.h / 2.0) / canvas_h;
    r.width = box.w / static_cast<double>(canvas_w);
    r.height = box.h / static_cast<double>(canvas_h);
    return r;
}

ComposeResult compose_scene(const SceneConfig& config, std::span<const SpritePool> pools,
                            std::span<const Image> ui_sprites,
                            std::span<const Sprite> cursor_sprites, const Image& background,
                            Rng& rng, int cursor_min, int cursor_max) {
    if (background.width() != config.output_width || background.height() != config.output_height) {
        throw std::invalid_argument("background dimensions do not match the configured output size");
    }
    ComposeResult result;
    result.image = background;
    const int w = config.output_width;
    const int h = config.output_height;

    const Point bias{static_cast<int>(rng.uniform_u32(static_cast<std::uint32_t>(w))),
                     static_cast<int>(rng.uniform_u32(static_cast<std::uint32_t>(h)))};
    const bool group_on = rng.bernoulli(config.group_chance);

    for (const SpritePool& pool : pools) {
        const PoolConfig& pc = pool.config;
        const int n = rng.uniform_int(pc.min_count, pc.max_count);
        if (n > 0 && pool.sprites.empty()) {
            throw EmptyPool("pool for class " + std::to_string(pc.class_id) + " has no sprites");
        }
        for (int i = 0; i < n; ++i) {
            const Sprite& sprite =
                pool.sprites[rng.uniform_u32(static_cast<std::uint32_t>(pool.sprites.size()))];
            const Point pos = sample_position(rng, w, h, pc.grouped && group_on, bias,
                                              config.bias_strength);
            const double scale = pc.base_scale + rng.uniform_real(-pc.max_scale, pc.max_scale);
            const double rotation =
                pc.base_rotation + rng.uniform_real(-pc.max_rotation, pc.max_rotation);

            const Image transformed =
                transform_sprite(sprite.image, scale, rotation, config.sampling_method);
            const BlitResult blit = add_object(result.image, transformed, pos.x, pos.y);
            if (blit.drawn()) {
                result.objects.push_back(
                    PlacedObject{pc.class_id, pos.x, pos.y, scale, rotation, blit.box});
                if (pc.labeled && blit.visible_fraction() >= config.min_visible_fraction) {
                    result.labels.push_back(label_from_box(pc.class_id, blit.box, w, h));
                }
            }
        }
    }

    overlay_ui(result.image, ui_sprites, cursor_sprites, rng, config.overlay_chance, cursor_min,
               cursor_max);
    if (rng.bernoulli(config.fog_of_war_chance)) apply_fog_of_war(result.image, rng);
    apply_noise(result.image, config.noise, rng);
    apply_blur(result.image, config.blur_strength);
    return result;
}

std::vector<Sprite> load_sprite_pool(const std::filesystem::path& dir, int class_id) {
    std::vector<Sprite> sprites;
    for (const auto& file : list_image_files(dir)) {
        Image img = load_image(file);
        if (content_bounds(img).empty()) continue;
        sprites.push_back(make_sprite(std::move(img), class_id));
    }
    return sprites;
}

LoadedAssets load_assets(const DatasetJob& job) {
    LoadedAssets assets;
    for (const PoolConfig& pc : job.scene.class_pools) {
        SpritePool pool;
        pool.config = pc;
        pool.sprites = load_sprite_pool(pc.sprite_dir, pc.class_id);
        if (pc.max_count > 0 && pool.sprites.empty()) {
            throw EmptyPool("sprite pool for class " + std::to_string(pc.class_id) +
                            " is empty: " + pc.sprite_dir);
        }
        assets.pools.push_back(std::move(pool));
    }

    for (const auto& file : list_image_files(job.backgrounds_dir)) {
        Image bg = load_image(file);
        if (bg.width() != job.scene.output_width || bg.height() != job.scene.output_height) {
            bg = resample(bg, job.scene.output_width, job.scene.output_height, Sampling::bilinear);
        }
        assets.backgrounds.push_back(std::move(bg));
    }
    if (assets.backgrounds.empty()) {
        throw NoBackgrounds("no usable background images in " + job.backgrounds_dir.string());
    }

    if (job.ui_dir) {
        for (const auto& file : list_image_files(*job.ui_dir)) {
            assets.ui.push_back(load_image(file));
        }
    }
    if (job.cursors_dir) {
        assets.cursors = load_sprite_pool(*job.cursors_dir, -1);
        if (job.cursor_max > 0 && assets.cursors.empty()) {
            throw EmptyPool("cursor pool is empty: " + job.cursors_dir->string());
        }
    } else if (job.cursor_max > 0) {
        throw EmptyPool("cursors requested but no cursor directory configured");
    }
    return assets;
}

std::string image_stem(const std::string& prefix, int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06d", index);
    return prefix + buf;
}

GenerateSummary generate_dataset(const DatasetJob& job) {
    return generate_dataset(job, load_assets(job));
}

GenerateSummary generate_dataset(const DatasetJob& job, const LoadedAssets& assets) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(job.output_dir, ec);
    if (ec) throw IoError("cannot create " + job.output_dir.string() + ": " + ec.message());

    const int total = job.scene.dataset_size;
    const std::string ext = "." + job.image_format;
    unsigned threads = job.jobs > 0 ? static_cast<unsigned>(job.jobs)
                                    : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, total > 0 ? static_cast<unsigned>(total) : 1u);

    std::atomic<int> next{0};
    std::mutex fail_mutex;
    std::exception_ptr failure;

    auto worker = [&] {
        try {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= total) return;
                {
                    std::lock_guard<std::mutex> lock(fail_mutex);
                    if (failure) return;
                }
                Rng rng = Rng::for_image(job.scene.seed, static_cast<std::uint64_t>(i));
                const Image& bg = assets.backgrounds[rng.uniform_u32(
                    static_cast<std::uint32_t>(assets.backgrounds.size()))];
                ComposeResult scene = compose_scene(job.scene, assets.pools, assets.ui,
                                                    assets.cursors, bg, rng, job.cursor_min,
                                                    job.cursor_max);
                const std::string stem = image_stem(job.prefix, i);
                save_image(job.output_dir / (stem + ext), scene.image, job.jpeg_quality);
                write_label_file(job.output_dir / (stem + ".txt"),
                                 LabelFile{std::move(scene.labels), stem});
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(fail_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return GenerateSummary{total, total};
}

}  // namespace sceneforge
