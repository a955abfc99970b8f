#include "sceneforge/sprite_extract.hpp"

#include <cstdlib>
#include <vector>

#include "sceneforge/errors.hpp"
#include "sceneforge/image_io.hpp"

namespace sceneforge {

Sprite make_sprite(Image image, int class_id) {
    RectI box = content_bounds(image);
    if (box.empty()) throw EmptyContent("sprite has no alpha > 0 pixels");
    return Sprite{std::move(image), class_id, box};
}

Image chroma_key_mask(const Image& frame, const KeyParams& params) {
    if (params.area) {
        if (!params.area->within(frame.width(), frame.height())) {
            throw AreaOutOfBounds("key area does not fit inside the frame");
        }
    }
    Image out = frame;
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) {
            std::uint8_t* p = out.px(x, y);
            if (params.area && !params.area->contains(x, y)) {
                p[3] = 0;
                continue;
            }
            const bool keyed = std::abs(int(p[0]) - int(params.background_color[0])) <= params.tolerance[0] &&
                               std::abs(int(p[1]) - int(params.background_color[1])) <= params.tolerance[1] &&
                               std::abs(int(p[2]) - int(params.background_color[2])) <= params.tolerance[2];
            p[3] = keyed ? 0 : 255;
        }
    }
    return out;
}

Cropped crop_to_content(const Image& raster) {
    const RectI box = content_bounds(raster);
    if (box.empty()) throw EmptyContent("crop_to_content: raster is fully transparent");
    Image out(box.w, box.h);
    for (int y = 0; y < box.h; ++y) {
        for (int x = 0; x < box.w; ++x) {
            out.set(x, y, raster.at(box.x + x, box.y + y));
        }
    }
    return Cropped{std::move(out), box.x, box.y};
}

Image erode_outline(const Image& raster, int layers) {
    Image out = raster;
    const int w = out.width();
    const int h = out.height();
    auto opaque = [&](const std::vector<std::uint8_t>& a, int x, int y) {
        return x >= 0 && x < w && y >= 0 && y < h && a[std::size_t(y) * w + x] > 0;
    };
    std::vector<std::uint8_t> alpha(std::size_t(w) * h);
    for (int pass = 0; pass < layers; ++pass) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) alpha[std::size_t(y) * w + x] = out.alpha(x, y);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (alpha[std::size_t(y) * w + x] == 0) continue;
                const bool keep = opaque(alpha, x - 1, y) && opaque(alpha, x + 1, y) &&
                                  opaque(alpha, x, y - 1) && opaque(alpha, x, y + 1);
                if (!keep) out.px(x, y)[3] = 0;
            }
        }
    }
    return out;
}

Image dilate_outline(const Image& raster, int layers, Rgba color) {
    if (layers <= 0) return raster;
    const int w = raster.width() + 2 * layers;
    const int h = raster.height() + 2 * layers;
    Image out(w, h, Rgba{0, 0, 0, 0});
    for (int y = 0; y < raster.height(); ++y)
        for (int x = 0; x < raster.width(); ++x) out.set(x + layers, y + layers, raster.at(x, y));

    std::vector<std::uint8_t> alpha(std::size_t(w) * h);
    auto opaque = [&](int x, int y) {
        return x >= 0 && x < w && y >= 0 && y < h && alpha[std::size_t(y) * w + x] > 0;
    };
    for (int pass = 0; pass < layers; ++pass) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) alpha[std::size_t(y) * w + x] = out.alpha(x, y);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (alpha[std::size_t(y) * w + x] > 0) continue;
                if (opaque(x - 1, y) || opaque(x + 1, y) || opaque(x, y - 1) || opaque(x, y + 1)) {
                    out.set(x, y, color);
                }
            }
        }
    }
    return out;
}

ExtractStats extract_sprites(const std::filesystem::path& input_dir, const KeyParams& params,
                             int class_id, const std::filesystem::path& output_dir,
                             const std::string& name_prefix) {
    const auto files = list_image_files(input_dir);
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec) throw IoError("cannot create " + output_dir.string() + ": " + ec.message());

    const std::string prefix = name_prefix.empty() ? std::to_string(class_id) + "_" : name_prefix;
    ExtractStats stats;
    for (const auto& file : files) {
        Image masked = chroma_key_mask(load_image(file), params);
        if (params.remove_outline > 0) masked = erode_outline(masked, params.remove_outline);
        if (content_bounds(masked).empty()) {
            ++stats.skipped_empty;
            continue;
        }
        Cropped cropped = crop_to_content(masked);
        save_image(output_dir / (prefix + file.stem().string() + ".png"), cropped.image);
        ++stats.written;
    }
    return stats;
}

}  // namespace sceneforge
