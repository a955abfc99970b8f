#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "sceneforge/geometry.hpp"

namespace sceneforge {

struct Rgba {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    std::uint8_t a = 255;

    bool operator==(const Rgba&) const = default;
};

/// 8-bit RGBA raster, row-major, 4 bytes per pixel. Images loaded from
/// RGB files get alpha 255 everywhere.
class Image {
public:
    Image() = default;
    Image(int width, int height, Rgba fill = Rgba{0, 0, 0, 255})
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(width) * height * 4) {
        assert(width >= 0 && height >= 0);
        for (std::size_t i = 0; i < data_.size(); i += 4) {
            data_[i] = fill.r;
            data_[i + 1] = fill.g;
            data_[i + 2] = fill.b;
            data_[i + 3] = fill.a;
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return width_ == 0 || height_ == 0; }
    long long pixel_count() const { return static_cast<long long>(width_) * height_; }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    std::uint8_t* px(int x, int y) {
        assert(in_bounds(x, y));
        return data_.data() + (static_cast<std::size_t>(y) * width_ + x) * 4;
    }
    const std::uint8_t* px(int x, int y) const {
        assert(in_bounds(x, y));
        return data_.data() + (static_cast<std::size_t>(y) * width_ + x) * 4;
    }

    Rgba at(int x, int y) const {
        const std::uint8_t* p = px(x, y);
        return Rgba{p[0], p[1], p[2], p[3]};
    }
    void set(int x, int y, Rgba c) {
        std::uint8_t* p = px(x, y);
        p[0] = c.r;
        p[1] = c.g;
        p[2] = c.b;
        p[3] = c.a;
    }

    std::uint8_t alpha(int x, int y) const { return px(x, y)[3]; }

    std::vector<std::uint8_t>& data() { return data_; }
    const std::vector<std::uint8_t>& data() const { return data_; }

    bool operator==(const Image&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Tight bounding rectangle of pixels with alpha > 0. Empty rect if none.
RectI content_bounds(const Image& img);

/// Number of pixels with alpha > 0.
long long opaque_pixel_count(const Image& img);

}  // namespace sceneforge
