#pragma once

#include <algorithm>
#include <cstdint>

namespace sceneforge {

/// Integer pixel rectangle: x/y is the top-left corner, w/h the extent.
/// An empty rectangle has w == 0 or h == 0.
struct RectI {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    int right() const { return x + w; }
    int bottom() const { return y + h; }
    bool empty() const { return w <= 0 || h <= 0; }
    long long area() const { return static_cast<long long>(w) * h; }

    bool contains(int px, int py) const {
        return px >= x && px < right() && py >= y && py < bottom();
    }

    /// True if this rectangle lies fully inside [0,width)x[0,height).
    bool within(int width, int height) const {
        return x >= 0 && y >= 0 && right() <= width && bottom() <= height;
    }

    bool operator==(const RectI&) const = default;
};

inline RectI intersect(const RectI& a, const RectI& b) {
    const int x0 = std::max(a.x, b.x);
    const int y0 = std::max(a.y, b.y);
    const int x1 = std::min(a.right(), b.right());
    const int y1 = std::min(a.bottom(), b.bottom());
    if (x1 <= x0 || y1 <= y0) return RectI{};
    return RectI{x0, y0, x1 - x0, y1 - y0};
}

}  // namespace sceneforge
