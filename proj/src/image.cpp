#include "sceneforge/image.hpp"

namespace sceneforge {

RectI content_bounds(const Image& img) {
    int min_x = img.width(), min_y = img.height();
    int max_x = -1, max_y = -1;
    for (int y = 0; y < img.height(); ++y) {
        const std::uint8_t* row = img.px(0, y);
        for (int x = 0; x < img.width(); ++x) {
            if (row[x * 4 + 3] > 0) {
                min_x = std::min(min_x, x);
                min_y = std::min(min_y, y);
                max_x = std::max(max_x, x);
                max_y = std::max(max_y, y);
            }
        }
    }
    if (max_x < 0) return RectI{};
    return RectI{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
}

long long opaque_pixel_count(const Image& img) {
    long long n = 0;
    const auto& d = img.data();
    for (std::size_t i = 3; i < d.size(); i += 4) {
        if (d[i] > 0) ++n;
    }
    return n;
}

}  // namespace sceneforge
