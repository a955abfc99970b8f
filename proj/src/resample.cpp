#include "sceneforge/resample.hpp"

#include <cmath>
#include <stdexcept>

namespace sceneforge {

namespace {

constexpr double kPi = 3.14159265358979323846;

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

inline std::uint8_t to_u8(double v) {
    const long r = std::lround(v);
    return static_cast<std::uint8_t>(r < 0 ? 0 : (r > 255 ? 255 : r));
}

/// Alpha-premultiplied accumulator: colors are weighted by alpha so
/// transparent neighbors contribute no color of their own.
struct Acc {
    double r = 0, g = 0, b = 0, a = 0;

    void tap(const Image& img, int x, int y, double w) {
        const std::uint8_t* p = img.px(x, y);
        const double wa = w * p[3];
        a += wa;
        r += wa * p[0];
        g += wa * p[1];
        b += wa * p[2];
    }

    Rgba resolve() const {
        if (a <= 1e-9) return Rgba{0, 0, 0, 0};
        return Rgba{to_u8(r / a), to_u8(g / a), to_u8(b / a), to_u8(a)};
    }
};

// Catmull-Rom weights for taps at offsets -1, 0, 1, 2.
inline void catmull_rom(double t, double w[4]) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    w[0] = 0.5 * (-t3 + 2.0 * t2 - t);
    w[1] = 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0);
    w[2] = 0.5 * (-3.0 * t3 + 4.0 * t2 + t);
    w[3] = 0.5 * (t3 - t2);
}

/// clamp_borders: out-of-range taps are clamped to the border (scaling);
/// otherwise they are treated as fully transparent (rotation).
Rgba sample_at(const Image& src, double sx, double sy, Sampling method, bool clamp_borders) {
    const int w = src.width();
    const int h = src.height();

    switch (method) {
        case Sampling::nearest: {
            int ix = static_cast<int>(std::floor(sx + 0.5));
            int iy = static_cast<int>(std::floor(sy + 0.5));
            if (clamp_borders) {
                ix = clampi(ix, 0, w - 1);
                iy = clampi(iy, 0, h - 1);
            } else if (ix < 0 || ix >= w || iy < 0 || iy >= h) {
                return Rgba{0, 0, 0, 0};
            }
            return src.at(ix, iy);
        }
        case Sampling::bilinear: {
            const int x0 = static_cast<int>(std::floor(sx));
            const int y0 = static_cast<int>(std::floor(sy));
            const double fx = sx - x0;
            const double fy = sy - y0;
            const double wx[2] = {1.0 - fx, fx};
            const double wy[2] = {1.0 - fy, fy};
            Acc acc;
            for (int j = 0; j < 2; ++j) {
                for (int i = 0; i < 2; ++i) {
                    const double wgt = wx[i] * wy[j];
                    if (wgt == 0.0) continue;
                    int tx = x0 + i;
                    int ty = y0 + j;
                    if (clamp_borders) {
                        tx = clampi(tx, 0, w - 1);
                        ty = clampi(ty, 0, h - 1);
                    } else if (tx < 0 || tx >= w || ty < 0 || ty >= h) {
                        continue;
                    }
                    acc.tap(src, tx, ty, wgt);
                }
            }
            return acc.resolve();
        }
        case Sampling::bicubic: {
            const int x0 = static_cast<int>(std::floor(sx));
            const int y0 = static_cast<int>(std::floor(sy));
            double wx[4], wy[4];
            catmull_rom(sx - x0, wx);
            catmull_rom(sy - y0, wy);
            Acc acc;
            for (int j = 0; j < 4; ++j) {
                for (int i = 0; i < 4; ++i) {
                    const double wgt = wx[i] * wy[j];
                    if (wgt == 0.0) continue;
                    int tx = x0 - 1 + i;
                    int ty = y0 - 1 + j;
                    if (clamp_borders) {
                        tx = clampi(tx, 0, w - 1);
                        ty = clampi(ty, 0, h - 1);
                    } else if (tx < 0 || tx >= w || ty < 0 || ty >= h) {
                        continue;
                    }
                    acc.tap(src, tx, ty, wgt);
                }
            }
            return acc.resolve();
        }
    }
    return Rgba{0, 0, 0, 0};
}

Image rotate_quarter(const Image& src, int k) {
    const int sw = src.width();
    const int sh = src.height();
    switch (k) {
        case 0:
            return src;
        case 1: {
            Image out(sh, sw, Rgba{0, 0, 0, 0});
            for (int y = 0; y < sw; ++y)
                for (int x = 0; x < sh; ++x) out.set(x, y, src.at(y, sh - 1 - x));
            return out;
        }
        case 2: {
            Image out(sw, sh, Rgba{0, 0, 0, 0});
            for (int y = 0; y < sh; ++y)
                for (int x = 0; x < sw; ++x) out.set(x, y, src.at(sw - 1 - x, sh - 1 - y));
            return out;
        }
        default: {
            Image out(sh, sw, Rgba{0, 0, 0, 0});
            for (int y = 0; y < sw; ++y)
                for (int x = 0; x < sh; ++x) out.set(x, y, src.at(sw - 1 - y, x));
            return out;
        }
    }
}

}  // namespace

double normalize_degrees(double degrees) {
    double d = std::fmod(degrees, 360.0);
    if (d < 0.0) d += 360.0;
    if (d >= 360.0) d = 0.0;
    return d;
}

int quarter_turns(double normalized_deg) {
    const long long k = std::llround(normalized_deg / 90.0);
    if (std::abs(normalized_deg - 90.0 * static_cast<double>(k)) < 1e-9) {
        return static_cast<int>(k % 4);
    }
    return -1;
}

Sampling sampling_from_string(const std::string& name) {
    if (name == "nearest") return Sampling::nearest;
    if (name == "bilinear") return Sampling::bilinear;
    if (name == "bicubic") return Sampling::bicubic;
    throw std::invalid_argument("unknown sampling method: " + name);
}

std::string to_string(Sampling method) {
    switch (method) {
        case Sampling::nearest: return "nearest";
        case Sampling::bilinear: return "bilinear";
        case Sampling::bicubic: return "bicubic";
    }
    return "bilinear";
}

Image resample(const Image& src, int out_w, int out_h, Sampling method) {
    if (src.empty()) throw std::invalid_argument("resample: empty source");
    if (out_w < 1 || out_h < 1) throw std::invalid_argument("resample: output must be at least 1x1");
    if (out_w == src.width() && out_h == src.height()) return src;

    Image out(out_w, out_h, Rgba{0, 0, 0, 0});
    const double rx = static_cast<double>(src.width()) / out_w;
    const double ry = static_cast<double>(src.height()) / out_h;
    for (int y = 0; y < out_h; ++y) {
        const double sy = (y + 0.5) * ry - 0.5;
        for (int x = 0; x < out_w; ++x) {
            const double sx = (x + 0.5) * rx - 0.5;
            out.set(x, y, sample_at(src, sx, sy, method, /*clamp_borders=*/true));
        }
    }
    return out;
}

Image rotate_image(const Image& src, double degrees, Sampling method) {
    if (src.empty()) throw std::invalid_argument("rotate_image: empty source");
    const double d = normalize_degrees(degrees);
    const int quarter = quarter_turns(d);
    if (quarter >= 0) return rotate_quarter(src, quarter);

    const double rad = d * kPi / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    const int sw = src.width();
    const int sh = src.height();
    const int ow = std::max(1, static_cast<int>(std::ceil(sw * std::abs(c) + sh * std::abs(s) - 1e-9)));
    const int oh = std::max(1, static_cast<int>(std::ceil(sw * std::abs(s) + sh * std::abs(c) - 1e-9)));

    Image out(ow, oh, Rgba{0, 0, 0, 0});
    const double ocx = ow / 2.0;
    const double ocy = oh / 2.0;
    const double scx = sw / 2.0;
    const double scy = sh / 2.0;
    for (int y = 0; y < oh; ++y) {
        const double v = y + 0.5 - ocy;
        for (int x = 0; x < ow; ++x) {
            const double u = x + 0.5 - ocx;
            const double sx = c * u + s * v + scx - 0.5;
            const double sy = -s * u + c * v + scy - 0.5;
            out.set(x, y, sample_at(src, sx, sy, method, /*clamp_borders=*/false));
        }
    }
    return out;
}

}  // namespace sceneforge
