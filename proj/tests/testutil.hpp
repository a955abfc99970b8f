#pragma once

#include <atomic>
#include <filesystem>
#include <string>

#include "sceneforge/image.hpp"
#include "sceneforge/image_io.hpp"
#include "sceneforge/rng.hpp"

namespace testutil {

namespace fs = std::filesystem;

/// Unique directory under the system temp root, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        const fs::path base = fs::temp_directory_path() / "sceneforge_tests";
        fs::create_directories(base);
        path_ = base / ("t" + std::to_string(counter.fetch_add(1)) + "_" +
                        std::to_string(reinterpret_cast<std::uintptr_t>(this) & 0xffff));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

inline sceneforge::Image solid(int w, int h, sceneforge::Rgba color) {
    return sceneforge::Image(w, h, color);
}

/// Deterministic non-uniform background so blits and effects are detectable.
inline sceneforge::Image gradient(int w, int h) {
    sceneforge::Image img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            img.set(x, y,
                    sceneforge::Rgba{static_cast<std::uint8_t>((x * 7 + y * 13) & 0xff),
                                     static_cast<std::uint8_t>((x * 3 + y * 5 + 64) & 0xff),
                                     static_cast<std::uint8_t>((x + y * 2 + 128) & 0xff), 255});
        }
    }
    return img;
}

/// Random binary-alpha raster; roughly `fill_pct`% opaque.
inline sceneforge::Image random_mask(sceneforge::Rng& rng, int w, int h, int fill_pct) {
    sceneforge::Image img(w, h, sceneforge::Rgba{0, 0, 0, 0});
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (static_cast<int>(rng.uniform_u32(100)) < fill_pct) {
                img.set(x, y,
                        sceneforge::Rgba{static_cast<std::uint8_t>(rng.uniform_u32(256)),
                                         static_cast<std::uint8_t>(rng.uniform_u32(256)),
                                         static_cast<std::uint8_t>(rng.uniform_u32(256)), 255});
            }
        }
    }
    return img;
}

inline void write_pool(const fs::path& dir, int count, int w, int h, sceneforge::Rgba color) {
    fs::create_directories(dir);
    for (int i = 0; i < count; ++i) {
        sceneforge::save_image(dir / ("sprite_" + std::to_string(i) + ".png"), solid(w, h, color));
    }
}

inline void write_backgrounds(const fs::path& dir, int count, int w, int h) {
    fs::create_directories(dir);
    for (int i = 0; i < count; ++i) {
        sceneforge::Image bg = gradient(w, h);
        bg.px(0, 0)[0] = static_cast<std::uint8_t>(i);  // make each distinct
        sceneforge::save_image(dir / ("bg_" + std::to_string(i) + ".png"), bg);
    }
}

}  // namespace testutil
