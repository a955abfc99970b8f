#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "sceneforge/image.hpp"

namespace sceneforge {

/// Chroma-key parameters for turning unicolor-background frames into
/// transparency-masked sprites.
struct KeyParams {
    std::array<std::uint8_t, 3> background_color{0, 255, 0};
    std::array<int, 3> tolerance{0, 0, 0};  // per-channel absolute difference, 0..255
    std::optional<RectI> area;              // content region; outside is forced transparent
    int remove_outline = 0;                 // erosion layers applied after keying
};

/// A cropped object raster with transparency. content_box is always the
/// tight bounding rectangle of alpha > 0 pixels and never empty.
struct Sprite {
    Image image;
    int class_id = 0;
    RectI content_box;
};

/// Builds a Sprite, computing the tight content box.
/// Throws EmptyContent when no pixel has alpha > 0.
Sprite make_sprite(Image image, int class_id);

/// Keys out the background color: alpha becomes 0 exactly when every
/// channel is within its tolerance of the background, 255 otherwise
/// (binary mask, colors preserved). Pixels outside params.area, when set,
/// are forced transparent. Throws AreaOutOfBounds if the area does not
/// fit inside the frame.
Image chroma_key_mask(const Image& frame, const KeyParams& params);

struct Cropped {
    Image image;
    int offset_x = 0;
    int offset_y = 0;
};

/// Crops to the tight alpha > 0 bounding rectangle; offset is the crop's
/// top-left position in the input. Throws EmptyContent when the raster is
/// fully transparent.
Cropped crop_to_content(const Image& raster);

/// Erodes the alpha mask `layers` times under 4-neighborhood adjacency:
/// a pixel stays opaque only if it and all 4 neighbors were opaque
/// (outside the raster counts as transparent). Colors are untouched. The
/// result may be fully transparent.
Image erode_outline(const Image& raster, int layers);

/// Grows the opaque region `layers` times: each pass, transparent pixels
/// 4-adjacent to an alpha > 0 pixel become `color`. The raster is padded
/// by `layers` on each side first so growth is never clipped.
Image dilate_outline(const Image& raster, int layers, Rgba color);

struct ExtractStats {
    int written = 0;
    int skipped_empty = 0;  // frames whose mask had no content
};

/// Batch driver: for every image in input_dir applies
/// chroma_key_mask -> erode_outline(params.remove_outline) -> crop_to_content
/// and writes the result as a PNG named "<name_prefix><source stem>.png"
/// into output_dir. name_prefix defaults to "<class_id>_". Frames whose
/// mask comes out empty are skipped and counted. Throws IoError on
/// unreadable/unwritable paths.
ExtractStats extract_sprites(const std::filesystem::path& input_dir,
                             const KeyParams& params, int class_id,
                             const std::filesystem::path& output_dir,
                             const std::string& name_prefix = "");

}  // namespace sceneforge
