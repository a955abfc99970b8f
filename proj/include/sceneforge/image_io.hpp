#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sceneforge/image.hpp"

namespace sceneforge {

/// True for the raster file extensions the toolkit reads (.png, .jpg,
/// .jpeg, .bmp; case-insensitive).
bool is_image_file(const std::filesystem::path& path);

/// Sorted list of image files directly inside dir. Throws IoError if dir
/// does not exist or is not a directory.
std::vector<std::filesystem::path> list_image_files(const std::filesystem::path& dir);

/// Decodes an image file to RGBA. Gray/RGB inputs get alpha 255.
Image load_image(const std::filesystem::path& path);

/// Encodes by extension. ".png" keeps the alpha channel when any pixel is
/// translucent, otherwise writes 24-bit. ".jpg"/".jpeg" writes at
/// jpeg_quality and drops alpha.
void save_image(const std::filesystem::path& path, const Image& img, int jpeg_quality = 90);

}  // namespace sceneforge
