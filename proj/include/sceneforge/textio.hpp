#pragma once

#include <filesystem>
#include <string>

namespace sceneforge {

/// Reads a whole file as bytes. Throws IoError.
std::string read_text_file(const std::filesystem::path& path);

/// Writes bytes, replacing any existing file. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sceneforge
