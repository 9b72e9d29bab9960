#pragma once

#include <filesystem>
#include <string>

#include "artic/render.hpp"

namespace artic {

/// Encodes an 8-bit gray or RGBA image as a PNG (fixed compression
/// settings, so equal pixels give equal bytes).
std::string encode_png(const Image& image);

/// encode_png + atomic file write.
void save_png(const Image& image, const std::filesystem::path& path);

}  // namespace artic
