#pragma once

#include <filesystem>

#include "patternlens/tensor.hpp"

namespace patternlens {

// Bilinear resample with half-pixel centers (align_corners = false) and
// edge clamping. Same-size input is returned unchanged.
Image resize(const Image& img, int height, int width);

// PNG or JPEG to [0, 1] RGB via v / 255. Throws IoError.
Image load_image(const std::filesystem::path& path);

// Writes an 8-bit PNG (or any format OpenCV infers from the extension);
// values are rounded to the nearest of 256 levels.
void save_image(const Image& img, const std::filesystem::path& path);

}  // namespace patternlens
