#pragma once

#include <filesystem>

#include "segmetrics/imgcore.hpp"

namespace segmetrics {

/// PNG (any bit depth/colour type) or JPEG; nonzero gray level = foreground.
BinaryMask read_mask(const std::filesystem::path& path);

/// 8-bit gray PNG, foreground written as 255. Written via a temporary file
/// and renamed into place.
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask);

/// PNG or JPEG (detected by signature), promoted to three channels.
RasterImage read_image(const std::filesystem::path& path);

/// 8-bit gray or RGB PNG; intensities rounded and clamped to [0,255].
void write_image_png(const std::filesystem::path& path, const RasterImage& image);

/// Attention map from a gray PNG (rescaled to [0,1]) or a CSV grid
/// (comma/whitespace separated, one row per line).
Plane<double> read_attention_map(const std::filesystem::path& path);

}  // namespace segmetrics
