#pragma once

#include <filesystem>
#include <string>

#include "snapcube/image.hpp"

namespace snapcube {

// Reads an 8- or 16-bit PNG (grayscale or RGB; palette expanded, alpha
// dropped) into [0,1] floats.
Image read_png(const std::filesystem::path& path);

// Writes grayscale or RGB at the requested bit depth (8 or 16).
void write_png(const Image& img, const std::filesystem::path& path, int bit_depth = 8);

// read_png + first channel + threshold at 0.5 -> strict {0,1} mask.
Image read_mask_png(const std::filesystem::path& path);

// 32-bit little-endian float raster with a JSON sidecar ({"width","height"})
// at <path>.json. Used for saliency maps.
Image read_raw_float(const std::filesystem::path& path);
void write_raw_float(const Image& img, const std::filesystem::path& path);

}  // namespace snapcube
