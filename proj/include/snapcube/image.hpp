#pragma once

#include <cstdint>
#include <vector>

#include "snapcube/errors.hpp"

namespace snapcube {

// Row-major raster with interleaved channels. Panoramas keep values in
// [0, 1]; saliency maps may hold arbitrary finite scalars.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<float> pixels;

    Image() = default;
    Image(int w, int h, int c, float fill = 0.0f);

    float at(int x, int y, int c = 0) const {
        return pixels[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    float& at(int x, int y, int c = 0) {
        return pixels[(static_cast<size_t>(y) * width + x) * channels + c];
    }

    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
    bool is_binary() const;
};

// Checks the 2:1 equirectangular contract (W == 2H, finite values in [0,1]).
void require_equirect(const Image& img);

// Checks a strictly {0,1} single-channel mask matching equirect dimensions.
void require_binary_mask(const Image& mask);

}  // namespace snapcube
