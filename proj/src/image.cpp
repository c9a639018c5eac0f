#include "snapcube/image.hpp"

#include <cmath>
#include <string>

namespace snapcube {

Image::Image(int w, int h, int c, float fill)
    : width(w), height(h), channels(c),
      pixels(static_cast<size_t>(w) * h * c, fill) {
    if (w <= 0 || h <= 0 || (c != 1 && c != 3)) {
        throw ConfigError("bad image shape " + std::to_string(w) + "x" +
                          std::to_string(h) + "x" + std::to_string(c));
    }
}

bool Image::is_binary() const {
    for (float v : pixels) {
        if (v != 0.0f && v != 1.0f) return false;
    }
    return true;
}

void require_equirect(const Image& img) {
    if (img.width <= 0 || img.height <= 0 || img.width != 2 * img.height) {
        throw ConfigError("equirectangular image must be 2:1, got " +
                          std::to_string(img.width) + "x" + std::to_string(img.height));
    }
    for (float v : img.pixels) {
        if (!std::isfinite(v) || v < 0.0f || v > 1.0f) {
            throw NumericError("panorama pixel out of [0,1]");
        }
    }
}

void require_binary_mask(const Image& mask) {
    if (mask.channels != 1) throw ConfigError("mask must be single-channel");
    if (mask.width != 2 * mask.height) {
        throw ConfigError("mask must be 2:1 equirectangular");
    }
    if (!mask.is_binary()) throw NumericError("mask is not binary");
}

}  // namespace snapcube
