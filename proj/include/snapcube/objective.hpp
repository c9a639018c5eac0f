#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "snapcube/geometry.hpp"

namespace snapcube {

enum class DenominatorMode { BandOccupancy, WholeFace, ForegroundNormalized };

DenominatorMode denominator_mode_from_name(const std::string& name);
const char* denominator_mode_name(DenominatorMode mode);

enum EdgeBit : unsigned {
    kEdgeLeft = 1u,
    kEdgeRight = 2u,
    kEdgeTop = 4u,
    kEdgeBottom = 8u,
};

// The disruption objective. The bottom edge is not penalized by default.
struct ObjectiveConfig {
    double margin_frac = 0.0625;
    DenominatorMode mode = DenominatorMode::BandOccupancy;
    unsigned penalized_edges = kEdgeLeft | kEdgeRight | kEdgeTop;
};

int band_margin_pixels(int face_size, const ObjectiveConfig& cfg);

// 1 where the pixel lies within floor(margin_frac * W_c) pixels of a
// penalized edge. With the default edges the band holds 3mW - 2m^2 pixels.
std::vector<uint8_t> band_mask(int face_size, const ObjectiveConfig& cfg);

// The four lateral foreground maps the objective (and the policy network)
// consume.
struct ForegroundCubemap {
    int face_size = 0;
    SnapAngle angle;
    std::array<std::vector<uint8_t>, 4> faces;  // front, right, back, left
};

// Mean over the four lateral faces of |FG n band| / denominator. The mean is
// permutation-invariant so a pi/2 rotation scores identically.
double disruption_score(const ForegroundCubemap& fg, const ObjectiveConfig& cfg);

// The raw per-face fractions in front/right/back/left order.
std::array<double, 4> per_face_disruption(const ForegroundCubemap& fg,
                                          const ObjectiveConfig& cfg);

ForegroundCubemap fg_for_angle(const CubemapSampler& sampler, const Image& mask,
                               const SnapAngle& angle);
ForegroundCubemap fg_for_angle(const Image& mask, const SnapAngle& angle, int face_size);

}  // namespace snapcube
