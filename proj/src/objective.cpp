#include "snapcube/objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace snapcube {

DenominatorMode denominator_mode_from_name(const std::string& name) {
    if (name == "band-occupancy") return DenominatorMode::BandOccupancy;
    if (name == "whole-face") return DenominatorMode::WholeFace;
    if (name == "foreground-normalized") return DenominatorMode::ForegroundNormalized;
    throw ConfigError("unknown denominator mode: " + name);
}

const char* denominator_mode_name(DenominatorMode mode) {
    switch (mode) {
        case DenominatorMode::BandOccupancy: return "band-occupancy";
        case DenominatorMode::WholeFace: return "whole-face";
        case DenominatorMode::ForegroundNormalized: return "foreground-normalized";
    }
    return "?";
}

int band_margin_pixels(int face_size, const ObjectiveConfig& cfg) {
    if (!(cfg.margin_frac > 0.0 && cfg.margin_frac < 0.5)) {
        throw ConfigError("margin fraction must lie in (0, 0.5)");
    }
    if (cfg.penalized_edges == 0) throw ConfigError("at least one penalized edge required");
    int m = static_cast<int>(std::floor(cfg.margin_frac * face_size));
    if (m < 1) {
        throw ConfigError("margin rounds to zero pixels at face size " +
                          std::to_string(face_size));
    }
    return m;
}

std::vector<uint8_t> band_mask(int face_size, const ObjectiveConfig& cfg) {
    const int m = band_margin_pixels(face_size, cfg);
    std::vector<uint8_t> mask(static_cast<size_t>(face_size) * face_size, 0);
    for (int y = 0; y < face_size; ++y) {
        for (int x = 0; x < face_size; ++x) {
            bool in = ((cfg.penalized_edges & kEdgeLeft) && x < m) ||
                      ((cfg.penalized_edges & kEdgeRight) && x >= face_size - m) ||
                      ((cfg.penalized_edges & kEdgeTop) && y < m) ||
                      ((cfg.penalized_edges & kEdgeBottom) && y >= face_size - m);
            mask[static_cast<size_t>(y) * face_size + x] = in ? 1 : 0;
        }
    }
    return mask;
}

double disruption_score(const ForegroundCubemap& fg, const ObjectiveConfig& cfg) {
    const int w = fg.face_size;
    const std::vector<uint8_t> band = band_mask(w, cfg);
    const size_t count = band.size();

    std::array<long, 4> band_fg{};  // |FG n band| per face
    std::array<long, 4> fg_total{};
    for (int f = 0; f < 4; ++f) {
        const uint8_t* face = fg.faces[static_cast<size_t>(f)].data();
        long in_band = 0, total = 0;
        for (size_t i = 0; i < count; ++i) {
            total += face[i];
            in_band += static_cast<long>(face[i]) & band[i];
        }
        band_fg[static_cast<size_t>(f)] = in_band;
        fg_total[static_cast<size_t>(f)] = total;
    }

    if (cfg.mode == DenominatorMode::ForegroundNormalized) {
        std::array<double, 4> scores{};
        for (int f = 0; f < 4; ++f) {
            long denom = std::max(fg_total[static_cast<size_t>(f)], 1L);
            scores[static_cast<size_t>(f)] =
                static_cast<double>(band_fg[static_cast<size_t>(f)]) / denom;
        }
        // sorted sum keeps the mean invariant under face permutations
        std::sort(scores.begin(), scores.end());
        return (scores[0] + scores[1] + scores[2] + scores[3]) / 4.0;
    }

    long band_size = 0;
    for (uint8_t b : band) band_size += b;
    const double denom = cfg.mode == DenominatorMode::BandOccupancy
                             ? static_cast<double>(band_size)
                             : static_cast<double>(count);
    long total_in_band = band_fg[0] + band_fg[1] + band_fg[2] + band_fg[3];
    return static_cast<double>(total_in_band) / (4.0 * denom);
}

std::array<double, 4> per_face_disruption(const ForegroundCubemap& fg,
                                          const ObjectiveConfig& cfg) {
    const std::vector<uint8_t> band = band_mask(fg.face_size, cfg);
    long band_size = 0;
    for (uint8_t b : band) band_size += b;
    std::array<double, 4> out{};
    for (int f = 0; f < 4; ++f) {
        const uint8_t* face = fg.faces[static_cast<size_t>(f)].data();
        long in_band = 0, total = 0;
        for (size_t i = 0; i < band.size(); ++i) {
            total += face[i];
            in_band += static_cast<long>(face[i]) & band[i];
        }
        double denom;
        switch (cfg.mode) {
            case DenominatorMode::BandOccupancy: denom = static_cast<double>(band_size); break;
            case DenominatorMode::WholeFace: denom = static_cast<double>(band.size()); break;
            default: denom = static_cast<double>(std::max(total, 1L)); break;
        }
        out[static_cast<size_t>(f)] = static_cast<double>(in_band) / denom;
    }
    return out;
}

ForegroundCubemap fg_for_angle(const CubemapSampler& sampler, const Image& mask,
                               const SnapAngle& angle) {
    require_binary_mask(mask);
    ForegroundCubemap fg;
    fg.face_size = sampler.face_size();
    fg.angle = angle;
    fg.faces = sampler.project_lateral_binary(mask, angle);
    return fg;
}

ForegroundCubemap fg_for_angle(const Image& mask, const SnapAngle& angle, int face_size) {
    return fg_for_angle(CubemapSampler(face_size), mask, angle);
}

}  // namespace snapcube
