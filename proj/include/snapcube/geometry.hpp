#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "snapcube/angles.hpp"
#include "snapcube/image.hpp"

namespace snapcube {

// Lateral faces come first, in increasing longitude at theta = 0:
// front (lon 0), right (pi/2), back (pi), left (-pi/2).
enum class Face { Front = 0, Right = 1, Back = 2, Left = 3, Top = 4, Bottom = 5 };

inline constexpr std::array<const char*, 6> kFaceNames = {"front", "right", "back",
                                                          "left",  "top",   "bottom"};

Face face_from_name(const std::string& name);

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

// Unit direction for normalized face coordinates u, v in [0, 1)
// (u rightward, v downward; pixel centers at (i + 0.5) / W_c).
// Conventions: front center -> (lat 0, lon 0); right center -> lon pi/2;
// top center -> lat pi/2.
Vec3 face_ray(Face face, double u, double v);

// Inverse of spherical_to_dir; throws NumericError on a near-zero vector.
// lon = 0 at the poles.
SphericalCoord dir_to_spherical(const Vec3& d);
Vec3 spherical_to_dir(const SphericalCoord& c);

// Which face a direction lands on (dominant axis).
Face face_of_direction(const Vec3& d);

// Bilinear lookup in an equirectangular image: longitude wraps across the
// +-pi seam, latitude clamps at the poles. Pixel centers are registered at
// lon = -pi + (x + 0.5) * 2pi/W, lat = pi/2 - (y + 0.5) * pi/H.
float sample_equirect(const Image& img, const SphericalCoord& c, int channel = 0);
float sample_equirect_nearest(const Image& img, const SphericalCoord& c, int channel = 0);

struct Cubemap {
    int face_size = 0;
    SnapAngle source_angle;
    std::array<Image, 6> faces;  // indexed by Face

    const Image& face(Face f) const { return faces[static_cast<size_t>(f)]; }
    Image& face(Face f) { return faces[static_cast<size_t>(f)]; }
};

// Precomputes per-pixel view rays for a face size so repeated projections of
// the same geometry only pay for the image lookups. The cube is rotated by
// +theta: a face ray at longitude psi samples the panorama at psi + theta.
// For grid-valued angles the per-face rotation is derived from the integer
// (face * n + k) mod 4n, which makes the pi/2 lateral-face permutation
// bitwise exact.
class CubemapSampler {
public:
    explicit CubemapSampler(int face_size);

    int face_size() const { return w_; }

    Cubemap project(const Image& img, const SnapAngle& angle) const;
    Cubemap project_binary(const Image& mask, const SnapAngle& angle) const;

    // Just the four lateral faces as {0,1} bytes, nearest-sampled.
    std::array<std::vector<uint8_t>, 4> project_lateral_binary(const Image& mask,
                                                               const SnapAngle& angle) const;

private:
    int w_ = 0;
    std::vector<double> lateral_lat_, lateral_lon_;  // front-face frame, shared by all laterals
    std::vector<double> top_lat_, top_lon_;
    std::vector<double> bottom_lat_, bottom_lon_;

    double rotation_for(int face_cycle, const SnapAngle& angle) const;
};

// One-shot conveniences; face_size must be at least 8 and the panorama a
// valid 2:1 equirect.
Cubemap project_cubemap(const Image& img, const SnapAngle& angle, int face_size);
Cubemap project_mask(const Image& mask, const SnapAngle& angle, int face_size);

// Re-renders a cubemap back to an equirectangular image (bilinear within
// each face, clamped at face edges).
Image cubemap_to_equirect(const Cubemap& cm, int width, int height);

// 4x3 cross composite: top above front, bottom below, laterals in a strip
// (left, front, right, back).
Image cross_layout(const Cubemap& cm);

}  // namespace snapcube
