#pragma once

#include <cmath>
#include <vector>

#include "snapcube/errors.hpp"

namespace snapcube {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kHalfPi = 0.5 * kPi;

// Wraps into [-pi, pi).
double wrap_longitude(double lon);

// Wraps into [0, period).
double wrap_periodic(double a, double period);

// Latitude/longitude on the unit sphere. Longitude is stored wrapped into
// [-pi, pi); latitude must lie in [-pi/2, pi/2].
struct SphericalCoord {
    double lat = 0.0;
    double lon = 0.0;
};

SphericalCoord make_spherical(double lat, double lon);

// The azimuth coordinate transform: (lat, lon) -> (lat, lon - theta).
SphericalCoord rotate_coords(const SphericalCoord& c, double theta);

// An azimuth rotation of the cube. Snap angles produced by searches are
// canonical (theta in [0, pi/2), grid_index in [0, n)); raw angles used as
// rotation probes may lie outside that range and carry grid_index beyond n,
// with theta == grid_index * (pi/2) / grid_n still holding.
struct SnapAngle {
    double theta = 0.0;
    int grid_index = -1;  // -1 when not grid-valued
    int grid_n = 0;

    bool on_grid() const { return grid_index >= 0 && grid_n > 0; }

    static SnapAngle from_radians(double theta);
    static SnapAngle from_grid(int k, int n);

    // Wraps theta into [0, pi/2) (grid index into [0, n) when set).
    SnapAngle canonical() const;
};

// The uniform azimuth candidate grid theta_k = k * (pi/2) / n, k = 0..n-1.
struct AngleGrid {
    int n = 20;

    explicit AngleGrid(int n_candidates = 20);

    SnapAngle at(int k) const;
    std::vector<SnapAngle> candidates() const;

    // Nearest candidate to an arbitrary angle, distance taken modulo pi/2.
    SnapAngle nearest(double theta) const;
};

}  // namespace snapcube
