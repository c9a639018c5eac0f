#include "snapcube/angles.hpp"

#include <cmath>

namespace snapcube {

double wrap_longitude(double lon) {
    double w = std::fmod(lon + kPi, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w - kPi;
}

double wrap_periodic(double a, double period) {
    double w = std::fmod(a, period);
    if (w < 0.0) w += period;
    return w;
}

SphericalCoord make_spherical(double lat, double lon) {
    if (!(lat >= -kHalfPi && lat <= kHalfPi)) {
        throw NumericError("latitude out of [-pi/2, pi/2]: " + std::to_string(lat));
    }
    return SphericalCoord{lat, wrap_longitude(lon)};
}

SphericalCoord rotate_coords(const SphericalCoord& c, double theta) {
    return SphericalCoord{c.lat, wrap_longitude(c.lon - theta)};
}

SnapAngle SnapAngle::from_radians(double theta) {
    return SnapAngle{theta, -1, 0};
}

SnapAngle SnapAngle::from_grid(int k, int n) {
    if (n <= 0) throw ConfigError("grid size must be positive");
    return SnapAngle{static_cast<double>(k) * kHalfPi / n, k, n};
}

SnapAngle SnapAngle::canonical() const {
    if (on_grid()) {
        int k = grid_index % grid_n;
        if (k < 0) k += grid_n;
        return from_grid(k, grid_n);
    }
    return from_radians(wrap_periodic(theta, kHalfPi));
}

AngleGrid::AngleGrid(int n_candidates) : n(n_candidates) {
    if (n <= 0) throw ConfigError("angle grid needs at least one candidate");
}

SnapAngle AngleGrid::at(int k) const {
    if (k < 0 || k >= n) throw ConfigError("grid index out of range");
    return SnapAngle::from_grid(k, n);
}

std::vector<SnapAngle> AngleGrid::candidates() const {
    std::vector<SnapAngle> out;
    out.reserve(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) out.push_back(at(k));
    return out;
}

SnapAngle AngleGrid::nearest(double theta) const {
    double x = wrap_periodic(theta, kHalfPi);
    int k = static_cast<int>(std::lround(x / kHalfPi * n)) % n;
    return at(k);
}

}  // namespace snapcube
