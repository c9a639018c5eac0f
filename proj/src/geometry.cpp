#include "snapcube/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace snapcube {

Face face_from_name(const std::string& name) {
    for (size_t i = 0; i < kFaceNames.size(); ++i) {
        if (name == kFaceNames[i]) return static_cast<Face>(i);
    }
    throw ConfigError("unknown face id: " + name);
}

Vec3 face_ray(Face face, double u, double v) {
    if (u < 0.0 || u >= 1.0 || v < 0.0 || v >= 1.0) {
        throw NumericError("face coordinates out of [0,1)");
    }
    double a = 2.0 * u - 1.0;
    double b = 2.0 * v - 1.0;
    Vec3 d;
    switch (face) {
        case Face::Front:  d = {a, -b, 1.0}; break;
        case Face::Right:  d = {1.0, -b, -a}; break;
        case Face::Back:   d = {-a, -b, -1.0}; break;
        case Face::Left:   d = {-1.0, -b, a}; break;
        case Face::Top:    d = {a, 1.0, b}; break;
        case Face::Bottom: d = {a, -1.0, -b}; break;
        default: throw ConfigError("unknown face id");
    }
    double n = std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
    return Vec3{d.x / n, d.y / n, d.z / n};
}

SphericalCoord dir_to_spherical(const Vec3& d) {
    double n = std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
    if (n < 1e-12) throw NumericError("cannot convert zero vector to spherical");
    double y = std::clamp(d.y / n, -1.0, 1.0);
    double lat = std::asin(y);
    double lon = (d.x == 0.0 && d.z == 0.0) ? 0.0 : std::atan2(d.x, d.z);
    return SphericalCoord{lat, wrap_longitude(lon)};
}

Vec3 spherical_to_dir(const SphericalCoord& c) {
    double cl = std::cos(c.lat);
    return Vec3{cl * std::sin(c.lon), std::sin(c.lat), cl * std::cos(c.lon)};
}

Face face_of_direction(const Vec3& d) {
    double ax = std::fabs(d.x), ay = std::fabs(d.y), az = std::fabs(d.z);
    if (az >= ax && az >= ay) return d.z >= 0.0 ? Face::Front : Face::Back;
    if (ax >= ay) return d.x >= 0.0 ? Face::Right : Face::Left;
    return d.y >= 0.0 ? Face::Top : Face::Bottom;
}

namespace {

inline float bilinear_at(const Image& img, double lat, double lon, int channel) {
    const int w = img.width, h = img.height;
    double fx = (wrap_longitude(lon) + kPi) * (w / kTwoPi) - 0.5;
    double fy = (kHalfPi - lat) * (h / kPi) - 0.5;
    int x0 = static_cast<int>(std::floor(fx));
    int y0 = static_cast<int>(std::floor(fy));
    double wx = fx - x0;
    double wy = fy - y0;
    int xa = x0 < 0 ? x0 + w : x0;
    int xb = xa + 1 == w ? 0 : xa + 1;
    int ya = std::clamp(y0, 0, h - 1);
    int yb = std::clamp(y0 + 1, 0, h - 1);
    double top = (1.0 - wx) * img.at(xa, ya, channel) + wx * img.at(xb, ya, channel);
    double bot = (1.0 - wx) * img.at(xa, yb, channel) + wx * img.at(xb, yb, channel);
    return static_cast<float>((1.0 - wy) * top + wy * bot);
}

inline float nearest_at(const Image& img, double lat, double lon, int channel) {
    const int w = img.width, h = img.height;
    double fx = (wrap_longitude(lon) + kPi) * (w / kTwoPi);
    double fy = (kHalfPi - lat) * (h / kPi);
    int x = static_cast<int>(std::floor(fx));
    if (x >= w) x -= w;
    if (x < 0) x += w;
    int y = std::clamp(static_cast<int>(std::floor(fy)), 0, h - 1);
    return img.at(x, y, channel);
}

}  // namespace

float sample_equirect(const Image& img, const SphericalCoord& c, int channel) {
    return bilinear_at(img, c.lat, c.lon, channel);
}

float sample_equirect_nearest(const Image& img, const SphericalCoord& c, int channel) {
    return nearest_at(img, c.lat, c.lon, channel);
}

CubemapSampler::CubemapSampler(int face_size) : w_(face_size) {
    if (face_size < 1) throw ConfigError("face size must be positive");
    size_t count = static_cast<size_t>(w_) * w_;
    lateral_lat_.resize(count);
    lateral_lon_.resize(count);
    top_lat_.resize(count);
    top_lon_.resize(count);
    bottom_lat_.resize(count);
    bottom_lon_.resize(count);
    for (int py = 0; py < w_; ++py) {
        for (int px = 0; px < w_; ++px) {
            size_t i = static_cast<size_t>(py) * w_ + px;
            double u = (px + 0.5) / w_;
            double v = (py + 0.5) / w_;
            SphericalCoord f = dir_to_spherical(face_ray(Face::Front, u, v));
            lateral_lat_[i] = f.lat;
            lateral_lon_[i] = f.lon;
            SphericalCoord t = dir_to_spherical(face_ray(Face::Top, u, v));
            top_lat_[i] = t.lat;
            top_lon_[i] = t.lon;
            SphericalCoord b = dir_to_spherical(face_ray(Face::Bottom, u, v));
            bottom_lat_[i] = b.lat;
            bottom_lon_[i] = b.lon;
        }
    }
}

double CubemapSampler::rotation_for(int face_cycle, const SnapAngle& angle) const {
    if (angle.on_grid()) {
        const long n = angle.grid_n;
        long ridx = (static_cast<long>(face_cycle) * n + angle.grid_index) % (4 * n);
        if (ridx < 0) ridx += 4 * n;
        return static_cast<double>(ridx) * kHalfPi / static_cast<double>(n);
    }
    return wrap_periodic(face_cycle * kHalfPi + angle.theta, kTwoPi);
}

Cubemap CubemapSampler::project(const Image& img, const SnapAngle& angle) const {
    Cubemap cm;
    cm.face_size = w_;
    cm.source_angle = angle;
    const size_t count = static_cast<size_t>(w_) * w_;
    for (int f = 0; f < 6; ++f) {
        Image& out = cm.faces[static_cast<size_t>(f)] = Image(w_, w_, img.channels);
        const bool lateral = f < 4;
        const double* lats = lateral ? lateral_lat_.data()
                                     : (f == 4 ? top_lat_.data() : bottom_lat_.data());
        const double* lons = lateral ? lateral_lon_.data()
                                     : (f == 4 ? top_lon_.data() : bottom_lon_.data());
        const double rot = rotation_for(lateral ? f : 0, angle);
        for (size_t i = 0; i < count; ++i) {
            for (int c = 0; c < img.channels; ++c) {
                out.pixels[i * img.channels + c] =
                    bilinear_at(img, lats[i], lons[i] + rot, c);
            }
        }
    }
    return cm;
}

Cubemap CubemapSampler::project_binary(const Image& mask, const SnapAngle& angle) const {
    require_binary_mask(mask);
    Cubemap cm;
    cm.face_size = w_;
    cm.source_angle = angle;
    const size_t count = static_cast<size_t>(w_) * w_;
    for (int f = 0; f < 6; ++f) {
        Image& out = cm.faces[static_cast<size_t>(f)] = Image(w_, w_, 1);
        const bool lateral = f < 4;
        const double* lats = lateral ? lateral_lat_.data()
                                     : (f == 4 ? top_lat_.data() : bottom_lat_.data());
        const double* lons = lateral ? lateral_lon_.data()
                                     : (f == 4 ? top_lon_.data() : bottom_lon_.data());
        const double rot = rotation_for(lateral ? f : 0, angle);
        for (size_t i = 0; i < count; ++i) {
            out.pixels[i] = nearest_at(mask, lats[i], lons[i] + rot, 0);
        }
    }
    return cm;
}

std::array<std::vector<uint8_t>, 4> CubemapSampler::project_lateral_binary(
    const Image& mask, const SnapAngle& angle) const {
    std::array<std::vector<uint8_t>, 4> out;
    const size_t count = static_cast<size_t>(w_) * w_;
    for (int f = 0; f < 4; ++f) {
        out[static_cast<size_t>(f)].resize(count);
        const double rot = rotation_for(f, angle);
        uint8_t* dst = out[static_cast<size_t>(f)].data();
        for (size_t i = 0; i < count; ++i) {
            dst[i] = nearest_at(mask, lateral_lat_[i], lateral_lon_[i] + rot, 0) != 0.0f;
        }
    }
    return out;
}

Cubemap project_cubemap(const Image& img, const SnapAngle& angle, int face_size) {
    if (face_size < 8) throw ConfigError("cube face size must be at least 8");
    require_equirect(img);
    return CubemapSampler(face_size).project(img, angle);
}

Cubemap project_mask(const Image& mask, const SnapAngle& angle, int face_size) {
    if (face_size < 1) throw ConfigError("cube face size must be positive");
    require_binary_mask(mask);
    return CubemapSampler(face_size).project_binary(mask, angle);
}

namespace {

// Face-local (a, b) in [-1, 1] for a direction known to land on `face`.
void face_uv(Face face, const Vec3& d, double& a, double& b) {
    switch (face) {
        case Face::Front:  a = d.x / d.z;  b = -d.y / d.z;  break;
        case Face::Right:  a = -d.z / d.x; b = -d.y / d.x;  break;
        case Face::Back:   a = -d.x / -d.z; b = -d.y / -d.z; break;
        case Face::Left:   a = d.z / -d.x; b = -d.y / -d.x; break;
        case Face::Top:    a = d.x / d.y;  b = d.z / d.y;   break;
        case Face::Bottom: a = d.x / -d.y; b = -d.z / -d.y; break;
    }
}

float face_bilinear_clamped(const Image& face, double a, double b, int channel) {
    const int w = face.width;
    double fx = (a + 1.0) * 0.5 * w - 0.5;
    double fy = (b + 1.0) * 0.5 * w - 0.5;
    int x0 = static_cast<int>(std::floor(fx));
    int y0 = static_cast<int>(std::floor(fy));
    double wx = fx - x0;
    double wy = fy - y0;
    int xa = std::clamp(x0, 0, w - 1), xb = std::clamp(x0 + 1, 0, w - 1);
    int ya = std::clamp(y0, 0, w - 1), yb = std::clamp(y0 + 1, 0, w - 1);
    double top = (1.0 - wx) * face.at(xa, ya, channel) + wx * face.at(xb, ya, channel);
    double bot = (1.0 - wx) * face.at(xa, yb, channel) + wx * face.at(xb, yb, channel);
    return static_cast<float>((1.0 - wy) * top + wy * bot);
}

}  // namespace

Image cubemap_to_equirect(const Cubemap& cm, int width, int height) {
    if (width != 2 * height) throw ConfigError("output must be 2:1 equirectangular");
    const int channels = cm.faces[0].channels;
    Image out(width, height, channels);
    const double theta = cm.source_angle.theta;
    for (int y = 0; y < height; ++y) {
        double lat = kHalfPi - (y + 0.5) * kPi / height;
        for (int x = 0; x < width; ++x) {
            double lon = -kPi + (x + 0.5) * kTwoPi / width;
            // Inverse of the projection: world lon maps to cube-local lon - theta.
            Vec3 d = spherical_to_dir(SphericalCoord{lat, wrap_longitude(lon - theta)});
            Face f = face_of_direction(d);
            double a, b;
            face_uv(f, d, a, b);
            for (int c = 0; c < channels; ++c) {
                out.at(x, y, c) = face_bilinear_clamped(cm.face(f), a, b, c);
            }
        }
    }
    return out;
}

Image cross_layout(const Cubemap& cm) {
    const int w = cm.face_size;
    const int channels = cm.faces[0].channels;
    Image out(4 * w, 3 * w, channels);
    auto blit = [&](Face f, int col, int row) {
        const Image& src = cm.face(f);
        for (int y = 0; y < w; ++y) {
            for (int x = 0; x < w; ++x) {
                for (int c = 0; c < channels; ++c) {
                    out.at(col * w + x, row * w + y, c) = src.at(x, y, c);
                }
            }
        }
    };
    blit(Face::Top, 1, 0);
    blit(Face::Left, 0, 1);
    blit(Face::Front, 1, 1);
    blit(Face::Right, 2, 1);
    blit(Face::Back, 3, 1);
    blit(Face::Bottom, 1, 2);
    return out;
}

}  // namespace snapcube
