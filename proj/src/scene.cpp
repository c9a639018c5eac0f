#include "snapcube/scene.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "snapcube/rng.hpp"

namespace snapcube {

namespace {

double great_circle_distance(const SphericalCoord& a, const SphericalCoord& b) {
    double d = std::sin(a.lat) * std::sin(b.lat) +
               std::cos(a.lat) * std::cos(b.lat) * std::cos(a.lon - b.lon);
    return std::acos(std::clamp(d, -1.0, 1.0));
}

void validate(const SceneSpec& spec) {
    if (spec.width != 2 * spec.height || spec.height < 8) {
        throw ConfigError("scene must render to a 2:1 equirect of height >= 8");
    }
    for (const SceneObject& o : spec.objects) {
        if (o.extent_lat <= 0.0 || o.extent_lon <= 0.0) {
            throw ConfigError("object extents must be positive");
        }
        if (!(std::fabs(o.center.lat) < kPi / 3.0)) {
            throw ConfigError("object centers must satisfy |lat| < pi/3");
        }
    }
}

}  // namespace

bool object_contains(const SceneObject& obj, const SphericalCoord& c) {
    if (obj.shape == ObjectShape::Cap) {
        return great_circle_distance(obj.center, c) <= obj.extent_lat;
    }
    double dlon = std::fabs(wrap_longitude(c.lon - obj.center.lon));
    return std::fabs(c.lat - obj.center.lat) <= obj.extent_lat && dlon <= obj.extent_lon;
}

SynthScene synth_scene(const SceneSpec& spec) {
    validate(spec);
    const int w = spec.width, h = spec.height;

    // Background: a handful of random low-frequency waves in (lat, lon).
    // Integer longitudinal frequencies keep the +-pi seam continuous; the
    // texture id picks how busy the background gets.
    Rng rng(mix_seed(spec.seed, 0x7e87a1dULL + static_cast<uint64_t>(spec.texture_id)));
    const int n_waves = 3 + spec.texture_id % 3;
    std::vector<double> fl(n_waves), fa(n_waves), ph(n_waves), amp(n_waves);
    for (int k = 0; k < n_waves; ++k) {
        fl[k] = 1 + rng.index(3);            // 1..3 cycles in longitude
        fa[k] = rng.uniform(0.5, 2.0);       // slow in latitude
        ph[k] = rng.uniform(0.0, kTwoPi);
        amp[k] = rng.uniform(0.4, 1.0);
    }
    double amp_sum = 0.0;
    for (int k = 0; k < n_waves; ++k) amp_sum += amp[k];

    SynthScene out{Image(w, h, 1), Image(w, h, 1)};
    for (int y = 0; y < h; ++y) {
        double lat = kHalfPi - (y + 0.5) * kPi / h;
        for (int x = 0; x < w; ++x) {
            double lon = -kPi + (x + 0.5) * kTwoPi / w;
            double t = 0.0;
            for (int k = 0; k < n_waves; ++k) {
                t += amp[k] * std::cos(fl[k] * lon + fa[k] * lat + ph[k]);
            }
            // map [-amp_sum, amp_sum] into [0.15, 0.85]
            float bg = static_cast<float>(0.5 + 0.35 * (t / amp_sum));
            SphericalCoord c{lat, lon};
            bool fg = false;
            float value = bg;
            for (const SceneObject& o : spec.objects) {
                if (object_contains(o, c)) {
                    fg = true;
                    value = o.intensity;
                    break;
                }
            }
            out.panorama.at(x, y) = value;
            out.mask.at(x, y) = fg ? 1.0f : 0.0f;
        }
    }
    return out;
}

Image object_footprint(const SceneObject& obj, int width, int height) {
    Image fp(width, height, 1);
    for (int y = 0; y < height; ++y) {
        double lat = kHalfPi - (y + 0.5) * kPi / height;
        for (int x = 0; x < width; ++x) {
            double lon = -kPi + (x + 0.5) * kTwoPi / width;
            fp.at(x, y) = object_contains(obj, SphericalCoord{lat, lon}) ? 1.0f : 0.0f;
        }
    }
    return fp;
}

SceneSpec scene_spec_from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scene spec: " + path.string());
    nlohmann::json j;
    in >> j;

    SceneSpec spec;
    spec.texture_id = j.value("texture", 0);
    spec.seed = j.value("seed", 0ULL);
    spec.width = j.value("width", 256);
    spec.height = j.value("height", 128);
    for (const auto& jo : j.at("objects")) {
        SceneObject o;
        o.center = make_spherical(jo.at("center").at("lat").get<double>(),
                                  jo.at("center").at("lon").get<double>());
        std::string shape = jo.value("shape", "cap");
        o.shape = shape == "rect" ? ObjectShape::Rect : ObjectShape::Cap;
        o.extent_lat = jo.at("extent").get<double>();
        o.extent_lon = jo.value("extent_lon", o.extent_lat);
        o.intensity = jo.value("intensity", 0.95f);
        spec.objects.push_back(o);
    }
    return spec;
}

void scene_spec_to_json_file(const SceneSpec& spec, const std::filesystem::path& path) {
    nlohmann::json objects = nlohmann::json::array();
    for (const SceneObject& o : spec.objects) {
        objects.push_back({
            {"center", {{"lat", o.center.lat}, {"lon", o.center.lon}}},
            {"shape", o.shape == ObjectShape::Rect ? "rect" : "cap"},
            {"extent", o.extent_lat},
            {"extent_lon", o.extent_lon},
            {"intensity", o.intensity},
        });
    }
    nlohmann::json j{{"objects", objects},
                     {"texture", spec.texture_id},
                     {"seed", spec.seed},
                     {"width", spec.width},
                     {"height", spec.height}};
    std::ofstream out(path);
    if (!out) throw IoError("cannot write scene spec: " + path.string());
    out << j.dump(2) << "\n";
}

}  // namespace snapcube
