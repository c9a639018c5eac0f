#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "snapcube/angles.hpp"
#include "snapcube/image.hpp"

namespace snapcube {

enum class ObjectShape { Cap, Rect };

struct SceneObject {
    SphericalCoord center;
    double extent_lat = 0.2;  // half-extent in radians; caps use extent_lat alone
    double extent_lon = 0.2;
    ObjectShape shape = ObjectShape::Cap;
    float intensity = 0.95f;
};

// Deterministic synthetic panorama description: objects over a low-frequency
// textured background. Object centers must satisfy |lat| < pi/3.
struct SceneSpec {
    std::vector<SceneObject> objects;
    int texture_id = 0;
    uint64_t seed = 0;
    int width = 256;
    int height = 128;
};

struct SynthScene {
    Image panorama;  // single channel, [0,1]
    Image mask;      // strict {0,1}, union of object footprints
};

bool object_contains(const SceneObject& obj, const SphericalCoord& c);

// Renders the spec; the mask is 1 exactly on object pixels. Identical specs
// yield bit-identical outputs.
SynthScene synth_scene(const SceneSpec& spec);

// Per-object binary footprint (for deriving bounding boxes).
Image object_footprint(const SceneObject& obj, int width, int height);

SceneSpec scene_spec_from_json_file(const std::filesystem::path& path);
void scene_spec_to_json_file(const SceneSpec& spec, const std::filesystem::path& path);

}  // namespace snapcube
