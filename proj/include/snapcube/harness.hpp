#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "snapcube/policy.hpp"
#include "snapcube/scene.hpp"
#include "snapcube/search.hpp"

#include <nlohmann/json.hpp>

namespace snapcube {

// Spherical bounding box in radians. lon_min > lon_max means the box wraps
// through the +-pi seam.
struct Box {
    double lon_min = 0.0, lat_min = 0.0, lon_max = 0.0, lat_max = 0.0;

    bool contains(const SphericalCoord& c) const;
};

struct DatasetEntry {
    std::string panorama;  // paths relative to the manifest
    std::string mask;
    std::vector<Box> boxes;
    std::string category;
    uint64_t seed = 0;
};

std::vector<DatasetEntry> load_manifest(const std::filesystem::path& path);
void save_manifest(const std::vector<DatasetEntry>& entries, const std::filesystem::path& path);

// Scene family knobs for the generator.
struct GenParams {
    int width = 256;
    int height = 128;
    int min_objects = 1;
    int max_objects = 2;
    double extent_min = 0.12;
    double extent_max = 0.30;
    double max_abs_lat = 0.80;  // object centers; must stay below pi/3
    double cap_probability = 0.7;
};

// Writes panoramas, masks, and a manifest with per-object boxes under
// out_dir. Scenes whose mask came out empty are skipped, so `count` is an
// upper bound. Scene k derives its seed from (seed, k); identical inputs
// reproduce identical files.
std::vector<DatasetEntry> generate_dataset(int count, const GenParams& params, uint64_t seed,
                                           const std::filesystem::path& out_dir);

// Per-box coverage of the object's pixels by its dominant lateral face at
// rotation theta. Boxes with no foreground pixels are skipped (reported as
// NaN-free: simply omitted from the list).
struct PreservationScore {
    std::vector<double> per_box;
    double mean = 0.0;
    int skipped_boxes = 0;
};

PreservationScore preservation_iou(const Image& mask, const std::vector<Box>& boxes,
                                   const SnapAngle& theta, int face_size);

struct BenchmarkRow {
    std::string policy;
    int budget = 0;
    std::vector<double> scores;  // per image, dataset order
    double mean = 0.0;
    double stddev = 0.0;
    double mean_budget_used = 0.0;
};

struct BenchmarkReport {
    int n_grid = 20;
    int face_size = 64;
    ObjectiveConfig objective;
    uint64_t seed = 0;
    std::vector<std::string> image_ids;
    std::vector<double> difficulty;  // population variance of F over the grid
    std::vector<BenchmarkRow> rows;
    std::vector<double> exhaustive_best;        // per image
    std::vector<double> wall_ms_per_evaluation;  // per row; only serialized on demand
};

struct BenchmarkConfig {
    std::vector<std::string> policies;  // exhaustive|random|uniform|coarse2fine|saliency|learned
    std::vector<int> budgets;           // ascending
    int n_grid = 20;
    int face_size = 64;
    ObjectiveConfig objective;
    uint64_t seed = 0;
    int jobs = 1;
    double saliency_sigma = 5.0;
    int saliency_window = 30;
    std::optional<std::filesystem::path> weights;  // for "learned"
};

BenchmarkReport budget_curve(const std::filesystem::path& manifest_dir,
                             const std::vector<DatasetEntry>& entries,
                             const BenchmarkConfig& cfg);

nlohmann::json report_to_json(const BenchmarkReport& report, bool include_timing = false);
void report_to_csv(const BenchmarkReport& report, const std::filesystem::path& path);

struct GainRow {
    double fraction = 0.0;       // of the test set, hardest first
    double cumulative_gain = 0.0;  // mean of score_b - score_a up to here
};

// Images sorted by descending difficulty; gain accumulated in that order.
std::vector<GainRow> difficulty_gains(const BenchmarkReport& report, const std::string& policy_a,
                                      const std::string& policy_b, int budget);

}  // namespace snapcube
