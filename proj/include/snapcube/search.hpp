#pragma once

#include <functional>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "snapcube/angles.hpp"
#include "snapcube/image.hpp"
#include "snapcube/objective.hpp"

#include <nlohmann/json.hpp>

namespace snapcube {

// Caches angle -> score so repeated probes never consume budget. The
// evaluation counter equals the number of distinct angles scored.
class Scorer {
public:
    explicit Scorer(std::function<double(const SnapAngle&)> fn);

    double operator()(const SnapAngle& angle);

    int evaluations() const { return static_cast<int>(evaluated_.size()); }
    const std::vector<std::pair<SnapAngle, double>>& evaluated() const { return evaluated_; }

private:
    std::function<double(const SnapAngle&)> fn_;
    std::map<double, double> cache_;
    std::vector<std::pair<SnapAngle, double>> evaluated_;
};

// Disruption of `mask` rendered at the probed angle (owns its copies).
Scorer make_disruption_scorer(Image mask, int face_size, ObjectiveConfig cfg = {});

struct SearchResult {
    SnapAngle best_angle;
    double best_score = 0.0;
    std::vector<std::pair<SnapAngle, double>> evaluated;
    int budget_used = 0;
};

nlohmann::json search_result_to_json(const SearchResult& r);

// Scores every candidate; ties break toward the smaller grid index.
SearchResult exhaustive(Scorer& scorer, const AngleGrid& grid);

// Best of `budget` distinct candidates drawn without repetition. The draw is
// a seeded shuffle so a larger budget evaluates a superset of a smaller one.
SearchResult random_policy(Scorer& scorer, const AngleGrid& grid, int budget, uint64_t seed);

// Evenly spread candidates with the canonical index 0 always first (budget 4
// on n=20 probes {0,5,10,15}); the probe order is a fixed bit-reversal
// sequence so larger budgets evaluate supersets of smaller ones.
SearchResult uniform_policy(Scorer& scorer, const AngleGrid& grid, int budget);

// Scores the centers of two half-intervals, recurses into the better half
// until the budget runs out or the interval cannot shrink.
SearchResult coarse_to_fine(Scorer& scorer, const AngleGrid& grid, int budget);

// Blurs the map, finds the max-sum window (wrapping in longitude), and snaps
// the window-center longitude mod pi/2 to the grid. Costs one evaluation and
// is not iterative.
SnapAngle saliency_policy(const Image& saliency_map, int window, double blur_sigma,
                          const AngleGrid& grid);

// Separable Gaussian blur, wrapping in x and clamping in y (exposed for the
// saliency stand-in pipeline).
Image gaussian_blur(const Image& img, double sigma);

}  // namespace snapcube
