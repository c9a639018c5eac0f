#include "snapcube/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "snapcube/rng.hpp"

namespace snapcube {

Scorer::Scorer(std::function<double(const SnapAngle&)> fn) : fn_(std::move(fn)) {}

double Scorer::operator()(const SnapAngle& angle) {
    auto it = cache_.find(angle.theta);
    if (it != cache_.end()) return it->second;
    double s = fn_(angle);
    cache_.emplace(angle.theta, s);
    evaluated_.emplace_back(angle, s);
    return s;
}

Scorer make_disruption_scorer(Image mask, int face_size, ObjectiveConfig cfg) {
    require_binary_mask(mask);
    auto sampler = std::make_shared<CubemapSampler>(face_size);
    auto owned = std::make_shared<Image>(std::move(mask));
    return Scorer([sampler, owned, cfg](const SnapAngle& a) {
        return disruption_score(fg_for_angle(*sampler, *owned, a), cfg);
    });
}

nlohmann::json search_result_to_json(const SearchResult& r) {
    nlohmann::json evaluated = nlohmann::json::array();
    for (const auto& [angle, score] : r.evaluated) {
        evaluated.push_back({{"theta", angle.theta},
                             {"grid_index", angle.on_grid() ? nlohmann::json(angle.grid_index)
                                                            : nlohmann::json(nullptr)},
                             {"score", score}});
    }
    return nlohmann::json{
        {"best_angle",
         {{"theta", r.best_angle.theta},
          {"grid_index", r.best_angle.on_grid() ? nlohmann::json(r.best_angle.grid_index)
                                                : nlohmann::json(nullptr)}}},
        {"best_score", r.best_score},
        {"evaluated", evaluated},
        {"budget_used", r.budget_used},
    };
}

namespace {

// Best-of-history per Eq-3 semantics; ties go to the smaller grid index.
SearchResult result_from(Scorer& scorer, size_t history_begin) {
    const auto& all = scorer.evaluated();
    SearchResult r;
    r.evaluated.assign(all.begin() + static_cast<long>(history_begin), all.end());
    r.budget_used = static_cast<int>(r.evaluated.size());
    bool first = true;
    for (const auto& [angle, score] : r.evaluated) {
        bool better = first || score < r.best_score ||
                      (score == r.best_score && angle.on_grid() && r.best_angle.on_grid() &&
                       angle.grid_index < r.best_angle.grid_index);
        if (better) {
            r.best_angle = angle;
            r.best_score = score;
            first = false;
        }
    }
    return r;
}

void check_budget(int budget, int n) {
    if (budget < 1 || budget > n) {
        throw ConfigError("budget must lie in [1, " + std::to_string(n) + "], got " +
                          std::to_string(budget));
    }
}

}  // namespace

SearchResult exhaustive(Scorer& scorer, const AngleGrid& grid) {
    size_t begin = scorer.evaluated().size();
    for (int k = 0; k < grid.n; ++k) scorer(grid.at(k));
    return result_from(scorer, begin);
}

SearchResult random_policy(Scorer& scorer, const AngleGrid& grid, int budget, uint64_t seed) {
    check_budget(budget, grid.n);
    std::vector<int> order(static_cast<size_t>(grid.n));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    size_t begin = scorer.evaluated().size();
    for (int j = 0; j < budget; ++j) scorer(grid.at(order[static_cast<size_t>(j)]));
    return result_from(scorer, begin);
}

namespace {

double radical_inverse(uint64_t j) {
    double f = 0.5, v = 0.0;
    while (j) {
        if (j & 1) v += f;
        j >>= 1;
        f *= 0.5;
    }
    return v;
}

}  // namespace

SearchResult uniform_policy(Scorer& scorer, const AngleGrid& grid, int budget) {
    check_budget(budget, grid.n);
    // Bit-reversal ordering of the grid: the canonical index 0 comes first,
    // every prefix is spread evenly (budget 4 on n=20 probes {0,5,10,15}),
    // and a larger budget evaluates a superset of a smaller one.
    size_t begin = scorer.evaluated().size();
    std::vector<char> seen(static_cast<size_t>(grid.n), 0);
    int taken = 0;
    for (uint64_t j = 0; taken < budget; ++j) {
        int k = static_cast<int>(radical_inverse(j) * grid.n);
        if (!seen[static_cast<size_t>(k)]) {
            seen[static_cast<size_t>(k)] = 1;
            scorer(grid.at(k));
            ++taken;
        }
    }
    return result_from(scorer, begin);
}

SearchResult coarse_to_fine(Scorer& scorer, const AngleGrid& grid, int budget) {
    if (budget < 2) throw ConfigError("coarse-to-fine needs a budget of at least 2");
    check_budget(budget, grid.n);

    size_t begin = scorer.evaluated().size();
    int lo = 0, hi = grid.n;
    int spent = 0;
    while (spent < budget && hi - lo >= 2) {
        int mid = (lo + hi) / 2;
        int c_low = (lo + mid) / 2;
        int c_high = (mid + hi) / 2;

        double s_low = scorer(grid.at(c_low));
        spent = static_cast<int>(scorer.evaluated().size() - begin);
        if (spent >= budget) break;
        double s_high = scorer(grid.at(c_high));
        spent = static_cast<int>(scorer.evaluated().size() - begin);

        // ties descend right: the midpoint index belongs to the right half,
        // so this keeps a minimum sitting exactly at mid reachable
        if (s_low < s_high) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return result_from(scorer, begin);
}

Image gaussian_blur(const Image& img, double sigma) {
    if (img.channels != 1) throw ConfigError("blur expects a single-channel map");
    if (sigma <= 0.0) return img;
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(static_cast<size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
        kernel[static_cast<size_t>(i + radius)] = v;
        sum += v;
    }
    for (double& v : kernel) v /= sum;

    const int w = img.width, h = img.height;
    Image tmp(w, h, 1), out(w, h, 1);
    for (int y = 0; y < h; ++y) {  // horizontal, wraps
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                int xi = (x + i) % w;
                if (xi < 0) xi += w;
                acc += kernel[static_cast<size_t>(i + radius)] * img.at(xi, y);
            }
            tmp.at(x, y) = static_cast<float>(acc);
        }
    }
    for (int y = 0; y < h; ++y) {  // vertical, clamps
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                int yi = std::clamp(y + i, 0, h - 1);
                acc += kernel[static_cast<size_t>(i + radius)] * tmp.at(x, yi);
            }
            out.at(x, y) = static_cast<float>(acc);
        }
    }
    return out;
}

SnapAngle saliency_policy(const Image& saliency_map, int window, double blur_sigma,
                          const AngleGrid& grid) {
    if (window <= 0) throw ConfigError("saliency window must be positive");
    if (saliency_map.channels != 1) throw ConfigError("saliency map must be single-channel");
    const int w = saliency_map.width, h = saliency_map.height;
    if (window >= std::min(w, h)) throw ConfigError("saliency window exceeds map size");

    Image blurred = gaussian_blur(saliency_map, blur_sigma);

    // Summed-area table over the map extended by window-1 columns so windows
    // can wrap in longitude.
    const int we = w + window - 1;
    std::vector<double> sat(static_cast<size_t>(we + 1) * (h + 1), 0.0);
    auto sat_at = [&](int x, int y) -> double& {
        return sat[static_cast<size_t>(y) * (we + 1) + x];
    };
    for (int y = 1; y <= h; ++y) {
        for (int x = 1; x <= we; ++x) {
            double v = blurred.at((x - 1) % w, y - 1);
            sat_at(x, y) = v + sat_at(x - 1, y) + sat_at(x, y - 1) - sat_at(x - 1, y - 1);
        }
    }

    int best_x = 0, best_y = 0;
    double best_sum = -1.0;
    for (int y0 = 0; y0 + window <= h; ++y0) {
        for (int x0 = 0; x0 < w; ++x0) {
            double s = sat_at(x0 + window, y0 + window) - sat_at(x0, y0 + window) -
                       sat_at(x0 + window, y0) + sat_at(x0, y0);
            if (s > best_sum) {  // strict: ties keep the top-left window
                best_sum = s;
                best_x = x0;
                best_y = y0;
            }
        }
    }
    (void)best_y;

    double center_lon = -kPi + (best_x + window / 2.0) * kTwoPi / w;
    return grid.nearest(wrap_periodic(center_lon, kHalfPi));
}

}  // namespace snapcube
