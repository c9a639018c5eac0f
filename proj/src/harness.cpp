#include "snapcube/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <thread>

#include "snapcube/png_io.hpp"

namespace snapcube {

bool Box::contains(const SphericalCoord& c) const {
    if (c.lat < lat_min || c.lat > lat_max) return false;
    if (lon_min <= lon_max) return c.lon >= lon_min && c.lon <= lon_max;
    return c.lon >= lon_min || c.lon <= lon_max;  // wraps through +-pi
}

std::vector<DatasetEntry> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path.string());
    nlohmann::json j;
    in >> j;
    std::vector<DatasetEntry> entries;
    for (const auto& je : j) {
        DatasetEntry e;
        e.panorama = je.at("panorama").get<std::string>();
        e.mask = je.at("mask").get<std::string>();
        e.category = je.value("category", std::string{});
        e.seed = je.value("seed", 0ULL);
        if (je.contains("boxes")) {
            for (const auto& jb : je.at("boxes")) {
                e.boxes.push_back(Box{jb.at(0).get<double>(), jb.at(1).get<double>(),
                                      jb.at(2).get<double>(), jb.at(3).get<double>()});
            }
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

void save_manifest(const std::vector<DatasetEntry>& entries,
                   const std::filesystem::path& path) {
    nlohmann::json j = nlohmann::json::array();
    for (const DatasetEntry& e : entries) {
        nlohmann::json boxes = nlohmann::json::array();
        for (const Box& b : e.boxes) {
            boxes.push_back({b.lon_min, b.lat_min, b.lon_max, b.lat_max});
        }
        j.push_back({{"panorama", e.panorama},
                     {"mask", e.mask},
                     {"boxes", boxes},
                     {"category", e.category},
                     {"seed", e.seed}});
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write manifest: " + path.string());
    out << j.dump(2) << "\n";
}

namespace {

// Tight spherical box around a footprint's nonzero pixel centers, padded by
// half a pixel. Wrap-aware in longitude.
Box box_of_footprint(const Image& fp) {
    const int w = fp.width, h = fp.height;
    std::vector<bool> col_used(static_cast<size_t>(w), false);
    int y_min = h, y_max = -1;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (fp.at(x, y) != 0.0f) {
                col_used[static_cast<size_t>(x)] = true;
                y_min = std::min(y_min, y);
                y_max = std::max(y_max, y);
            }
        }
    }
    if (y_max < 0) throw NumericError("footprint is empty");

    const double half_lon = kPi / w;  // half pixel
    const double half_lat = kHalfPi / h;
    auto col_lon = [&](int x) { return -kPi + (x + 0.5) * kTwoPi / w; };
    auto row_lat = [&](int y) { return kHalfPi - (y + 0.5) * kPi / h; };

    Box box;
    box.lat_min = std::max(-kHalfPi, row_lat(y_max) - half_lat);
    box.lat_max = std::min(kHalfPi, row_lat(y_min) + half_lat);

    int n_used = static_cast<int>(std::count(col_used.begin(), col_used.end(), true));
    if (n_used == w) {
        box.lon_min = -kPi;
        box.lon_max = kPi;
        return box;
    }
    // widest circular run of unused columns; the box is its complement
    int best_gap_start = 0, best_gap_len = 0;
    for (int start = 0; start < w; ++start) {
        if (col_used[static_cast<size_t>(start)]) continue;
        int len = 0;
        while (len < w && !col_used[static_cast<size_t>((start + len) % w)]) ++len;
        if (len > best_gap_len) {
            best_gap_len = len;
            best_gap_start = start;
        }
    }
    int first_used = (best_gap_start + best_gap_len) % w;
    int last_used = (best_gap_start - 1 + w) % w;
    box.lon_min = wrap_longitude(col_lon(first_used) - half_lon);
    box.lon_max = wrap_longitude(col_lon(last_used) + half_lon);
    return box;
}

}  // namespace

std::vector<DatasetEntry> generate_dataset(int count, const GenParams& params, uint64_t seed,
                                           const std::filesystem::path& out_dir) {
    if (count < 1) throw ConfigError("dataset count must be at least 1");
    if (params.max_abs_lat >= kPi / 3.0) {
        throw ConfigError("object latitude bound must stay below pi/3");
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir.string());

    std::vector<DatasetEntry> entries;
    int written = 0;
    for (int i = 0; i < count; ++i) {
        uint64_t scene_seed = mix_seed(seed, static_cast<uint64_t>(i));
        Rng rng(scene_seed);

        SceneSpec spec;
        spec.seed = scene_seed;
        spec.texture_id = static_cast<int>(rng.index(3));
        spec.width = params.width;
        spec.height = params.height;
        int n_objects = params.min_objects + rng.index(params.max_objects - params.min_objects + 1);
        for (int o = 0; o < n_objects; ++o) {
            SceneObject obj;
            obj.shape = rng.uniform01() < params.cap_probability ? ObjectShape::Cap
                                                                 : ObjectShape::Rect;
            obj.center = make_spherical(rng.uniform(-params.max_abs_lat, params.max_abs_lat),
                                        rng.uniform(-kPi, kPi));
            obj.extent_lat = rng.uniform(params.extent_min, params.extent_max);
            obj.extent_lon = rng.uniform(params.extent_min, params.extent_max);
            obj.intensity = static_cast<float>(rng.uniform(0.88, 1.0));
            spec.objects.push_back(obj);
        }

        SynthScene scene = synth_scene(spec);
        bool empty = true;
        for (float v : scene.mask.pixels) {
            if (v != 0.0f) {
                empty = false;
                break;
            }
        }
        if (empty) continue;  // no degenerate test cases

        char pano_name[32], mask_name[32];
        std::snprintf(pano_name, sizeof(pano_name), "pano_%04d.png", written);
        std::snprintf(mask_name, sizeof(mask_name), "mask_%04d.png", written);
        write_png(scene.panorama, out_dir / pano_name);
        write_png(scene.mask, out_dir / mask_name);

        DatasetEntry entry;
        entry.panorama = pano_name;
        entry.mask = mask_name;
        entry.seed = scene_seed;
        entry.category = spec.objects.size() > 1
                             ? "multi"
                             : (spec.objects[0].shape == ObjectShape::Cap ? "cap" : "rect");
        for (const SceneObject& obj : spec.objects) {
            Image fp = object_footprint(obj, params.width, params.height);
            bool has_pixels = false;
            for (float v : fp.pixels) {
                if (v != 0.0f) {
                    has_pixels = true;
                    break;
                }
            }
            if (has_pixels) entry.boxes.push_back(box_of_footprint(fp));
        }
        entries.push_back(std::move(entry));
        ++written;
    }
    save_manifest(entries, out_dir / "manifest.json");
    return entries;
}

PreservationScore preservation_iou(const Image& mask, const std::vector<Box>& boxes,
                                   const SnapAngle& theta, int face_size) {
    (void)face_size;  // counting happens in source pixels; faces are continuous regions
    require_binary_mask(mask);
    PreservationScore out;
    const int w = mask.width, h = mask.height;
    for (const Box& box : boxes) {
        std::array<long, 6> counts{};
        long total = 0;
        for (int y = 0; y < h; ++y) {
            double lat = kHalfPi - (y + 0.5) * kPi / h;
            if (lat < box.lat_min || lat > box.lat_max) continue;
            for (int x = 0; x < w; ++x) {
                if (mask.at(x, y) == 0.0f) continue;
                double lon = -kPi + (x + 0.5) * kTwoPi / w;
                SphericalCoord c{lat, lon};
                if (!box.contains(c)) continue;
                Face f = face_of_direction(spherical_to_dir(rotate_coords(c, theta.theta)));
                ++counts[static_cast<size_t>(f)];
                ++total;
            }
        }
        if (total == 0) {
            ++out.skipped_boxes;
            continue;
        }
        long best = counts[0];  // lateral faces only; ties keep front->right->back->left
        for (int f = 1; f < 4; ++f) best = std::max(best, counts[static_cast<size_t>(f)]);
        out.per_box.push_back(static_cast<double>(best) / static_cast<double>(total));
    }
    if (!out.per_box.empty()) {
        out.mean = std::accumulate(out.per_box.begin(), out.per_box.end(), 0.0) /
                   static_cast<double>(out.per_box.size());
    }
    return out;
}

namespace {

void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    int threads = std::min<int>(jobs, static_cast<int>(n));
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
}

struct ImageContext {
    Image mask;
    std::vector<double> grid_scores;  // per grid index
    double exhaustive_best = 0.0;
    int saliency_grid_index = -1;
};

double variance(const std::vector<double>& xs) {
    double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(xs.size());
}

// Scorer over precomputed grid scores; keeps the budget accounting of the
// real pipeline without re-rendering.
Scorer grid_scorer(const std::vector<double>& grid_scores) {
    return Scorer([&grid_scores](const SnapAngle& a) {
        if (!a.on_grid()) throw ConfigError("benchmark policies must probe grid angles");
        return grid_scores[static_cast<size_t>(a.grid_index)];
    });
}

}  // namespace

BenchmarkReport budget_curve(const std::filesystem::path& manifest_dir,
                             const std::vector<DatasetEntry>& entries,
                             const BenchmarkConfig& cfg) {
    if (entries.empty()) throw ConfigError("benchmark dataset is empty");
    if (cfg.budgets.empty() || !std::is_sorted(cfg.budgets.begin(), cfg.budgets.end())) {
        throw ConfigError("budgets must be non-empty and ascending");
    }
    for (const std::string& p : cfg.policies) {
        static const char* known[] = {"exhaustive", "random",   "uniform",
                                      "coarse2fine", "saliency", "learned"};
        if (std::find(std::begin(known), std::end(known), p) == std::end(known)) {
            throw ConfigError("unknown policy: " + p);
        }
        if (p == "learned" && !cfg.weights) {
            throw ConfigError("learned policy requires a weights file");
        }
    }

    AngleGrid grid(cfg.n_grid);
    const size_t n_images = entries.size();

    std::optional<PolicyNetwork> net;
    if (std::find(cfg.policies.begin(), cfg.policies.end(), "learned") != cfg.policies.end()) {
        net = PolicyNetwork::load(*cfg.weights);
        if (net->config().n_grid != cfg.n_grid || net->config().face_size != cfg.face_size) {
            throw ConfigError("weights were trained for a different grid or face size");
        }
    }

    BenchmarkReport report;
    report.n_grid = cfg.n_grid;
    report.face_size = cfg.face_size;
    report.objective = cfg.objective;
    report.seed = cfg.seed;
    report.difficulty.resize(n_images);
    report.exhaustive_best.resize(n_images);
    report.image_ids.resize(n_images);

    const bool wants_saliency =
        std::find(cfg.policies.begin(), cfg.policies.end(), "saliency") != cfg.policies.end();

    std::vector<ImageContext> ctx(n_images);
    parallel_for(n_images, cfg.jobs, [&](size_t i) {
        ctx[i].mask = read_mask_png(manifest_dir / entries[i].mask);
        CubemapSampler sampler(cfg.face_size);
        ctx[i].grid_scores.resize(static_cast<size_t>(cfg.n_grid));
        for (int k = 0; k < cfg.n_grid; ++k) {
            ctx[i].grid_scores[static_cast<size_t>(k)] =
                disruption_score(fg_for_angle(sampler, ctx[i].mask, grid.at(k)), cfg.objective);
        }
        ctx[i].exhaustive_best =
            *std::min_element(ctx[i].grid_scores.begin(), ctx[i].grid_scores.end());
        if (wants_saliency) {
            // stand-in saliency: the blurred foreground mask
            SnapAngle a = saliency_policy(gaussian_blur(ctx[i].mask, cfg.saliency_sigma),
                                          cfg.saliency_window, 0.0, grid);
            ctx[i].saliency_grid_index = a.grid_index;
        }
    });
    for (size_t i = 0; i < n_images; ++i) {
        report.image_ids[i] = entries[i].panorama;
        report.difficulty[i] = variance(ctx[i].grid_scores);
        report.exhaustive_best[i] = ctx[i].exhaustive_best;
    }

    for (const std::string& policy : cfg.policies) {
        for (int budget : cfg.budgets) {
            BenchmarkRow row;
            row.policy = policy;
            row.budget = budget;
            row.scores.resize(n_images);
            std::vector<double> budget_used(n_images, 0.0);

            auto started = std::chrono::steady_clock::now();
            long total_evals = 0;

            if (policy == "learned") {
                std::vector<long> evals(n_images, 0);
                parallel_for(n_images, cfg.jobs, [&](size_t i) {
                    CubemapSampler sampler(cfg.face_size);
                    Rng rng(mix_seed(cfg.seed, 0x1ed000000ULL + i));
                    EpisodeResult ep = run_policy(sampler, ctx[i].mask, *net, budget, grid, rng,
                                                  cfg.objective);
                    row.scores[i] = ep.search.best_score;
                    budget_used[i] = ep.search.budget_used;
                    evals[i] = ep.search.budget_used;
                });
                total_evals = std::accumulate(evals.begin(), evals.end(), 0L);
            } else {
                for (size_t i = 0; i < n_images; ++i) {
                    Scorer scorer = grid_scorer(ctx[i].grid_scores);
                    SearchResult r;
                    if (policy == "exhaustive") {
                        r = exhaustive(scorer, grid);
                    } else if (policy == "random") {
                        // the seed ignores the budget so larger budgets
                        // evaluate supersets
                        r = random_policy(scorer, grid, budget, mix_seed(cfg.seed, 0xa2d00ULL + i));
                    } else if (policy == "uniform") {
                        r = uniform_policy(scorer, grid, budget);
                    } else if (policy == "coarse2fine") {
                        r = coarse_to_fine(scorer, grid, budget);
                    } else {  // saliency: one evaluation at the predicted angle
                        r.best_angle = grid.at(ctx[i].saliency_grid_index);
                        r.best_score = scorer(r.best_angle);
                        r.evaluated = scorer.evaluated();
                        r.budget_used = 1;
                    }
                    row.scores[i] = r.best_score;
                    budget_used[i] = r.budget_used;
                    total_evals += r.budget_used;
                }
            }

            double elapsed_ms = std::chrono::duration<double, std::milli>(
                                    std::chrono::steady_clock::now() - started)
                                    .count();
            row.mean = std::accumulate(row.scores.begin(), row.scores.end(), 0.0) /
                       static_cast<double>(n_images);
            row.stddev = std::sqrt(variance(row.scores));
            row.mean_budget_used = std::accumulate(budget_used.begin(), budget_used.end(), 0.0) /
                                   static_cast<double>(n_images);
            report.wall_ms_per_evaluation.push_back(
                total_evals > 0 ? elapsed_ms / static_cast<double>(total_evals) : 0.0);
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

nlohmann::json report_to_json(const BenchmarkReport& report, bool include_timing) {
    nlohmann::json rows = nlohmann::json::array();
    for (size_t r = 0; r < report.rows.size(); ++r) {
        const BenchmarkRow& row = report.rows[r];
        nlohmann::json jr{{"policy", row.policy},
                          {"budget", row.budget},
                          {"mean", row.mean},
                          {"stddev", row.stddev},
                          {"mean_budget_used", row.mean_budget_used},
                          {"scores", row.scores}};
        if (include_timing) {
            jr["wall_ms_per_evaluation"] = report.wall_ms_per_evaluation[r];
        }
        rows.push_back(std::move(jr));
    }
    return nlohmann::json{
        {"config",
         {{"n_grid", report.n_grid},
          {"face_size", report.face_size},
          {"margin_frac", report.objective.margin_frac},
          {"denominator_mode", denominator_mode_name(report.objective.mode)},
          {"seed", report.seed}}},
        {"images", report.image_ids},
        {"difficulty", report.difficulty},
        {"exhaustive_best", report.exhaustive_best},
        {"rows", rows},
    };
}

void report_to_csv(const BenchmarkReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write CSV: " + path.string());
    out << "policy,budget,image_id,score\n";
    for (const BenchmarkRow& row : report.rows) {
        for (size_t i = 0; i < row.scores.size(); ++i) {
            out << row.policy << ',' << row.budget << ',' << i << ',' << row.scores[i] << "\n";
        }
    }
}

std::vector<GainRow> difficulty_gains(const BenchmarkReport& report, const std::string& policy_a,
                                      const std::string& policy_b, int budget) {
    const BenchmarkRow* row_a = nullptr;
    const BenchmarkRow* row_b = nullptr;
    for (const BenchmarkRow& row : report.rows) {
        if (row.budget != budget) continue;
        if (row.policy == policy_a) row_a = &row;
        if (row.policy == policy_b) row_b = &row;
    }
    if (!row_a || !row_b) {
        throw ConfigError("difficulty gains need both policies at budget " +
                          std::to_string(budget));
    }
    const size_t n = report.difficulty.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t i, size_t j) {
        return report.difficulty[i] > report.difficulty[j];
    });

    std::vector<GainRow> out;
    double acc = 0.0;
    for (size_t rank = 0; rank < n; ++rank) {
        size_t i = order[rank];
        acc += row_b->scores[i] - row_a->scores[i];
        out.push_back(GainRow{static_cast<double>(rank + 1) / static_cast<double>(n),
                              acc / static_cast<double>(rank + 1)});
    }
    return out;
}

}  // namespace snapcube
