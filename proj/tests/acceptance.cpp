// Acceptance suite: runs every criterion end to end and prints one
// PASS/FAIL line each. Exits nonzero if any criterion fails.
//
// Usage: acceptance [path-to-snapcube-cli]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "snapcube/harness.hpp"
#include "snapcube/objective.hpp"
#include "snapcube/png_io.hpp"
#include "snapcube/policy.hpp"
#include "snapcube/scene.hpp"
#include "snapcube/search.hpp"

using namespace snapcube;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

SceneSpec scene_with_objects(uint64_t seed, int height, int min_objects, int max_objects,
                             double extent_min, double extent_max) {
    Rng rng(seed);
    SceneSpec spec;
    spec.seed = seed;
    spec.texture_id = static_cast<int>(rng.index(3));
    spec.height = height;
    spec.width = 2 * height;
    int n = min_objects + rng.index(max_objects - min_objects + 1);
    for (int i = 0; i < n; ++i) {
        SceneObject obj;
        obj.shape = rng.uniform01() < 0.7 ? ObjectShape::Cap : ObjectShape::Rect;
        obj.center = make_spherical(rng.uniform(-0.8, 0.8), rng.uniform(-kPi, kPi));
        obj.extent_lat = rng.uniform(extent_min, extent_max);
        obj.extent_lon = rng.uniform(extent_min, extent_max);
        spec.objects.push_back(obj);
    }
    return spec;
}

// ---------------------------------------------------------------- criterion 1

bool criterion_geometry() {
    auto start = Clock::now();
    Check c;
    const int n = 20;
    CubemapSampler sampler(64);

    for (int i = 0; i < 50 && c.ok; ++i) {
        SceneSpec spec = scene_with_objects(1000 + static_cast<uint64_t>(i), 64, 1, 3, 0.12, 0.3);
        SynthScene scene = synth_scene(spec);
        Rng rng(2000 + static_cast<uint64_t>(i));
        int k = rng.index(n);

        auto base = sampler.project_lateral_binary(scene.mask, SnapAngle::from_grid(k, n));
        auto turned = sampler.project_lateral_binary(scene.mask, SnapAngle::from_grid(k + n, n));
        long disagreement = 0, total = 0;
        for (int f = 0; f < 4; ++f) {
            const auto& expect = base[static_cast<size_t>((f + 1) % 4)];
            const auto& got = turned[static_cast<size_t>(f)];
            for (size_t p = 0; p < got.size(); ++p) {
                disagreement += got[p] != expect[p];
                ++total;
            }
        }
        c.expect(static_cast<double>(disagreement) <= 0.005 * static_cast<double>(total),
                 "mask permutation disagreement above 0.5%");

        ForegroundCubemap fa = fg_for_angle(sampler, scene.mask, SnapAngle::from_grid(k, n));
        ForegroundCubemap fb = fg_for_angle(sampler, scene.mask, SnapAngle::from_grid(k + n, n));
        c.expect(disruption_score(fa, {}) == disruption_score(fb, {}),
                 "band-occupancy score changed under a quarter turn");
    }

    for (int i = 0; i < 20 && c.ok; ++i) {
        Rng rng(3000 + static_cast<uint64_t>(i));
        Image img(256, 128, 1);
        double a1 = rng.uniform(0.2, 0.4), a2 = rng.uniform(0.1, 0.25);
        double f1 = 1 + rng.index(3), f2 = 1 + rng.index(2);
        double p1 = rng.uniform(0.0, kTwoPi), p2 = rng.uniform(0.0, kTwoPi);
        double norm = 0.4 / (a1 + a2);
        for (int y = 0; y < 128; ++y) {
            double lat = kHalfPi - (y + 0.5) * kPi / 128;
            for (int x = 0; x < 256; ++x) {
                double lon = -kPi + (x + 0.5) * kTwoPi / 256;
                img.at(x, y) = static_cast<float>(
                    0.5 + norm * (a1 * std::cos(f1 * lon + 1.3 * lat + p1) +
                                  a2 * std::sin(f2 * lon - 0.9 * lat + p2)));
            }
        }
        Cubemap cm = project_cubemap(img, SnapAngle::from_radians(rng.uniform(0.0, kHalfPi)), 64);
        Image back = cubemap_to_equirect(cm, 256, 128);
        double mse = 0.0;
        for (size_t p = 0; p < img.pixels.size(); ++p) {
            double d = static_cast<double>(img.pixels[p]) - back.pixels[p];
            mse += d * d;
        }
        mse /= static_cast<double>(img.pixels.size());
        double psnr = 10.0 * std::log10(1.0 / mse);
        c.expect(psnr > 30.0, "round-trip PSNR " + std::to_string(psnr) + " dB <= 30 dB");
    }

    double elapsed = seconds_since(start);
    c.expect(elapsed < 5.0, "geometry suite took " + std::to_string(elapsed) + " s (>= 5 s)");
    std::printf("[1] geometry: permutation identity + round trip ......... %s (%.2fs)%s\n",
                c.ok ? "PASS" : "FAIL", elapsed, c.ok ? "" : (" - " + c.detail).c_str());
    return c.ok;
}

// ---------------------------------------------------------------- criterion 2

bool criterion_objective() {
    auto start = Clock::now();
    Check c;
    for (int w : {32, 64, 128}) {
        for (double a : {0.05, 0.0625, 0.1}) {
            ObjectiveConfig cfg;
            cfg.margin_frac = a;
            int m = band_margin_pixels(w, cfg);
            std::vector<uint8_t> band = band_mask(w, cfg);
            long count = 0;
            for (int y = 0; y < w; ++y) {
                for (int x = 0; x < w; ++x) {
                    bool in = x < m || x >= w - m || y < m;  // exhaustive recount
                    count += in ? 1 : 0;
                    c.expect(band[static_cast<size_t>(y) * w + x] == (in ? 1 : 0),
                             "band membership mismatch");
                }
            }
            c.expect(count == 3L * m * w - 2L * m * m, "band count formula mismatch");
        }
    }

    ForegroundCubemap ones;
    ones.face_size = 64;
    for (auto& f : ones.faces) f.assign(64 * 64, 1);
    ObjectiveConfig band_cfg;
    c.expect(disruption_score(ones, band_cfg) == 1.0, "all-one foreground != 1.0 in band mode");
    ObjectiveConfig whole_cfg;
    whole_cfg.mode = DenominatorMode::WholeFace;
    c.expect(std::fabs(disruption_score(ones, whole_cfg) - 0.1796875) <= 1e-12,
             "all-one foreground whole-face score off");

    double elapsed = seconds_since(start);
    std::printf("[2] objective: band counts + saturation scores .......... %s (%.2fs)%s\n",
                c.ok ? "PASS" : "FAIL", elapsed, c.ok ? "" : (" - " + c.detail).c_str());
    return c.ok;
}

// ---------------------------------------------------------------- criterion 3

bool criterion_search() {
    auto start = Clock::now();
    Check c;
    AngleGrid grid(20);
    CubemapSampler sampler(32);

    auto grid_scores = [&](const Image& mask) {
        std::vector<double> t(20);
        for (int k = 0; k < 20; ++k) {
            t[static_cast<size_t>(k)] = disruption_score(fg_for_angle(sampler, mask, grid.at(k)), {});
        }
        return t;
    };
    auto table_scorer = [](const std::vector<double>& t) {
        return Scorer([&t](const SnapAngle& a) { return t[static_cast<size_t>(a.grid_index)]; });
    };

    // exhaustive equals a literal brute-force argmin on 100 random scenes
    for (int i = 0; i < 100 && c.ok; ++i) {
        SynthScene scene =
            synth_scene(scene_with_objects(5000 + static_cast<uint64_t>(i), 48, 1, 3, 0.12, 0.3));
        std::vector<double> table = grid_scores(scene.mask);
        Scorer scorer = table_scorer(table);
        SearchResult r = exhaustive(scorer, grid);
        int best = 0;
        for (int k = 1; k < 20; ++k) {
            if (table[static_cast<size_t>(k)] < table[static_cast<size_t>(best)]) best = k;
        }
        c.expect(r.best_angle.grid_index == best && r.best_score == table[static_cast<size_t>(best)],
                 "exhaustive disagrees with brute force");

        Scorer su = table_scorer(table);
        c.expect(uniform_policy(su, grid, 20).best_score == r.best_score,
                 "uniform at T=n missed the exhaustive best");
    }

    // coarse-to-fine reaches the grid optimum on most single-object scenes
    int hits = 0;
    const int trials = 100;
    for (int i = 0; i < trials; ++i) {
        SynthScene scene =
            synth_scene(scene_with_objects(6000 + static_cast<uint64_t>(i), 48, 1, 1, 0.15, 0.3));
        std::vector<double> table = grid_scores(scene.mask);
        Scorer sc = table_scorer(table);
        SearchResult r = coarse_to_fine(sc, grid, 10);
        double best = *std::min_element(table.begin(), table.end());
        hits += r.best_score == best ? 1 : 0;
    }
    c.expect(hits >= 90, "coarse-to-fine hit rate " + std::to_string(hits) + "/100 < 90");

    // best scores never increase with budget
    for (int i = 0; i < 20 && c.ok; ++i) {
        SynthScene scene =
            synth_scene(scene_with_objects(7000 + static_cast<uint64_t>(i), 48, 1, 3, 0.12, 0.3));
        std::vector<double> table = grid_scores(scene.mask);
        double prev_r = 1e9, prev_u = 1e9, prev_c = 1e9;
        for (int budget = 1; budget <= 20; ++budget) {
            Scorer sr = table_scorer(table);
            double br = random_policy(sr, grid, budget, 42).best_score;
            c.expect(br <= prev_r, "random best score increased with budget");
            prev_r = br;
            Scorer su = table_scorer(table);
            double bu = uniform_policy(su, grid, budget).best_score;
            c.expect(bu <= prev_u, "uniform best score increased with budget");
            prev_u = bu;
            if (budget >= 2) {
                Scorer scf = table_scorer(table);
                double bc = coarse_to_fine(scf, grid, budget).best_score;
                c.expect(bc <= prev_c, "coarse-to-fine best score increased with budget");
                prev_c = bc;
            }
        }
    }

    double elapsed = seconds_since(start);
    std::printf("[3] search: brute-force parity + budget monotonicity .... %s (%.2fs)%s\n",
                c.ok ? "PASS" : "FAIL", elapsed, c.ok ? "" : (" - " + c.detail).c_str());
    return c.ok;
}

// ---------------------------------------------------------------- criterion 4

bool criterion_gradients() {
    auto start = Clock::now();
    Check c;
    PolicyConfig cfg;
    cfg.face_size = 16;  // the production stack at a small input size

    for (uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        PolicyNetwork net(cfg, seed);
        Rng rng(seed * 31 + 7);
        const int steps = 3;
        std::vector<std::vector<double>> inputs;
        std::vector<int> actions;
        std::vector<double> rewards;
        for (int t = 0; t < steps; ++t) {
            std::vector<double> input(static_cast<size_t>(4) * 16 * 16);
            for (double& v : input) v = rng.uniform01() < 0.3 ? 1.0 : 0.0;
            inputs.push_back(std::move(input));
            actions.push_back(rng.index(cfg.actions()));
            rewards.push_back(rng.uniform(-0.5, 0.5));
        }

        auto surrogate = [&]() {
            std::vector<double> hidden = net.initial_hidden();
            double total = 0.0;
            for (int t = 0; t < steps; ++t) {
                std::vector<double> pdf = net.forward(inputs[static_cast<size_t>(t)], hidden);
                total += rewards[static_cast<size_t>(t)] *
                         std::log(pdf[static_cast<size_t>(actions[static_cast<size_t>(t)])]);
            }
            return total;
        };

        std::vector<PolicyNetwork::StepCache> caches(steps);
        std::vector<double> hidden = net.initial_hidden();
        for (int t = 0; t < steps; ++t) {
            net.forward(inputs[static_cast<size_t>(t)], hidden, &caches[static_cast<size_t>(t)]);
        }
        std::vector<Tensor> grads = net.zero_gradients();
        net.backward_episode(caches, actions, rewards, grads);

        const double eps = 1e-5;
        for (size_t ti = 0; ti < net.tensors().size() && c.ok; ++ti) {
            Tensor& tensor = net.tensors()[ti];
            Rng pick(seed * 1000 + ti);
            size_t samples = std::min<size_t>(tensor.v.size(), 24);
            for (size_t s = 0; s < samples && c.ok; ++s) {
                size_t j = tensor.v.size() <= 24 ? s : pick.next_u64() % tensor.v.size();
                double saved = tensor.v[j];
                tensor.v[j] = saved + eps;
                double up = surrogate();
                tensor.v[j] = saved - eps;
                double down = surrogate();
                tensor.v[j] = saved;
                double numeric = (up - down) / (2.0 * eps);
                double analytic = grads[ti].v[j];
                double rel = std::fabs(analytic - numeric) /
                             std::max({std::fabs(analytic), std::fabs(numeric), 1e-6});
                c.expect(rel < 1e-4, "tensor " + tensor.name + " rel err " + std::to_string(rel));
            }
        }
    }

    double elapsed = seconds_since(start);
    c.expect(elapsed < 60.0, "gradient suite took " + std::to_string(elapsed) + " s (>= 60 s)");
    std::printf("[4] gradients: finite-difference parity ................. %s (%.2fs)%s\n",
                c.ok ? "PASS" : "FAIL", elapsed, c.ok ? "" : (" - " + c.detail).c_str());
    return c.ok;
}

// ---------------------------------------------------------------- criterion 5

bool criterion_bandit() {
    auto start = Clock::now();
    Check c;
    int successes = 0;
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        std::vector<Tensor> weights(1);
        weights[0].name = "logits";
        weights[0].dims = {2};
        weights[0].v = {0.0, 0.0};
        SgdMomentum opt{0.01, 0.9, {}};
        Rng rng(seed);

        bool reached = false;
        for (int update = 0; update < 500; ++update) {
            double za = weights[0].v[0], zb = weights[0].v[1];
            double m = std::max(za, zb);
            double ea = std::exp(za - m), eb = std::exp(zb - m);
            std::vector<double> pdf{ea / (ea + eb), eb / (ea + eb)};
            int action = sample_action(pdf, rng);
            double reward = action == 0 ? 1.0 : 0.0;
            std::vector<Tensor> grads = weights;
            for (size_t k = 0; k < 2; ++k) {
                grads[0].v[k] = reward * ((static_cast<size_t>(action) == k ? 1.0 : 0.0) - pdf[k]);
            }
            opt.ascend(weights, grads);
            double za2 = weights[0].v[0], zb2 = weights[0].v[1];
            double p_a = 1.0 / (1.0 + std::exp(zb2 - za2));
            if (p_a > 0.95) {
                reached = true;
                break;
            }
        }
        successes += reached ? 1 : 0;
    }
    c.expect(successes == 5, "bandit reached 0.95 in only " + std::to_string(successes) + "/5");

    double elapsed = seconds_since(start);
    std::printf("[5] reinforce: two-action bandit sanity ................. %s (%.2fs)%s\n",
                c.ok ? "PASS" : "FAIL", elapsed, c.ok ? "" : (" - " + c.detail).c_str());
    return c.ok;
}

// ---------------------------------------------------------------- criterion 6

struct BootstrapResult {
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

BootstrapResult bootstrap_mean(const std::vector<double>& diffs, uint64_t seed) {
    BootstrapResult out;
    out.mean = std::accumulate(diffs.begin(), diffs.end(), 0.0) /
               static_cast<double>(diffs.size());
    const int resamples = 1000;
    std::vector<double> means(resamples);
    Rng rng(seed);
    for (int r = 0; r < resamples; ++r) {
        double acc = 0.0;
        for (size_t i = 0; i < diffs.size(); ++i) {
            acc += diffs[rng.next_u64() % diffs.size()];
        }
        means[static_cast<size_t>(r)] = acc / static_cast<double>(diffs.size());
    }
    std::sort(means.begin(), means.end());
    out.ci_low = means[24];    // 2.5th percentile of 1000
    out.ci_high = means[974];  // 97.5th
    return out;
}

bool criterion_learning() {
    auto start = Clock::now();
    Check c;
    const int budget = 4;
    const int n_train = 2000, n_test = 500;

    std::vector<TrainScene> train_set, val_set;
    train_set.reserve(n_train);
    for (int i = 0; i < n_train; ++i) {
        uint64_t seed = mix_seed(0xace, static_cast<uint64_t>(i));
        SynthScene s = synth_scene(scene_with_objects(seed, 128, 1, 1, 0.15, 0.32));
        train_set.push_back(TrainScene{std::move(s.mask), seed});
    }
    std::vector<Image> test_masks;
    test_masks.reserve(n_test);
    for (int i = 0; i < n_test; ++i) {
        uint64_t seed = mix_seed(0xbead, static_cast<uint64_t>(i));
        SynthScene s = synth_scene(scene_with_objects(seed, 128, 1, 1, 0.15, 0.32));
        test_masks.push_back(std::move(s.mask));
    }
    std::fprintf(stderr, "  [6] dataset ready after %.1fs\n", seconds_since(start));

    TrainConfig cfg;
    cfg.epochs = 12;
    cfg.batch = 32;
    cfg.budget = budget;
    cfg.lr = 0.01;
    cfg.momentum = 0.9;
    cfg.seed = 20240311;
    cfg.reward_mode = RewardMode::ClippedGain;
    cfg.face_size = 64;
    cfg.baseline_rollouts = 2;

    TrainOutcome outcome = train(cfg, train_set, val_set, nullptr);
    c.expect(!outcome.aborted, "training diverged");
    std::fprintf(stderr, "  [6] training done after %.1fs\n", seconds_since(start));

    AngleGrid grid(20);
    CubemapSampler sampler(64);
    std::vector<double> learned(n_test), random_scores(n_test), uniform_scores(n_test);
    for (int i = 0; i < n_test; ++i) {
        const Image& mask = test_masks[static_cast<size_t>(i)];
        Rng rng(mix_seed(0xfeed, static_cast<uint64_t>(i)));
        learned[static_cast<size_t>(i)] =
            run_policy(sampler, mask, outcome.net, budget, grid, rng).search.best_score;

        std::vector<double> table(20);
        for (int k = 0; k < 20; ++k) {
            table[static_cast<size_t>(k)] =
                disruption_score(fg_for_angle(sampler, mask, grid.at(k)), {});
        }
        Scorer sr(Scorer([&table](const SnapAngle& a) {
            return table[static_cast<size_t>(a.grid_index)];
        }));
        random_scores[static_cast<size_t>(i)] =
            random_policy(sr, grid, budget, mix_seed(0xdab, static_cast<uint64_t>(i))).best_score;
        Scorer su(Scorer([&table](const SnapAngle& a) {
            return table[static_cast<size_t>(a.grid_index)];
        }));
        uniform_scores[static_cast<size_t>(i)] = uniform_policy(su, grid, budget).best_score;
    }

    auto mean_of = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    double m_learned = mean_of(learned);
    double m_random = mean_of(random_scores);
    double m_uniform = mean_of(uniform_scores);

    std::vector<double> d_random(n_test), d_uniform(n_test);
    for (int i = 0; i < n_test; ++i) {
        d_random[static_cast<size_t>(i)] =
            random_scores[static_cast<size_t>(i)] - learned[static_cast<size_t>(i)];
        d_uniform[static_cast<size_t>(i)] =
            uniform_scores[static_cast<size_t>(i)] - learned[static_cast<size_t>(i)];
    }
    BootstrapResult br = bootstrap_mean(d_random, 11);
    BootstrapResult bu = bootstrap_mean(d_uniform, 12);

    std::fprintf(stderr,
                 "  [6] mean F at T=%d: learned %.4f, random %.4f, uniform %.4f\n"
                 "  [6] paired diff vs random [%.5f, %.5f], vs uniform [%.5f, %.5f]\n",
                 budget, m_learned, m_random, m_uniform, br.ci_low, br.ci_high, bu.ci_low,
                 bu.ci_high);

    c.expect(m_learned < m_random, "learned mean not below random");
    c.expect(m_learned < m_uniform, "learned mean not below uniform");
    c.expect(br.ci_low > 0.0, "CI vs random includes zero");
    c.expect(bu.ci_low > 0.0, "CI vs uniform includes zero");

    double elapsed = seconds_since(start);
    c.expect(elapsed < 1800.0, "end-to-end run took " + std::to_string(elapsed) + " s");
    std::printf("[6] learning: beats random and uniform at T=4 ........... %s (%.1fs)%s\n",
                c.ok ? "PASS" : "FAIL", elapsed, c.ok ? "" : (" - " + c.detail).c_str());
    return c.ok;
}

// ---------------------------------------------------------------- criterion 7

bool criterion_preservation() {
    auto start = Clock::now();
    Check c;
    std::vector<Box> whole{Box{-kPi, -kHalfPi, kPi, kHalfPi}};

    SceneSpec inside;
    inside.width = 256;
    inside.height = 128;
    SceneObject obj;
    obj.center = make_spherical(0.0, 0.0);
    obj.extent_lat = 0.2;
    inside.objects.push_back(obj);
    PreservationScore contained =
        preservation_iou(synth_scene(inside).mask, whole, SnapAngle::from_grid(0, 20), 64);
    c.expect(contained.per_box.size() == 1 && contained.per_box[0] == 1.0,
             "contained object scored below 1.0");

    SceneSpec split = inside;
    split.objects[0].center = make_spherical(0.0, kPi / 4.0);
    PreservationScore straddle =
        preservation_iou(synth_scene(split).mask, whole, SnapAngle::from_grid(0, 20), 64);
    c.expect(straddle.per_box.size() == 1 && std::fabs(straddle.per_box[0] - 0.5) <= 0.02,
             "straddling object scored " +
                 std::to_string(straddle.per_box.empty() ? -1.0 : straddle.per_box[0]));

    // oracle angles preserve objects at least as well as the canonical view
    AngleGrid grid(20);
    CubemapSampler sampler(64);
    double sum_canonical = 0.0, sum_best = 0.0;
    int scenes = 0;
    for (int i = 0; i < 200; ++i) {
        SceneSpec spec = scene_with_objects(9000 + static_cast<uint64_t>(i), 64, 1, 2, 0.12, 0.3);
        SynthScene scene = synth_scene(spec);
        int best_k = 0;
        double best_score = 1e18;
        for (int k = 0; k < 20; ++k) {
            double s = disruption_score(fg_for_angle(sampler, scene.mask, grid.at(k)), {});
            if (s < best_score) {
                best_score = s;
                best_k = k;
            }
        }
        PreservationScore canonical =
            preservation_iou(scene.mask, whole, SnapAngle::from_grid(0, 20), 64);
        PreservationScore snapped =
            preservation_iou(scene.mask, whole, SnapAngle::from_grid(best_k, 20), 64);
        if (canonical.per_box.empty()) continue;
        sum_canonical += canonical.mean;
        sum_best += snapped.mean;
        ++scenes;
    }
    c.expect(scenes > 150, "too few scored scenes");
    c.expect(sum_best >= sum_canonical, "oracle angles preserved objects worse than canonical");
    std::fprintf(stderr, "  [7] mean IoU canonical %.4f vs snapped %.4f over %d scenes\n",
                 sum_canonical / scenes, sum_best / scenes, scenes);

    double elapsed = seconds_since(start);
    std::printf("[7] preservation: IoU metric + oracle ordering .......... %s (%.1fs)%s\n",
                c.ok ? "PASS" : "FAIL", elapsed, c.ok ? "" : (" - " + c.detail).c_str());
    return c.ok;
}

// ---------------------------------------------------------------- criterion 8

bool criterion_cli_determinism(const fs::path& cli) {
    auto start = Clock::now();
    Check c;
    if (!fs::exists(cli)) {
        std::printf("[8] cli determinism ...................................... FAIL (cli not found at %s)\n",
                    cli.string().c_str());
        return false;
    }
    fs::path dir = fs::temp_directory_path() / "snapcube_acceptance_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);

    auto run = [&](const std::string& args, const fs::path& out) {
        std::string cmd = cli.string() + " " + args + " >" + out.string() + " 2>" +
                          (dir / "err.txt").string();
        return std::system(cmd.c_str());
    };

    int synth_rc = run("synth --count 12 --seed 31 --out-dir " + (dir / "ds").string() +
                           " --width 128 --height 64",
                       dir / "synth.json");
    c.expect(synth_rc == 0, "synth failed");

    std::string eval_args = "eval --manifest " + (dir / "ds" / "manifest.json").string() +
                            " --policies exhaustive,random,uniform,coarse2fine --budgets 2,4 " +
                            "--face-size 32 --seed 1234";
    int rc1 = run(eval_args, dir / "a.json");
    int rc2 = run(eval_args, dir / "b.json");
    c.expect(rc1 == 0 && rc2 == 0, "eval failed");

    std::ifstream fa(dir / "a.json", std::ios::binary), fb(dir / "b.json", std::ios::binary);
    std::string a((std::istreambuf_iterator<char>(fa)), {});
    std::string b((std::istreambuf_iterator<char>(fb)), {});
    c.expect(!a.empty() && a == b, "eval output differs across runs");
    fs::remove_all(dir);

    double elapsed = seconds_since(start);
    std::printf("[8] cli determinism: byte-identical eval reports ......... %s (%.1fs)%s\n",
                c.ok ? "PASS" : "FAIL", elapsed, c.ok ? "" : (" - " + c.detail).c_str());
    return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
    fs::path cli;
    if (argc > 1) {
        cli = argv[1];
    } else {
        cli = fs::path(argv[0]).parent_path().parent_path() / "tools" / "snapcube";
    }

    bool ok = true;
    ok &= criterion_geometry();
    ok &= criterion_objective();
    ok &= criterion_search();
    ok &= criterion_gradients();
    ok &= criterion_bandit();
    ok &= criterion_learning();
    ok &= criterion_preservation();
    ok &= criterion_cli_determinism(cli);
    std::printf("%s\n", ok ? "acceptance: ALL PASS" : "acceptance: FAILURES");
    return ok ? 0 : 1;
}
