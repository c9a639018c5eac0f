#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "snapcube/policy.hpp"
#include "test_support.hpp"

using namespace snapcube;
using namespace testsupport;

namespace {

PolicyConfig small_config() {
    PolicyConfig cfg;
    cfg.face_size = 16;
    cfg.conv_channels = {6, 8, 10};
    cfg.feature_dim = 24;
    cfg.hidden_dim = 16;
    cfg.predictor_hidden = 12;
    return cfg;
}

std::vector<TrainScene> make_scenes(int count, uint64_t seed, int height = 32) {
    std::vector<TrainScene> scenes;
    for (int i = 0; i < count; ++i) {
        uint64_t s = mix_seed(seed, static_cast<uint64_t>(i));
        SceneSpec spec = random_scene_spec(s, height, 1);
        SynthScene scene = synth_scene(spec);
        scenes.push_back(TrainScene{std::move(scene.mask), s});
    }
    return scenes;
}

}  // namespace

TEST_CASE("zero rewards leave fresh weights unchanged") {
    PolicyConfig cfg = small_config();
    PolicyNetwork net(cfg, 5);
    std::vector<Tensor> before = net.tensors();

    CubemapSampler sampler(cfg.face_size);
    SynthScene scene = synth_scene(random_scene_spec(3, 32, 1));
    AngleGrid grid(cfg.n_grid);
    Rng rng(9);
    EpisodeResult ep = run_policy(sampler, scene.mask, net, 3, grid, rng, {},
                                  RewardMode::LiteralMin, nullptr, true);
    std::fill(ep.trajectory.rewards.begin(), ep.trajectory.rewards.end(), 0.0);

    SgdMomentum opt{0.01, 0.9, {}};
    reinforce_update({ep.trajectory}, net, opt);
    for (size_t i = 0; i < before.size(); ++i) CHECK(net.tensors()[i].v == before[i].v);
}

TEST_CASE("two-action bandit concentrates on the rewarded arm") {
    // one softmax layer driven by the same sampler/optimizer as the full net
    for (uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        std::vector<Tensor> weights(1);
        weights[0].name = "logits";
        weights[0].dims = {2};
        weights[0].v = {0.0, 0.0};
        SgdMomentum opt{0.01, 0.9, {}};
        Rng rng(seed);

        auto p_a = [&] {
            double za = weights[0].v[0], zb = weights[0].v[1];
            double m = std::max(za, zb);
            double ea = std::exp(za - m), eb = std::exp(zb - m);
            return ea / (ea + eb);
        };

        double prev = p_a();
        CHECK(prev == doctest::Approx(0.5));
        for (int update = 0; update < 200; ++update) {
            std::vector<double> pdf{p_a(), 1.0 - p_a()};
            int action = sample_action(pdf, rng);
            double reward = action == 0 ? 1.0 : 0.0;
            std::vector<Tensor> grads = weights;
            for (size_t k = 0; k < 2; ++k) {
                double onehot = static_cast<size_t>(action) == k ? 1.0 : 0.0;
                grads[0].v[k] = reward * (onehot - pdf[k]);
            }
            opt.ascend(weights, grads);
            double now = p_a();
            CHECK(now >= prev - 1e-12);  // only non-negative pushes toward A
            prev = now;
        }
        CHECK(prev > 0.9);
    }
}

TEST_CASE("run_policy respects the budget and the history minimum") {
    PolicyConfig cfg = small_config();
    PolicyNetwork net(cfg, 8);
    CubemapSampler sampler(cfg.face_size);
    SynthScene scene = synth_scene(random_scene_spec(17, 32, 1));
    AngleGrid grid(cfg.n_grid);

    Rng rng1(1);
    EpisodeResult one = run_policy(sampler, scene.mask, net, 1, grid, rng1);
    CHECK(one.search.budget_used == 1);
    CHECK(one.trajectory.thetas.size() == 1);
    CHECK(one.trajectory.thetas[0].grid_index == 0);  // theta_1 = 0, the canonical view
    CHECK(one.search.best_angle.grid_index == 0);

    Rng rng2(2);
    EpisodeResult ep = run_policy(sampler, scene.mask, net, 6, grid, rng2);
    CHECK(ep.search.budget_used == 6);
    double history_min = *std::min_element(ep.trajectory.objective.begin(),
                                           ep.trajectory.objective.end());
    CHECK(ep.search.best_score == history_min);
    for (const SnapAngle& a : ep.trajectory.thetas) {
        CHECK(a.theta >= 0.0);
        CHECK(a.theta < kHalfPi);
        CHECK(a.grid_index >= 0);
        CHECK(a.grid_index < grid.n);
    }
    // theta_t = wrap(theta_{t-1} + s_t) on the grid
    for (size_t t = 1; t < ep.trajectory.thetas.size(); ++t) {
        int expected = ((ep.trajectory.thetas[t - 1].grid_index +
                         ep.trajectory.applied_offsets[t]) %
                            grid.n +
                        grid.n) %
                       grid.n;
        CHECK(ep.trajectory.thetas[t].grid_index == expected);
    }
}

TEST_CASE("a zero-action-forced policy stays at the canonical view") {
    PolicyConfig cfg = small_config();
    PolicyNetwork net(cfg, 10);
    ActionSpace space(cfg.n_grid);
    // saturate the output bias at the zero offset
    Tensor& bias = net.tensors().back();
    REQUIRE(bias.name == "predictor2.b");
    bias.v[static_cast<size_t>(space.index_of_offset(0))] = 60.0;

    CubemapSampler sampler(cfg.face_size);
    SynthScene scene = synth_scene(random_scene_spec(23, 32, 1));
    AngleGrid grid(cfg.n_grid);
    Rng rng(3);
    EpisodeResult ep = run_policy(sampler, scene.mask, net, 5, grid, rng);
    for (const SnapAngle& a : ep.trajectory.thetas) CHECK(a.grid_index == 0);
    CHECK(ep.search.best_score == ep.trajectory.objective[0]);
}

TEST_CASE("literal-min rewards are never positive") {
    PolicyConfig cfg = small_config();
    PolicyNetwork net(cfg, 12);
    CubemapSampler sampler(cfg.face_size);
    AngleGrid grid(cfg.n_grid);
    for (uint64_t s : {40ULL, 41ULL, 42ULL}) {
        SynthScene scene = synth_scene(random_scene_spec(s, 32, 1));
        Rng rng(s);
        EpisodeResult ep = run_policy(sampler, scene.mask, net, 5, grid, rng, {},
                                      RewardMode::LiteralMin);
        for (double r : ep.trajectory.raw_rewards) CHECK(r <= 0.0);
        for (double r : ep.trajectory.rewards) CHECK(r <= 0.0);  // zero baselines
    }
}

TEST_CASE("baselines are zero on angle-independent scenes") {
    Image all_fg(64, 32, 1, 1.0f);
    std::vector<TrainScene> scenes{TrainScene{all_fg, 1}};
    AngleGrid grid(20);
    RewardBaselines b =
        estimate_baselines(scenes, 4, 3, 16, grid, {}, RewardMode::LiteralMin, 7);
    REQUIRE(b.b.size() == 4);
    for (double v : b.b) CHECK(v == 0.0);
}

TEST_CASE("baselines match a duplicate implementation") {
    std::vector<TrainScene> scenes = make_scenes(8, 99);
    AngleGrid grid(20);
    const int budget = 4, rollouts = 5, face = 16;
    const uint64_t seed = 123;
    RewardBaselines lib = estimate_baselines(scenes, budget, rollouts, face, grid, {},
                                             RewardMode::LiteralMin, seed);

    // independent re-implementation of the same Monte-Carlo mean
    CubemapSampler sampler(face);
    std::vector<double> mean(static_cast<size_t>(budget), 0.0);
    long n = 0;
    for (size_t si = 0; si < scenes.size(); ++si) {
        std::vector<double> table(20);
        for (int k = 0; k < 20; ++k) {
            table[static_cast<size_t>(k)] =
                disruption_score(fg_for_angle(sampler, scenes[si].mask, grid.at(k)), {});
        }
        for (int r = 0; r < rollouts; ++r) {
            Rng rng(mix_seed(seed, (static_cast<uint64_t>(si) << 20) + static_cast<uint64_t>(r)));
            std::vector<int> rest(19);
            std::iota(rest.begin(), rest.end(), 1);
            rng.shuffle(rest);
            double best = table[0];
            for (int t = 0; t + 1 < budget; ++t) {
                double f = table[static_cast<size_t>(rest[static_cast<size_t>(t)])];
                mean[static_cast<size_t>(t)] += std::min(best - f, 0.0);
                best = std::min(best, f);
            }
            ++n;
        }
    }
    for (double& v : mean) v /= static_cast<double>(n);
    mean.back() = 0.0;
    for (size_t t = 0; t < mean.size(); ++t) {
        CHECK(lib.b[t] == doctest::Approx(mean[t]).epsilon(1e-12));
    }
}

TEST_CASE("single scene, single rollout baselines equal that rollout's rewards") {
    std::vector<TrainScene> scenes = make_scenes(1, 5);
    AngleGrid grid(20);
    RewardBaselines b = estimate_baselines(scenes, 3, 1, 16, grid, {},
                                           RewardMode::LiteralMin, 55);
    CubemapSampler sampler(16);
    std::vector<double> table(20);
    for (int k = 0; k < 20; ++k) {
        table[static_cast<size_t>(k)] =
            disruption_score(fg_for_angle(sampler, scenes[0].mask, grid.at(k)), {});
    }
    Rng rng(mix_seed(55, 0));
    std::vector<int> rest(19);
    std::iota(rest.begin(), rest.end(), 1);
    rng.shuffle(rest);
    double best = table[0];
    for (int t = 0; t < 2; ++t) {
        double f = table[static_cast<size_t>(rest[static_cast<size_t>(t)])];
        CHECK(b.b[static_cast<size_t>(t)] == std::min(best - f, 0.0));
        best = std::min(best, f);
    }
    CHECK(b.b[2] == 0.0);
}

TEST_CASE("lr zero trains flat and identical seeds train identically") {
    std::vector<TrainScene> train_set = make_scenes(6, 1000);
    std::vector<TrainScene> val_set = make_scenes(3, 2000);

    TrainConfig cfg;
    cfg.epochs = 3;
    cfg.batch = 3;
    cfg.budget = 3;
    cfg.lr = 0.0;
    cfg.seed = 77;
    cfg.face_size = 16;
    cfg.baseline_rollouts = 1;

    std::ostringstream log_a;
    TrainOutcome a = train(cfg, train_set, val_set, &log_a);
    REQUIRE(a.log.size() == 3);
    for (size_t e = 1; e < a.log.size(); ++e) {
        CHECK(a.log[e].val_f_per_budget == a.log[0].val_f_per_budget);
    }

    std::ostringstream log_b;
    TrainOutcome b = train(cfg, train_set, val_set, &log_b);
    CHECK(log_a.str() == log_b.str());

    cfg.lr = 0.01;
    std::ostringstream log_c, log_d;
    TrainOutcome c = train(cfg, train_set, val_set, &log_c);
    TrainOutcome d = train(cfg, train_set, val_set, &log_d);
    CHECK(log_c.str() == log_d.str());
    for (size_t i = 0; i < c.net.tensors().size(); ++i) {
        CHECK(c.net.tensors()[i].v == d.net.tensors()[i].v);
    }
    CHECK(!c.aborted);
}

TEST_CASE("shared scene seeds between train and validation are rejected") {
    std::vector<TrainScene> train_set = make_scenes(3, 1);
    std::vector<TrainScene> val_set{train_set[0]};
    TrainConfig cfg;
    cfg.face_size = 16;
    CHECK_THROWS_AS(train(cfg, train_set, val_set), ConfigError);
}
