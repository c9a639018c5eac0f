#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "snapcube/objective.hpp"
#include "snapcube/rng.hpp"
#include "snapcube/search.hpp"

namespace snapcube {

struct Tensor {
    std::string name;
    std::vector<int> dims;
    std::vector<double> v;

    size_t size() const { return v.size(); }
};

// The printed reward min(O_t - F_new, 0) only ever penalizes; the prose
// rewards decreases. Both readings are available.
enum class RewardMode { LiteralMin, ClippedGain };

RewardMode reward_mode_from_name(const std::string& name);
const char* reward_mode_name(RewardMode mode);

double step_reward(double best_so_far, double f_new, RewardMode mode);

// Relative grid offsets -n/2..+n/2 (n must be even), n+1 actions total.
struct ActionSpace {
    int n_grid = 20;

    explicit ActionSpace(int n);

    int count() const { return n_grid + 1; }
    int offset_of(int action_index) const { return action_index - n_grid / 2; }
    int index_of_offset(int offset) const;
};

struct PolicyConfig {
    int face_size = 64;
    int n_grid = 20;
    std::array<int, 3> conv_channels = {8, 16, 32};
    std::array<int, 3> conv_kernel = {5, 5, 3};
    std::array<int, 3> conv_stride = {2, 2, 2};
    std::array<int, 3> conv_pad = {2, 2, 1};
    int feature_dim = 128;
    int hidden_dim = 128;
    int predictor_hidden = 64;

    int actions() const { return n_grid + 1; }
    int conv_out(int layer) const;  // spatial side after layer 0..2
    int flatten_dim() const;
};

// Feature extractor (three strided ReLU convs + linear), tanh recurrent
// aggregator, and the two-layer action predictor ending in a softmax.
// Double precision throughout so finite-difference checks are meaningful.
class PolicyNetwork {
public:
    PolicyNetwork(const PolicyConfig& cfg, uint64_t init_seed);

    struct StepCache {
        std::vector<double> input;        // 4 x W x W
        std::vector<double> conv_out[3];  // post-ReLU
        std::vector<double> feature;
        std::vector<double> hidden_prev;
        std::vector<double> hidden;       // tanh output
        std::vector<double> h1;           // predictor hidden, post-ReLU
        std::vector<double> pdf;
    };

    // Returns the action pdf and advances `hidden` in place.
    std::vector<double> forward(const std::vector<double>& input, std::vector<double>& hidden,
                                StepCache* cache = nullptr) const;

    std::vector<double> initial_hidden() const;

    std::vector<Tensor> zero_gradients() const;

    // Accumulates d/dw sum_t rewards[t] * log pdf_t[actions[t]] into grads
    // (backprop through time across the whole episode).
    void backward_episode(const std::vector<StepCache>& steps, const std::vector<int>& actions,
                          const std::vector<double>& rewards, std::vector<Tensor>& grads) const;

    std::vector<Tensor>& tensors() { return tensors_; }
    const std::vector<Tensor>& tensors() const { return tensors_; }
    const PolicyConfig& config() const { return cfg_; }

    void save(const std::filesystem::path& path) const;
    static PolicyNetwork load(const std::filesystem::path& path);

private:
    PolicyConfig cfg_;
    std::vector<Tensor> tensors_;
};

std::vector<double> fg_to_input(const ForegroundCubemap& fg);

// Multinomial draw from the pdf.
int sample_action(const std::vector<double>& pdf, Rng& rng);

// b_t = mean step-t raw reward of random rollouts on the training set;
// the final step carries no reward and has b_T = 0.
struct RewardBaselines {
    std::vector<double> b;
};

struct Trajectory {
    std::vector<SnapAngle> thetas;                 // theta_t, grid-valued
    std::vector<int> applied_offsets;              // s_t, s_1 = 0
    std::vector<int> actions;                      // sampled action indices p_t
    std::vector<std::vector<double>> pdfs;         // pi(. | history) per step
    std::vector<double> objective;                 // F_t
    std::vector<double> best_so_far;               // O_t = min(F_1..F_t)
    std::vector<double> raw_rewards;               // step_reward(O_t, F_{t+1}); last = 0
    std::vector<double> rewards;                   // raw - baseline
    std::vector<PolicyNetwork::StepCache> caches;  // for the gradient pass
};

struct SgdMomentum {
    double lr = 0.01;
    double momentum = 0.9;
    std::vector<Tensor> velocity;

    // w += v with v = momentum * v + lr * grad (gradient ascent).
    void ascend(std::vector<Tensor>& weights, const std::vector<Tensor>& grads);
};

// One REINFORCE step over a batch of finished trajectories. Throws
// NumericError (weights untouched) if any gradient is non-finite.
void reinforce_update(const std::vector<Trajectory>& batch, PolicyNetwork& net,
                      SgdMomentum& optimizer);

struct EpisodeResult {
    SearchResult search;
    Trajectory trajectory;
};

// Runs T steps of rotate -> foreground -> forward -> sample, angles wrapped
// modulo pi/2 on the grid, theta_1 = 0. budget_used = T (re-renders count
// even when an angle repeats). Returns the history minimum.
EpisodeResult run_policy(const CubemapSampler& sampler, const Image& mask,
                         const PolicyNetwork& net, int budget, const AngleGrid& grid, Rng& rng,
                         const ObjectiveConfig& objective = {},
                         RewardMode mode = RewardMode::LiteralMin,
                         const RewardBaselines* baselines = nullptr, bool keep_caches = false);

struct TrainScene {
    Image mask;
    uint64_t scene_seed = 0;
};

RewardBaselines estimate_baselines(const std::vector<TrainScene>& scenes, int budget,
                                   int rollouts_per_scene, int face_size, const AngleGrid& grid,
                                   const ObjectiveConfig& objective, RewardMode mode,
                                   uint64_t seed);

struct TrainConfig {
    int epochs = 20;
    int batch = 32;
    int budget = 4;
    double lr = 0.01;
    double momentum = 0.9;
    uint64_t seed = 0;
    RewardMode reward_mode = RewardMode::LiteralMin;
    int face_size = 64;
    int n_grid = 20;
    int baseline_rollouts = 2;
    ObjectiveConfig objective;
};

struct EpochLog {
    int epoch = 0;
    double mean_reward_literal = 0.0;
    double mean_reward_clipped = 0.0;
    std::vector<double> val_f_per_budget;  // mean O_t on validation, t = 1..T
};

struct TrainOutcome {
    PolicyNetwork net;
    RewardBaselines baselines;
    std::vector<EpochLog> log;
    bool aborted = false;
};

// REINFORCE training; the validation sets must share no scene seeds with the
// training set. Writes one JSON line per epoch to `jsonl` when given.
// On divergence returns the last finite weights with aborted = true.
TrainOutcome train(const TrainConfig& cfg, const std::vector<TrainScene>& train_set,
                   const std::vector<TrainScene>& val_set, std::ostream* jsonl = nullptr);

}  // namespace snapcube
