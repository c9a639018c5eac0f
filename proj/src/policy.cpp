#include "snapcube/policy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

namespace snapcube {

RewardMode reward_mode_from_name(const std::string& name) {
    if (name == "literal-min") return RewardMode::LiteralMin;
    if (name == "clipped-gain") return RewardMode::ClippedGain;
    throw ConfigError("unknown reward mode: " + name);
}

const char* reward_mode_name(RewardMode mode) {
    return mode == RewardMode::LiteralMin ? "literal-min" : "clipped-gain";
}

double step_reward(double best_so_far, double f_new, RewardMode mode) {
    double delta = best_so_far - f_new;
    return mode == RewardMode::LiteralMin ? std::min(delta, 0.0) : std::max(delta, 0.0);
}

ActionSpace::ActionSpace(int n) : n_grid(n) {
    if (n < 2 || n % 2 != 0) {
        throw ConfigError("action space needs an even grid size, got " + std::to_string(n));
    }
}

int ActionSpace::index_of_offset(int offset) const {
    if (offset < -n_grid / 2 || offset > n_grid / 2) {
        throw ConfigError("relative offset out of range");
    }
    return offset + n_grid / 2;
}

int PolicyConfig::conv_out(int layer) const {
    int s = face_size;
    for (int l = 0; l <= layer; ++l) {
        s = (s + 2 * conv_pad[static_cast<size_t>(l)] - conv_kernel[static_cast<size_t>(l)]) /
                conv_stride[static_cast<size_t>(l)] +
            1;
        if (s < 1) throw ConfigError("face size too small for the conv stack");
    }
    return s;
}

int PolicyConfig::flatten_dim() const {
    int s = conv_out(2);
    return conv_channels[2] * s * s;
}

namespace {

Tensor make_tensor(const std::string& name, std::vector<int> dims) {
    Tensor t;
    t.name = name;
    t.dims = std::move(dims);
    size_t n = 1;
    for (int d : t.dims) n *= static_cast<size_t>(d);
    t.v.assign(n, 0.0);
    return t;
}

void init_uniform(Tensor& t, int fan_in, Rng& rng) {
    double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& x : t.v) x = rng.uniform(-bound, bound);
}

// out = ReLU(conv(in)); `in` is [ic][is][is], `out` [oc][os][os].
void conv_forward(const double* in, int ic, int is, const Tensor& w, const Tensor& b, int k,
                  int stride, int pad, double* out, int oc, int os) {
    for (int co = 0; co < oc; ++co) {
        const double* wc = w.v.data() + static_cast<size_t>(co) * ic * k * k;
        for (int oy = 0; oy < os; ++oy) {
            for (int ox = 0; ox < os; ++ox) {
                double acc = b.v[static_cast<size_t>(co)];
                for (int ci = 0; ci < ic; ++ci) {
                    const double* inc = in + static_cast<size_t>(ci) * is * is;
                    const double* wk = wc + static_cast<size_t>(ci) * k * k;
                    for (int ky = 0; ky < k; ++ky) {
                        int iy = oy * stride - pad + ky;
                        if (iy < 0 || iy >= is) continue;
                        for (int kx = 0; kx < k; ++kx) {
                            int ix = ox * stride - pad + kx;
                            if (ix < 0 || ix >= is) continue;
                            acc += wk[ky * k + kx] * inc[static_cast<size_t>(iy) * is + ix];
                        }
                    }
                }
                out[(static_cast<size_t>(co) * os + oy) * os + ox] = acc > 0.0 ? acc : 0.0;
            }
        }
    }
}

// dout is the gradient w.r.t. the post-ReLU output; the ReLU mask comes from
// out > 0. Accumulates into dw/db and (when din != nullptr) din.
void conv_backward(const double* in, int ic, int is, const Tensor& w, int k, int stride, int pad,
                   const double* out, const double* dout, int oc, int os, Tensor& dw, Tensor& db,
                   double* din) {
    for (int co = 0; co < oc; ++co) {
        const double* wc = w.v.data() + static_cast<size_t>(co) * ic * k * k;
        double* dwc = dw.v.data() + static_cast<size_t>(co) * ic * k * k;
        for (int oy = 0; oy < os; ++oy) {
            for (int ox = 0; ox < os; ++ox) {
                size_t oidx = (static_cast<size_t>(co) * os + oy) * os + ox;
                if (out[oidx] <= 0.0) continue;
                double g = dout[oidx];
                if (g == 0.0) continue;
                db.v[static_cast<size_t>(co)] += g;
                for (int ci = 0; ci < ic; ++ci) {
                    const double* inc = in + static_cast<size_t>(ci) * is * is;
                    double* dinc = din ? din + static_cast<size_t>(ci) * is * is : nullptr;
                    const double* wk = wc + static_cast<size_t>(ci) * k * k;
                    double* dwk = dwc + static_cast<size_t>(ci) * k * k;
                    for (int ky = 0; ky < k; ++ky) {
                        int iy = oy * stride - pad + ky;
                        if (iy < 0 || iy >= is) continue;
                        for (int kx = 0; kx < k; ++kx) {
                            int ix = ox * stride - pad + kx;
                            if (ix < 0 || ix >= is) continue;
                            size_t iidx = static_cast<size_t>(iy) * is + ix;
                            dwk[ky * k + kx] += g * inc[iidx];
                            if (dinc) dinc[iidx] += g * wk[ky * k + kx];
                        }
                    }
                }
            }
        }
    }
}

void linear_forward(const double* in, int n_in, const Tensor& w, const Tensor& b, double* out,
                    int n_out) {
    for (int j = 0; j < n_out; ++j) {
        const double* wj = w.v.data() + static_cast<size_t>(j) * n_in;
        double acc = b.v[static_cast<size_t>(j)];
        for (int i = 0; i < n_in; ++i) acc += wj[i] * in[i];
        out[j] = acc;
    }
}

void linear_backward(const double* in, int n_in, const Tensor& w, const double* dout, int n_out,
                     Tensor& dw, Tensor& db, double* din) {
    for (int j = 0; j < n_out; ++j) {
        double g = dout[j];
        if (g == 0.0) continue;
        db.v[static_cast<size_t>(j)] += g;
        const double* wj = w.v.data() + static_cast<size_t>(j) * n_in;
        double* dwj = dw.v.data() + static_cast<size_t>(j) * n_in;
        for (int i = 0; i < n_in; ++i) {
            dwj[i] += g * in[i];
            if (din) din[i] += g * wj[i];
        }
    }
}

enum TensorId {
    kConv1W, kConv1B, kConv2W, kConv2B, kConv3W, kConv3B,
    kFeatW, kFeatB, kRnnInW, kRnnRecW, kRnnB,
    kPred1W, kPred1B, kPred2W, kPred2B,
    kTensorCount,
};

}  // namespace

PolicyNetwork::PolicyNetwork(const PolicyConfig& cfg, uint64_t init_seed) : cfg_(cfg) {
    ActionSpace actions(cfg.n_grid);  // validates even grid
    (void)actions;
    const auto& ch = cfg.conv_channels;
    const auto& kk = cfg.conv_kernel;
    tensors_.resize(kTensorCount);
    tensors_[kConv1W] = make_tensor("conv1.w", {ch[0], 4, kk[0], kk[0]});
    tensors_[kConv1B] = make_tensor("conv1.b", {ch[0]});
    tensors_[kConv2W] = make_tensor("conv2.w", {ch[1], ch[0], kk[1], kk[1]});
    tensors_[kConv2B] = make_tensor("conv2.b", {ch[1]});
    tensors_[kConv3W] = make_tensor("conv3.w", {ch[2], ch[1], kk[2], kk[2]});
    tensors_[kConv3B] = make_tensor("conv3.b", {ch[2]});
    tensors_[kFeatW] = make_tensor("feature.w", {cfg.feature_dim, cfg.flatten_dim()});
    tensors_[kFeatB] = make_tensor("feature.b", {cfg.feature_dim});
    tensors_[kRnnInW] = make_tensor("rnn.w_in", {cfg.hidden_dim, cfg.feature_dim});
    tensors_[kRnnRecW] = make_tensor("rnn.w_rec", {cfg.hidden_dim, cfg.hidden_dim});
    tensors_[kRnnB] = make_tensor("rnn.b", {cfg.hidden_dim});
    tensors_[kPred1W] = make_tensor("predictor1.w", {cfg.predictor_hidden, cfg.hidden_dim});
    tensors_[kPred1B] = make_tensor("predictor1.b", {cfg.predictor_hidden});
    tensors_[kPred2W] = make_tensor("predictor2.w", {cfg.actions(), cfg.predictor_hidden});
    tensors_[kPred2B] = make_tensor("predictor2.b", {cfg.actions()});

    Rng rng(mix_seed(init_seed, 0x11a5));
    init_uniform(tensors_[kConv1W], 4 * kk[0] * kk[0], rng);
    init_uniform(tensors_[kConv2W], ch[0] * kk[1] * kk[1], rng);
    init_uniform(tensors_[kConv3W], ch[1] * kk[2] * kk[2], rng);
    init_uniform(tensors_[kFeatW], cfg.flatten_dim(), rng);
    init_uniform(tensors_[kRnnInW], cfg.feature_dim, rng);
    init_uniform(tensors_[kRnnRecW], cfg.hidden_dim, rng);
    init_uniform(tensors_[kPred1W], cfg.hidden_dim, rng);
    init_uniform(tensors_[kPred2W], cfg.predictor_hidden, rng);
}

std::vector<double> PolicyNetwork::initial_hidden() const {
    return std::vector<double>(static_cast<size_t>(cfg_.hidden_dim), 0.0);
}

std::vector<double> PolicyNetwork::forward(const std::vector<double>& input,
                                           std::vector<double>& hidden, StepCache* cache) const {
    const int w = cfg_.face_size;
    if (input.size() != static_cast<size_t>(4) * w * w) {
        throw ConfigError("policy input shape mismatch");
    }
    if (hidden.size() != static_cast<size_t>(cfg_.hidden_dim)) {
        throw ConfigError("policy hidden state shape mismatch");
    }

    const int o1 = cfg_.conv_out(0), o2 = cfg_.conv_out(1), o3 = cfg_.conv_out(2);
    const auto& ch = cfg_.conv_channels;
    std::vector<double> c1(static_cast<size_t>(ch[0]) * o1 * o1);
    std::vector<double> c2(static_cast<size_t>(ch[1]) * o2 * o2);
    std::vector<double> c3(static_cast<size_t>(ch[2]) * o3 * o3);

    conv_forward(input.data(), 4, w, tensors_[kConv1W], tensors_[kConv1B], cfg_.conv_kernel[0],
                 cfg_.conv_stride[0], cfg_.conv_pad[0], c1.data(), ch[0], o1);
    conv_forward(c1.data(), ch[0], o1, tensors_[kConv2W], tensors_[kConv2B], cfg_.conv_kernel[1],
                 cfg_.conv_stride[1], cfg_.conv_pad[1], c2.data(), ch[1], o2);
    conv_forward(c2.data(), ch[1], o2, tensors_[kConv3W], tensors_[kConv3B], cfg_.conv_kernel[2],
                 cfg_.conv_stride[2], cfg_.conv_pad[2], c3.data(), ch[2], o3);

    std::vector<double> feature(static_cast<size_t>(cfg_.feature_dim));
    linear_forward(c3.data(), cfg_.flatten_dim(), tensors_[kFeatW], tensors_[kFeatB],
                   feature.data(), cfg_.feature_dim);

    std::vector<double> hidden_prev = hidden;
    std::vector<double> pre(static_cast<size_t>(cfg_.hidden_dim));
    linear_forward(feature.data(), cfg_.feature_dim, tensors_[kRnnInW], tensors_[kRnnB],
                   pre.data(), cfg_.hidden_dim);
    for (int j = 0; j < cfg_.hidden_dim; ++j) {
        const double* wj = tensors_[kRnnRecW].v.data() + static_cast<size_t>(j) * cfg_.hidden_dim;
        double acc = pre[static_cast<size_t>(j)];
        for (int i = 0; i < cfg_.hidden_dim; ++i) acc += wj[i] * hidden_prev[static_cast<size_t>(i)];
        hidden[static_cast<size_t>(j)] = std::tanh(acc);
    }

    std::vector<double> h1(static_cast<size_t>(cfg_.predictor_hidden));
    linear_forward(hidden.data(), cfg_.hidden_dim, tensors_[kPred1W], tensors_[kPred1B], h1.data(),
                   cfg_.predictor_hidden);
    for (double& x : h1) x = x > 0.0 ? x : 0.0;

    std::vector<double> logits(static_cast<size_t>(cfg_.actions()));
    linear_forward(h1.data(), cfg_.predictor_hidden, tensors_[kPred2W], tensors_[kPred2B],
                   logits.data(), cfg_.actions());

    double zmax = *std::max_element(logits.begin(), logits.end());
    double zsum = 0.0;
    std::vector<double> pdf(logits.size());
    for (size_t i = 0; i < logits.size(); ++i) {
        pdf[i] = std::exp(logits[i] - zmax);
        zsum += pdf[i];
    }
    for (double& p : pdf) p /= zsum;

    if (cache) {
        cache->input = input;
        cache->conv_out[0] = std::move(c1);
        cache->conv_out[1] = std::move(c2);
        cache->conv_out[2] = std::move(c3);
        cache->feature = std::move(feature);
        cache->hidden_prev = std::move(hidden_prev);
        cache->hidden = hidden;
        cache->h1 = std::move(h1);
        cache->pdf = pdf;
    }
    return pdf;
}

std::vector<Tensor> PolicyNetwork::zero_gradients() const {
    std::vector<Tensor> grads = tensors_;
    for (Tensor& t : grads) std::fill(t.v.begin(), t.v.end(), 0.0);
    return grads;
}

void PolicyNetwork::backward_episode(const std::vector<StepCache>& steps,
                                     const std::vector<int>& actions,
                                     const std::vector<double>& rewards,
                                     std::vector<Tensor>& grads) const {
    if (steps.size() != actions.size() || steps.size() != rewards.size()) {
        throw ConfigError("episode arrays must have equal length");
    }
    const int hidden_dim = cfg_.hidden_dim;
    const int o1 = cfg_.conv_out(0), o2 = cfg_.conv_out(1), o3 = cfg_.conv_out(2);
    const auto& ch = cfg_.conv_channels;

    std::vector<double> d_hidden_next(static_cast<size_t>(hidden_dim), 0.0);
    bool any_flow = false;

    for (size_t t = steps.size(); t-- > 0;) {
        const StepCache& s = steps[t];
        const double reward = rewards[t];
        if (reward == 0.0 && !any_flow) continue;
        any_flow = true;

        // d log pdf[action] / d logits = onehot - pdf, scaled by the reward
        std::vector<double> dz(s.pdf.size());
        for (size_t k = 0; k < s.pdf.size(); ++k) {
            double onehot = static_cast<size_t>(actions[t]) == k ? 1.0 : 0.0;
            dz[k] = reward * (onehot - s.pdf[k]);
        }

        std::vector<double> dh1(static_cast<size_t>(cfg_.predictor_hidden), 0.0);
        linear_backward(s.h1.data(), cfg_.predictor_hidden, tensors_[kPred2W], dz.data(),
                        cfg_.actions(), grads[kPred2W], grads[kPred2B], dh1.data());
        for (int i = 0; i < cfg_.predictor_hidden; ++i) {
            if (s.h1[static_cast<size_t>(i)] <= 0.0) dh1[static_cast<size_t>(i)] = 0.0;
        }

        std::vector<double> d_hidden(static_cast<size_t>(hidden_dim), 0.0);
        linear_backward(s.hidden.data(), hidden_dim, tensors_[kPred1W], dh1.data(),
                        cfg_.predictor_hidden, grads[kPred1W], grads[kPred1B], d_hidden.data());
        for (int i = 0; i < hidden_dim; ++i) {
            d_hidden[static_cast<size_t>(i)] += d_hidden_next[static_cast<size_t>(i)];
        }

        // through tanh
        std::vector<double> d_pre(static_cast<size_t>(hidden_dim));
        for (int i = 0; i < hidden_dim; ++i) {
            double a = s.hidden[static_cast<size_t>(i)];
            d_pre[static_cast<size_t>(i)] = d_hidden[static_cast<size_t>(i)] * (1.0 - a * a);
        }

        std::vector<double> d_feature(static_cast<size_t>(cfg_.feature_dim), 0.0);
        linear_backward(s.feature.data(), cfg_.feature_dim, tensors_[kRnnInW], d_pre.data(),
                        hidden_dim, grads[kRnnInW], grads[kRnnB], d_feature.data());

        std::fill(d_hidden_next.begin(), d_hidden_next.end(), 0.0);
        // recurrent weights see hidden_prev; no bias contribution here (the
        // rnn bias already accumulated above)
        for (int j = 0; j < hidden_dim; ++j) {
            double g = d_pre[static_cast<size_t>(j)];
            if (g == 0.0) continue;
            const double* wj =
                tensors_[kRnnRecW].v.data() + static_cast<size_t>(j) * hidden_dim;
            double* dwj = grads[kRnnRecW].v.data() + static_cast<size_t>(j) * hidden_dim;
            for (int i = 0; i < hidden_dim; ++i) {
                dwj[i] += g * s.hidden_prev[static_cast<size_t>(i)];
                d_hidden_next[static_cast<size_t>(i)] += g * wj[i];
            }
        }

        std::vector<double> d_c3(static_cast<size_t>(cfg_.flatten_dim()), 0.0);
        linear_backward(s.conv_out[2].data(), cfg_.flatten_dim(), tensors_[kFeatW],
                        d_feature.data(), cfg_.feature_dim, grads[kFeatW], grads[kFeatB],
                        d_c3.data());

        std::vector<double> d_c2(s.conv_out[1].size(), 0.0);
        conv_backward(s.conv_out[1].data(), ch[1], o2, tensors_[kConv3W], cfg_.conv_kernel[2],
                      cfg_.conv_stride[2], cfg_.conv_pad[2], s.conv_out[2].data(), d_c3.data(),
                      ch[2], o3, grads[kConv3W], grads[kConv3B], d_c2.data());
        std::vector<double> d_c1(s.conv_out[0].size(), 0.0);
        conv_backward(s.conv_out[0].data(), ch[0], o1, tensors_[kConv2W], cfg_.conv_kernel[1],
                      cfg_.conv_stride[1], cfg_.conv_pad[1], s.conv_out[1].data(), d_c2.data(),
                      ch[1], o2, grads[kConv2W], grads[kConv2B], d_c1.data());
        conv_backward(s.input.data(), 4, cfg_.face_size, tensors_[kConv1W], cfg_.conv_kernel[0],
                      cfg_.conv_stride[0], cfg_.conv_pad[0], s.conv_out[0].data(), d_c1.data(),
                      ch[0], o1, grads[kConv1W], grads[kConv1B], nullptr);
    }
}

std::vector<double> fg_to_input(const ForegroundCubemap& fg) {
    const size_t face = fg.faces[0].size();
    std::vector<double> input(4 * face);
    for (size_t f = 0; f < 4; ++f) {
        const uint8_t* src = fg.faces[f].data();
        double* dst = input.data() + f * face;
        for (size_t i = 0; i < face; ++i) dst[i] = src[i];
    }
    return input;
}

int sample_action(const std::vector<double>& pdf, Rng& rng) {
    double u = rng.uniform01();
    double acc = 0.0;
    for (size_t k = 0; k < pdf.size(); ++k) {
        acc += pdf[k];
        if (acc > u) return static_cast<int>(k);
    }
    return static_cast<int>(pdf.size()) - 1;
}

void SgdMomentum::ascend(std::vector<Tensor>& weights, const std::vector<Tensor>& grads) {
    if (velocity.empty()) {
        velocity = grads;
        for (Tensor& t : velocity) std::fill(t.v.begin(), t.v.end(), 0.0);
    }
    for (size_t i = 0; i < weights.size(); ++i) {
        for (size_t j = 0; j < weights[i].v.size(); ++j) {
            velocity[i].v[j] = momentum * velocity[i].v[j] + lr * grads[i].v[j];
            weights[i].v[j] += velocity[i].v[j];
        }
    }
}

void reinforce_update(const std::vector<Trajectory>& batch, PolicyNetwork& net,
                      SgdMomentum& optimizer) {
    std::vector<Tensor> grads = net.zero_gradients();
    for (const Trajectory& traj : batch) {
        net.backward_episode(traj.caches, traj.actions, traj.rewards, grads);
    }
    for (const Tensor& t : grads) {
        for (double g : t.v) {
            if (!std::isfinite(g)) {
                throw NumericError("non-finite gradient in tensor " + t.name);
            }
        }
    }
    optimizer.ascend(net.tensors(), grads);
}

EpisodeResult run_policy(const CubemapSampler& sampler, const Image& mask,
                         const PolicyNetwork& net, int budget, const AngleGrid& grid, Rng& rng,
                         const ObjectiveConfig& objective, RewardMode mode,
                         const RewardBaselines* baselines, bool keep_caches) {
    if (budget < 1) throw ConfigError("budget must be at least 1");
    if (grid.n != net.config().n_grid) {
        throw ConfigError("angle grid does not match the policy's action space");
    }
    ActionSpace actions(grid.n);

    EpisodeResult out;
    Trajectory& traj = out.trajectory;
    std::vector<double> hidden = net.initial_hidden();

    int index = 0;  // theta_1 = 0
    double best = 0.0;
    for (int t = 0; t < budget; ++t) {
        SnapAngle angle = grid.at(index);
        ForegroundCubemap fg = fg_for_angle(sampler, mask, angle);
        double f_t = disruption_score(fg, objective);
        best = t == 0 ? f_t : std::min(best, f_t);

        PolicyNetwork::StepCache cache;
        std::vector<double> pdf = net.forward(fg_to_input(fg), hidden, &cache);
        int action = sample_action(pdf, rng);

        traj.thetas.push_back(angle);
        traj.objective.push_back(f_t);
        traj.best_so_far.push_back(best);
        traj.actions.push_back(action);
        traj.pdfs.push_back(pdf);
        traj.caches.push_back(std::move(cache));

        if (t + 1 < budget) {
            int offset = actions.offset_of(action);
            traj.applied_offsets.push_back(offset);
            index = ((index + offset) % grid.n + grid.n) % grid.n;
        }
    }
    // s_t aligned to steps: s_1 = 0, s_{t+1} = p_t
    traj.applied_offsets.insert(traj.applied_offsets.begin(), 0);
    traj.applied_offsets.resize(static_cast<size_t>(budget));

    traj.raw_rewards.assign(static_cast<size_t>(budget), 0.0);
    traj.rewards.assign(static_cast<size_t>(budget), 0.0);
    for (int t = 0; t + 1 < budget; ++t) {
        double raw = step_reward(traj.best_so_far[static_cast<size_t>(t)],
                                 traj.objective[static_cast<size_t>(t) + 1], mode);
        traj.raw_rewards[static_cast<size_t>(t)] = raw;
        double b = baselines && static_cast<size_t>(t) < baselines->b.size()
                       ? baselines->b[static_cast<size_t>(t)]
                       : 0.0;
        traj.rewards[static_cast<size_t>(t)] = raw - b;
    }
    if (!keep_caches) traj.caches.clear();

    SearchResult& r = out.search;
    r.budget_used = budget;
    for (int t = 0; t < budget; ++t) {
        r.evaluated.emplace_back(traj.thetas[static_cast<size_t>(t)],
                                 traj.objective[static_cast<size_t>(t)]);
    }
    r.best_score = traj.objective[0];
    r.best_angle = traj.thetas[0];
    for (int t = 1; t < budget; ++t) {
        double s = traj.objective[static_cast<size_t>(t)];
        if (s < r.best_score) {
            r.best_score = s;
            r.best_angle = traj.thetas[static_cast<size_t>(t)];
        }
    }
    return out;
}

RewardBaselines estimate_baselines(const std::vector<TrainScene>& scenes, int budget,
                                   int rollouts_per_scene, int face_size, const AngleGrid& grid,
                                   const ObjectiveConfig& objective, RewardMode mode,
                                   uint64_t seed) {
    if (scenes.empty()) throw ConfigError("baseline estimation needs a non-empty training set");
    if (budget < 1 || budget > grid.n) throw ConfigError("baseline budget out of range");

    CubemapSampler sampler(face_size);
    RewardBaselines out;
    out.b.assign(static_cast<size_t>(budget), 0.0);
    long rollouts = 0;

    for (size_t si = 0; si < scenes.size(); ++si) {
        // grid scores are reused across this scene's rollouts
        std::vector<double> scores(static_cast<size_t>(grid.n));
        std::vector<bool> known(static_cast<size_t>(grid.n), false);
        auto score_at = [&](int k) {
            if (!known[static_cast<size_t>(k)]) {
                scores[static_cast<size_t>(k)] =
                    disruption_score(fg_for_angle(sampler, scenes[si].mask, grid.at(k)), objective);
                known[static_cast<size_t>(k)] = true;
            }
            return scores[static_cast<size_t>(k)];
        };

        for (int r = 0; r < rollouts_per_scene; ++r) {
            Rng rng(mix_seed(seed, (static_cast<uint64_t>(si) << 20) + static_cast<uint64_t>(r)));
            // mirror the episode: canonical first, then distinct random angles
            std::vector<int> rest(static_cast<size_t>(grid.n - 1));
            std::iota(rest.begin(), rest.end(), 1);
            rng.shuffle(rest);

            double best = score_at(0);
            for (int t = 0; t + 1 < budget; ++t) {
                double f_next = score_at(rest[static_cast<size_t>(t)]);
                out.b[static_cast<size_t>(t)] += step_reward(best, f_next, mode);
                best = std::min(best, f_next);
            }
            ++rollouts;
        }
    }
    for (double& b : out.b) b /= static_cast<double>(rollouts);
    out.b[static_cast<size_t>(budget) - 1] = 0.0;  // the last action has no reward
    return out;
}

TrainOutcome train(const TrainConfig& cfg, const std::vector<TrainScene>& train_set,
                   const std::vector<TrainScene>& val_set, std::ostream* jsonl) {
    if (train_set.empty()) throw ConfigError("training set is empty");
    for (const TrainScene& a : train_set) {
        for (const TrainScene& b : val_set) {
            if (a.scene_seed == b.scene_seed) {
                throw ConfigError("train/validation sets share scene seed " +
                                  std::to_string(a.scene_seed));
            }
        }
    }

    PolicyConfig pc;
    pc.face_size = cfg.face_size;
    pc.n_grid = cfg.n_grid;
    AngleGrid grid(cfg.n_grid);
    CubemapSampler sampler(cfg.face_size);

    TrainOutcome out{PolicyNetwork(pc, mix_seed(cfg.seed, 0x1217)), {}, {}, false};
    out.baselines = estimate_baselines(train_set, cfg.budget, cfg.baseline_rollouts,
                                       cfg.face_size, grid, cfg.objective, cfg.reward_mode,
                                       mix_seed(cfg.seed, 0xba5e));

    SgdMomentum optimizer{cfg.lr, cfg.momentum, {}};
    std::vector<size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);

    uint64_t episode_counter = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<Tensor> checkpoint = out.net.tensors();
        Rng shuffle_rng(mix_seed(cfg.seed, 0x2000000000000000ULL | static_cast<uint64_t>(epoch)));
        shuffle_rng.shuffle(order);

        double sum_literal = 0.0, sum_clipped = 0.0;
        long episodes = 0;
        bool diverged = false;

        for (size_t start = 0; start < order.size() && !diverged;
             start += static_cast<size_t>(cfg.batch)) {
            size_t stop = std::min(order.size(), start + static_cast<size_t>(cfg.batch));
            std::vector<Trajectory> batch;
            batch.reserve(stop - start);
            for (size_t i = start; i < stop; ++i) {
                Rng rng(mix_seed(cfg.seed, 0x4000000000000000ULL | (episode_counter++)));
                EpisodeResult ep =
                    run_policy(sampler, train_set[order[i]].mask, out.net, cfg.budget, grid, rng,
                               cfg.objective, cfg.reward_mode, &out.baselines, true);
                Trajectory& traj = ep.trajectory;
                for (size_t t = 0; t + 1 < traj.objective.size(); ++t) {
                    double o = traj.best_so_far[t], f = traj.objective[t + 1];
                    sum_literal += step_reward(o, f, RewardMode::LiteralMin);
                    sum_clipped += step_reward(o, f, RewardMode::ClippedGain);
                }
                ++episodes;
                batch.push_back(std::move(traj));
            }
            try {
                reinforce_update(batch, out.net, optimizer);
            } catch (const NumericError&) {
                diverged = true;
            }
            if (!diverged) {
                for (const Tensor& t : out.net.tensors()) {
                    for (double v : t.v) {
                        if (!std::isfinite(v)) {
                            diverged = true;
                            break;
                        }
                    }
                    if (diverged) break;
                }
            }
        }

        if (diverged) {
            out.net.tensors() = checkpoint;
            out.aborted = true;
        }

        EpochLog log;
        log.epoch = epoch;
        log.mean_reward_literal = episodes ? sum_literal / static_cast<double>(episodes) : 0.0;
        log.mean_reward_clipped = episodes ? sum_clipped / static_cast<double>(episodes) : 0.0;
        log.val_f_per_budget.assign(static_cast<size_t>(cfg.budget), 0.0);
        if (!val_set.empty()) {
            for (size_t i = 0; i < val_set.size(); ++i) {
                // validation seeds do not depend on the epoch, so an
                // unchanged policy yields an unchanged curve
                Rng rng(mix_seed(cfg.seed, 0x8000000000000000ULL | i));
                EpisodeResult ep = run_policy(sampler, val_set[i].mask, out.net, cfg.budget, grid,
                                              rng, cfg.objective, cfg.reward_mode, nullptr, false);
                for (int t = 0; t < cfg.budget; ++t) {
                    log.val_f_per_budget[static_cast<size_t>(t)] +=
                        ep.trajectory.best_so_far[static_cast<size_t>(t)];
                }
            }
            for (double& v : log.val_f_per_budget) v /= static_cast<double>(val_set.size());
        }
        if (jsonl) {
            nlohmann::json j{{"epoch", log.epoch},
                             {"mean_train_reward", {{"literal-min", log.mean_reward_literal},
                                                    {"clipped-gain", log.mean_reward_clipped}}},
                             {"mean_val_f_per_budget", log.val_f_per_budget},
                             {"aborted", out.aborted}};
            (*jsonl) << j.dump() << "\n";
        }
        out.log.push_back(std::move(log));
        if (out.aborted) break;
    }
    return out;
}

namespace {

template <typename T>
void write_le(std::ostream& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<unsigned char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
    std::array<unsigned char, sizeof(T)> bytes;
    in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

constexpr char kMagic[5] = {'S', 'N', 'A', 'P', '1'};

void write_tensor(std::ostream& out, const Tensor& t) {
    write_le<uint32_t>(out, static_cast<uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    write_le<uint32_t>(out, static_cast<uint32_t>(t.dims.size()));
    for (int d : t.dims) write_le<uint32_t>(out, static_cast<uint32_t>(d));
    for (double v : t.v) write_le<double>(out, v);
}

bool read_tensor(std::istream& in, Tensor& t) {
    uint32_t name_len = read_le<uint32_t>(in);
    if (!in) return false;
    t.name.resize(name_len);
    in.read(t.name.data(), name_len);
    uint32_t ndims = read_le<uint32_t>(in);
    t.dims.resize(ndims);
    size_t n = 1;
    for (uint32_t i = 0; i < ndims; ++i) {
        t.dims[i] = static_cast<int>(read_le<uint32_t>(in));
        n *= static_cast<size_t>(t.dims[i]);
    }
    t.v.resize(n);
    for (size_t i = 0; i < n; ++i) t.v[i] = read_le<double>(in);
    return static_cast<bool>(in);
}

}  // namespace

void PolicyNetwork::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write weights: " + path.string());
    out.write(kMagic, sizeof(kMagic));

    Tensor config = make_tensor("config", {9});
    config.v = {static_cast<double>(cfg_.face_size),
                static_cast<double>(cfg_.n_grid),
                static_cast<double>(cfg_.conv_channels[0]),
                static_cast<double>(cfg_.conv_channels[1]),
                static_cast<double>(cfg_.conv_channels[2]),
                static_cast<double>(cfg_.feature_dim),
                static_cast<double>(cfg_.hidden_dim),
                static_cast<double>(cfg_.predictor_hidden),
                1.0};  // format revision
    write_tensor(out, config);
    for (const Tensor& t : tensors_) write_tensor(out, t);
    if (!out) throw IoError("short write to " + path.string());
}

PolicyNetwork PolicyNetwork::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read weights: " + path.string());
    char magic[5];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw IoError("not a snapcube weights file: " + path.string());
    }
    Tensor config;
    if (!read_tensor(in, config) || config.name != "config" || config.v.size() < 8) {
        throw IoError("weights file missing config header: " + path.string());
    }
    PolicyConfig pc;
    pc.face_size = static_cast<int>(config.v[0]);
    pc.n_grid = static_cast<int>(config.v[1]);
    pc.conv_channels = {static_cast<int>(config.v[2]), static_cast<int>(config.v[3]),
                        static_cast<int>(config.v[4])};
    pc.feature_dim = static_cast<int>(config.v[5]);
    pc.hidden_dim = static_cast<int>(config.v[6]);
    pc.predictor_hidden = static_cast<int>(config.v[7]);

    PolicyNetwork net(pc, 0);
    size_t loaded = 0;
    Tensor t;
    while (read_tensor(in, t)) {
        for (Tensor& dst : net.tensors_) {
            if (dst.name == t.name) {
                if (dst.v.size() != t.v.size()) {
                    throw IoError("tensor shape mismatch for " + t.name + " in " + path.string());
                }
                dst = t;
                ++loaded;
                break;
            }
        }
    }
    if (loaded != net.tensors_.size()) {
        throw IoError("weights file incomplete: " + path.string());
    }
    return net;
}

}  // namespace snapcube
