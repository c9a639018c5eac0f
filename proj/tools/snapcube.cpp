// snapcube - render 360 panoramas to cubemaps and search for the azimuth
// rotation that keeps foreground objects away from cube-face boundaries.
//
// Subcommands: project, snap, score, train, synth, eval. Machine-readable
// JSON goes to stdout; progress and diagnostics go to stderr (verbosity via
// SNAPCUBE_LOG=error|info|debug).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "snapcube/geometry.hpp"
#include "snapcube/harness.hpp"
#include "snapcube/objective.hpp"
#include "snapcube/png_io.hpp"
#include "snapcube/policy.hpp"
#include "snapcube/scene.hpp"
#include "snapcube/search.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace snapcube;

namespace {

int log_verbosity() {
    static int level = [] {
        const char* env = std::getenv("SNAPCUBE_LOG");
        if (!env) return 1;
        std::string v = env;
        if (v == "error") return 0;
        if (v == "debug") return 2;
        return 1;
    }();
    return level;
}

void log_error(const std::string& msg) { std::cerr << "[error] " << msg << "\n"; }
void log_info(const std::string& msg) {
    if (log_verbosity() >= 1) std::cerr << "[info] " << msg << "\n";
}
void log_debug(const std::string& msg) {
    if (log_verbosity() >= 2) std::cerr << "[debug] " << msg << "\n";
}

// "45deg", "0.785rad", or plain radians.
double parse_angle(const std::string& text) {
    std::string s = text;
    double scale = 1.0;
    if (s.size() > 3 && s.substr(s.size() - 3) == "deg") {
        scale = kPi / 180.0;
        s = s.substr(0, s.size() - 3);
    } else if (s.size() > 3 && s.substr(s.size() - 3) == "rad") {
        s = s.substr(0, s.size() - 3);
    }
    size_t pos = 0;
    double value;
    try {
        value = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse angle: " + text);
    }
    if (pos != s.size()) throw ConfigError("cannot parse angle: " + text);
    return value * scale;
}

uint64_t resolve_seed(std::optional<uint64_t> seed) {
    if (seed) return *seed;
    std::random_device rd;
    uint64_t drawn = (static_cast<uint64_t>(rd()) << 32) ^ rd();
    log_info("seed drawn: " + std::to_string(drawn));
    return drawn;
}

Image load_panorama(const fs::path& path) {
    if (!fs::exists(path)) throw IoError("panorama not found: " + path.string());
    Image img = read_png(path);
    require_equirect(img);
    return img;
}

Image load_mask(const fs::path& path) {
    if (!fs::exists(path)) throw IoError("mask not found: " + path.string());
    return read_mask_png(path);
}

Image load_scalar_map(const fs::path& path) {
    if (!fs::exists(path)) throw IoError("saliency map not found: " + path.string());
    if (path.extension() == ".raw") return read_raw_float(path);
    Image img = read_png(path);
    if (img.channels != 1) throw ConfigError("saliency map must be single-channel");
    return img;
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct CommonFlags {
    int n_grid = 20;
    int face_size = 64;
    double margin = 0.0625;
    std::string mode = "band-occupancy";
    std::optional<uint64_t> seed;

    ObjectiveConfig objective() const {
        ObjectiveConfig cfg;
        cfg.margin_frac = margin;
        cfg.mode = denominator_mode_from_name(mode);
        return cfg;
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("--n-grid", n_grid, "azimuth candidates per quarter turn")
            ->capture_default_str();
        cmd->add_option("--face-size", face_size, "cube face side in pixels")
            ->capture_default_str();
        cmd->add_option("--margin", margin, "boundary band as a fraction of the face side")
            ->capture_default_str();
        cmd->add_option("--mode", mode,
                        "denominator: band-occupancy | whole-face | foreground-normalized")
            ->capture_default_str();
        cmd->add_option("--seed", seed, "RNG seed (drawn and printed when omitted)");
    }
};

json angle_json(const SnapAngle& a) {
    json j{{"theta", a.theta}};
    j["grid_index"] = a.on_grid() ? json(a.grid_index) : json(nullptr);
    return j;
}

void write_cubemap_files(const Cubemap& cm, const fs::path& out_dir, const std::string& stem,
                         json& out_files) {
    fs::create_directories(out_dir);
    for (int f = 0; f < 6; ++f) {
        fs::path p = out_dir / (stem + "_" + kFaceNames[static_cast<size_t>(f)] + ".png");
        write_png(cm.faces[static_cast<size_t>(f)], p);
        out_files.push_back(p.string());
    }
    fs::path cross = out_dir / (stem + "_cross.png");
    write_png(cross_layout(cm), cross);
    out_files.push_back(cross.string());
}

int cmd_project(const fs::path& input, const std::string& theta_text, int face_size,
                const fs::path& out_dir, std::string stem) {
    Image pano = load_panorama(input);
    double theta = parse_angle(theta_text);
    SnapAngle angle = SnapAngle::from_radians(theta);
    Cubemap cm = project_cubemap(pano, angle, face_size);
    if (stem.empty()) stem = input.stem().string();
    json files = json::array();
    write_cubemap_files(cm, out_dir, stem, files);
    log_info("projected " + input.string() + " at theta=" + std::to_string(theta) + " rad");
    std::cout << json{{"theta", theta}, {"files", files}}.dump() << "\n";
    return 0;
}

int cmd_snap(const fs::path& pano_path, const fs::path& mask_path, const std::string& policy,
             int budget, const CommonFlags& common, const fs::path& weights,
             const fs::path& saliency_path, int saliency_window, double saliency_sigma,
             const fs::path& out_cubemap_dir) {
    uint64_t seed = resolve_seed(common.seed);
    Image mask = load_mask(mask_path);
    AngleGrid grid(common.n_grid);
    ObjectiveConfig objective = common.objective();

    SearchResult result;
    if (policy == "learned") {
        if (weights.empty()) throw ConfigError("learned policy requires --weights");
        PolicyNetwork net = PolicyNetwork::load(weights);
        if (net.config().n_grid != common.n_grid || net.config().face_size != common.face_size) {
            throw ConfigError("weights were trained for a different grid or face size");
        }
        CubemapSampler sampler(common.face_size);
        Rng rng(seed);
        result = run_policy(sampler, mask, net, budget, grid, rng, objective).search;
    } else if (policy == "saliency") {
        Image map = saliency_path.empty() ? gaussian_blur(mask, saliency_sigma)
                                          : load_scalar_map(saliency_path);
        double sigma = saliency_path.empty() ? 0.0 : saliency_sigma;  // stand-in is pre-blurred
        SnapAngle angle = saliency_policy(map, saliency_window, sigma, grid);
        Scorer scorer = make_disruption_scorer(mask, common.face_size, objective);
        result.best_angle = angle;
        result.best_score = scorer(angle);
        result.evaluated = scorer.evaluated();
        result.budget_used = 1;
    } else {
        Scorer scorer = make_disruption_scorer(mask, common.face_size, objective);
        if (policy == "exhaustive") {
            result = exhaustive(scorer, grid);
        } else if (policy == "random") {
            result = random_policy(scorer, grid, budget, seed);
        } else if (policy == "uniform") {
            result = uniform_policy(scorer, grid, budget);
        } else if (policy == "coarse2fine") {
            result = coarse_to_fine(scorer, grid, budget);
        } else {
            throw ConfigError("unknown policy: " + policy);
        }
    }

    json out = search_result_to_json(result);
    out["policy"] = policy;
    out["seed"] = seed;
    log_debug("evaluated " + std::to_string(result.evaluated.size()) + " angle(s), best " +
              std::to_string(result.best_score) + " at theta=" +
              std::to_string(result.best_angle.theta));

    if (!out_cubemap_dir.empty()) {
        Image pano = load_panorama(pano_path);
        Cubemap cm = project_cubemap(pano, result.best_angle, common.face_size);
        json files = json::array();
        write_cubemap_files(cm, out_cubemap_dir, pano_path.stem().string() + "_snap", files);
        out["cubemap_files"] = files;
    }
    std::cout << out.dump() << "\n";
    return 0;
}

int cmd_score(const fs::path& mask_path, const std::string& theta_text, const CommonFlags& common,
              const fs::path& boxes_path) {
    Image mask = load_mask(mask_path);
    double theta = parse_angle(theta_text);
    AngleGrid grid(common.n_grid);
    SnapAngle angle = SnapAngle::from_radians(theta);
    ObjectiveConfig objective = common.objective();

    ForegroundCubemap fg = fg_for_angle(mask, angle, common.face_size);
    json out{{"theta", theta},
             {"score", disruption_score(fg, objective)},
             {"per_face", per_face_disruption(fg, objective)}};

    if (!boxes_path.empty()) {
        std::ifstream in(boxes_path);
        if (!in) throw IoError("cannot open boxes file: " + boxes_path.string());
        json jb;
        in >> jb;
        std::vector<Box> boxes;
        for (const auto& b : jb) {
            boxes.push_back(Box{b.at(0).get<double>(), b.at(1).get<double>(),
                                b.at(2).get<double>(), b.at(3).get<double>()});
        }
        PreservationScore iou = preservation_iou(mask, boxes, angle, common.face_size);
        if (iou.skipped_boxes > 0) {
            log_info(std::to_string(iou.skipped_boxes) +
                     " box(es) contained no foreground pixels and were skipped");
        }
        out["preservation_iou"] = json{{"per_box", iou.per_box},
                                       {"mean", iou.mean},
                                       {"skipped_boxes", iou.skipped_boxes}};
    }
    std::cout << out.dump() << "\n";
    return 0;
}

int cmd_synth(int count, const CommonFlags& common, const fs::path& out_dir, int width,
              int height, int min_objects, int max_objects, double extent_min, double extent_max,
              double cap_prob) {
    uint64_t seed = resolve_seed(common.seed);
    std::vector<std::string> problems;
    if (count < 1) problems.push_back("--count must be at least 1");
    if (width != 2 * height) problems.push_back("--width must equal 2 * --height");
    if (min_objects < 1 || max_objects < min_objects) {
        problems.push_back("--min-objects/--max-objects out of order");
    }
    if (extent_min <= 0 || extent_max < extent_min) {
        problems.push_back("--extent-min/--extent-max out of order");
    }
    if (cap_prob < 0.0 || cap_prob > 1.0) problems.push_back("--cap-prob must be in [0,1]");
    if (!problems.empty()) {
        for (const std::string& p : problems) log_error(p);
        throw ConfigError("invalid synth configuration (" + std::to_string(problems.size()) +
                          " problem(s))");
    }

    GenParams params;
    params.width = width;
    params.height = height;
    params.min_objects = min_objects;
    params.max_objects = max_objects;
    params.extent_min = extent_min;
    params.extent_max = extent_max;
    params.cap_probability = cap_prob;

    std::vector<DatasetEntry> entries = generate_dataset(count, params, seed, out_dir);
    log_info("wrote " + std::to_string(entries.size()) + " scene(s) under " + out_dir.string());
    std::cout << json{{"manifest", (out_dir / "manifest.json").string()},
                      {"entries", entries.size()},
                      {"seed", seed}}
                     .dump()
              << "\n";
    return 0;
}

int cmd_train(const fs::path& manifest_path, const fs::path& out_weights, const CommonFlags& common,
              int epochs, int batch, int budget, double lr, double momentum,
              const std::string& reward_mode, double val_fraction, int baseline_rollouts,
              fs::path log_path) {
    uint64_t seed = resolve_seed(common.seed);
    std::vector<std::string> problems;
    if (epochs < 1) problems.push_back("--epochs must be at least 1");
    if (batch < 1) problems.push_back("--batch must be at least 1");
    if (budget < 1 || budget > common.n_grid) problems.push_back("--budget out of [1, n-grid]");
    if (val_fraction < 0.0 || val_fraction >= 1.0) problems.push_back("--val-fraction in [0,1)");
    if (baseline_rollouts < 1) problems.push_back("--baseline-rollouts must be at least 1");
    if (!problems.empty()) {
        for (const std::string& p : problems) log_error(p);
        throw ConfigError("invalid train configuration (" + std::to_string(problems.size()) +
                          " problem(s))");
    }

    std::vector<DatasetEntry> entries = load_manifest(manifest_path);
    fs::path dir = manifest_path.parent_path();
    std::vector<TrainScene> scenes;
    scenes.reserve(entries.size());
    for (const DatasetEntry& e : entries) {
        scenes.push_back(TrainScene{load_mask(dir / e.mask), e.seed});
    }
    size_t n_val = static_cast<size_t>(val_fraction * static_cast<double>(scenes.size()));
    std::vector<TrainScene> val_set(scenes.end() - static_cast<long>(n_val), scenes.end());
    scenes.resize(scenes.size() - n_val);
    log_info("training on " + std::to_string(scenes.size()) + " scene(s), validating on " +
             std::to_string(val_set.size()));

    TrainConfig cfg;
    cfg.epochs = epochs;
    cfg.batch = batch;
    cfg.budget = budget;
    cfg.lr = lr;
    cfg.momentum = momentum;
    cfg.seed = seed;
    cfg.reward_mode = reward_mode_from_name(reward_mode);
    cfg.face_size = common.face_size;
    cfg.n_grid = common.n_grid;
    cfg.baseline_rollouts = baseline_rollouts;
    cfg.objective = common.objective();

    if (log_path.empty()) log_path = out_weights.string() + ".log.jsonl";
    std::ofstream log_stream(log_path);
    if (!log_stream) throw IoError("cannot write training log: " + log_path.string());

    TrainOutcome outcome = train(cfg, scenes, val_set, &log_stream);
    outcome.net.save(out_weights);

    json out{{"weights", out_weights.string()},
             {"log", log_path.string()},
             {"epochs_completed", outcome.log.size()},
             {"aborted", outcome.aborted},
             {"baselines", outcome.baselines.b},
             {"seed", seed}};
    if (!outcome.log.empty()) {
        out["final_val_f_per_budget"] = outcome.log.back().val_f_per_budget;
    }
    std::cout << out.dump() << "\n";
    return 0;
}

int cmd_eval(const fs::path& manifest_path, const CommonFlags& common,
             const std::string& policies_csv, const std::string& budgets_csv, int jobs,
             const fs::path& weights, const fs::path& out_json, const fs::path& out_csv,
             bool timing, const std::string& gains) {
    uint64_t seed = resolve_seed(common.seed);
    std::vector<std::string> problems;

    BenchmarkConfig cfg;
    cfg.policies = split_csv(policies_csv);
    for (const std::string& b : split_csv(budgets_csv)) {
        try {
            cfg.budgets.push_back(std::stoi(b));
        } catch (const std::exception&) {
            problems.push_back("bad budget value: " + b);
        }
    }
    if (cfg.policies.empty()) problems.push_back("--policies must name at least one policy");
    if (cfg.budgets.empty()) problems.push_back("--budgets must list at least one budget");
    if (jobs < 1) problems.push_back("--jobs must be at least 1");
    if (!problems.empty()) {
        for (const std::string& p : problems) log_error(p);
        throw ConfigError("invalid eval configuration (" + std::to_string(problems.size()) +
                          " problem(s))");
    }

    cfg.n_grid = common.n_grid;
    cfg.face_size = common.face_size;
    cfg.objective = common.objective();
    cfg.seed = seed;
    cfg.jobs = jobs;
    if (!weights.empty()) cfg.weights = weights;

    std::vector<DatasetEntry> entries = load_manifest(manifest_path);
    log_info("evaluating " + std::to_string(cfg.policies.size()) + " policy(ies) x " +
             std::to_string(cfg.budgets.size()) + " budget(s) on " +
             std::to_string(entries.size()) + " image(s)");
    BenchmarkReport report = budget_curve(manifest_path.parent_path(), entries, cfg);
    json out = report_to_json(report, timing);

    if (!gains.empty()) {
        std::vector<std::string> pair = split_csv(gains);
        if (pair.size() != 2) throw ConfigError("--gains expects POLICY_A,POLICY_B");
        json by_budget = json::object();
        for (int budget : cfg.budgets) {
            json rows = json::array();
            for (const GainRow& g : difficulty_gains(report, pair[0], pair[1], budget)) {
                rows.push_back({{"fraction", g.fraction}, {"cumulative_gain", g.cumulative_gain}});
            }
            by_budget[std::to_string(budget)] = rows;
        }
        out["difficulty_gains"] = {{"policy_a", pair[0]}, {"policy_b", pair[1]},
                                   {"table", by_budget}};
    }

    std::string serialized = out.dump();
    if (!out_json.empty()) {
        std::ofstream f(out_json);
        if (!f) throw IoError("cannot write report: " + out_json.string());
        f << serialized << "\n";
    }
    if (!out_csv.empty()) report_to_csv(report, out_csv);
    std::cout << serialized << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"snap-angle cubemap toolkit"};
    app.require_subcommand(1);

    // project
    auto* project = app.add_subcommand("project", "render a panorama to cubemap faces");
    fs::path project_input, project_out{"."};
    std::string project_theta{"0"}, project_stem;
    int project_face = 64;
    project->add_option("--input", project_input, "equirectangular PNG")->required();
    project->add_option("--theta", project_theta, "rotation (radians; deg/rad suffix allowed)");
    project->add_option("--face-size", project_face)->capture_default_str();
    project->add_option("--out-dir", project_out)->capture_default_str();
    project->add_option("--stem", project_stem, "output stem (defaults to the input stem)");

    // snap
    auto* snap = app.add_subcommand("snap", "search the best snap angle");
    fs::path snap_pano, snap_mask, snap_weights, snap_saliency, snap_out_cubemap;
    std::string snap_policy{"exhaustive"};
    int snap_budget = 20, snap_window = 30;
    double snap_sigma = 5.0;
    CommonFlags snap_common;
    snap->add_option("--panorama", snap_pano, "panorama PNG (needed for --out-cubemap)");
    snap->add_option("--mask", snap_mask, "foreground mask PNG")->required();
    snap->add_option("--policy", snap_policy,
                     "exhaustive | random | uniform | coarse2fine | saliency | learned");
    snap->add_option("--budget", snap_budget)->capture_default_str();
    snap->add_option("--weights", snap_weights, "trained policy weights");
    snap->add_option("--saliency", snap_saliency, "scalar map (PNG or .raw with JSON sidecar)");
    snap->add_option("--saliency-window", snap_window)->capture_default_str();
    snap->add_option("--saliency-sigma", snap_sigma)->capture_default_str();
    snap->add_option("--out-cubemap", snap_out_cubemap, "write the best cubemap here");
    snap_common.attach(snap);

    // score
    auto* score = app.add_subcommand("score", "disruption score at a fixed angle");
    fs::path score_mask, score_boxes;
    std::string score_theta{"0"};
    CommonFlags score_common;
    score->add_option("--mask", score_mask)->required();
    score->add_option("--theta", score_theta);
    score->add_option("--boxes", score_boxes, "JSON [[lon_min,lat_min,lon_max,lat_max],...]");
    score_common.attach(score);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    fs::path synth_out{"dataset"};
    int synth_count = 10, synth_width = 256, synth_height = 128;
    int synth_min_obj = 1, synth_max_obj = 2;
    double synth_ext_min = 0.12, synth_ext_max = 0.30, synth_cap_prob = 0.7;
    CommonFlags synth_common;
    synth->add_option("--count", synth_count)->capture_default_str();
    synth->add_option("--out-dir", synth_out)->capture_default_str();
    synth->add_option("--width", synth_width)->capture_default_str();
    synth->add_option("--height", synth_height)->capture_default_str();
    synth->add_option("--min-objects", synth_min_obj)->capture_default_str();
    synth->add_option("--max-objects", synth_max_obj)->capture_default_str();
    synth->add_option("--extent-min", synth_ext_min)->capture_default_str();
    synth->add_option("--extent-max", synth_ext_max)->capture_default_str();
    synth->add_option("--cap-prob", synth_cap_prob)->capture_default_str();
    synth_common.attach(synth);

    // train
    auto* train_cmd = app.add_subcommand("train", "train the learned snap-angle policy");
    fs::path train_manifest, train_out{"weights.snap"}, train_log;
    int train_epochs = 20, train_batch = 32, train_budget = 4, train_rollouts = 2;
    double train_lr = 0.01, train_momentum = 0.9, train_val_frac = 0.2;
    std::string train_reward{"literal-min"};
    CommonFlags train_common;
    train_cmd->add_option("--manifest", train_manifest)->required();
    train_cmd->add_option("--out", train_out)->capture_default_str();
    train_cmd->add_option("--epochs", train_epochs)->capture_default_str();
    train_cmd->add_option("--batch", train_batch)->capture_default_str();
    train_cmd->add_option("--budget", train_budget)->capture_default_str();
    train_cmd->add_option("--lr", train_lr)->capture_default_str();
    train_cmd->add_option("--momentum", train_momentum)->capture_default_str();
    train_cmd->add_option("--reward-mode", train_reward, "literal-min | clipped-gain")
        ->capture_default_str();
    train_cmd->add_option("--val-fraction", train_val_frac)->capture_default_str();
    train_cmd->add_option("--baseline-rollouts", train_rollouts)->capture_default_str();
    train_cmd->add_option("--log", train_log, "JSONL epoch log path");
    train_common.attach(train_cmd);

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "benchmark policies over a dataset");
    fs::path eval_manifest, eval_weights, eval_json, eval_csv;
    std::string eval_policies{"exhaustive,random,uniform"}, eval_budgets{"1,2,4"}, eval_gains;
    int eval_jobs = 1;
    bool eval_timing = false;
    CommonFlags eval_common;
    eval_cmd->add_option("--manifest", eval_manifest)->required();
    eval_cmd->add_option("--policies", eval_policies)->capture_default_str();
    eval_cmd->add_option("--budgets", eval_budgets)->capture_default_str();
    eval_cmd->add_option("--jobs", eval_jobs)->capture_default_str();
    eval_cmd->add_option("--weights", eval_weights, "weights for the learned policy");
    eval_cmd->add_option("--out", eval_json, "also write the report JSON here");
    eval_cmd->add_option("--csv", eval_csv, "flat CSV (policy,budget,image_id,score)");
    eval_cmd->add_flag("--timing", eval_timing, "include wall-clock fields in the report");
    eval_cmd->add_option("--gains", eval_gains, "POLICY_A,POLICY_B difficulty-sorted gain table");
    eval_common.attach(eval_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        log_error(e.what());
        return 2;
    }

    try {
        if (project->parsed()) {
            return cmd_project(project_input, project_theta, project_face, project_out,
                               project_stem);
        }
        if (snap->parsed()) {
            return cmd_snap(snap_pano, snap_mask, snap_policy, snap_budget, snap_common,
                            snap_weights, snap_saliency, snap_window, snap_sigma,
                            snap_out_cubemap);
        }
        if (score->parsed()) {
            return cmd_score(score_mask, score_theta, score_common, score_boxes);
        }
        if (synth->parsed()) {
            return cmd_synth(synth_count, synth_common, synth_out, synth_width, synth_height,
                             synth_min_obj, synth_max_obj, synth_ext_min, synth_ext_max,
                             synth_cap_prob);
        }
        if (train_cmd->parsed()) {
            return cmd_train(train_manifest, train_out, train_common, train_epochs, train_batch,
                             train_budget, train_lr, train_momentum, train_reward, train_val_frac,
                             train_rollouts, train_log);
        }
        if (eval_cmd->parsed()) {
            return cmd_eval(eval_manifest, eval_common, eval_policies, eval_budgets, eval_jobs,
                            eval_weights, eval_json, eval_csv, eval_timing, eval_gains);
        }
    } catch (const ConfigError& e) {
        log_error(e.what());
        return 2;
    } catch (const IoError& e) {
        log_error(e.what());
        return 3;
    } catch (const NumericError& e) {
        log_error(e.what());
        return 4;
    } catch (const std::exception& e) {
        log_error(e.what());
        return 1;
    }
    return 0;
}
