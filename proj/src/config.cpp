#include "hrlnav/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hrlnav/csvio.hpp"
#include "hrlnav/errors.hpp"

namespace hrlnav::cli {

namespace {

using nlohmann::ordered_json;

void allow_keys(const ordered_json& obj, const char* where,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) throw ConfigError(std::string(where) + ": unknown key '" + it.key() + "'");
    }
}

void get_num(const ordered_json& obj, const char* key, double& target, const char* where) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(std::string(where) + "." + key + ": expected a number");
    target = v.get<double>();
}

template <typename Int>
void get_int(const ordered_json& obj, const char* key, Int& target, const char* where) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_number_integer())
        throw ConfigError(std::string(where) + "." + key + ": expected an integer");
    target = v.get<Int>();
}

void get_bool(const ordered_json& obj, const char* key, bool& target, const char* where) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_boolean()) throw ConfigError(std::string(where) + "." + key + ": expected a boolean");
    target = v.get<bool>();
}

void get_str(const ordered_json& obj, const char* key, std::string& target, const char* where) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(std::string(where) + "." + key + ": expected a string");
    target = v.get<std::string>();
}

void get_num_list(const ordered_json& obj, const char* key, std::vector<double>& target,
                  const char* where) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_array()) throw ConfigError(std::string(where) + "." + key + ": expected an array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number())
            throw ConfigError(std::string(where) + "." + key + ": expected numbers");
        out.push_back(e.get<double>());
    }
    target = std::move(out);
}

void get_int_list(const ordered_json& obj, const char* key, std::vector<int>& target,
                  const char* where) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_array()) throw ConfigError(std::string(where) + "." + key + ": expected an array");
    std::vector<int> out;
    for (const auto& e : v) {
        if (!e.is_number_integer())
            throw ConfigError(std::string(where) + "." + key + ": expected integers");
        out.push_back(e.get<int>());
    }
    target = std::move(out);
}

}  // namespace

RunConfig::RunConfig() {
    // 0 means "derive from the budget": decay over ~30% of subgoal decisions.
    dqn.epsilon.decay_steps = 0;
}

void RunConfig::resolve() {
    if (!(fov_deg > 0.0) || fov_deg > 360.0)
        throw ConfigError("config: fov_deg must be in (0, 360]");
    sim.fov = geom::deg_to_rad(fov_deg);
    if (episodes <= 0) throw ConfigError("config: episodes must be positive");
    if (eval_episodes <= 0) throw ConfigError("config: eval_episodes must be positive");
    if (checkpoint_every < 0) throw ConfigError("config: checkpoint_every must be >= 0");
    if (sim.max_steps <= 0) throw ConfigError("config: sim.max_steps must be positive");
    if (sim.n_beams < 1) throw ConfigError("config: sim.n_beams must be >= 1");
    if (!(sim.dt > 0.0)) throw ConfigError("config: sim.dt must be positive");
    if (!(sim.max_range > 0.0)) throw ConfigError("config: sim.max_range must be positive");
    train.mode = hier::training_mode_from_name(mode);
    train.episodes = episodes;
    hierarchy.validate();
    train.validate();
}

RunConfig load_run_config(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw ConfigError(std::string("config: not valid JSON: ") + e.what());
    }
    allow_keys(doc, "config",
               {"world", "mode", "seed", "episodes", "output_dir", "init_from", "checkpoint_every",
                "eval_episodes", "sim", "hierarchy", "dqn", "td3", "train"});

    RunConfig c;
    get_str(doc, "world", c.world, "config");
    get_str(doc, "mode", c.mode, "config");
    get_int(doc, "seed", c.seed, "config");
    get_int(doc, "episodes", c.episodes, "config");
    get_str(doc, "output_dir", c.output_dir, "config");
    get_str(doc, "init_from", c.init_from, "config");
    get_int(doc, "checkpoint_every", c.checkpoint_every, "config");
    get_int(doc, "eval_episodes", c.eval_episodes, "config");

    if (doc.contains("sim")) {
        const auto& s = doc.at("sim");
        allow_keys(s, "config.sim",
                   {"dt", "max_steps", "n_beams", "fov_deg", "max_range", "start_jitter",
                    "randomize_start", "randomize_goal", "min_goal_separation"});
        get_num(s, "dt", c.sim.dt, "config.sim");
        get_int(s, "max_steps", c.sim.max_steps, "config.sim");
        get_int(s, "n_beams", c.sim.n_beams, "config.sim");
        get_num(s, "fov_deg", c.fov_deg, "config.sim");
        get_num(s, "max_range", c.sim.max_range, "config.sim");
        get_num(s, "start_jitter", c.sim.start_jitter, "config.sim");
        get_bool(s, "randomize_start", c.sim.randomize_start, "config.sim");
        get_bool(s, "randomize_goal", c.sim.randomize_goal, "config.sim");
        get_num(s, "min_goal_separation", c.sim.min_goal_separation, "config.sim");
    }
    if (doc.contains("hierarchy")) {
        const auto& h = doc.at("hierarchy");
        allow_keys(h, "config.hierarchy",
                   {"n_bearings", "distance_bins", "horizon", "subgoal_radius"});
        get_int(h, "n_bearings", c.hierarchy.n_bearings, "config.hierarchy");
        get_num_list(h, "distance_bins", c.hierarchy.distance_bins, "config.hierarchy");
        get_int(h, "horizon", c.hierarchy.horizon, "config.hierarchy");
        get_num(h, "subgoal_radius", c.hierarchy.subgoal_radius, "config.hierarchy");
    }
    if (doc.contains("dqn")) {
        const auto& d = doc.at("dqn");
        allow_keys(d, "config.dqn",
                   {"hidden", "lr", "gamma", "target_sync", "epsilon_start", "epsilon_end",
                    "epsilon_decay_steps"});
        get_int_list(d, "hidden", c.dqn.hidden, "config.dqn");
        get_num(d, "lr", c.dqn.lr, "config.dqn");
        get_num(d, "gamma", c.dqn.gamma, "config.dqn");
        get_int(d, "target_sync", c.dqn.target_sync, "config.dqn");
        get_num(d, "epsilon_start", c.dqn.epsilon.start, "config.dqn");
        get_num(d, "epsilon_end", c.dqn.epsilon.end, "config.dqn");
        get_int(d, "epsilon_decay_steps", c.dqn.epsilon.decay_steps, "config.dqn");
    }
    if (doc.contains("td3")) {
        const auto& t = doc.at("td3");
        allow_keys(t, "config.td3",
                   {"hidden", "lr_actor", "lr_critic", "gamma", "tau", "policy_delay",
                    "sigma_explore", "sigma_target", "noise_clip"});
        get_int_list(t, "hidden", c.td3.hidden, "config.td3");
        get_num(t, "lr_actor", c.td3.lr_actor, "config.td3");
        get_num(t, "lr_critic", c.td3.lr_critic, "config.td3");
        get_num(t, "gamma", c.td3.gamma, "config.td3");
        get_num(t, "tau", c.td3.tau, "config.td3");
        get_int(t, "policy_delay", c.td3.policy_delay, "config.td3");
        get_num(t, "sigma_explore", c.td3.sigma_explore, "config.td3");
        get_num(t, "sigma_target", c.td3.sigma_target, "config.td3");
        get_num(t, "noise_clip", c.td3.noise_clip, "config.td3");
    }
    if (doc.contains("train")) {
        const auto& t = doc.at("train");
        allow_keys(t, "config.train",
                   {"update_period", "grad_steps", "warmup_env_steps", "low_capacity",
                    "high_capacity", "low_batch", "high_batch", "phase_pretrain_frac",
                    "phase_subgoal_frac"});
        get_int(t, "update_period", c.train.update_period, "config.train");
        get_int(t, "grad_steps", c.train.grad_steps, "config.train");
        get_int(t, "warmup_env_steps", c.train.warmup_env_steps, "config.train");
        get_int(t, "low_capacity", c.train.low_capacity, "config.train");
        get_int(t, "high_capacity", c.train.high_capacity, "config.train");
        get_int(t, "low_batch", c.train.low_batch, "config.train");
        get_int(t, "high_batch", c.train.high_batch, "config.train");
        get_num(t, "phase_pretrain_frac", c.train.phase_pretrain_frac, "config.train");
        get_num(t, "phase_subgoal_frac", c.train.phase_subgoal_frac, "config.train");
    }
    c.resolve();
    return c;
}

RunConfig load_run_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return load_run_config(buf.str());
}

std::string run_config_to_text(const RunConfig& c) {
    ordered_json doc;
    doc["world"] = c.world;
    doc["mode"] = c.mode;
    doc["seed"] = c.seed;
    doc["episodes"] = c.episodes;
    doc["output_dir"] = c.output_dir;
    doc["init_from"] = c.init_from;
    doc["checkpoint_every"] = c.checkpoint_every;
    doc["eval_episodes"] = c.eval_episodes;
    doc["sim"] = {{"dt", c.sim.dt},
                  {"max_steps", c.sim.max_steps},
                  {"n_beams", c.sim.n_beams},
                  {"fov_deg", c.fov_deg},
                  {"max_range", c.sim.max_range},
                  {"start_jitter", c.sim.start_jitter},
                  {"randomize_start", c.sim.randomize_start},
                  {"randomize_goal", c.sim.randomize_goal},
                  {"min_goal_separation", c.sim.min_goal_separation}};
    doc["hierarchy"] = {{"n_bearings", c.hierarchy.n_bearings},
                        {"distance_bins", c.hierarchy.distance_bins},
                        {"horizon", c.hierarchy.horizon},
                        {"subgoal_radius", c.hierarchy.subgoal_radius}};
    doc["dqn"] = {{"hidden", c.dqn.hidden},
                  {"lr", c.dqn.lr},
                  {"gamma", c.dqn.gamma},
                  {"target_sync", c.dqn.target_sync},
                  {"epsilon_start", c.dqn.epsilon.start},
                  {"epsilon_end", c.dqn.epsilon.end},
                  {"epsilon_decay_steps", c.dqn.epsilon.decay_steps}};
    doc["td3"] = {{"hidden", c.td3.hidden},
                  {"lr_actor", c.td3.lr_actor},
                  {"lr_critic", c.td3.lr_critic},
                  {"gamma", c.td3.gamma},
                  {"tau", c.td3.tau},
                  {"policy_delay", c.td3.policy_delay},
                  {"sigma_explore", c.td3.sigma_explore},
                  {"sigma_target", c.td3.sigma_target},
                  {"noise_clip", c.td3.noise_clip}};
    doc["train"] = {{"update_period", c.train.update_period},
                    {"grad_steps", c.train.grad_steps},
                    {"warmup_env_steps", c.train.warmup_env_steps},
                    {"low_capacity", c.train.low_capacity},
                    {"high_capacity", c.train.high_capacity},
                    {"low_batch", c.train.low_batch},
                    {"high_batch", c.train.high_batch},
                    {"phase_pretrain_frac", c.train.phase_pretrain_frac},
                    {"phase_subgoal_frac", c.train.phase_subgoal_frac}};
    return doc.dump(2) + "\n";
}

}  // namespace hrlnav::cli
