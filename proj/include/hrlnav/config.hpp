#pragma once

#include <string>

#include "hrlnav/train.hpp"

namespace hrlnav::cli {

/// Everything a run depends on, with working defaults for every field.
/// Parsing is strict: unknown keys are rejected by name. The resolved
/// snapshot written at the start of a run parses back to the same config,
/// so a run can be reproduced from its output directory alone.
struct RunConfig {
    std::string world = "worlds/empty.world";
    std::string mode = "alternating";
    uint64_t seed = 0;
    int episodes = 1000;
    std::string output_dir = "runs/out";
    std::string init_from;     // checkpoint to resume from; empty = fresh start
    int checkpoint_every = 0;  // extra checkpoint every N episodes; 0 = final only
    int eval_episodes = 100;
    double fov_deg = 180.0;    // sensor field of view; sim.fov holds radians

    sim::SimConfig sim;
    hier::HierarchyConfig hierarchy;
    agents::DqnConfig dqn;    // obs_dim / n_actions 0 = derived from sensor and lattice
    agents::Td3Config td3;
    hier::TrainParams train;  // .mode and .episodes are driven by the fields above

    RunConfig();

    /// Sync derived fields (radian fov, training mode enum) and validate.
    /// Throws ConfigError on any inconsistency.
    void resolve();
};

RunConfig load_run_config(const std::string& text);
RunConfig load_run_config_file(const std::string& path);

/// Full round-trippable document with every field explicit.
std::string run_config_to_text(const RunConfig& c);

}  // namespace hrlnav::cli
