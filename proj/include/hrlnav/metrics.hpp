#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hrlnav/hierarchy.hpp"

namespace hrlnav::bench {

/// Straight-line start-goal distance over traveled arc length. The
/// traveled length ends with a closing segment from the final trajectory
/// point to the goal, so a path that stops at the goal ring is compared
/// against the full straight line and the ratio stays <= 1.
double path_efficiency(const std::vector<geom::Vec2>& trajectory, const geom::Vec2& start,
                       const geom::Vec2& goal);

/// 1 - mean(|heading change|)/180 deg over consecutive segment headings.
/// Zero-length segments are skipped; needs at least two real segments.
double trajectory_smoothness(const std::vector<geom::Vec2>& trajectory);

struct EpisodeMetrics {
    int episode = 0;
    sim::Outcome outcome = sim::Outcome::Running;
    int steps = 0;
    double reward_low = 0.0;
    double reward_high = 0.0;
    std::optional<double> time_to_goal;     // seconds, successes only
    std::optional<double> path_efficiency;  // successes only
    std::optional<double> smoothness;       // non-timeout episodes
};

struct MetricsReport {
    int episodes = 0;
    double success_rate = 0.0;
    double collision_rate = 0.0;
    double timeout_rate = 0.0;
    std::optional<double> mean_time_to_goal;
    std::optional<double> mean_path_efficiency;
    std::optional<double> mean_smoothness;
    std::vector<EpisodeMetrics> rows;
};

struct EvalOptions {
    int episodes = 100;
    uint64_t seed = 0;
    bool record_trajectories = false;  // keep per-episode paths in `records`
};

/// Seeded greedy evaluation of a flat policy across worlds (round-robin).
MetricsReport evaluate_flat(std::vector<sim::Environment>& envs, hier::LowPolicy& low,
                            const rewards::LowRewardWeights& lw, const EvalOptions& opt,
                            std::vector<hier::EpisodeRecord>* records = nullptr);

/// Seeded greedy evaluation of a high+low policy pair.
MetricsReport evaluate_hierarchy(std::vector<sim::Environment>& envs, hier::HighPolicy& high,
                                 hier::LowPolicy& low, const hier::HierarchyConfig& hcfg,
                                 const rewards::HighRewardWeights& hw,
                                 const rewards::LowRewardWeights& lw, const EvalOptions& opt,
                                 std::vector<hier::EpisodeRecord>* records = nullptr);

/// Per-episode CSV with a documented header line.
std::string report_csv(const MetricsReport& report);

/// Human-readable aggregate block.
std::string report_summary(const MetricsReport& report, const std::string& label);

/// Scripted baseline: proportional steering toward the goal polar slots of
/// the observation.
class SteerToGoalPolicy : public hier::LowPolicy {
public:
    explicit SteerToGoalPolicy(size_t n_beams) : n_beams_(n_beams) {}
    sim::Action select(const std::vector<double>& obs, Rng& rng) override;

private:
    size_t n_beams_;
};

/// Scripted baseline: full speed ahead, never turns.
class AlwaysForwardPolicy : public hier::LowPolicy {
public:
    sim::Action select(const std::vector<double>&, Rng&) override { return {1.0, 0.0}; }
};

/// Scripted baseline: uniform random actions.
class RandomLowPolicy : public hier::LowPolicy {
public:
    sim::Action select(const std::vector<double>&, Rng& rng) override {
        return {rng.uniform(0.0, 1.0), rng.uniform(-1.0, 1.0)};
    }
};

}  // namespace hrlnav::bench
