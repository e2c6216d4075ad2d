#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "hrlnav/dqn.hpp"
#include "hrlnav/obs_scaler.hpp"
#include "hrlnav/replay.hpp"
#include "hrlnav/rewards.hpp"
#include "hrlnav/sim.hpp"
#include "hrlnav/td3.hpp"

namespace hrlnav::hier {

/// Discrete subgoal lattice and lifecycle limits.
struct HierarchyConfig {
    int n_bearings = 8;
    std::vector<double> distance_bins{1.0, 2.0};
    int horizon = 50;            // low-level steps before a subgoal expires
    double subgoal_radius = 0.3;

    int n_actions() const { return n_bearings * static_cast<int>(distance_bins.size()); }
    void validate() const;
};

/// A commanded intermediate target, fixed at issuance.
struct Subgoal {
    int index = -1;
    double bearing_offset_deg = 0.0;  // relative to heading at issuance
    double bearing_abs_deg = 0.0;     // world-frame direction of the command
    double distance = 0.0;
    geom::Vec2 absolute_target;
    geom::Vec2 issued_from;
    int issued_at_step = 0;
};

/// index = bearing_index * |distance_bins| + distance_index. Bearings start
/// at -180 deg relative to the current heading; the absolute target is
/// clamped into the bounds inset by robot_radius so it stays attainable.
Subgoal subgoal_decode(int index, const sim::Pose& pose, const HierarchyConfig& cfg,
                       const geom::Rect& bounds, double robot_radius);

enum class SubgoalStatus { Active, Reached, Expired };

SubgoalStatus subgoal_status(const sim::Pose& pose, const Subgoal& sg, int steps_since_issue,
                             const HierarchyConfig& cfg);

/// Reward inputs for one completed subgoal segment. Zero net displacement
/// scores theta_diff = 180 (worst case). delta_theta compares consecutive
/// absolute subgoal bearings; the first subgoal of an episode gets 0.
rewards::HighRewardInputs high_level_inputs(const geom::Vec2& segment_start,
                                            const geom::Vec2& segment_end, const Subgoal& sg,
                                            std::optional<double> prev_bearing_abs_deg,
                                            const std::vector<double>& scan, double fov,
                                            bool collided);

/// Observation with the goal polar slots replaced by the subgoal's, so the
/// motion policy is conditioned on the subgoal instead of the final goal.
sim::Observation subgoal_view(const sim::Observation& obs, const sim::Pose& pose,
                              const Subgoal& sg);

/// Policies see raw (unscaled) flattened observations; learned-agent
/// adapters apply their scaler internally.
class HighPolicy {
public:
    virtual ~HighPolicy() = default;
    virtual int select(const std::vector<double>& obs, Rng& rng) = 0;
};

class LowPolicy {
public:
    virtual ~LowPolicy() = default;
    virtual sim::Action select(const std::vector<double>& obs, Rng& rng) = 0;
};

class DqnHighPolicy : public HighPolicy {
public:
    DqnHighPolicy(agents::DqnAgent& agent, bool greedy, const agents::ObsScaler* scaler)
        : agent_(agent), greedy_(greedy), scaler_(scaler) {}
    int select(const std::vector<double>& obs, Rng& rng) override {
        return agent_.select_action(scaler_ ? scaler_->apply(obs) : obs, rng, greedy_);
    }

private:
    agents::DqnAgent& agent_;
    bool greedy_;
    const agents::ObsScaler* scaler_;
};

class Td3LowPolicy : public LowPolicy {
public:
    Td3LowPolicy(const agents::Td3Agent& agent, bool explore, const agents::ObsScaler* scaler)
        : agent_(agent), explore_(explore), scaler_(scaler) {}
    sim::Action select(const std::vector<double>& obs, Rng& rng) override {
        return agent_.select_action(scaler_ ? scaler_->apply(obs) : obs, rng, explore_);
    }

private:
    const agents::Td3Agent& agent_;
    bool explore_;
    const agents::ObsScaler* scaler_;
};

class RandomHighPolicy : public HighPolicy {
public:
    explicit RandomHighPolicy(int n_actions) : n_actions_(n_actions) {}
    int select(const std::vector<double>&, Rng& rng) override {
        return static_cast<int>(rng.uniform_index(static_cast<uint64_t>(n_actions_)));
    }

private:
    int n_actions_;
};

/// Scripted planner: picks the subgoal whose decoded endpoint lands nearest
/// the goal, using only the goal polar slots of the observation.
class GreedyGoalHighPolicy : public HighPolicy {
public:
    GreedyGoalHighPolicy(HierarchyConfig cfg, size_t n_beams)
        : cfg_(std::move(cfg)), n_beams_(n_beams) {}
    int select(const std::vector<double>& obs, Rng& rng) override;

private:
    HierarchyConfig cfg_;
    size_t n_beams_;
};

struct TrajectoryPoint {
    int step = 0;
    double x = 0.0, y = 0.0, heading = 0.0;
    double lin = 0.0, ang = 0.0;
    double reward_low = 0.0;
    int subgoal_id = -1;  // -1 in flat mode
};

struct SubgoalRow {
    int id = 0;
    int action_index = 0;
    double bearing_abs_deg = 0.0;
    double distance = 0.0;
    double reward_high = 0.0;
    int steps = 0;  // low-level steps consumed
    int issued_at_step = 0;
};

struct EpisodeRecord {
    sim::Outcome outcome = sim::Outcome::Running;
    int steps = 0;
    double reward_low = 0.0;
    double reward_high = 0.0;
    geom::Vec2 start;
    geom::Vec2 goal;
    std::vector<TrajectoryPoint> trajectory;  // empty unless recording
    std::vector<SubgoalRow> subgoals;
};

/// Training-side hooks. Observations handed to the sinks are raw; trainers
/// scale them before storage. on_env_step fires after each simulator step
/// (the update-cadence clock).
struct EpisodeSinks {
    std::function<void(const replay::Transition<int>&)> high;
    std::function<void(const replay::Transition<std::array<double, 2>>&)> low;
    std::function<void()> on_env_step;
};

/// One full hierarchical episode: the high policy issues a subgoal at reset
/// and whenever the previous one is Reached/Expired; the low policy drives
/// between decisions. Low transitions carry the subgoal-conditioned reward,
/// high transitions one reward per subgoal lifetime with span = steps
/// consumed.
EpisodeRecord run_episode(sim::Environment& env, HighPolicy& high, LowPolicy& low,
                          const HierarchyConfig& cfg, const rewards::HighRewardWeights& hw,
                          const rewards::LowRewardWeights& lw, uint64_t episode_seed,
                          Rng& policy_rng, const EpisodeSinks* sinks, bool record_trajectory);

/// Non-hierarchical episode: the policy navigates straight to the goal.
/// Reward = low-level reward with the goal in the subgoal role; the
/// direction term compares each step's displacement with the goal bearing
/// at the step's start, and the distance term is zero (no commanded
/// displacement exists).
EpisodeRecord run_flat_episode(sim::Environment& env, LowPolicy& low,
                               const rewards::LowRewardWeights& lw, uint64_t episode_seed,
                               Rng& policy_rng, const EpisodeSinks* sinks,
                               bool record_trajectory);

}  // namespace hrlnav::hier
