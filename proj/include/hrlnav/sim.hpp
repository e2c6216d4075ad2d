#pragma once

#include <array>
#include <utility>
#include <vector>

#include "hrlnav/world.hpp"

namespace hrlnav::sim {

/// Differential-drive command. Linear velocity in [0, 1] m/s, angular
/// velocity in [-1, 1] rad/s; values are clamped before integration.
struct Action {
    static constexpr double kLinLo = 0.0;
    static constexpr double kLinHi = 1.0;
    static constexpr double kAngLo = -1.0;
    static constexpr double kAngHi = 1.0;

    double linear = 0.0;
    double angular = 0.0;

    Action clamped() const {
        return {std::clamp(linear, kLinLo, kLinHi), std::clamp(angular, kAngLo, kAngHi)};
    }
};

/// Sensor view of one timestep: range scan, goal in polar form relative to
/// the robot, and the previously executed action. Flattens to n_beams + 4.
struct Observation {
    std::vector<double> scan;
    double goal_distance = 0.0;
    double goal_bearing = 0.0;  // radians in (-pi, pi], relative to heading
    std::array<double, 2> last_action{0.0, 0.0};

    size_t flat_size() const { return scan.size() + 4; }
    std::vector<double> flatten() const;
};

enum class Outcome { Running, GoalReached, Collision, Timeout };

const char* outcome_name(Outcome o);

struct StepOutcome {
    Outcome kind = Outcome::Running;
    int steps_elapsed = 0;
};

struct SimConfig {
    double dt = 0.1;          // seconds per control step
    int max_steps = 500;      // episode cap; Timeout fires exactly here
    int n_beams = 20;
    double fov = geom::kPi;   // radians
    double max_range = 7.0;   // meters
    double start_jitter = 0.0;       // uniform +/- jitter on the start position
    bool randomize_start = false;    // resample start uniformly over free space
    bool randomize_goal = false;     // resample goal uniformly over free space
    double min_goal_separation = 1.0;  // when randomizing, keep start/goal apart
};

/// Beam bearings span heading - fov/2 .. heading + fov/2; each range is the
/// nearest obstacle or boundary intersection, clipped to (0, max_range].
std::vector<double> raycast_scan(const Pose& pose, const World& world, int n_beams, double fov,
                                 double max_range);

/// Episode state machine over a World. Deterministic: identical
/// (world, config, seed, action sequence) yields identical trajectories.
class Environment {
public:
    Environment(World world, SimConfig cfg);

    /// Start a new episode. Same seed => bit-identical initial observation.
    Observation reset(uint64_t seed);

    /// Advance one control step with the configured dt.
    std::pair<Observation, StepOutcome> step(const Action& action);
    std::pair<Observation, StepOutcome> step(const Action& action, double dt);

    Observation observe() const;

    const World& world() const { return world_; }
    const SimConfig& config() const { return cfg_; }
    const Pose& pose() const { return pose_; }
    const Vec2& goal() const { return goal_; }
    Outcome state() const { return state_; }
    int steps() const { return steps_; }

private:
    bool collided() const;

    World world_;
    SimConfig cfg_;
    Pose pose_;
    Vec2 goal_;
    Outcome state_ = Outcome::Running;
    int steps_ = 0;
    std::array<double, 2> last_action_{0.0, 0.0};
};

}  // namespace hrlnav::sim
