#pragma once

#include <vector>

#include "hrlnav/sim.hpp"

namespace hrlnav::rewards {

/// Weights of the subgoal-selection reward. Components are dimensionless;
/// the time penalty applies once per decision step.
struct HighRewardWeights {
    double w1 = 0.4;           // direction term
    double w2 = 0.4;           // distance term
    double w3 = 0.1;           // avoidance term
    double w4 = 0.1;           // smoothness term
    double r_avoidance = 0.2;  // bonus when the path ahead is clear
    double p_collision = 1.0;
    double p_time = 0.01;
};

/// Weights of the motion-control reward on top of the environment reward.
struct LowRewardWeights {
    double w7 = 1.0;  // shaping terms (direction + distance)
    double w8 = 1.0;  // collision penalty scale
    double p_collision = 1.0;
};

/// Per-decision quantities the high-level reward is computed from. Angles in
/// degrees; theta_diff normalized into [-180, 180] beforehand.
struct HighRewardInputs {
    double theta_diff = 0.0;   // actual motion direction vs commanded one
    double d_actual = 0.0;     // displacement achieved
    double d_target = 1.0;     // displacement requested
    bool obstacle_ahead = false;
    double delta_theta = 0.0;  // change between consecutive subgoal bearings
    bool collided = false;
};

/// 1 - |theta_diff|/180. Rejects |theta_diff| > 180.
double direction_reward(double theta_diff_deg);

/// 1 - min(|d_actual - d_target|/d_target, 1). Rejects d_target <= 0 and
/// negative d_actual.
double distance_reward(double d_actual, double d_target);

/// r_avoidance when the path ahead is clear, 0 otherwise.
double avoidance_reward(bool obstacle_ahead, double r_avoidance);

/// 0.1 * (1 - min(|delta_theta|/90, 1)).
double smoothness_reward(double delta_theta_deg);

/// Weighted component sum minus collision and time penalties. Maximum with
/// default weights and no collision is 0.82.
double high_level_reward(const HighRewardInputs& in, const HighRewardWeights& w);

/// 1 - x for x < 1, else 0. Rejects negative x.
double proximity_shaping(double x);

/// +100 on reaching the goal, -100 on collision, otherwise
/// a_lin/2 - |a_ang|/2 - proximity_shaping(d_min)/2.
double env_reward(sim::Outcome outcome, double a_lin, double a_ang, double d_min);

/// env_r + w7*(r_dir + r_dist) - w8*(p_collision if collided). The shaping
/// terms are computed against the current subgoal, not the final goal.
double low_level_reward(double env_r, double r_dir, double r_dist, bool collided,
                        const LowRewardWeights& w);

/// True if any scan beam within +/-15 degrees of the heading reads closer
/// than 1 m. Beam bearings follow the raycast layout for (n_beams, fov).
bool obstacle_ahead(const std::vector<double>& scan, double fov);

}  // namespace hrlnav::rewards
