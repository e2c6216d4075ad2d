#include "hrlnav/rewards.hpp"

#include <cmath>
#include <stdexcept>

namespace hrlnav::rewards {

double direction_reward(double theta_diff_deg) {
    if (std::abs(theta_diff_deg) > 180.0) {
        throw std::invalid_argument("direction_reward: theta_diff outside [-180, 180]");
    }
    return 1.0 - std::abs(theta_diff_deg) / 180.0;
}

double distance_reward(double d_actual, double d_target) {
    if (!(d_target > 0.0)) throw std::invalid_argument("distance_reward: d_target must be > 0");
    if (d_actual < 0.0) throw std::invalid_argument("distance_reward: d_actual must be >= 0");
    return 1.0 - std::min(std::abs(d_actual - d_target) / d_target, 1.0);
}

double avoidance_reward(bool obstacle_ahead, double r_avoidance) {
    return obstacle_ahead ? 0.0 : r_avoidance;
}

double smoothness_reward(double delta_theta_deg) {
    return 0.1 * (1.0 - std::min(std::abs(delta_theta_deg) / 90.0, 1.0));
}

double high_level_reward(const HighRewardInputs& in, const HighRewardWeights& w) {
    const double body = w.w1 * direction_reward(in.theta_diff) +
                        w.w2 * distance_reward(in.d_actual, in.d_target) +
                        w.w3 * avoidance_reward(in.obstacle_ahead, w.r_avoidance) +
                        w.w4 * smoothness_reward(in.delta_theta);
    return body - (in.collided ? w.p_collision : 0.0) - w.p_time;
}

double proximity_shaping(double x) {
    if (x < 0.0) throw std::invalid_argument("proximity_shaping: x must be >= 0");
    return x < 1.0 ? 1.0 - x : 0.0;
}

double env_reward(sim::Outcome outcome, double a_lin, double a_ang, double d_min) {
    switch (outcome) {
        case sim::Outcome::GoalReached: return 100.0;
        case sim::Outcome::Collision: return -100.0;
        default: break;
    }
    return a_lin / 2.0 - std::abs(a_ang) / 2.0 - proximity_shaping(d_min) / 2.0;
}

double low_level_reward(double env_r, double r_dir, double r_dist, bool collided,
                        const LowRewardWeights& w) {
    return env_r + w.w7 * (r_dir + r_dist) - w.w8 * (collided ? w.p_collision : 0.0);
}

bool obstacle_ahead(const std::vector<double>& scan, double fov) {
    const size_t n = scan.size();
    if (n == 0) return false;
    constexpr double kConeDeg = 15.0;
    constexpr double kNearM = 1.0;
    for (size_t i = 0; i < n; ++i) {
        const double rel =
            n == 1 ? 0.0 : -fov / 2.0 + static_cast<double>(i) * fov / static_cast<double>(n - 1);
        if (std::abs(geom::rad_to_deg(rel)) <= kConeDeg && scan[i] < kNearM) return true;
    }
    return false;
}

}  // namespace hrlnav::rewards
