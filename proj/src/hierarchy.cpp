#include "hrlnav/hierarchy.hpp"

#include <cmath>
#include <stdexcept>

#include "hrlnav/errors.hpp"

namespace hrlnav::agents {

ObsScaler make_obs_scaler(size_t n_beams, double max_range, double arena_diagonal) {
    ObsScaler s;
    s.scale.assign(n_beams + 4, 1.0);
    for (size_t i = 0; i < n_beams; ++i) s.scale[i] = 1.0 / max_range;
    s.scale[n_beams] = 1.0 / arena_diagonal;
    s.scale[n_beams + 1] = 1.0 / geom::kPi;
    return s;
}

}  // namespace hrlnav::agents

namespace hrlnav::hier {

void HierarchyConfig::validate() const {
    if (n_bearings < 2) throw ConfigError("hierarchy: n_bearings must be >= 2");
    if (horizon < 1) throw ConfigError("hierarchy: horizon must be >= 1");
    if (!(subgoal_radius > 0.0)) throw ConfigError("hierarchy: subgoal_radius must be > 0");
    if (distance_bins.empty()) throw ConfigError("hierarchy: distance_bins must be nonempty");
    double prev = 0.0;
    for (double d : distance_bins) {
        if (!(d > prev)) throw ConfigError("hierarchy: distance_bins must be positive ascending");
        prev = d;
    }
}

Subgoal subgoal_decode(int index, const sim::Pose& pose, const HierarchyConfig& cfg,
                       const geom::Rect& bounds, double robot_radius) {
    if (index < 0 || index >= cfg.n_actions()) {
        throw std::out_of_range("subgoal_decode: index outside the action set");
    }
    const int n_bins = static_cast<int>(cfg.distance_bins.size());
    const int index_b = index / n_bins;
    const int index_d = index % n_bins;

    Subgoal sg;
    sg.index = index;
    sg.bearing_offset_deg = -180.0 + index_b * (360.0 / cfg.n_bearings);
    sg.bearing_abs_deg = geom::wrap_deg(geom::rad_to_deg(pose.heading) + sg.bearing_offset_deg);
    sg.distance = cfg.distance_bins[static_cast<size_t>(index_d)];
    sg.issued_from = pose.position();

    const double rad = geom::deg_to_rad(sg.bearing_abs_deg);
    geom::Vec2 t{pose.x + sg.distance * std::cos(rad), pose.y + sg.distance * std::sin(rad)};
    t.x = std::clamp(t.x, bounds.lo.x + robot_radius, bounds.hi.x - robot_radius);
    t.y = std::clamp(t.y, bounds.lo.y + robot_radius, bounds.hi.y - robot_radius);
    sg.absolute_target = t;
    return sg;
}

SubgoalStatus subgoal_status(const sim::Pose& pose, const Subgoal& sg, int steps_since_issue,
                             const HierarchyConfig& cfg) {
    if (geom::distance(pose.position(), sg.absolute_target) <= cfg.subgoal_radius) {
        return SubgoalStatus::Reached;
    }
    if (steps_since_issue >= cfg.horizon) return SubgoalStatus::Expired;
    return SubgoalStatus::Active;
}

rewards::HighRewardInputs high_level_inputs(const geom::Vec2& segment_start,
                                            const geom::Vec2& segment_end, const Subgoal& sg,
                                            std::optional<double> prev_bearing_abs_deg,
                                            const std::vector<double>& scan, double fov,
                                            bool collided) {
    rewards::HighRewardInputs in;
    const geom::Vec2 disp = segment_end - segment_start;
    in.d_actual = disp.norm();
    in.d_target = sg.distance;
    if (in.d_actual < 1e-12) {
        in.theta_diff = 180.0;
        in.d_actual = 0.0;
    } else {
        const double moved_deg = geom::rad_to_deg(std::atan2(disp.y, disp.x));
        in.theta_diff = geom::wrap_deg(moved_deg - sg.bearing_abs_deg);
    }
    in.delta_theta =
        prev_bearing_abs_deg ? geom::wrap_deg(sg.bearing_abs_deg - *prev_bearing_abs_deg) : 0.0;
    in.obstacle_ahead = rewards::obstacle_ahead(scan, fov);
    in.collided = collided;
    return in;
}

sim::Observation subgoal_view(const sim::Observation& obs, const sim::Pose& pose,
                              const Subgoal& sg) {
    sim::Observation out = obs;
    const geom::Vec2 to_target = sg.absolute_target - pose.position();
    out.goal_distance = to_target.norm();
    out.goal_bearing = geom::wrap_angle(std::atan2(to_target.y, to_target.x) - pose.heading);
    return out;
}

int GreedyGoalHighPolicy::select(const std::vector<double>& obs, Rng&) {
    const double goal_dist = obs[n_beams_];
    const double goal_bearing = obs[n_beams_ + 1];  // radians, heading-relative
    int best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    const int n_bins = static_cast<int>(cfg_.distance_bins.size());
    for (int index = 0; index < cfg_.n_actions(); ++index) {
        const double offset_rad =
            geom::deg_to_rad(-180.0 + (index / n_bins) * (360.0 / cfg_.n_bearings));
        const double d = cfg_.distance_bins[static_cast<size_t>(index % n_bins)];
        // Squared distance from the decoded endpoint to the goal, both in
        // the robot frame (law of cosines).
        const double err =
            goal_dist * goal_dist + d * d - 2.0 * goal_dist * d * std::cos(offset_rad - goal_bearing);
        if (err < best_err) {
            best_err = err;
            best = index;
        }
    }
    return best;
}

namespace {

bool is_terminal(sim::Outcome o) {
    return o == sim::Outcome::GoalReached || o == sim::Outcome::Collision;
}

/// Direction/distance shaping of one low-level step, measured as net
/// displacement since the subgoal was issued vs the commanded ray.
std::pair<double, double> low_shaping(const geom::Vec2& issued_from, const geom::Vec2& now,
                                      const Subgoal& sg) {
    const geom::Vec2 disp = now - issued_from;
    const double moved = disp.norm();
    if (moved < 1e-12) {
        return {rewards::direction_reward(180.0), rewards::distance_reward(0.0, sg.distance)};
    }
    const double moved_deg = geom::rad_to_deg(std::atan2(disp.y, disp.x));
    const double theta_diff = geom::wrap_deg(moved_deg - sg.bearing_abs_deg);
    return {rewards::direction_reward(theta_diff), rewards::distance_reward(moved, sg.distance)};
}

double min_scan(const std::vector<double>& scan) {
    double m = scan.empty() ? std::numeric_limits<double>::infinity() : scan[0];
    for (double r : scan) m = std::min(m, r);
    return m;
}

}  // namespace

EpisodeRecord run_episode(sim::Environment& env, HighPolicy& high, LowPolicy& low,
                          const HierarchyConfig& cfg, const rewards::HighRewardWeights& hw,
                          const rewards::LowRewardWeights& lw, uint64_t episode_seed,
                          Rng& policy_rng, const EpisodeSinks* sinks, bool record_trajectory) {
    cfg.validate();
    sim::Observation obs = env.reset(episode_seed);

    EpisodeRecord rec;
    rec.start = env.pose().position();
    rec.goal = env.goal();
    if (record_trajectory) {
        rec.trajectory.push_back(
            {0, env.pose().x, env.pose().y, env.pose().heading, 0.0, 0.0, 0.0, -1});
    }

    std::optional<double> prev_bearing;
    int subgoal_id = 0;

    while (env.state() == sim::Outcome::Running) {
        // Decide: one subgoal per iteration of this outer loop.
        const std::vector<double> issue_obs = obs.flatten();
        const int action_index = high.select(issue_obs, policy_rng);
        const Subgoal sg =
            subgoal_decode(action_index, env.pose(), cfg, env.world().bounds, env.world().robot_radius);

        int steps_since_issue = 0;
        sim::Outcome outcome = sim::Outcome::Running;
        while (true) {
            const std::vector<double> low_obs = subgoal_view(obs, env.pose(), sg).flatten();
            const sim::Action a = low.select(low_obs, policy_rng);
            auto [next_obs, step_out] = env.step(a);
            outcome = step_out.kind;
            steps_since_issue += 1;

            auto [r_dir, r_dist] = low_shaping(sg.issued_from, env.pose().position(), sg);
            const double r_env =
                rewards::env_reward(outcome, a.linear, a.angular, min_scan(next_obs.scan));
            const double r_low = rewards::low_level_reward(
                r_env, r_dir, r_dist, outcome == sim::Outcome::Collision, lw);
            rec.reward_low += r_low;

            if (sinks && sinks->low) {
                replay::Transition<std::array<double, 2>> t;
                t.obs = low_obs;
                t.action = {a.linear, a.angular};
                t.reward = r_low;
                t.next_obs = subgoal_view(next_obs, env.pose(), sg).flatten();
                t.done = is_terminal(outcome);
                t.span = 1;
                sinks->low(t);
            }
            if (record_trajectory) {
                rec.trajectory.push_back({env.steps(), env.pose().x, env.pose().y,
                                          env.pose().heading, a.linear, a.angular, r_low,
                                          subgoal_id});
            }
            if (sinks && sinks->on_env_step) sinks->on_env_step();

            obs = std::move(next_obs);
            if (outcome != sim::Outcome::Running ||
                subgoal_status(env.pose(), sg, steps_since_issue, cfg) != SubgoalStatus::Active) {
                break;
            }
        }

        const rewards::HighRewardInputs inputs =
            high_level_inputs(sg.issued_from, env.pose().position(), sg, prev_bearing, obs.scan,
                              env.config().fov, outcome == sim::Outcome::Collision);
        const double r_high = rewards::high_level_reward(inputs, hw);
        rec.reward_high += r_high;
        rec.subgoals.push_back({subgoal_id, sg.index, sg.bearing_abs_deg, sg.distance, r_high,
                                steps_since_issue, env.steps() - steps_since_issue});

        if (sinks && sinks->high) {
            replay::Transition<int> t;
            t.obs = issue_obs;
            t.action = sg.index;
            t.reward = r_high;
            t.next_obs = obs.flatten();
            t.done = is_terminal(outcome);
            t.span = steps_since_issue;
            sinks->high(t);
        }

        prev_bearing = sg.bearing_abs_deg;
        subgoal_id += 1;
    }

    rec.outcome = env.state();
    rec.steps = env.steps();
    return rec;
}

EpisodeRecord run_flat_episode(sim::Environment& env, LowPolicy& low,
                               const rewards::LowRewardWeights& lw, uint64_t episode_seed,
                               Rng& policy_rng, const EpisodeSinks* sinks,
                               bool record_trajectory) {
    sim::Observation obs = env.reset(episode_seed);

    EpisodeRecord rec;
    rec.start = env.pose().position();
    rec.goal = env.goal();
    if (record_trajectory) {
        rec.trajectory.push_back(
            {0, env.pose().x, env.pose().y, env.pose().heading, 0.0, 0.0, 0.0, -1});
    }

    while (env.state() == sim::Outcome::Running) {
        const std::vector<double> flat_obs = obs.flatten();
        const geom::Vec2 before = env.pose().position();
        const double goal_dir_deg =
            geom::rad_to_deg(std::atan2(rec.goal.y - before.y, rec.goal.x - before.x));

        const sim::Action a = low.select(flat_obs, policy_rng);
        auto [next_obs, step_out] = env.step(a);

        const geom::Vec2 disp = env.pose().position() - before;
        double r_dir = 0.0;
        if (disp.norm() >= 1e-12) {
            const double moved_deg = geom::rad_to_deg(std::atan2(disp.y, disp.x));
            r_dir = rewards::direction_reward(geom::wrap_deg(moved_deg - goal_dir_deg));
        }
        const double r_env = rewards::env_reward(step_out.kind, a.linear, a.angular,
                                                 min_scan(next_obs.scan));
        const double r_low = rewards::low_level_reward(
            r_env, r_dir, 0.0, step_out.kind == sim::Outcome::Collision, lw);
        rec.reward_low += r_low;

        if (sinks && sinks->low) {
            replay::Transition<std::array<double, 2>> t;
            t.obs = flat_obs;
            t.action = {a.linear, a.angular};
            t.reward = r_low;
            t.next_obs = next_obs.flatten();
            t.done = is_terminal(step_out.kind);
            t.span = 1;
            sinks->low(t);
        }
        if (record_trajectory) {
            rec.trajectory.push_back({env.steps(), env.pose().x, env.pose().y, env.pose().heading,
                                      a.linear, a.angular, r_low, -1});
        }
        if (sinks && sinks->on_env_step) sinks->on_env_step();
        obs = std::move(next_obs);
    }

    rec.outcome = env.state();
    rec.steps = env.steps();
    return rec;
}

}  // namespace hrlnav::hier
