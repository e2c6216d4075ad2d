#include "hrlnav/sim.hpp"

#include <stdexcept>

#include "hrlnav/errors.hpp"

namespace hrlnav::sim {

std::vector<double> Observation::flatten() const {
    std::vector<double> out;
    out.reserve(flat_size());
    out.insert(out.end(), scan.begin(), scan.end());
    out.push_back(goal_distance);
    out.push_back(goal_bearing);
    out.push_back(last_action[0]);
    out.push_back(last_action[1]);
    return out;
}

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Running: return "running";
        case Outcome::GoalReached: return "goal";
        case Outcome::Collision: return "collision";
        case Outcome::Timeout: return "timeout";
    }
    return "?";
}

std::vector<double> raycast_scan(const Pose& pose, const World& world, int n_beams, double fov,
                                 double max_range) {
    if (n_beams < 1) throw std::invalid_argument("raycast_scan: n_beams must be >= 1");
    if (!(fov > 0.0) || fov > 2.0 * geom::kPi + 1e-12) {
        throw std::invalid_argument("raycast_scan: fov must be in (0, 2*pi]");
    }
    std::vector<double> ranges(static_cast<size_t>(n_beams));
    const Vec2 origin = pose.position();
    for (int i = 0; i < n_beams; ++i) {
        const double bearing =
            n_beams == 1 ? pose.heading
                         : pose.heading - fov / 2.0 + static_cast<double>(i) * fov / (n_beams - 1);
        const Vec2 dir{std::cos(bearing), std::sin(bearing)};
        double t = max_range;
        if (auto hit = geom::ray_rect_exit(origin, dir, world.bounds)) t = std::min(t, *hit);
        for (const auto& obs : world.obstacles) {
            if (const auto* c = std::get_if<geom::Circle>(&obs)) {
                if (auto hit = geom::ray_circle(origin, dir, *c)) t = std::min(t, *hit);
            } else {
                if (auto hit = geom::ray_rect_enter(origin, dir, std::get<geom::Rect>(obs))) {
                    t = std::min(t, *hit);
                }
            }
        }
        ranges[static_cast<size_t>(i)] = std::max(t, 1e-9);
    }
    return ranges;
}

Environment::Environment(World world, SimConfig cfg)
    : world_(std::move(world)), cfg_(std::move(cfg)) {
    world_.validate();
    if (cfg_.n_beams < 1) throw ConfigError("sim: n_beams must be >= 1");
    if (!(cfg_.dt > 0.0)) throw ConfigError("sim: dt must be > 0");
    if (cfg_.max_steps < 1) throw ConfigError("sim: max_steps must be >= 1");
    if (!(cfg_.max_range > 0.0)) throw ConfigError("sim: max_range must be > 0");
    pose_ = world_.start_pose;
    goal_ = world_.goal;
    state_ = Outcome::Running;
}

Observation Environment::reset(uint64_t seed) {
    Rng rng(seed);
    pose_ = world_.start_pose;
    goal_ = world_.goal;

    if (cfg_.randomize_start) {
        Vec2 p = sample_free_point(world_, rng);
        pose_ = {p.x, p.y, geom::wrap_angle(rng.uniform(-geom::kPi, geom::kPi))};
    } else if (cfg_.start_jitter > 0.0) {
        for (int attempt = 0; attempt < 100; ++attempt) {
            Vec2 p{world_.start_pose.x + rng.uniform(-cfg_.start_jitter, cfg_.start_jitter),
                   world_.start_pose.y + rng.uniform(-cfg_.start_jitter, cfg_.start_jitter)};
            if (in_free_space(p, world_, world_.robot_radius)) {
                pose_.x = p.x;
                pose_.y = p.y;
                break;
            }
        }
    }
    if (cfg_.randomize_goal) {
        for (int attempt = 0; attempt < 10000; ++attempt) {
            Vec2 g = sample_free_point(world_, rng, world_.goal_radius);
            if (geom::distance(g, pose_.position()) >= cfg_.min_goal_separation) {
                goal_ = g;
                break;
            }
        }
    }

    state_ = Outcome::Running;
    steps_ = 0;
    last_action_ = {0.0, 0.0};
    return observe();
}

Observation Environment::observe() const {
    Observation obs;
    obs.scan = raycast_scan(pose_, world_, cfg_.n_beams, cfg_.fov, cfg_.max_range);
    for (double& r : obs.scan) r = std::min(r, cfg_.max_range);
    const Vec2 to_goal = goal_ - pose_.position();
    obs.goal_distance = to_goal.norm();
    obs.goal_bearing = geom::wrap_angle(std::atan2(to_goal.y, to_goal.x) - pose_.heading);
    obs.last_action = last_action_;
    return obs;
}

bool Environment::collided() const {
    const Vec2 p = pose_.position();
    if (geom::bounds_interior_distance(p, world_.bounds) < world_.robot_radius) return true;
    for (const auto& obs : world_.obstacles) {
        if (obstacle_surface_distance(p, obs) < world_.robot_radius) return true;
    }
    return false;
}

std::pair<Observation, StepOutcome> Environment::step(const Action& action) {
    return step(action, cfg_.dt);
}

std::pair<Observation, StepOutcome> Environment::step(const Action& action, double dt) {
    if (state_ != Outcome::Running) {
        throw std::logic_error("Environment::step called on a finished episode");
    }
    const Action a = action.clamped();
    pose_.x += a.linear * std::cos(pose_.heading) * dt;
    pose_.y += a.linear * std::sin(pose_.heading) * dt;
    pose_.heading = geom::wrap_angle(pose_.heading + a.angular * dt);
    last_action_ = {a.linear, a.angular};
    ++steps_;

    if (geom::distance(pose_.position(), goal_) <= world_.goal_radius) {
        state_ = Outcome::GoalReached;
    } else if (collided()) {
        state_ = Outcome::Collision;
    } else if (steps_ >= cfg_.max_steps) {
        state_ = Outcome::Timeout;
    }
    return {observe(), StepOutcome{state_, steps_}};
}

}  // namespace hrlnav::sim
