#pragma once

#include <string>
#include <variant>
#include <vector>

#include "hrlnav/geometry.hpp"
#include "hrlnav/rng.hpp"

namespace hrlnav::sim {

using geom::Vec2;

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;  // radians, kept in (-pi, pi]

    Vec2 position() const { return {x, y}; }
};

using Obstacle = std::variant<geom::Circle, geom::Rect>;

/// Static 2D arena: axis-aligned bounds, circular and rectangular obstacles,
/// a start pose and a goal position.
struct World {
    static constexpr int kFormatVersion = 1;

    geom::Rect bounds;
    std::vector<Obstacle> obstacles;
    Pose start_pose;
    Vec2 goal;
    double goal_radius = 0.3;
    double robot_radius = 0.2;

    /// Throws ConfigError if any invariant is broken (degenerate bounds,
    /// start or goal inside an obstacle inflated by robot_radius, ...).
    void validate() const;
};

/// Parse a world-description document. Unknown keys are rejected.
World load_world(const std::string& text);

/// Read and parse a world file from disk.
World load_world_file(const std::string& path);

/// Serialize a world back to its document form.
std::string world_to_text(const World& w);

/// Distance from a point to an obstacle surface. Negative inside a circle,
/// zero inside a rectangle.
double obstacle_surface_distance(const Vec2& p, const Obstacle& obs);

/// Euclidean clearance from the robot center to the nearest obstacle or
/// boundary wall, clamped at zero. With subtract_robot_radius the robot
/// radius is removed from the clearance first.
double min_obstacle_distance(const Pose& pose, const World& world,
                             bool subtract_robot_radius = false);

/// True if a point keeps at least `inflation` clearance from every obstacle
/// and boundary wall.
bool in_free_space(const Vec2& p, const World& world, double inflation);

/// Rejection-sample a point from the free space (inflated by robot_radius).
Vec2 sample_free_point(const World& world, Rng& rng, double extra_clearance = 0.0);

}  // namespace hrlnav::sim
