#include "hrlnav/world.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hrlnav/errors.hpp"

namespace hrlnav::sim {

namespace {

using nlohmann::ordered_json;

void require_keys(const ordered_json& obj, const char* where,
                  std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) { known = true; break; }
        }
        if (!known) {
            throw ConfigError(std::string(where) + ": unknown key '" + it.key() + "'");
        }
    }
    for (const char* k : allowed) {
        if (!obj.contains(k)) {
            throw ConfigError(std::string(where) + ": missing key '" + k + "'");
        }
    }
}

double num(const ordered_json& j, const char* where) {
    if (!j.is_number()) throw ConfigError(std::string(where) + ": expected a number");
    return j.get<double>();
}

std::vector<double> num_array(const ordered_json& j, size_t n, const char* where) {
    if (!j.is_array() || j.size() != n) {
        throw ConfigError(std::string(where) + ": expected an array of " + std::to_string(n) +
                          " numbers");
    }
    std::vector<double> out;
    out.reserve(n);
    for (const auto& v : j) out.push_back(num(v, where));
    return out;
}

}  // namespace

void World::validate() const {
    if (!(bounds.hi.x > bounds.lo.x) || !(bounds.hi.y > bounds.lo.y)) {
        throw ConfigError("world: bounds must have positive extent");
    }
    if (!(robot_radius > 0.0)) throw ConfigError("world: robot_radius must be > 0");
    if (!(goal_radius > 0.0)) throw ConfigError("world: goal_radius must be > 0");
    for (size_t i = 0; i < obstacles.size(); ++i) {
        const std::string where = "world: obstacle " + std::to_string(i);
        if (const auto* c = std::get_if<geom::Circle>(&obstacles[i])) {
            if (!(c->radius > 0.0)) throw ConfigError(where + ": radius must be > 0");
        } else {
            const auto& r = std::get<geom::Rect>(obstacles[i]);
            if (!(r.hi.x > r.lo.x) || !(r.hi.y > r.lo.y)) {
                throw ConfigError(where + ": rect must have positive extent");
            }
        }
    }
    auto check_point = [&](const Vec2& p, const char* what) {
        if (geom::bounds_interior_distance(p, bounds) <= robot_radius) {
            throw ConfigError(std::string("world: ") + what +
                              " too close to the boundary (needs > robot_radius clearance)");
        }
        for (size_t i = 0; i < obstacles.size(); ++i) {
            if (obstacle_surface_distance(p, obstacles[i]) <= robot_radius) {
                throw ConfigError(std::string("world: ") + what + " inside obstacle " +
                                  std::to_string(i) + " inflated by robot_radius");
            }
        }
    };
    check_point(start_pose.position(), "start pose");
    check_point(goal, "goal");
}

World load_world(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("world: parse error: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("world: document root must be an object");
    require_keys(doc, "world",
                 {"format_version", "bounds", "robot_radius", "goal_radius", "start", "goal",
                  "obstacles"});
    if (!doc["format_version"].is_number_integer() ||
        doc["format_version"].get<int>() != World::kFormatVersion) {
        throw ConfigError("world: unsupported format_version");
    }

    World w;
    auto b = num_array(doc["bounds"], 4, "world: bounds");
    w.bounds = {{b[0], b[1]}, {b[2], b[3]}};
    w.robot_radius = num(doc["robot_radius"], "world: robot_radius");
    w.goal_radius = num(doc["goal_radius"], "world: goal_radius");
    auto s = num_array(doc["start"], 3, "world: start");
    w.start_pose = {s[0], s[1], geom::wrap_angle(s[2])};
    auto g = num_array(doc["goal"], 2, "world: goal");
    w.goal = {g[0], g[1]};

    if (!doc["obstacles"].is_array()) throw ConfigError("world: obstacles must be an array");
    for (const auto& o : doc["obstacles"]) {
        if (!o.is_object() || !o.contains("type") || !o["type"].is_string()) {
            throw ConfigError("world: obstacle entries need a string 'type'");
        }
        const std::string type = o["type"].get<std::string>();
        if (type == "circle") {
            require_keys(o, "world: circle obstacle", {"type", "center", "radius"});
            auto c = num_array(o["center"], 2, "world: circle center");
            w.obstacles.push_back(geom::Circle{{c[0], c[1]}, num(o["radius"], "world: radius")});
        } else if (type == "rect") {
            require_keys(o, "world: rect obstacle", {"type", "min", "max"});
            auto lo = num_array(o["min"], 2, "world: rect min");
            auto hi = num_array(o["max"], 2, "world: rect max");
            w.obstacles.push_back(geom::Rect{{lo[0], lo[1]}, {hi[0], hi[1]}});
        } else {
            throw ConfigError("world: unknown obstacle type '" + type + "'");
        }
    }
    w.validate();
    return w;
}

World load_world_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open world file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_world(buf.str());
}

std::string world_to_text(const World& w) {
    ordered_json doc;
    doc["format_version"] = World::kFormatVersion;
    doc["bounds"] = {w.bounds.lo.x, w.bounds.lo.y, w.bounds.hi.x, w.bounds.hi.y};
    doc["robot_radius"] = w.robot_radius;
    doc["goal_radius"] = w.goal_radius;
    doc["start"] = {w.start_pose.x, w.start_pose.y, w.start_pose.heading};
    doc["goal"] = {w.goal.x, w.goal.y};
    doc["obstacles"] = ordered_json::array();
    for (const auto& obs : w.obstacles) {
        ordered_json o;
        if (const auto* c = std::get_if<geom::Circle>(&obs)) {
            o["type"] = "circle";
            o["center"] = {c->center.x, c->center.y};
            o["radius"] = c->radius;
        } else {
            const auto& r = std::get<geom::Rect>(obs);
            o["type"] = "rect";
            o["min"] = {r.lo.x, r.lo.y};
            o["max"] = {r.hi.x, r.hi.y};
        }
        doc["obstacles"].push_back(std::move(o));
    }
    return doc.dump(2) + "\n";
}

double obstacle_surface_distance(const Vec2& p, const Obstacle& obs) {
    if (const auto* c = std::get_if<geom::Circle>(&obs)) {
        return geom::circle_surface_distance(p, *c);
    }
    return geom::rect_surface_distance(p, std::get<geom::Rect>(obs));
}

double min_obstacle_distance(const Pose& pose, const World& world, bool subtract_robot_radius) {
    const Vec2 p = pose.position();
    double d = geom::bounds_interior_distance(p, world.bounds);
    for (const auto& obs : world.obstacles) {
        d = std::min(d, obstacle_surface_distance(p, obs));
    }
    if (subtract_robot_radius) d -= world.robot_radius;
    return std::max(d, 0.0);
}

bool in_free_space(const Vec2& p, const World& world, double inflation) {
    if (geom::bounds_interior_distance(p, world.bounds) <= inflation) return false;
    for (const auto& obs : world.obstacles) {
        if (obstacle_surface_distance(p, obs) <= inflation) return false;
    }
    return true;
}

Vec2 sample_free_point(const World& world, Rng& rng, double extra_clearance) {
    const double inflation = world.robot_radius + extra_clearance;
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Vec2 p{rng.uniform(world.bounds.lo.x, world.bounds.hi.x),
               rng.uniform(world.bounds.lo.y, world.bounds.hi.y)};
        if (in_free_space(p, world, inflation)) return p;
    }
    throw NumericError("sample_free_point: free space appears empty");
}

}  // namespace hrlnav::sim
