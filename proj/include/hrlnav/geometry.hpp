#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

namespace hrlnav::geom {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double norm() const { return std::hypot(x, y); }
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

/// Wrap an angle in radians into (-pi, pi].
inline double wrap_angle(double a) {
    double w = std::fmod(a + kPi, 2.0 * kPi);
    if (w <= 0.0) w += 2.0 * kPi;
    return w - kPi;
}

/// Wrap an angle in degrees into (-180, 180].
inline double wrap_deg(double a) {
    double w = std::fmod(a + 180.0, 360.0);
    if (w <= 0.0) w += 360.0;
    return w - 180.0;
}

struct Circle {
    Vec2 center;
    double radius = 0.0;
};

struct Rect {
    Vec2 lo;
    Vec2 hi;

    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    bool contains(const Vec2& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
};

/// Signed distance from a point to a circle surface: negative inside.
inline double circle_surface_distance(const Vec2& p, const Circle& c) {
    return distance(p, c.center) - c.radius;
}

/// Distance from a point to a rectangle: 0 on or inside, Euclidean outside.
inline double rect_surface_distance(const Vec2& p, const Rect& r) {
    double dx = std::max({r.lo.x - p.x, 0.0, p.x - r.hi.x});
    double dy = std::max({r.lo.y - p.y, 0.0, p.y - r.hi.y});
    return std::hypot(dx, dy);
}

/// Distance from an interior point to the nearest wall of a bounding
/// rectangle. Negative when the point lies outside.
inline double bounds_interior_distance(const Vec2& p, const Rect& b) {
    return std::min(std::min(p.x - b.lo.x, b.hi.x - p.x),
                    std::min(p.y - b.lo.y, b.hi.y - p.y));
}

/// Smallest t >= 0 with |o + t*dir - c.center| == c.radius, if any.
/// dir must be a unit vector.
inline std::optional<double> ray_circle(const Vec2& o, const Vec2& dir, const Circle& c) {
    Vec2 oc = o - c.center;
    double b = dot(dir, oc);
    double c0 = dot(oc, oc) - c.radius * c.radius;
    double disc = b * b - c0;
    if (disc < 0.0) return std::nullopt;
    double s = std::sqrt(disc);
    double t = -b - s;
    if (t < 0.0) t = -b + s;  // origin inside the circle
    if (t < 0.0) return std::nullopt;
    return t;
}

namespace detail {
// Slab intersection: returns (t_enter, t_exit) or nothing.
inline std::optional<std::pair<double, double>> ray_rect_span(const Vec2& o, const Vec2& dir,
                                                              const Rect& r) {
    double tmin = -std::numeric_limits<double>::infinity();
    double tmax = std::numeric_limits<double>::infinity();
    const double olo[2] = {r.lo.x - o.x, r.lo.y - o.y};
    const double ohi[2] = {r.hi.x - o.x, r.hi.y - o.y};
    const double d[2] = {dir.x, dir.y};
    for (int axis = 0; axis < 2; ++axis) {
        if (std::abs(d[axis]) < 1e-15) {
            if (olo[axis] > 0.0 || ohi[axis] < 0.0) return std::nullopt;
            continue;
        }
        double t1 = olo[axis] / d[axis];
        double t2 = ohi[axis] / d[axis];
        if (t1 > t2) std::swap(t1, t2);
        tmin = std::max(tmin, t1);
        tmax = std::min(tmax, t2);
    }
    if (tmax < tmin) return std::nullopt;
    return std::make_pair(tmin, tmax);
}
}  // namespace detail

/// Entry distance of a ray into a rectangle (t >= 0), if it hits at all.
/// An origin already inside reports t = 0.
inline std::optional<double> ray_rect_enter(const Vec2& o, const Vec2& dir, const Rect& r) {
    auto span = detail::ray_rect_span(o, dir, r);
    if (!span || span->second < 0.0) return std::nullopt;
    return std::max(span->first, 0.0);
}

/// Exit distance of a ray out of a rectangle (t >= 0), used for the arena
/// boundary seen from inside.
inline std::optional<double> ray_rect_exit(const Vec2& o, const Vec2& dir, const Rect& r) {
    auto span = detail::ray_rect_span(o, dir, r);
    if (!span || span->second < 0.0) return std::nullopt;
    return span->second;
}

}  // namespace hrlnav::geom
