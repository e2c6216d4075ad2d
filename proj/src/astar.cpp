#include "hrlnav/astar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace hrlnav::bench {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double rect_rect_distance(const geom::Rect& a, const geom::Rect& b) {
    double dx = std::max({a.lo.x - b.hi.x, b.lo.x - a.hi.x, 0.0});
    double dy = std::max({a.lo.y - b.hi.y, b.lo.y - a.hi.y, 0.0});
    return std::hypot(dx, dy);
}

bool cell_blocked(const geom::Rect& cell, const sim::World& world) {
    double rr = world.robot_radius;
    // Any part of the cell closer to the boundary than robot_radius blocks it.
    if (cell.lo.x - world.bounds.lo.x <= rr || world.bounds.hi.x - cell.hi.x <= rr ||
        cell.lo.y - world.bounds.lo.y <= rr || world.bounds.hi.y - cell.hi.y <= rr)
        return true;
    for (const auto& obs : world.obstacles) {
        if (const auto* c = std::get_if<geom::Circle>(&obs)) {
            if (geom::rect_surface_distance(c->center, cell) <= c->radius + rr) return true;
        } else {
            const auto& r = std::get<geom::Rect>(obs);
            if (rect_rect_distance(cell, r) <= rr) return true;
        }
    }
    return false;
}

struct Node {
    double f;
    double g;
    int idx;
    bool operator>(const Node& o) const {
        if (f != o.f) return f > o.f;
        return idx > o.idx;  // deterministic tie order
    }
};

double octile(int dx, int dy) {
    int adx = std::abs(dx), ady = std::abs(dy);
    int hi = std::max(adx, ady), lo = std::min(adx, ady);
    return hi + (kSqrt2 - 1.0) * lo;
}

}  // namespace

std::pair<int, int> Grid::cell_of(const geom::Vec2& p) const {
    int ix = int(std::floor((p.x - origin.x) / resolution));
    int iy = int(std::floor((p.y - origin.y) / resolution));
    ix = std::clamp(ix, 0, nx - 1);
    iy = std::clamp(iy, 0, ny - 1);
    return {ix, iy};
}

geom::Vec2 Grid::cell_center(int ix, int iy) const {
    return {origin.x + (ix + 0.5) * resolution, origin.y + (iy + 0.5) * resolution};
}

Grid rasterize_world(const sim::World& world, double resolution) {
    if (!(resolution > 0.0)) throw std::invalid_argument("grid resolution must be > 0");
    Grid g;
    g.resolution = resolution;
    g.origin = world.bounds.lo;
    g.nx = int(std::floor(world.bounds.width() / resolution + 1e-9));
    g.ny = int(std::floor(world.bounds.height() / resolution + 1e-9));
    if (g.nx < 1 || g.ny < 1) throw std::invalid_argument("grid resolution larger than the world");
    g.blocked.assign(size_t(g.nx) * g.ny, 0);
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            geom::Rect cell{{g.origin.x + ix * resolution, g.origin.y + iy * resolution},
                            {g.origin.x + (ix + 1) * resolution, g.origin.y + (iy + 1) * resolution}};
            if (cell_blocked(cell, world)) g.blocked[size_t(iy) * g.nx + ix] = 1;
        }
    }
    return g;
}

PlanResult astar_on_grid(const Grid& grid, const geom::Vec2& start, const geom::Vec2& goal) {
    auto [sx, sy] = grid.cell_of(start);
    auto [gx, gy] = grid.cell_of(goal);
    PlanResult result;
    if (grid.is_blocked(sx, sy) || grid.is_blocked(gx, gy)) return result;

    const size_t n_cells = size_t(grid.nx) * grid.ny;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> g_cost(n_cells, inf);
    std::vector<int> parent(n_cells, -1);
    std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;

    auto index = [&](int ix, int iy) { return iy * grid.nx + ix; };
    const int start_idx = index(sx, sy);
    const int goal_idx = index(gx, gy);
    g_cost[start_idx] = 0.0;
    open.push({octile(gx - sx, gy - sy), 0.0, start_idx});

    static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

    while (!open.empty()) {
        Node cur = open.top();
        open.pop();
        if (cur.g > g_cost[cur.idx]) continue;  // stale entry
        if (cur.idx == goal_idx) break;
        int cx = cur.idx % grid.nx;
        int cy = cur.idx / grid.nx;
        for (int k = 0; k < 8; ++k) {
            int nx = cx + kDx[k];
            int ny = cy + kDy[k];
            if (!grid.in_range(nx, ny) || grid.is_blocked(nx, ny)) continue;
            bool diagonal = k >= 4;
            // Diagonal steps must not squeeze between two blocked cells.
            if (diagonal && (grid.is_blocked(nx, cy) || grid.is_blocked(cx, ny))) continue;
            double step = diagonal ? kSqrt2 : 1.0;
            double ng = cur.g + step;
            int nidx = index(nx, ny);
            if (ng < g_cost[nidx]) {
                g_cost[nidx] = ng;
                parent[nidx] = cur.idx;
                open.push({ng + octile(gx - nx, gy - ny), ng, nidx});
            }
        }
    }

    if (g_cost[goal_idx] == inf) return result;
    result.reachable = true;
    result.length_m = g_cost[goal_idx] * grid.resolution;
    for (int idx = goal_idx; idx != -1; idx = parent[idx])
        result.path.push_back({idx % grid.nx, idx / grid.nx});
    std::reverse(result.path.begin(), result.path.end());
    return result;
}

PlanResult astar_reference(const sim::World& world, double resolution) {
    Grid grid = rasterize_world(world, resolution);
    return astar_on_grid(grid, world.start_pose.position(), world.goal);
}

}  // namespace hrlnav::bench
