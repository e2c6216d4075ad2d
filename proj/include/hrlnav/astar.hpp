#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hrlnav/world.hpp"

namespace hrlnav::bench {

/// Occupancy grid over the world bounds. Cell (ix, iy) covers the square
/// [lo.x + ix*res, lo.x + (ix+1)*res] x [lo.y + iy*res, ...]. A cell is
/// blocked when it comes within robot_radius of an obstacle or is not fully
/// inside the bounds inset by robot_radius (conservative: touching counts
/// as blocked).
struct Grid {
    int nx = 0;
    int ny = 0;
    double resolution = 0.1;
    geom::Vec2 origin;  // world position of the (0,0) cell's lower-left corner
    std::vector<std::uint8_t> blocked;

    bool in_range(int ix, int iy) const { return ix >= 0 && ix < nx && iy >= 0 && iy < ny; }
    bool is_blocked(int ix, int iy) const { return blocked[size_t(iy) * nx + ix] != 0; }

    /// Cell containing a world point; points on a cell edge belong to the
    /// higher-index cell, and the top/right bound maps to the last cell.
    std::pair<int, int> cell_of(const geom::Vec2& p) const;

    /// Center of a cell in world coordinates.
    geom::Vec2 cell_center(int ix, int iy) const;
};

/// Rasterize the free space of a world at the given resolution.
/// Throws std::invalid_argument if resolution <= 0 or the bounds are too
/// small to hold a single cell.
Grid rasterize_world(const sim::World& world, double resolution);

struct PlanResult {
    bool reachable = false;
    double length_m = 0.0;                      // 0 when unreachable
    std::vector<std::pair<int, int>> path;      // start..goal cells, empty when unreachable
};

/// 8-connected A* between the cells containing start and goal. Axial moves
/// cost 1 cell, diagonal moves sqrt(2); diagonals may not cut corners (both
/// adjacent axial cells must be free). Returns reachable=false when start
/// or goal lies in a blocked cell or no path exists.
PlanResult astar_on_grid(const Grid& grid, const geom::Vec2& start, const geom::Vec2& goal);

/// Shortest grid path length from the world's start pose to its goal, in
/// meters, using the default 0.1 m resolution unless overridden.
PlanResult astar_reference(const sim::World& world, double resolution = 0.1);

}  // namespace hrlnav::bench
