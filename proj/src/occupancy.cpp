#include "g3/occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "g3/error.hpp"
#include "g3/kernels/visibility.hpp"

namespace g3 {

OccupancyGrid::OccupancyGrid(Vec2 origin, double resolution, int width, int height)
    : origin_(origin), resolution_(resolution), width_(width), height_(height) {
  if (!(resolution > 0.0) || width <= 0 || height <= 0)
    throw InvalidInput("occupancy grid needs positive resolution and size");
  owner_.assign(static_cast<std::size_t>(width) * height, kFree);
}

Vec2 OccupancyGrid::center(Cell c) const {
  return {origin_.x + (c.i + 0.5) * resolution_, origin_.y + (c.j + 0.5) * resolution_};
}

Cell OccupancyGrid::cell_of(Vec2 p) const {
  const int i = static_cast<int>(std::floor((p.x - origin_.x) / resolution_));
  const int j = static_cast<int>(std::floor((p.y - origin_.y) / resolution_));
  return {std::clamp(i, 0, width_ - 1), std::clamp(j, 0, height_ - 1)};
}

std::vector<std::vector<Cell>> OccupancyGrid::cells_by_owner(int num_objects) const {
  std::vector<std::vector<Cell>> out(static_cast<std::size_t>(num_objects));
  for (int j = 0; j < height_; ++j)
    for (int i = 0; i < width_; ++i) {
      const int o = owner({i, j});
      if (o >= 0 && o < num_objects) out[o].push_back({i, j});
    }
  return out;
}

OccupancyGrid rasterize(const EnvironmentModel& env, double resolution) {
  const Vec2 size = env.bbox.max - env.bbox.min;
  const int w = std::max(1, static_cast<int>(std::ceil(size.x / resolution - 1e-9)));
  const int h = std::max(1, static_cast<int>(std::ceil(size.y / resolution - 1e-9)));
  OccupancyGrid grid(env.bbox.min, resolution, w, h);
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) {
      const Vec2 c = grid.center({i, j});
      for (std::size_t o = 0; o < env.objects.size(); ++o)
        if (poly::contains(env.objects[o].footprint(), c)) {
          grid.set_owner({i, j}, static_cast<int>(o));
          break;
        }
    }
  return grid;
}

// Integer walk in doubled coordinates: cell (i, j) spans [2i, 2i+2] x [2j, 2j+2]
// and centers sit at odd coordinates, so every comparison is exact.
std::vector<Cell> supercover(Cell from, Cell to) {
  std::vector<Cell> out{from};
  const long long x0 = 2LL * from.i + 1, y0 = 2LL * from.j + 1;
  const long long dx = 2LL * (to.i - from.i), dy = 2LL * (to.j - from.j);
  const int sx = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int sy = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  const long long adx = std::llabs(dx), ady = std::llabs(dy);
  Cell c = from;
  while (c != to) {
    // Distance along each axis from the start to the next grid line.
    const long long gx = sx > 0 ? 2LL * c.i + 2 : 2LL * c.i;
    const long long gy = sy > 0 ? 2LL * c.j + 2 : 2LL * c.j;
    const long long ax = std::llabs(gx - x0), ay = std::llabs(gy - y0);
    // Crossing parameters ax/adx and ay/ady compared by cross multiplication.
    const long long lhs = sx ? ax * ady : 0, rhs = sy ? ay * adx : 0;
    if (sy == 0 || (sx != 0 && lhs < rhs)) {
      c.i += sx;
    } else if (sx == 0 || rhs < lhs) {
      c.j += sy;
    } else {
      out.push_back({c.i + sx, c.j});
      out.push_back({c.i, c.j + sy});
      c.i += sx;
      c.j += sy;
    }
    out.push_back(c);
  }
  return out;
}

bool sees(const OccupancyGrid& grid, Cell from, int target, const std::vector<Cell>& target_cells) {
  for (const Cell& t : target_cells) {
    const std::vector<Cell> ray = supercover(from, t);
    bool clear = true;
    for (std::size_t k = 1; k < ray.size() && clear; ++k) {
      const int o = grid.owner(ray[k]);
      clear = o == OccupancyGrid::kFree || o == target;
    }
    if (clear) return true;
  }
  return false;
}

std::vector<std::set<std::string>> compute_visible_tags(const TopoMap& map,
                                                        const EnvironmentModel& env,
                                                        const OccupancyGrid& grid) {
  std::vector<Cell> observers;
  for (const TopoNode& n : map.nodes()) observers.push_back(grid.cell_of(n.pos));
  const auto cells = grid.cells_by_owner(static_cast<int>(env.objects.size()));
  const auto visible = kernels::visibility_parallel(grid, observers, cells);
  std::vector<std::set<std::string>> out(map.size());
  for (std::size_t n = 0; n < map.size(); ++n)
    for (int o : visible[n]) out[n].insert(env.objects[o].tags.begin(), env.objects[o].tags.end());
  return out;
}

TopoMap with_visibility(const TopoMap& map, const EnvironmentModel& env, double resolution) {
  return map.with_visible_tags(compute_visible_tags(map, env, rasterize(env, resolution)));
}

}  // namespace g3
