#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "g3/world.hpp"

namespace g3 {

struct Cell {
  int i = 0;
  int j = 0;
  bool operator==(const Cell&) const = default;
  auto operator<=>(const Cell&) const = default;
};

/// Square-cell grid over the scene bbox. A cell is owned by the first object
/// whose footprint contains the cell center; unowned cells are free.
class OccupancyGrid {
 public:
  static constexpr int kFree = -1;

  OccupancyGrid(Vec2 origin, double resolution, int width, int height);

  Vec2 origin() const { return origin_; }
  double resolution() const { return resolution_; }
  int width() const { return width_; }
  int height() const { return height_; }
  bool in_bounds(Cell c) const { return c.i >= 0 && c.j >= 0 && c.i < width_ && c.j < height_; }

  int owner(Cell c) const { return owner_[index(c)]; }
  void set_owner(Cell c, int object) { owner_[index(c)] = object; }

  Vec2 center(Cell c) const;
  /// Cell containing a point, clamped to the grid.
  Cell cell_of(Vec2 p) const;

  /// Owned cells per object index, row-major order.
  std::vector<std::vector<Cell>> cells_by_owner(int num_objects) const;

 private:
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.j) * width_ + c.i; }

  Vec2 origin_;
  double resolution_;
  int width_;
  int height_;
  std::vector<int> owner_;
};

OccupancyGrid rasterize(const EnvironmentModel& env, double resolution);

/// Cells whose closed square is touched by the segment joining two cell
/// centers, in traversal order. Exact corner crossings add all four cells.
std::vector<Cell> supercover(Cell from, Cell to);

/// True when some cell of the target's cell list can be reached from `from`
/// with every crossed cell (after the first) free or owned by the target.
bool sees(const OccupancyGrid& grid, Cell from, int target, const std::vector<Cell>& target_cells);

/// Tags visible from each node, by ray casting on the grid.
std::vector<std::set<std::string>> compute_visible_tags(const TopoMap& map,
                                                        const EnvironmentModel& env,
                                                        const OccupancyGrid& grid);

/// Copy of the map with visible tags recomputed from the environment.
TopoMap with_visibility(const TopoMap& map, const EnvironmentModel& env, double resolution = 0.5);

}  // namespace g3
