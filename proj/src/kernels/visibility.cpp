#include "g3/kernels/visibility.hpp"

namespace g3::kernels {

namespace {

std::vector<int> visible_from(const OccupancyGrid& grid, Cell observer,
                              const std::vector<std::vector<Cell>>& object_cells) {
  std::vector<int> out;
  for (std::size_t o = 0; o < object_cells.size(); ++o)
    if (sees(grid, observer, static_cast<int>(o), object_cells[o])) out.push_back(static_cast<int>(o));
  return out;
}

}  // namespace

std::vector<std::vector<int>> visibility_serial(const OccupancyGrid& grid,
                                                const std::vector<Cell>& observers,
                                                const std::vector<std::vector<Cell>>& object_cells) {
  std::vector<std::vector<int>> out(observers.size());
  for (std::size_t n = 0; n < observers.size(); ++n)
    out[n] = visible_from(grid, observers[n], object_cells);
  return out;
}

std::vector<std::vector<int>> visibility_parallel(const OccupancyGrid& grid,
                                                  const std::vector<Cell>& observers,
                                                  const std::vector<std::vector<Cell>>& object_cells) {
  std::vector<std::vector<int>> out(observers.size());
  const long long n = static_cast<long long>(observers.size());
#pragma omp parallel for schedule(dynamic)
  for (long long k = 0; k < n; ++k) out[k] = visible_from(grid, observers[k], object_cells);
  return out;
}

}  // namespace g3::kernels
