#pragma once

#include <vector>

#include "g3/occupancy.hpp"

namespace g3::kernels {

/// For each observer cell, the sorted indices of visible objects.
std::vector<std::vector<int>> visibility_serial(const OccupancyGrid& grid,
                                                const std::vector<Cell>& observers,
                                                const std::vector<std::vector<Cell>>& object_cells);

/// Same result as the serial version, observers split across threads.
std::vector<std::vector<int>> visibility_parallel(const OccupancyGrid& grid,
                                                  const std::vector<Cell>& observers,
                                                  const std::vector<std::vector<Cell>>& object_cells);

}  // namespace g3::kernels
