#include "g3/kernels/heatmap_grid.hpp"

namespace g3::kernels {

std::vector<double> heatmap_grid_serial(int width, int height, const CellFn& cell) {
  std::vector<double> out(static_cast<std::size_t>(width) * height);
  for (int j = 0; j < height; ++j)
    for (int i = 0; i < width; ++i) out[static_cast<std::size_t>(j) * width + i] = cell(i, j);
  return out;
}

std::vector<double> heatmap_grid_parallel(int width, int height, const CellFn& cell) {
  std::vector<double> out(static_cast<std::size_t>(width) * height);
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < height; ++j)
    for (int i = 0; i < width; ++i) out[static_cast<std::size_t>(j) * width + i] = cell(i, j);
  return out;
}

}  // namespace g3::kernels
