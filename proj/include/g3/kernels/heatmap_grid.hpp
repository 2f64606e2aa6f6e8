#pragma once

#include <functional>
#include <vector>

namespace g3::kernels {

/// Evaluates `cell(i, j)` for every cell of a width x height grid, row-major
/// with i the column.
using CellFn = std::function<double(int i, int j)>;

std::vector<double> heatmap_grid_serial(int width, int height, const CellFn& cell);
/// Same values as the serial version, rows split across threads. `cell` must
/// be safe to call concurrently.
std::vector<double> heatmap_grid_parallel(int width, int height, const CellFn& cell);

}  // namespace g3::kernels
