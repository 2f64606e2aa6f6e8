// Serial reference vs OpenMP version of each parallel kernel.

#include <benchmark/benchmark.h>

#include <random>

#include "g3/kernels/gradient.hpp"
#include "g3/kernels/heatmap_grid.hpp"
#include "g3/kernels/visibility.hpp"
#include "g3/occupancy.hpp"

using namespace g3;

namespace {

kernels::SparseDesign design(int examples, int features) {
  std::mt19937_64 rng(1);
  kernels::SparseDesign d;
  d.num_features = features;
  for (int e = 0; e < examples; ++e) {
    std::vector<int> row;
    for (int f = 0; f < features; ++f)
      if (rng() % 20 == 0) row.push_back(f);
    d.rows.push_back(std::move(row));
    d.labels.push_back(double(rng() % 2));
  }
  d.build_columns();
  return d;
}

template <auto Fn>
void BM_gradient(benchmark::State& state) {
  const auto d = design(int(state.range(0)), 400);
  std::vector<double> theta(d.num_features, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(d, theta.data(), 0.01));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

struct Scene {
  OccupancyGrid grid{{0, 0}, 0.5, 1, 1};
  std::vector<Cell> observers;
  std::vector<std::vector<Cell>> cells;
};

Scene scene(int side) {
  std::mt19937_64 rng(2);
  Scene s{OccupancyGrid({0, 0}, 0.5, side, side), {}, {}};
  const int objects = 12;
  for (int k = 0; k < objects; ++k) {
    const int i0 = int(rng() % (side - 4)), j0 = int(rng() % (side - 4));
    for (int i = i0; i < i0 + 3; ++i)
      for (int j = j0; j < j0 + 3; ++j)
        if (s.grid.owner({i, j}) == OccupancyGrid::kFree) s.grid.set_owner({i, j}, k);
  }
  s.cells = s.grid.cells_by_owner(objects);
  for (int k = 0; k < 64; ++k) s.observers.push_back({int(rng() % side), int(rng() % side)});
  return s;
}

template <auto Fn>
void BM_visibility(benchmark::State& state) {
  const Scene s = scene(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(s.grid, s.observers, s.cells));
}

double cell_value(int i, int j) {
  double acc = 0.0;
  for (int k = 1; k < 200; ++k) acc += std::sin(i * 0.01 * k) * std::cos(j * 0.02 * k) / k;
  return acc;
}

template <auto Fn>
void BM_heatmap(benchmark::State& state) {
  const int n = int(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(n, n, cell_value));
}

}  // namespace

BENCHMARK(BM_gradient<kernels::objective_serial>)->Name("gradient/serial")->Arg(2000)->Arg(20000);
BENCHMARK(BM_gradient<kernels::objective_parallel>)->Name("gradient/parallel")->Arg(2000)->Arg(20000);
BENCHMARK(BM_visibility<kernels::visibility_serial>)->Name("visibility/serial")->Arg(40)->Arg(80);
BENCHMARK(BM_visibility<kernels::visibility_parallel>)->Name("visibility/parallel")->Arg(40)->Arg(80);
BENCHMARK(BM_heatmap<kernels::heatmap_grid_serial>)->Name("heatmap/serial")->Arg(40)->Arg(80);
BENCHMARK(BM_heatmap<kernels::heatmap_grid_parallel>)->Name("heatmap/parallel")->Arg(40)->Arg(80);

BENCHMARK_MAIN();
