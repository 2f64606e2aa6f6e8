#pragma once

#include <string>
#include <vector>

#include "g3/loglinear.hpp"
#include "g3/world.hpp"

namespace g3 {

struct HeatmapConfig {
  double resolution = 0.5;
  bool parallel = true;
};

/// Probability grid over the scene; row 0 is the bottom (min y) row.
struct Heatmap {
  Vec2 origin;  // lower-left corner of cell (0, 0)
  double resolution = 0.5;
  int width = 0;
  int height = 0;
  std::vector<double> prob;
  /// Start of every straight path: left edge of the scene, vertically centered.
  Vec2 start;
  std::size_t argmax = 0;

  double at(int i, int j) const { return prob[static_cast<std::size_t>(j) * width + i]; }
  Vec2 cell_center(int i, int j) const;
  Vec2 argmax_point() const { return cell_center(argmax % width, argmax / width); }
};

/// p(phi = 1) for the straight path from `start` to `end` under a path
/// relation with the given words and landmark.
double path_relation_prob(const std::vector<std::string>& words, const Grounding& landmark,
                          const BBox& scene, const FeatureWeights& weights, Vec2 start, Vec2 end);

/// Throws InvalidInput when the landmark footprint leaves the scene bbox.
Heatmap heatmap(const std::vector<std::string>& words, const Grounding& landmark, const EnvironmentModel& env,
                const FeatureWeights& weights, const HeatmapConfig& config = {});

/// Rows top (max y) first, comma separated.
std::string heatmap_csv(const Heatmap& h);
/// Binary PGM, 255 = highest probability in the grid; argmax path drawn white.
std::string heatmap_pgm(const Heatmap& h);

}  // namespace g3
