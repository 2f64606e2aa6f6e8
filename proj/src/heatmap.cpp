#include "g3/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "g3/error.hpp"
#include "g3/geometry.hpp"
#include "g3/kernels/heatmap_grid.hpp"

namespace g3 {

Vec2 Heatmap::cell_center(int i, int j) const {
  return {origin.x + (i + 0.5) * resolution, origin.y + (j + 0.5) * resolution};
}

double path_relation_prob(const std::vector<std::string>& words, const Grounding& landmark,
                          const BBox& scene, const FeatureWeights& weights, Vec2 start, Vec2 end) {
  Pose a{};
  a.x = start.x;
  a.y = start.y;
  Pose b = a;
  b.tau = 1.0;
  b.x = end.x;
  b.y = end.y;
  b.yaw = std::atan2(end.y - start.y, end.x - start.x);
  a.yaw = b.yaw;
  const Grounding path = path_grounding("path", Trajectory({a, b}));
  BaseFeatureVector base{{"bias", 1.0}};
  for (auto& f : compute_features(path, landmark, scene)) base.push_back(std::move(f));
  return loglinear_prob(weights, cross_features(base, words, weights.bins));
}

Heatmap heatmap(const std::vector<std::string>& words, const Grounding& landmark, const EnvironmentModel& env,
                const FeatureWeights& weights, const HeatmapConfig& config) {
  if (config.resolution <= 0.0) throw InvalidInput("heat map resolution must be positive");
  for (const Vec2& p : landmark.footprint())
    if (!env.bbox.contains(p)) throw InvalidInput("landmark '" + landmark.id + "' lies outside the scene bbox");
  Heatmap h;
  h.origin = env.bbox.min;
  h.resolution = config.resolution;
  h.width = std::max(1, static_cast<int>(std::ceil((env.bbox.max.x - env.bbox.min.x) / config.resolution - 1e-9)));
  h.height = std::max(1, static_cast<int>(std::ceil((env.bbox.max.y - env.bbox.min.y) / config.resolution - 1e-9)));
  h.start = {env.bbox.min.x, 0.5 * (env.bbox.min.y + env.bbox.max.y)};
  const kernels::CellFn cell = [&](int i, int j) {
    return path_relation_prob(words, landmark, env.bbox, weights, h.start, h.cell_center(i, j));
  };
  h.prob = config.parallel ? kernels::heatmap_grid_parallel(h.width, h.height, cell)
                           : kernels::heatmap_grid_serial(h.width, h.height, cell);
  h.argmax = static_cast<std::size_t>(std::max_element(h.prob.begin(), h.prob.end()) - h.prob.begin());
  return h;
}

std::string heatmap_csv(const Heatmap& h) {
  std::string out;
  char buf[32];
  for (int j = h.height - 1; j >= 0; --j) {
    for (int i = 0; i < h.width; ++i) {
      std::snprintf(buf, sizeof buf, "%.6f", h.at(i, j));
      if (i) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string heatmap_pgm(const Heatmap& h) {
  const double hi = h.prob.empty() ? 1.0 : *std::max_element(h.prob.begin(), h.prob.end());
  std::vector<unsigned char> pix(h.prob.size());
  for (std::size_t k = 0; k < h.prob.size(); ++k)
    pix[k] = hi > 0.0 ? static_cast<unsigned char>(std::lround(200.0 * h.prob[k] / hi)) : 0;
  // Straight argmax path, sampled at quarter-cell steps.
  const Vec2 end = h.argmax_point();
  const double len = dist(h.start, end);
  const int steps = std::max(1, static_cast<int>(std::ceil(4.0 * len / h.resolution)));
  for (int s = 0; s <= steps; ++s) {
    const Vec2 p = h.start + (end - h.start) * (static_cast<double>(s) / steps);
    const int i = std::clamp(static_cast<int>(std::floor((p.x - h.origin.x) / h.resolution)), 0, h.width - 1);
    const int j = std::clamp(static_cast<int>(std::floor((p.y - h.origin.y) / h.resolution)), 0, h.height - 1);
    pix[static_cast<std::size_t>(j) * h.width + i] = 255;
  }
  std::string out = "P5\n" + std::to_string(h.width) + " " + std::to_string(h.height) + "\n255\n";
  for (int j = h.height - 1; j >= 0; --j)
    out.append(reinterpret_cast<const char*>(&pix[static_cast<std::size_t>(j) * h.width]), h.width);
  return out;
}

}  // namespace g3
