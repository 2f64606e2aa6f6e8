#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "g3/world.hpp"

namespace g3 {

struct Axes {
  Vec2 origin;
  Vec2 major_a, major_b;
  std::size_t major_edge_a = 0, major_edge_b = 0;
  /// Perpendicular through the origin, clipped to the landmark; absent when
  /// the perpendicular line misses the boundary.
  std::optional<std::pair<Vec2, Vec2>> minor;
  std::size_t minor_edge_a = 0, minor_edge_b = 0;

  double major_length() const { return dist(major_a, major_b); }
};

/// Axes that the chord through the first and last figure points imposes on
/// the landmark polygon. None when the line misses or the figure does not move.
std::optional<Axes> impose_axes(const std::vector<Vec2>& figure, const std::vector<Vec2>& landmark);
std::optional<Axes> impose_axes(const Trajectory& figure, const Prism& landmark);

enum class FeatureScale { Distance, SignedDistance, Angle, Ratio, Binary };

struct FeatureInfo {
  std::string name;
  int arity = 2;
  FeatureScale scale = FeatureScale::Distance;
  std::string description;
};

/// All registered figure/landmark base features, in a fixed order.
const std::vector<FeatureInfo>& feature_registry();
const FeatureInfo& feature_info(std::string_view name);

/// Present features only, in registry order.
using BaseFeatureVector = std::vector<std::pair<std::string, double>>;

/// Figure/landmark features; distances are divided by the bbox diagonal.
BaseFeatureVector compute_features(const Grounding& figure, const Grounding& landmark, const BBox& scene);
/// One named feature, or nullopt when its geometry is undefined.
std::optional<double> feature(std::string_view name, const Grounding& figure, const Grounding& landmark,
                              const BBox& scene);

/// Figure rests on the landmark top: overlapping footprints and base within
/// 5% of the landmark height of its top.
bool supports(const Grounding& figure, const Grounding& landmark);
bool contact(const Grounding& figure, const Grounding& landmark);

/// Unit principal direction of a point set, or none when degenerate or isotropic.
std::optional<Vec2> principal_direction(const std::vector<Vec2>& points);
/// Undirected angle between two lines, in [0, pi/2].
double line_angle(Vec2 u, Vec2 v);
/// `n` points evenly spaced by arc length along a polyline.
std::vector<Vec2> resample(const std::vector<Vec2>& line, std::size_t n);

}  // namespace g3
