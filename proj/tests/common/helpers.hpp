#pragma once

#include <cmath>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "g3/world.hpp"

namespace g3::test {

struct NodeSpec {
  std::string id;
  double x = 0.0, y = 0.0;
  std::set<std::string> tags;
  int level = 0;
};

// Undirected horizontal edges get their direction from the node positions.
inline TopoMap make_map(const std::vector<NodeSpec>& specs,
                        const std::vector<std::pair<std::string, std::string>>& links) {
  std::vector<TopoNode> nodes;
  for (const NodeSpec& s : specs) {
    TopoNode n;
    n.id = s.id;
    n.pos = {s.x, s.y};
    n.level = s.level;
    n.visible_tags = s.tags;
    nodes.push_back(n);
  }
  auto pos = [&](const std::string& id) {
    for (const NodeSpec& s : specs)
      if (s.id == id) return s;
    return NodeSpec{};
  };
  auto dir_of = [](const NodeSpec& a, const NodeSpec& b) {
    if (b.level > a.level) return Dir::Up;
    if (b.level < a.level) return Dir::Down;
    const double dx = b.x - a.x, dy = b.y - a.y;
    if (std::abs(dx) >= std::abs(dy)) return dx > 0 ? Dir::East : Dir::West;
    return dy > 0 ? Dir::North : Dir::South;
  };
  std::vector<TopoEdge> edges;
  for (const auto& [a, b] : links) {
    edges.push_back({a, dir_of(pos(a), pos(b)), b});
    edges.push_back({b, dir_of(pos(b), pos(a)), a});
  }
  return TopoMap(std::move(nodes), std::move(edges));
}

inline std::vector<Vec2> rect(Vec2 c, double w, double h) {
  return {{c.x - w / 2, c.y - h / 2}, {c.x + w / 2, c.y - h / 2}, {c.x + w / 2, c.y + h / 2},
          {c.x - w / 2, c.y + h / 2}};
}

inline std::vector<Vec2> square(double lo, double hi) {
  return {{lo, lo}, {hi, lo}, {hi, hi}, {lo, hi}};
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Random star-shaped polygon around a center.
inline std::vector<Vec2> random_polygon(std::mt19937_64& rng, Vec2 c, double r, int n) {
  std::vector<Vec2> out;
  const double phase = uniform(rng, 0.0, 6.28);
  for (int k = 0; k < n; ++k) {
    const double a = phase + 2.0 * 3.141592653589793 * k / n;
    const double rr = r * uniform(rng, 0.5, 1.0);
    out.push_back({c.x + rr * std::cos(a), c.y + rr * std::sin(a)});
  }
  return out;
}

}  // namespace g3::test
