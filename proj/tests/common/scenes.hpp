#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "g3/geometry.hpp"
#include "helpers.hpp"

namespace g3::test {

inline Grounding moving(std::vector<Vec2> pts, double z = 0.0) {
  std::vector<Pose> poses;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Pose p;
    p.tau = double(i);
    p.x = pts[i].x;
    p.y = pts[i].y;
    p.z = z;
    poses.push_back(p);
  }
  return path_grounding("fig", Trajectory(poses));
}

struct Scene {
  Grounding figure, landmark;
  BBox bbox;
};

inline Scene random_scene(std::mt19937_64& rng) {
  Scene s;
  s.bbox = {{-20, -20}, {20, 20}};
  const Vec2 c{uniform(rng, -5, 5), uniform(rng, -5, 5)};
  s.landmark = make_static_grounding("lm", random_polygon(rng, c, uniform(rng, 1, 4), 3 + int(rng() % 6)),
                                     uniform(rng, 0.5, 2.0), {"lm"});
  std::vector<Vec2> pts;
  const int n = 2 + int(rng() % 5);
  for (int i = 0; i < n; ++i) pts.push_back({uniform(rng, -10, 10), uniform(rng, -10, 10)});
  s.figure = moving(pts, rng() % 3 == 0 ? s.landmark.top_z() : uniform(rng, 0, 3));
  if (rng() % 4 == 0) {
    // Static box near or on the landmark.
    s.figure = make_static_grounding("fig", rect(c + Vec2{uniform(rng, -2, 2), uniform(rng, -2, 2)}, 1, 1), 0.5,
                                     {"box"}, rng() % 2 ? s.landmark.top_z() : 0.0);
  }
  return s;
}

// Rotation by theta about the origin, then translation, then uniform scale.
struct Motion {
  double theta = 0.0, scale = 1.0;
  Vec2 shift;
  Vec2 apply(Vec2 p) const {
    const double c = std::cos(theta), s = std::sin(theta);
    return Vec2{c * p.x - s * p.y + shift.x, s * p.x + c * p.y + shift.y} * scale;
  }
};

inline Grounding transform(const Grounding& g, const Motion& m) {
  Grounding out = g;
  for (Vec2& v : out.shape.polygon) v = m.apply(v);
  out.shape.height *= m.scale;
  std::vector<Pose> poses;
  for (Pose p : g.path.poses()) {
    const Vec2 q = m.apply(p.xy());
    p.x = q.x;
    p.y = q.y;
    p.z *= m.scale;
    p.yaw += m.theta;
    poses.push_back(p);
  }
  out.path = Trajectory(poses);
  return out;
}

inline BBox transform(const BBox& b, const Motion& m) {
  // A rotated box is no longer axis aligned; only its diagonal matters to the features.
  const Vec2 c = m.apply((b.min + b.max) * 0.5);
  const double half = b.diagonal() * m.scale / (2.0 * std::sqrt(2.0));
  return {c - Vec2{half, half}, c + Vec2{half, half}};
}

}  // namespace g3::test
