#include "g3/polygon.hpp"

#include <algorithm>
#include <limits>

namespace g3::poly {

namespace {

std::size_t next(std::size_t i, std::size_t n) { return i + 1 == n ? 0 : i + 1; }

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  if (cross(b - a, p - a) != 0.0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

}  // namespace

double signed_area(std::span<const Vec2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  const Vec2 o = ring[0];
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) twice += cross(ring[i] - o, ring[next(i, n)] - o);
  return 0.5 * twice;
}

Vec2 centroid(std::span<const Vec2> ring) {
  const std::size_t n = ring.size();
  if (n == 0) return {};
  const Vec2 o = ring[0];
  double twice = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = ring[i] - o;
    const Vec2 q = ring[next(i, n)] - o;
    const double c = cross(p, q);
    twice += c;
    cx += (p.x + q.x) * c;
    cy += (p.y + q.y) * c;
  }
  if (twice == 0.0) {
    Vec2 mean{};
    for (const Vec2& p : ring) mean = mean + p;
    return mean * (1.0 / static_cast<double>(n));
  }
  return o + Vec2{cx / (3.0 * twice), cy / (3.0 * twice)};
}

double perimeter(std::span<const Vec2> ring) {
  double total = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) total += dist(ring[i], ring[next(i, ring.size())]);
  return total;
}

bool contains(std::span<const Vec2> ring, Vec2 p) {
  const std::size_t n = ring.size();
  bool inside = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = ring[i];
    const Vec2 b = ring[next(i, n)];
    if (on_segment(a, b, p)) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

bool is_simple(std::span<const Vec2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(ring[i], ring[next(i, n)], ring[j], ring[next(j, n)])) return false;
    }
  }
  return std::abs(signed_area(ring)) > 0.0;
}

Vec2 closest_point_on_segment(Vec2 a, Vec2 b, Vec2 p) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + ab * t;
}

double segment_distance(Vec2 a, Vec2 b, Vec2 p) { return dist(p, closest_point_on_segment(a, b, p)); }

double segment_segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min({segment_distance(c, d, a), segment_distance(c, d, b), segment_distance(a, b, c),
                   segment_distance(a, b, d)});
}

BoundaryPoint closest_boundary_point(std::span<const Vec2> ring, Vec2 p) {
  BoundaryPoint best{ring.empty() ? p : ring[0], std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Vec2 q = closest_point_on_segment(ring[i], ring[next(i, ring.size())], p);
    const double d = dist(p, q);
    if (d < best.distance) best = {q, d, i};
  }
  return best;
}

double boundary_distance(std::span<const Vec2> ring, Vec2 p) {
  return closest_boundary_point(ring, p).distance;
}

double region_distance(std::span<const Vec2> ring, Vec2 p) {
  if (contains(ring, p)) return 0.0;
  return boundary_distance(ring, p);
}

double polyline_region_distance(std::span<const Vec2> line, std::span<const Vec2> ring) {
  if (line.empty()) return std::numeric_limits<double>::infinity();
  for (const Vec2& p : line)
    if (contains(ring, p)) return 0.0;
  if (line.size() == 1) return boundary_distance(ring, line[0]);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.size(); ++i)
    for (std::size_t j = 0; j < ring.size(); ++j)
      best = std::min(best, segment_segment_distance(line[i], line[i + 1], ring[j],
                                                     ring[next(j, ring.size())]));
  return best;
}

bool regions_overlap(std::span<const Vec2> a, std::span<const Vec2> b) {
  return region_region_distance(a, b) == 0.0;
}

double region_region_distance(std::span<const Vec2> a, std::span<const Vec2> b) {
  for (const Vec2& p : a)
    if (contains(b, p)) return 0.0;
  for (const Vec2& p : b)
    if (contains(a, p)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      best = std::min(best, segment_segment_distance(a[i], a[next(i, a.size())], b[j],
                                                     b[next(j, b.size())]));
  return best;
}

ClosestPair polyline_boundary_closest(std::span<const Vec2> line, std::span<const Vec2> ring) {
  ClosestPair best{{}, {}, std::numeric_limits<double>::infinity()};
  if (line.empty() || ring.empty()) return best;
  if (line.size() == 1) {
    const BoundaryPoint bp = closest_boundary_point(ring, line[0]);
    return {line[0], bp.point, bp.distance};
  }
  auto consider = [&](Vec2 on_line, Vec2 on_ring) {
    const double d = dist(on_line, on_ring);
    if (d < best.distance) best = {on_line, on_ring, d};
  };
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const Vec2 a = line[i], b = line[i + 1];
    for (std::size_t j = 0; j < ring.size(); ++j) {
      const Vec2 c = ring[j], d = ring[next(j, ring.size())];
      if (segments_intersect(a, b, c, d)) {
        const Vec2 r = b - a, s = d - c;
        const double denom = cross(r, s);
        Vec2 x = c;
        if (denom != 0.0) x = c + s * std::clamp(cross(c - a, r) / denom, 0.0, 1.0);
        consider(x, x);
        continue;
      }
      consider(a, closest_point_on_segment(c, d, a));
      consider(b, closest_point_on_segment(c, d, b));
      consider(closest_point_on_segment(a, b, c), c);
      consider(closest_point_on_segment(a, b, d), d);
    }
  }
  return best;
}

std::vector<LineHit> line_intersections(std::span<const Vec2> ring, Vec2 a, Vec2 b) {
  std::vector<LineHit> hits;
  const Vec2 dir = b - a;
  const double len2 = dot(dir, dir);
  if (len2 == 0.0) return hits;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = ring[i];
    const Vec2 f = ring[next(i, n)] - e0;
    const double denom = cross(dir, f);
    const Vec2 w = e0 - a;
    if (denom == 0.0) {
      if (cross(w, dir) == 0.0) {
        // Collinear edge: both endpoints lie on the line.
        hits.push_back({dot(w, dir) / len2, e0, i, 0.0});
        hits.push_back({dot(ring[next(i, n)] - a, dir) / len2, ring[next(i, n)], i, 1.0});
      }
      continue;
    }
    const double u = cross(w, dir) / denom;
    if (u < 0.0 || u > 1.0) continue;
    const double t = cross(w, f) / denom;
    hits.push_back({t, e0 + f * u, i, u});
  }
  std::sort(hits.begin(), hits.end(), [](const LineHit& x, const LineHit& y) { return x.t < y.t; });
  return hits;
}

double arc_position(std::span<const Vec2> ring, std::size_t edge, Vec2 p) {
  double s = 0.0;
  for (std::size_t i = 0; i < edge; ++i) s += dist(ring[i], ring[next(i, ring.size())]);
  return s + dist(ring[edge], p);
}

double perimeter_distance(std::span<const Vec2> ring, std::size_t edge_a, Vec2 a, std::size_t edge_b,
                          Vec2 b) {
  const double total = perimeter(ring);
  const double d = std::abs(arc_position(ring, edge_a, a) - arc_position(ring, edge_b, b));
  return std::min(d, total - d);
}

std::array<double, 3> area_covariance(std::span<const Vec2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return {0.0, 0.0, 0.0};
  const Vec2 o = ring[0];
  double twice = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = ring[i] - o;
    const Vec2 q = ring[next(i, n)] - o;
    const double c = cross(p, q);
    twice += c;
    sx += (p.x + q.x) * c;
    sy += (p.y + q.y) * c;
    sxx += (p.x * p.x + p.x * q.x + q.x * q.x) * c;
    syy += (p.y * p.y + p.y * q.y + q.y * q.y) * c;
    sxy += (p.x * q.y + 2.0 * p.x * p.y + 2.0 * q.x * q.y + q.x * p.y) * c;
  }
  const double area = 0.5 * twice;
  if (area == 0.0) return {0.0, 0.0, 0.0};
  const double cx = sx / (6.0 * area);
  const double cy = sy / (6.0 * area);
  const double ixx = sxx / (12.0 * area);
  const double iyy = syy / (12.0 * area);
  const double ixy = sxy / (24.0 * area);
  return {ixx - cx * cx, ixy - cx * cy, iyy - cy * cy};
}

std::vector<Vec2> translated(std::span<const Vec2> ring, Vec2 offset) {
  std::vector<Vec2> out;
  out.reserve(ring.size());
  for (const Vec2& p : ring) out.push_back(p + offset);
  return out;
}

}  // namespace g3::poly
