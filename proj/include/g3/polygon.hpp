#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace g3 {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

/// Free functions over simple polygons given as vertex rings (no repeated
/// closing vertex). Orientation may be either sense.
namespace poly {

double signed_area(std::span<const Vec2> ring);
Vec2 centroid(std::span<const Vec2> ring);
double perimeter(std::span<const Vec2> ring);

/// Points on the boundary count as inside.
bool contains(std::span<const Vec2> ring, Vec2 p);
bool is_simple(std::span<const Vec2> ring);

Vec2 closest_point_on_segment(Vec2 a, Vec2 b, Vec2 p);
double segment_distance(Vec2 a, Vec2 b, Vec2 p);
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);
double segment_segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

struct BoundaryPoint {
  Vec2 point;
  double distance = 0.0;
  std::size_t edge = 0;  // index of the edge (i, i+1)
};
BoundaryPoint closest_boundary_point(std::span<const Vec2> ring, Vec2 p);

/// Distance to the boundary, regardless of side.
double boundary_distance(std::span<const Vec2> ring, Vec2 p);
/// Distance to the region: 0 inside, boundary distance outside.
double region_distance(std::span<const Vec2> ring, Vec2 p);

/// Distance between a polyline and a polygonal region (0 on contact).
double polyline_region_distance(std::span<const Vec2> line, std::span<const Vec2> ring);
/// Distance between two polygonal regions (0 when they touch or overlap).
double region_region_distance(std::span<const Vec2> a, std::span<const Vec2> b);
bool regions_overlap(std::span<const Vec2> a, std::span<const Vec2> b);

/// Closest pair between a polyline and the boundary of a polygon.
struct ClosestPair {
  Vec2 on_line;
  Vec2 on_ring;
  double distance = 0.0;
};
ClosestPair polyline_boundary_closest(std::span<const Vec2> line, std::span<const Vec2> ring);

/// Crossings of the infinite line a + t (b - a) with the boundary.
struct LineHit {
  double t = 0.0;
  Vec2 point;
  std::size_t edge = 0;
  double edge_param = 0.0;
};
std::vector<LineHit> line_intersections(std::span<const Vec2> ring, Vec2 a, Vec2 b);

/// Arc length from the start of `edge` going forward to a point on it.
double arc_position(std::span<const Vec2> ring, std::size_t edge, Vec2 p);
/// Shorter of the two boundary arcs between two boundary points.
double perimeter_distance(std::span<const Vec2> ring, std::size_t edge_a, Vec2 a,
                          std::size_t edge_b, Vec2 b);

/// Area second moments about the centroid: {cxx, cxy, cyy}.
std::array<double, 3> area_covariance(std::span<const Vec2> ring);

std::vector<Vec2> translated(std::span<const Vec2> ring, Vec2 offset);

}  // namespace poly
}  // namespace g3
