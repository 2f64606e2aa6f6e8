#include "g3/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "g3/error.hpp"

namespace g3 {

namespace {

constexpr std::size_t kResamples = 101;
constexpr double kIsotropyGap = 1e-6;
constexpr double kSupportTolerance = 0.05;

Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

}  // namespace

std::optional<Axes> impose_axes(const std::vector<Vec2>& figure, const std::vector<Vec2>& landmark) {
  if (figure.size() < 2) return std::nullopt;
  const Vec2 a = figure.front(), b = figure.back();
  if (a == b) return std::nullopt;
  const auto hits = poly::line_intersections(landmark, a, b);
  if (hits.size() < 2 || hits.front().point == hits.back().point) return std::nullopt;
  Axes axes;
  axes.major_a = hits.front().point;
  axes.major_b = hits.back().point;
  axes.major_edge_a = hits.front().edge;
  axes.major_edge_b = hits.back().edge;
  axes.origin = (axes.major_a + axes.major_b) * 0.5;
  const auto mh = poly::line_intersections(landmark, axes.origin, axes.origin + perp(b - a));
  if (mh.size() >= 2 && mh.front().point != mh.back().point) {
    axes.minor = std::make_pair(mh.front().point, mh.back().point);
    axes.minor_edge_a = mh.front().edge;
    axes.minor_edge_b = mh.back().edge;
  }
  return axes;
}

std::optional<Axes> impose_axes(const Trajectory& figure, const Prism& landmark) {
  std::vector<Vec2> pts;
  for (const Pose& p : figure.poses()) pts.push_back(p.xy());
  return impose_axes(pts, landmark.polygon);
}

std::optional<Vec2> principal_direction(const std::vector<Vec2>& points) {
  if (points.size() < 2) return std::nullopt;
  Vec2 mean{};
  for (const Vec2& p : points) mean = mean + p;
  mean = mean * (1.0 / static_cast<double>(points.size()));
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const Vec2& p : points) {
    const Vec2 d = p - mean;
    sxx += d.x * d.x;
    sxy += d.x * d.y;
    syy += d.y * d.y;
  }
  const double trace = sxx + syy;
  if (!(trace > 0.0)) return std::nullopt;
  const double gap = std::hypot(sxx - syy, 2.0 * sxy);  // lambda_max - lambda_min
  if (gap / trace < kIsotropyGap) return std::nullopt;
  const double phi = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  return Vec2{std::cos(phi), std::sin(phi)};
}

double line_angle(Vec2 u, Vec2 v) { return std::atan2(std::abs(cross(u, v)), std::abs(dot(u, v))); }

std::vector<Vec2> resample(const std::vector<Vec2>& line, std::size_t n) {
  std::vector<Vec2> out;
  if (line.empty() || n == 0) return out;
  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < line.size(); ++i) cum.push_back(cum.back() + dist(line[i - 1], line[i]));
  const double total = cum.back();
  if (total == 0.0 || n == 1) return std::vector<Vec2>(n, line.front());
  std::size_t seg = 1;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = total * static_cast<double>(k) / static_cast<double>(n - 1);
    while (seg + 1 < line.size() && cum[seg] < s) ++seg;
    const double len = cum[seg] - cum[seg - 1];
    const double w = len > 0.0 ? std::clamp((s - cum[seg - 1]) / len, 0.0, 1.0) : 0.0;
    out.push_back(line[seg - 1] + (line[seg] - line[seg - 1]) * w);
  }
  return out;
}

bool supports(const Grounding& figure, const Grounding& landmark) {
  const std::size_t last = figure.path.size() - 1;
  if (!poly::regions_overlap(figure.footprint(last), landmark.footprint())) return false;
  return std::abs(figure.base_z(last) - landmark.top_z()) <= kSupportTolerance * landmark.shape.height;
}

bool contact(const Grounding& figure, const Grounding& landmark) {
  const std::size_t last = figure.path.size() - 1;
  if (!poly::regions_overlap(figure.footprint(last), landmark.footprint())) return false;
  const double tol = kSupportTolerance * landmark.shape.height;
  return figure.base_z(last) <= landmark.top_z() + tol && landmark.base_z() <= figure.top_z(last) + tol;
}

const std::vector<FeatureInfo>& feature_registry() {
  using S = FeatureScale;
  static const std::vector<FeatureInfo> registry{
      {"angleBtwnLinearizedObjects", 2, S::Angle, "angle between principal lines of figure points and landmark boundary"},
      {"angleFigureToPastAxes", 2, S::Angle, "angle between figure line and its closest-approach segment to the landmark"},
      {"averageDistStartEndLandmarkBoundary", 2, S::Distance, "mean landmark distance of figure start and end"},
      {"displacementFromLandmark", 2, S::SignedDistance, "landmark distance at start minus at end"},
      {"distAlongLandmarkBtwnAxes", 2, S::Distance, "shorter perimeter arc between minor axis endpoints"},
      {"distStartLandmarkBoundary", 2, S::Distance, "landmark distance of the figure start"},
      {"distFigureEndToLandmark", 2, S::Distance, "landmark distance of the figure end"},
      {"distFigureStartToLandmark", 2, S::Distance, "landmark distance of the figure start"},
      {"eigenAxesRatio", 2, S::Ratio, "minor over major eigenvalue of the landmark area covariance"},
      {"figureCenterOfMassToAxesOrigin", 2, S::Distance, "figure mean point to imposed axes origin"},
      {"figureCenterOfMassToLandmarkCentroid", 2, S::Distance, "figure mean point to landmark centroid"},
      {"pastAxesLength", 2, S::Distance, "closest approach between figure path and landmark"},
      {"peakDistToAxes", 2, S::Distance, "largest distance to the major axis over figure samples inside the landmark"},
      {"ratioFigureToAxes", 2, S::Ratio, "figure start-end distance over major axis length"},
      {"stdDevToAxes", 2, S::Distance, "standard deviation of figure sample distances to the major axis"},
      {"supports", 2, S::Binary, "figure rests on the landmark top"},
      {"contact", 2, S::Binary, "figure and landmark touch in footprint and height"},
      {"figureStartInsideLandmark", 2, S::Binary, "figure start lies in the landmark footprint"},
      {"figureEndInsideLandmark", 2, S::Binary, "figure end lies in the landmark footprint"},
      {"heightAboveLandmark", 2, S::SignedDistance, "figure base height above the landmark top"},
  };
  return registry;
}

const FeatureInfo& feature_info(std::string_view name) {
  for (const FeatureInfo& f : feature_registry())
    if (f.name == name) return f;
  throw InvalidInput("unregistered feature '" + std::string(name) + "'");
}

BaseFeatureVector compute_features(const Grounding& figure, const Grounding& landmark, const BBox& scene) {
  const double D = scene.diagonal();
  if (!(D > 0.0)) throw InvalidInput("scene bbox has zero diagonal");
  const std::vector<Vec2> L = landmark.footprint();
  const std::vector<Vec2> F = figure.centroid_track();
  const Vec2 s = F.front(), e = F.back();
  Vec2 mean{};
  for (const Vec2& p : F) mean = mean + p;
  mean = mean * (1.0 / static_cast<double>(F.size()));

  const double ds = poly::region_distance(L, s);
  const double de = poly::region_distance(L, e);
  const auto fig_dir = principal_direction(F);
  const auto axes = impose_axes(F, L);
  const auto samples = resample(F, kResamples);
  const std::size_t last = figure.path.size() - 1;

  BaseFeatureVector out;
  auto put = [&](const char* name, double v) { out.emplace_back(name, v); };

  if (fig_dir) {
    if (auto land_dir = principal_direction(L)) put("angleBtwnLinearizedObjects", line_angle(*fig_dir, *land_dir));
    const auto cp = poly::polyline_boundary_closest(F, L);
    if (cp.distance > 0.0 && !poly::contains(L, cp.on_line))
      put("angleFigureToPastAxes", line_angle(*fig_dir, cp.on_ring - cp.on_line));
  }
  put("averageDistStartEndLandmarkBoundary", 0.5 * (ds + de) / D);
  put("displacementFromLandmark", (ds - de) / D);
  if (axes && axes->minor)
    put("distAlongLandmarkBtwnAxes",
        poly::perimeter_distance(L, axes->minor_edge_a, axes->minor->first, axes->minor_edge_b, axes->minor->second) / D);
  put("distStartLandmarkBoundary", ds / D);
  put("distFigureEndToLandmark", de / D);
  put("distFigureStartToLandmark", ds / D);
  {
    const auto c = poly::area_covariance(L);
    const double tr = c[0] + c[2];
    const double gap = std::hypot(c[0] - c[2], 2.0 * c[1]);
    if (tr > 0.0) put("eigenAxesRatio", (tr - gap) / (tr + gap));
  }
  if (axes) put("figureCenterOfMassToAxesOrigin", dist(mean, axes->origin) / D);
  put("figureCenterOfMassToLandmarkCentroid", dist(mean, poly::centroid(L)) / D);
  put("pastAxesLength", poly::polyline_region_distance(F, L) / D);
  if (axes) {
    std::vector<double> d;
    double peak = -1.0;
    for (const Vec2& p : samples) {
      d.push_back(poly::segment_distance(axes->major_a, axes->major_b, p));
      if (poly::contains(L, p)) peak = std::max(peak, d.back());
    }
    if (peak >= 0.0) put("peakDistToAxes", peak / D);
    put("ratioFigureToAxes", dist(s, e) / axes->major_length());
    double m = 0.0, var = 0.0;
    for (double v : d) m += v;
    m /= static_cast<double>(d.size());
    for (double v : d) var += (v - m) * (v - m);
    put("stdDevToAxes", std::sqrt(var / static_cast<double>(d.size())) / D);
  }
  put("supports", supports(figure, landmark) ? 1.0 : 0.0);
  put("contact", contact(figure, landmark) ? 1.0 : 0.0);
  put("figureStartInsideLandmark", poly::contains(L, s) ? 1.0 : 0.0);
  put("figureEndInsideLandmark", poly::contains(L, e) ? 1.0 : 0.0);
  put("heightAboveLandmark", (figure.base_z(last) - landmark.top_z()) / D);
  return out;
}

std::optional<double> feature(std::string_view name, const Grounding& figure, const Grounding& landmark,
                              const BBox& scene) {
  feature_info(name);
  for (const auto& [n, v] : compute_features(figure, landmark, scene))
    if (n == name) return v;
  return std::nullopt;
}

}  // namespace g3
