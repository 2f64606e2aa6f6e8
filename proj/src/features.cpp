#include "g3/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace g3 {

FeatureScale feature_scale(std::string_view name) {
  const auto colon = name.rfind(':');
  const std::string_view base = colon == std::string_view::npos ? name : name.substr(colon + 1);
  for (const FeatureInfo& f : feature_registry())
    if (f.name == base) return f.scale;
  return FeatureScale::Binary;
}

namespace {

int uniform_bin(double v, double lo, double hi, int n) {
  const int b = static_cast<int>(std::floor((v - lo) / (hi - lo) * n));
  return std::clamp(b, 0, n - 1);
}

}  // namespace

int discretize(double value, std::string_view name, const BinConfig& bins) {
  switch (feature_scale(name)) {
    case FeatureScale::Distance: return uniform_bin(value, 0.0, 1.0, bins.distance_bins);
    case FeatureScale::SignedDistance: return uniform_bin(value, -1.0, 1.0, bins.distance_bins);
    case FeatureScale::Angle: return uniform_bin(value, 0.0, std::numbers::pi / 2.0, bins.angle_bins);
    case FeatureScale::Ratio: return uniform_bin(value, 0.0, 2.0, bins.distance_bins);
    case FeatureScale::Binary: return value >= 0.5 ? 1 : 0;
  }
  return 0;
}

std::string feature_id(std::string_view name, int bin, std::string_view word) {
  std::string id(name);
  id += '|';
  id += std::to_string(bin);
  id += '|';
  id += word;
  return id;
}

BinaryFeatureVector cross_features(const BaseFeatureVector& base, const std::vector<std::string>& words,
                                   const BinConfig& bins) {
  const std::set<std::string> distinct(words.begin(), words.end());
  BinaryFeatureVector out;
  out.reserve(base.size() * distinct.size());
  for (const auto& [name, value] : base) {
    const int bin = discretize(value, name, bins);
    for (const std::string& w : distinct) out.push_back(feature_id(name, bin, w));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace g3
