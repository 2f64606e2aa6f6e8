#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "g3/geometry.hpp"

namespace g3 {

struct BinConfig {
  int distance_bins = 6;
  int angle_bins = 4;

  bool operator==(const BinConfig&) const = default;
};

/// Scale of any base feature name, including prefixed pair features
/// ("obj:distFigureEndToLandmark") and unary indicators ("tag:pallet").
FeatureScale feature_scale(std::string_view name);

/// Bin index for a base feature value; values outside the range fall into
/// the edge bins.
int discretize(double value, std::string_view name, const BinConfig& bins = {});

/// Sorted, unique active feature ids "name|bin|word".
using BinaryFeatureVector = std::vector<std::string>;

std::string feature_id(std::string_view name, int bin, std::string_view word);

/// One id per present base feature and distinct word.
BinaryFeatureVector cross_features(const BaseFeatureVector& base, const std::vector<std::string>& words,
                                   const BinConfig& bins = {});

}  // namespace g3
