#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "g3/features.hpp"

namespace g3 {

struct FeatureWeights {
  std::map<std::string, double> weights;
  double l2_lambda = 0.01;
  BinConfig bins;
  std::uint64_t seed = 0;

  double weight(const std::string& id) const {
    auto it = weights.find(id);
    return it == weights.end() ? 0.0 : it->second;
  }
};

double dot(const FeatureWeights& w, const BinaryFeatureVector& s);
/// p(phi = 1) = exp(w.s) / (exp(w.s) + 1); the phi = 0 configuration scores 0.
double loglinear_prob(const FeatureWeights& w, const BinaryFeatureVector& s);
double sigmoid(double z);
/// log sigmoid(z), stable for large |z|.
double log_sigmoid(double z);

std::string weights_to_text(const FeatureWeights& w);
FeatureWeights weights_from_text(const std::string& text);
void save_weights(const FeatureWeights& w, const std::filesystem::path& path);
FeatureWeights load_weights(const std::filesystem::path& path);

}  // namespace g3
