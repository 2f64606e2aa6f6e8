#include "g3/loglinear.hpp"

#include <cmath>

#include "g3/error.hpp"
#include "g3/world_io.hpp"

namespace g3 {

double dot(const FeatureWeights& w, const BinaryFeatureVector& s) {
  double z = 0.0;
  for (const std::string& id : s) z += w.weight(id);
  return z;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double log_sigmoid(double z) { return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z)); }

double loglinear_prob(const FeatureWeights& w, const BinaryFeatureVector& s) { return sigmoid(dot(w, s)); }

std::string weights_to_text(const FeatureWeights& w) {
  Json j;
  j["config"] = {{"bins", w.bins.distance_bins},
                 {"angle_bins", w.bins.angle_bins},
                 {"l2_lambda", w.l2_lambda},
                 {"seed", w.seed}};
  j["weights"] = Json(w.weights);
  return j.dump(1) + "\n";
}

FeatureWeights weights_from_text(const std::string& text) {
  FeatureWeights w;
  try {
    const Json j = Json::parse(text);
    const Json& c = j.at("config");
    w.bins.distance_bins = c.value("bins", 6);
    w.bins.angle_bins = c.value("angle_bins", 4);
    w.l2_lambda = c.value("l2_lambda", 0.01);
    w.seed = c.value("seed", std::uint64_t{0});
    w.weights = j.at("weights").get<std::map<std::string, double>>();
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed weights file: ") + e.what());
  }
  for (const auto& [id, v] : w.weights)
    if (!std::isfinite(v)) throw InvalidInput("non-finite weight for " + id);
  return w;
}

void save_weights(const FeatureWeights& w, const std::filesystem::path& path) {
  write_text_file(path, weights_to_text(w));
}

FeatureWeights load_weights(const std::filesystem::path& path) { return weights_from_text(read_text_file(path)); }

}  // namespace g3
