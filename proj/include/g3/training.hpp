#pragma once

#include <functional>
#include <string>
#include <vector>

#include "g3/kernels/gradient.hpp"
#include "g3/loglinear.hpp"

namespace g3 {

struct TrainingExample {
  BinaryFeatureVector features;
  int label = 0;
};

struct TrainConfig {
  double l2_lambda = 0.01;
  int max_iterations = 500;
  double gradient_tolerance = 1e-5;
  BinConfig bins;
  std::uint64_t seed = 0;
  bool parallel = true;
  /// Called once per accepted iteration with (iteration, negative objective).
  std::function<void(int, double)> on_iteration;
};

struct TrainResult {
  FeatureWeights weights;
  /// Penalized log-likelihood at the solution.
  double objective = 0.0;
  double gradient_max_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;  // negative objective per iteration
  std::string message;
};

/// Indexes feature ids in sorted order.
kernels::SparseDesign make_design(const std::vector<TrainingExample>& examples, std::vector<std::string>* names);

/// Maximizes sum log p(label | features) - l2 |theta|^2 with L-BFGS.
/// Throws InvalidInput when the corpus holds a single class.
TrainResult train(const std::vector<TrainingExample>& examples, const TrainConfig& config);

}  // namespace g3
