#pragma once

#include <vector>

namespace g3::kernels {

/// Binary design matrix: active feature indices per example plus the
/// transposed (per-feature) view, both in increasing order.
struct SparseDesign {
  int num_features = 0;
  std::vector<std::vector<int>> rows;
  std::vector<double> labels;
  std::vector<std::vector<int>> columns;

  void build_columns();
};

struct Objective {
  /// Sum of example log-likelihoods minus l2 * |theta|^2.
  double value = 0.0;
  std::vector<double> gradient;
};

/// Reference implementation: one pass over examples, scattering residuals.
Objective objective_serial(const SparseDesign& d, const double* theta, double l2);
/// Residuals computed in parallel, then gathered per feature over the
/// transposed view. Bitwise equal to the serial result.
Objective objective_parallel(const SparseDesign& d, const double* theta, double l2);

}  // namespace g3::kernels
