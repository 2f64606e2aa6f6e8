#include "g3/kernels/gradient.hpp"

#include <cmath>

#include "g3/loglinear.hpp"

namespace g3::kernels {

void SparseDesign::build_columns() {
  columns.assign(static_cast<std::size_t>(num_features), {});
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int f : rows[i]) columns[f].push_back(static_cast<int>(i));
}

namespace {

double example_loglik(double z, double y) { return y * log_sigmoid(z) + (1.0 - y) * log_sigmoid(-z); }

double penalty(const double* theta, int n, double l2) {
  double sq = 0.0;
  for (int j = 0; j < n; ++j) sq += theta[j] * theta[j];
  return l2 * sq;
}

}  // namespace

Objective objective_serial(const SparseDesign& d, const double* theta, double l2) {
  Objective out;
  out.gradient.assign(static_cast<std::size_t>(d.num_features), 0.0);
  double ll = 0.0;
  for (std::size_t i = 0; i < d.rows.size(); ++i) {
    double z = 0.0;
    for (int f : d.rows[i]) z += theta[f];
    ll += example_loglik(z, d.labels[i]);
    const double r = d.labels[i] - sigmoid(z);
    for (int f : d.rows[i]) out.gradient[f] += r;
  }
  for (int j = 0; j < d.num_features; ++j) out.gradient[j] -= 2.0 * l2 * theta[j];
  out.value = ll - penalty(theta, d.num_features, l2);
  return out;
}

Objective objective_parallel(const SparseDesign& d, const double* theta, double l2) {
  const long long n = static_cast<long long>(d.rows.size());
  std::vector<double> ll(d.rows.size()), resid(d.rows.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    double z = 0.0;
    for (int f : d.rows[i]) z += theta[f];
    ll[i] = example_loglik(z, d.labels[i]);
    resid[i] = d.labels[i] - sigmoid(z);
  }
  Objective out;
  out.gradient.assign(static_cast<std::size_t>(d.num_features), 0.0);
  const long long m = d.num_features;
#pragma omp parallel for schedule(static)
  for (long long j = 0; j < m; ++j) {
    double g = 0.0;
    for (int i : d.columns[j]) g += resid[i];
    out.gradient[j] = g - 2.0 * l2 * theta[j];
  }
  double total = 0.0;
  for (double v : ll) total += v;
  out.value = total - penalty(theta, d.num_features, l2);
  return out;
}

}  // namespace g3::kernels
