#include "g3/training.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <ceres/ceres.h>

#include "g3/error.hpp"

namespace g3 {

kernels::SparseDesign make_design(const std::vector<TrainingExample>& examples, std::vector<std::string>* names) {
  std::map<std::string, int> index;
  for (const TrainingExample& e : examples)
    for (const std::string& f : e.features) index.emplace(f, 0);
  int k = 0;
  for (auto& [name, idx] : index) idx = k++;
  kernels::SparseDesign d;
  d.num_features = k;
  for (const TrainingExample& e : examples) {
    std::vector<int> row;
    for (const std::string& f : e.features) row.push_back(index.at(f));
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    d.rows.push_back(std::move(row));
    d.labels.push_back(e.label ? 1.0 : 0.0);
  }
  d.build_columns();
  if (names) {
    names->clear();
    for (const auto& [name, idx] : index) names->push_back(name);
  }
  return d;
}

namespace {

class NegLogLikelihood final : public ceres::FirstOrderFunction {
 public:
  NegLogLikelihood(const kernels::SparseDesign& d, double l2, bool parallel) : d_(d), l2_(l2), parallel_(parallel) {}

  bool Evaluate(const double* theta, double* cost, double* gradient) const override {
    const kernels::Objective o =
        parallel_ ? kernels::objective_parallel(d_, theta, l2_) : kernels::objective_serial(d_, theta, l2_);
    *cost = -o.value;
    if (gradient)
      for (int j = 0; j < d_.num_features; ++j) gradient[j] = -o.gradient[j];
    return std::isfinite(*cost);
  }
  int NumParameters() const override { return d_.num_features; }

 private:
  const kernels::SparseDesign& d_;
  double l2_;
  bool parallel_;
};

class HistoryCallback final : public ceres::IterationCallback {
 public:
  HistoryCallback(TrainResult& r, const TrainConfig& c) : r_(r), c_(c) {}
  ceres::CallbackReturnType operator()(const ceres::IterationSummary& s) override {
    if (s.step_is_successful) {
      r_.history.push_back(s.cost);
      if (c_.on_iteration) c_.on_iteration(s.iteration, s.cost);
    }
    return ceres::SOLVER_CONTINUE;
  }

 private:
  TrainResult& r_;
  const TrainConfig& c_;
};

}  // namespace

TrainResult train(const std::vector<TrainingExample>& examples, const TrainConfig& config) {
  if (examples.empty()) throw InvalidInput("training corpus is empty");
  bool pos = false, neg = false;
  for (const TrainingExample& e : examples) (e.label ? pos : neg) = true;
  if (!pos || !neg)
    throw InvalidInput("training corpus has a single class; generate negative examples first (gen --negatives)");

  std::vector<std::string> names;
  const kernels::SparseDesign d = make_design(examples, &names);
  TrainResult r;
  r.weights.l2_lambda = config.l2_lambda;
  r.weights.bins = config.bins;
  r.weights.seed = config.seed;
  std::vector<double> theta(static_cast<std::size_t>(d.num_features), 0.0);

  if (d.num_features > 0) {
    ceres::GradientProblemSolver::Options opt;
    opt.line_search_direction_type = ceres::LBFGS;
    opt.max_num_iterations = config.max_iterations;
    opt.gradient_tolerance = 0.5 * config.gradient_tolerance;
    opt.function_tolerance = 0.0;
    opt.parameter_tolerance = 0.0;
    opt.logging_type = ceres::SILENT;
    opt.minimizer_progress_to_stdout = false;
    HistoryCallback cb(r, config);
    opt.callbacks.push_back(&cb);
    ceres::GradientProblem problem(new NegLogLikelihood(d, config.l2_lambda, config.parallel));
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(opt, problem, theta.data(), &summary);
    r.iterations = static_cast<int>(summary.iterations.size()) - 1;
    r.message = summary.message;
  }

  const kernels::Objective fin = kernels::objective_serial(d, theta.data(), config.l2_lambda);
  r.objective = fin.value;
  for (double g : fin.gradient) r.gradient_max_norm = std::max(r.gradient_max_norm, std::abs(g));
  r.converged = r.gradient_max_norm < config.gradient_tolerance;
  if (r.history.empty()) r.history.push_back(-fin.value);
  for (std::size_t j = 0; j < names.size(); ++j) r.weights.weights[names[j]] = theta[j];
  return r;
}

}  // namespace g3
