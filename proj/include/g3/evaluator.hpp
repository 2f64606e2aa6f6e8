#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "g3/features.hpp"
#include "g3/graph.hpp"
#include "g3/loglinear.hpp"
#include "g3/world.hpp"

namespace g3 {

/// Value of a grounding variable: an object or place id, or an action
/// sequence for events and paths.
struct VarValue {
  VarKind kind = VarKind::Object;
  std::string id;
  ActionSeq seq;

  static VarValue object(std::string id) { return {VarKind::Object, std::move(id), {}}; }
  static VarValue place(std::string id) { return {VarKind::Place, std::move(id), {}}; }
  static VarValue sequence(VarKind kind, ActionSeq seq) { return {kind, {}, std::move(seq)}; }

  bool is_sequence() const { return kind == VarKind::Event || kind == VarKind::Path; }
  /// Id, or the bracketed action sequence.
  std::string key() const;
  bool operator==(const VarValue&) const = default;
};

/// Computes factor features and probabilities for candidate groundings.
/// Caches trajectories and features; not safe for concurrent use.
class FactorEvaluator {
 public:
  FactorEvaluator(const EnvironmentModel& env, const TopoMap& map, FeatureWeights weights = {});
  FactorEvaluator(const FactorEvaluator&) = delete;
  FactorEvaluator& operator=(const FactorEvaluator&) = delete;

  const EnvironmentModel& env() const { return env_; }
  const TopoMap& map() const { return map_; }
  const ManipSpace& space() const { return space_; }
  const FeatureWeights& weights() const { return weights_; }
  void set_weights(FeatureWeights w);

  /// Object or place candidates for a variable kind.
  std::vector<VarValue> candidates(VarKind kind) const;

  const EventTrajectories& trajectories(const ActionSeq& seq) const;
  /// Grounding for a value: the object or place itself, or the robot path.
  Grounding grounding(const VarValue& v) const;

  BaseFeatureVector base_features(const FactorSpec& f, const std::vector<VarValue>& args) const;
  BinaryFeatureVector binary_features(const FactorSpec& f, const std::vector<VarValue>& args) const;
  /// log p(phi = 1 | words, args).
  double log_prob(const FactorSpec& f, const std::vector<VarValue>& args) const;

 private:
  const BaseFeatureVector& pair_features(const VarValue& figure, const VarValue& landmark) const;
  void event_features(const ActionSeq& seq, const std::vector<VarValue>& args, BaseFeatureVector& out) const;

  EnvironmentModel env_;
  TopoMap map_;
  ManipSpace space_;
  FeatureWeights weights_;
  mutable std::unordered_map<std::string, EventTrajectories> traj_cache_;
  mutable std::unordered_map<std::string, BaseFeatureVector> pair_cache_;
  mutable std::unordered_map<std::string, double> logp_cache_;
};

}  // namespace g3
