#include "g3/evaluator.hpp"

#include <algorithm>

#include "g3/error.hpp"

namespace g3 {

std::string VarValue::key() const {
  if (!is_sequence()) return id;
  return "[" + to_string(seq) + "]";
}

FactorEvaluator::FactorEvaluator(const EnvironmentModel& env, const TopoMap& map, FeatureWeights weights)
    : env_(env.places.empty() ? with_generated_places(env) : env),
      map_(map),
      space_(env_, map_),
      weights_(std::move(weights)) {}

void FactorEvaluator::set_weights(FeatureWeights w) {
  weights_ = std::move(w);
  logp_cache_.clear();
}

std::vector<VarValue> FactorEvaluator::candidates(VarKind kind) const {
  std::vector<VarValue> out;
  if (kind == VarKind::Object)
    for (const Grounding& g : env_.objects) out.push_back(VarValue::object(g.id));
  if (kind == VarKind::Place)
    for (const Grounding& g : space_.places()) out.push_back(VarValue::place(g.id));
  return out;
}

const EventTrajectories& FactorEvaluator::trajectories(const ActionSeq& seq) const {
  const std::string k = to_string(seq);
  auto it = traj_cache_.find(k);
  if (it != traj_cache_.end()) return it->second;
  return traj_cache_.emplace(k, space_.trajectories(seq)).first->second;
}

Grounding FactorEvaluator::grounding(const VarValue& v) const {
  if (v.is_sequence()) return path_grounding("path", trajectories(v.seq).robot);
  for (const Grounding& g : space_.places())
    if (g.id == v.id) return g;
  return env_.at(v.id);
}

const BaseFeatureVector& FactorEvaluator::pair_features(const VarValue& figure, const VarValue& landmark) const {
  const std::string k = figure.key() + "\x1f" + landmark.key();
  auto it = pair_cache_.find(k);
  if (it != pair_cache_.end()) return it->second;
  return pair_cache_.emplace(k, compute_features(grounding(figure), grounding(landmark), env_.bbox)).first->second;
}

namespace {

void add_prefixed(BaseFeatureVector& out, const std::string& prefix, const BaseFeatureVector& in) {
  for (const auto& [n, v] : in) out.emplace_back(prefix + n, v);
}

}  // namespace

void FactorEvaluator::event_features(const ActionSeq& seq, const std::vector<VarValue>& args,
                                     BaseFeatureVector& out) const {
  bool moved = false, picked = false, put = false;
  for (const ManipAction& a : seq) {
    moved |= a.kind == ManipAction::Kind::Move;
    picked |= a.kind == ManipAction::Kind::PickUp;
    put |= a.kind == ManipAction::Kind::PutDown;
  }
  out.emplace_back("robotMoved", moved);
  out.emplace_back("pickedUpAny", picked);
  out.emplace_back("putDownAny", put);

  const VarValue robot = VarValue::sequence(VarKind::Path, seq);
  const VarValue* object = nullptr;
  for (std::size_t k = 1; k < args.size(); ++k) {
    const VarValue& a = args[k];
    if (a.kind == VarKind::Object && !object) {
      object = &a;
      add_prefixed(out, "obj:", pair_features(robot, a));
      bool carried = false;
      for (const ManipAction& act : seq) carried |= act.kind == ManipAction::Kind::PickUp && act.target == a.id;
      const ManipState end = space_.rollout(seq).back();
      out.emplace_back("objectCarried", carried);
      out.emplace_back("objectHeldAtEnd", end.carried && *end.carried == a.id);
    } else if (a.kind == VarKind::Place) {
      if (object) {
        const ManipState end = space_.rollout(seq).back();
        auto it = end.placements.find(object->id);
        out.emplace_back("objectEndsAtPlace", it != end.placements.end() && it->second == a.id);
        Grounding moving = env_.at(object->id);
        moving.path = trajectories(seq).objects.at(object->id);
        const std::string k = "objplace\x1f" + robot.key() + "\x1f" + object->id + "\x1f" + a.id;
        auto cached = pair_cache_.find(k);
        if (cached == pair_cache_.end())
          cached = pair_cache_.emplace(k, compute_features(moving, grounding(a), env_.bbox)).first;
        add_prefixed(out, "objplace:", cached->second);
      } else {
        add_prefixed(out, "place:", pair_features(robot, a));
      }
    } else if (a.is_sequence() && a.kind == VarKind::Path) {
      out.emplace_back("eventFollowsPath", a.seq == seq);
    }
  }
}

BaseFeatureVector FactorEvaluator::base_features(const FactorSpec& f, const std::vector<VarValue>& args) const {
  if (args.size() != f.args.size()) throw InvalidInput("factor arity mismatch");
  BaseFeatureVector out;
  out.emplace_back("bias", 1.0);
  const VarValue& head = args.front();
  if (f.kind == FactorKind::Entity) {
    if (head.kind == VarKind::Object)
      for (const std::string& t : env_.at(head.id).tags) out.emplace_back("tag:" + t, 1.0);
    if (head.is_sequence()) event_features(head.seq, args, out);
    return out;
  }
  if (head.kind == VarKind::Event) {
    event_features(head.seq, args, out);
    return out;
  }
  const bool several = args.size() > 2;
  for (std::size_t k = 1; k < args.size(); ++k) {
    const std::string prefix = several ? "l" + std::to_string(k) + ":" : "";
    add_prefixed(out, prefix, pair_features(head, args[k]));
  }
  return out;
}

BinaryFeatureVector FactorEvaluator::binary_features(const FactorSpec& f, const std::vector<VarValue>& args) const {
  return cross_features(base_features(f, args), f.words, weights_.bins);
}

double FactorEvaluator::log_prob(const FactorSpec& f, const std::vector<VarValue>& args) const {
  std::string k = std::to_string(static_cast<int>(f.kind));
  for (const std::string& w : f.words) k += " " + w;
  for (const VarValue& a : args) k += "\x1f" + std::to_string(static_cast<int>(a.kind)) + a.key();
  auto it = logp_cache_.find(k);
  if (it != logp_cache_.end()) return it->second;
  const double lp = log_sigmoid(dot(weights_, binary_features(f, args)));
  logp_cache_.emplace(std::move(k), lp);
  return lp;
}

}  // namespace g3
