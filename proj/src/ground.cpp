#include "g3/ground.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include "g3/error.hpp"

namespace g3 {

int Assignment::sequence_length() const {
  int n = 0;
  std::set<std::string> seen;
  for (const auto& [id, v] : values)
    if (v.is_sequence() && seen.insert(v.key()).second) n += static_cast<int>(v.seq.size());
  return n;
}

namespace {

double sum_in_order(const std::map<int, double>& logp) {
  double s = 0.0;
  for (const auto& [f, lp] : logp) s += lp;
  return s;
}

}  // namespace

bool better(const Assignment& a, const Assignment& b) {
  if (a.score != b.score) return a.score > b.score;
  const int la = a.sequence_length(), lb = b.sequence_length();
  if (la != lb) return la < lb;
  auto ia = a.values.begin();
  auto ib = b.values.begin();
  for (; ia != a.values.end() && ib != b.values.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first < ib->first;
    const std::string ka = ia->second.key(), kb = ib->second.key();
    if (ka != kb) return ka < kb;
  }
  return a.values.size() < b.values.size();
}

std::vector<ActionSeq> enumerate_sequences(const ManipSpace& space, int horizon) {
  std::vector<ActionSeq> out;
  ActionSeq cur;
  std::function<void(const ManipState&)> rec = [&](const ManipState& s) {
    out.push_back(cur);
    if (static_cast<int>(cur.size()) >= horizon) return;
    for (const ManipAction& a : space.legal_actions(s)) {
      cur.push_back(a);
      rec(space.apply(s, a));
      cur.pop_back();
    }
  };
  rec(space.initial_state());
  return out;
}

namespace {

std::string state_key(const ManipState& s) {
  std::string k = s.robot_node + "|" + (s.carried ? *s.carried : "-");
  for (const auto& [o, l] : s.placements) k += "|" + o + "=" + l;
  return k;
}

}  // namespace

std::vector<ActionSeq> shortest_sequences(const ManipSpace& space, int horizon) {
  std::vector<ActionSeq> out;
  std::set<std::string> seen;
  std::deque<std::pair<ManipState, ActionSeq>> queue;
  const ManipState start = space.initial_state();
  seen.insert(state_key(start));
  queue.emplace_back(start, ActionSeq{});
  while (!queue.empty()) {
    auto [s, seq] = std::move(queue.front());
    queue.pop_front();
    out.push_back(seq);
    if (static_cast<int>(seq.size()) >= horizon) continue;
    for (const ManipAction& a : space.legal_actions(s)) {
      ManipState next = space.apply(s, a);
      if (!seen.insert(state_key(next)).second) continue;
      ActionSeq longer = seq;
      longer.push_back(a);
      queue.emplace_back(std::move(next), std::move(longer));
    }
  }
  return out;
}

Assignment score_assignment(const GroundingGraph& graph, const FactorEvaluator& eval,
                            const std::map<int, VarValue>& values) {
  Assignment a;
  a.values = values;
  for (const FactorSpec& f : graph.factors) {
    std::vector<VarValue> args;
    for (int v : f.args) args.push_back(values.at(v));
    a.factor_log_probs[f.id] = eval.log_prob(f, args);
  }
  a.score = sum_in_order(a.factor_log_probs);
  return a;
}

namespace {

class BeamSearch {
 public:
  BeamSearch(const GroundingGraph& g, const FactorEvaluator& e, const SearchConfig& c) : g_(g), e_(e), c_(c) {}

  Assignment run() {
    const ParseTree& t = g_.tree;
    std::vector<int> tops;
    if (t.at(0).kind != ConstituentKind::None) tops = {0};
    else tops = factor_children(t, 0);
    if (tops.empty()) throw UngroundableError("command has no groundable constituent");
    std::vector<Assignment> beam{Assignment{}};
    for (int top : tops) beam = combine(beam, solve(top), std::nullopt);
    return beam.front();
  }

 private:
  std::optional<int> width(const FactorSpec& f) const {
    const bool vp_like = f.cls == FactorClass::VerbPhrase || f.cls == FactorClass::PathPhrase;
    return vp_like ? c_.beam_vp : c_.beam_np;
  }

  const std::vector<ActionSeq>& sequences(const std::optional<int>& w) {
    auto& slot = w ? shortest_ : all_;
    if (!slot) slot = w ? shortest_sequences(e_.space(), c_.horizon) : enumerate_sequences(e_.space(), c_.horizon);
    return *slot;
  }

  static void prune(std::vector<Assignment>& beam, const std::optional<int>& w) {
    std::sort(beam.begin(), beam.end(), better);
    if (w && static_cast<int>(beam.size()) > *w) beam.resize(static_cast<std::size_t>(*w));
  }

  std::vector<Assignment> combine(const std::vector<Assignment>& a, const std::vector<Assignment>& b,
                                  const std::optional<int>& w) {
    std::vector<Assignment> out;
    for (const Assignment& x : a)
      for (const Assignment& y : b) {
        Assignment z = x;
        z.values.insert(y.values.begin(), y.values.end());
        z.factor_log_probs.insert(y.factor_log_probs.begin(), y.factor_log_probs.end());
        z.score = sum_in_order(z.factor_log_probs);
        out.push_back(std::move(z));
      }
    prune(out, w);
    return out;
  }

  std::vector<Assignment> solve(int constituent) {
    const ParseTree& t = g_.tree;
    const FactorSpec& f = g_.factors.at(static_cast<std::size_t>(*g_.factor_of(constituent)));
    const std::optional<int> w = width(f);

    std::vector<Assignment> partial{Assignment{}};
    std::optional<int> tied_path;
    for (int child : factor_children(t, constituent)) {
      partial = combine(partial, solve(child), std::nullopt);
      const auto cf = g_.factor_of(child);
      if (!tied_path && base_category(t.at(constituent).category) == "VP" && cf &&
          g_.factors[*cf].cls == FactorClass::PathPhrase && base_category(t.at(child).category) == "PP")
        tied_path = g_.factors[*cf].args.front();
    }

    // Variable introduced by this constituent, if any.
    std::optional<int> own;
    for (const GroundingVar& v : g_.vars)
      if (v.constituent == constituent) own = v.id;

    std::vector<Assignment> out;
    auto score = [&](Assignment a) {
      std::vector<VarValue> args;
      for (int v : f.args) args.push_back(a.values.at(v));
      a.factor_log_probs[f.id] = e_.log_prob(f, args);
      a.score = sum_in_order(a.factor_log_probs);
      out.push_back(std::move(a));
    };
    for (const Assignment& p : partial) {
      if (!own) {
        score(p);
        continue;
      }
      const VarKind kind = g_.vars[static_cast<std::size_t>(*own)].kind;
      if (tied_path) {
        Assignment a = p;
        a.values[*own] = VarValue::sequence(kind, p.values.at(*tied_path).seq);
        score(std::move(a));
      } else if (kind == VarKind::Event || kind == VarKind::Path) {
        for (const ActionSeq& s : sequences(w)) {
          Assignment a = p;
          a.values[*own] = VarValue::sequence(kind, s);
          score(std::move(a));
        }
      } else {
        for (const VarValue& v : e_.candidates(kind)) {
          Assignment a = p;
          a.values[*own] = v;
          score(std::move(a));
        }
      }
    }
    if (out.empty()) {
      std::string words;
      for (const auto& x : t.at(constituent).words) words += (words.empty() ? "" : " ") + x;
      throw UngroundableError("ungroundable constituent '" + words + "'");
    }
    prune(out, w);
    return out;
  }

  const GroundingGraph& g_;
  const FactorEvaluator& e_;
  const SearchConfig& c_;
  std::optional<std::vector<ActionSeq>> shortest_, all_;
};

}  // namespace

Assignment ground_command(const GroundingGraph& graph, const FactorEvaluator& eval, const SearchConfig& config) {
  if (config.horizon < 0) throw InvalidInput("horizon must be non-negative");
  return BeamSearch(graph, eval, config).run();
}

std::string assignment_report(const GroundingGraph& graph, const Assignment& a) {
  std::ostringstream out;
  out << std::setprecision(6) << std::fixed;
  out << "score " << a.score << "\n";
  for (const GroundingVar& v : graph.vars)
    out << "g" << v.id + 1 << " " << to_string(v.kind) << " = " << a.values.at(v.id).key() << "\n";
  for (const FactorSpec& f : graph.factors) {
    std::string words;
    for (const auto& w : f.words) words += (words.empty() ? "" : " ") + w;
    out << "f" << f.id + 1 << " \"" << words << "\" log p = " << a.factor_log_probs.at(f.id) << "\n";
  }
  for (const auto& [id, v] : a.values)
    if (v.kind == VarKind::Event) {
      out << "plan";
      for (const ManipAction& act : v.seq) out << " " << act.str();
      out << "\n";
      break;
    }
  return out.str();
}

}  // namespace g3
