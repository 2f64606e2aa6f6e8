#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "g3/evaluator.hpp"
#include "g3/graph.hpp"

namespace g3 {

struct SearchConfig {
  /// Beam for noun phrases, place phrases and complex noun phrases; nullopt
  /// means unbounded.
  std::optional<int> beam_np = 10;
  /// Beam for path phrases and verb phrases.
  std::optional<int> beam_vp = 5;
  int horizon = 6;
};

struct Assignment {
  std::map<int, VarValue> values;
  /// log p(phi = 1) per factor, indexed by factor id.
  std::map<int, double> factor_log_probs;
  double score = 0.0;

  int sequence_length() const;
};

/// Ranking used everywhere: higher score, then fewer actions, then
/// lexicographically smaller value keys in variable order.
bool better(const Assignment& a, const Assignment& b);

/// Every action sequence of length <= horizon, depth-first in legal-action order.
std::vector<ActionSeq> enumerate_sequences(const ManipSpace& space, int horizon);
/// For each state reachable within the horizon, its first sequence in
/// breadth-first, legal-action order.
std::vector<ActionSeq> shortest_sequences(const ManipSpace& space, int horizon);

/// Recomputes per-factor log probabilities and the summed score.
Assignment score_assignment(const GroundingGraph& graph, const FactorEvaluator& eval,
                            const std::map<int, VarValue>& values);

/// Bottom-up beam search over the graph. Throws UngroundableError when a
/// constituent has no candidates.
Assignment ground_command(const GroundingGraph& graph, const FactorEvaluator& eval, const SearchConfig& config);

std::string assignment_report(const GroundingGraph& graph, const Assignment& a);

}  // namespace g3
