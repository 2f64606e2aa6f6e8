#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "g3/landmark.hpp"
#include "g3/language.hpp"
#include "g3/world.hpp"

namespace g3 {

struct DirectionState {
  std::string node;
  Dir heading = Dir::East;
  bool operator==(const DirectionState&) const = default;
};

struct DirectionHypothesis {
  /// Expanded path; the first state is the start.
  std::vector<DirectionState> path;
  /// Index into `path` of each segment's final state.
  std::vector<std::size_t> segment_ends;
  std::vector<double> segment_scores;
  double score = 0.0;
  /// Nodes physically visited, in order, including backtracking.
  std::vector<std::string> visited;

  const DirectionState& end() const { return path.at(segment_ends.empty() ? 0 : segment_ends.back()); }
};

struct FollowConfig {
  double threshold = 0.05;
  std::optional<Dir> start_heading;
};

/// Scores of one segment transition, shared by all decoders.
class SegmentScorer {
 public:
  SegmentScorer(const TopoMap& map, const LandmarkModel& model) : map_(map), model_(model) {}

  /// log p(landmark | tags at node); 0 for landmark-free segments.
  double landmark_log(const DirectionSegment& seg, std::size_t node) const;
  double verb_log(const DirectionSegment& seg, const DirectionState& from, const DirectionState& to) const;
  double transition(const DirectionSegment& seg, const DirectionState& from, const DirectionState& to) const {
    return verb_log(seg, from, to) + landmark_log(seg, map_.index_of(to.node));
  }
  const TopoMap& map() const { return map_; }

 private:
  const TopoMap& map_;
  const LandmarkModel& model_;
  mutable std::map<std::pair<std::string, std::size_t>, double> cache_;
};

/// Shortest routes between nodes (Euclidean edge lengths, levels at 3 m).
class RouteTable {
 public:
  explicit RouteTable(const TopoMap& map);
  /// Node sequence from a to b inclusive; empty when unreachable.
  std::vector<std::size_t> route(std::size_t a, std::size_t b) const;
  double distance(std::size_t a, std::size_t b) const { return dist_[a][b]; }

 private:
  std::vector<std::vector<double>> dist_;
  std::vector<std::vector<std::size_t>> prev_;
};

/// One global transition: target state and the states walked to reach it
/// (excluding the source).
struct GlobalTransition {
  DirectionState to;
  std::vector<DirectionState> steps;
};

/// All transitions from a state: stay, rotate in place, or travel to another
/// node arriving with one of its incoming headings.
std::vector<GlobalTransition> global_transitions(const TopoMap& map, const RouteTable& routes,
                                                 const DirectionState& from);

/// Ranking of complete hypotheses: score, then expanded length, then
/// lexicographic order of the expanded path.
bool better_path(double score_a, const std::vector<DirectionState>& a, double score_b,
                 const std::vector<DirectionState>& b);

DirectionHypothesis follow_global(const FlatCommand& flat, const TopoMap& map, const LandmarkModel& model,
                                  const std::string& start, const FollowConfig& config = {});
/// Local decoding; threshold 0 is the greedy method.
DirectionHypothesis follow_local(const FlatCommand& flat, const TopoMap& map, const LandmarkModel& model,
                                 const std::string& start, const FollowConfig& config);
DirectionHypothesis follow_greedy(const FlatCommand& flat, const TopoMap& map, const LandmarkModel& model,
                                  const std::string& start, const FollowConfig& config = {});
DirectionHypothesis follow_exploring(const FlatCommand& flat, const TopoMap& map, const LandmarkModel& model,
                                     const std::string& start, const FollowConfig& config = {});

/// Node maximizing the landmark probability of the last landmark phrase.
DirectionHypothesis follow_last_phrase(const FlatCommand& flat, const TopoMap& map, const LandmarkModel& model,
                                       const std::string& start);
DirectionHypothesis follow_random(const TopoMap& map, const std::string& start, std::uint64_t seed);

/// Re-scores a hypothesis's segment endpoints under the global model.
double rescore(const FlatCommand& flat, const SegmentScorer& scorer, const DirectionHypothesis& h);

/// Visited off-shortest-path nodes over all off-shortest-path nodes.
double exploration_fraction(const TopoMap& map, const std::string& start, const std::string& goal,
                            const std::vector<std::string>& visited);

/// 3-D distance between node positions, levels stacked 3 m apart.
double node_distance(const TopoMap& map, const std::string& a, const std::string& b);

inline constexpr double kSuccessRadius = 10.0;

std::string hypothesis_report(const DirectionHypothesis& h);

}  // namespace g3
