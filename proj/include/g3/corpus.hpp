#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "g3/directions.hpp"
#include "g3/evaluator.hpp"
#include "g3/graph.hpp"
#include "g3/training.hpp"

namespace g3 {

/// Grounding annotation of one constituent: an object/place id or an action
/// sequence.
using GroundingValue = std::variant<std::string, ActionSeq>;

struct AnnotatedExample {
  std::string id;
  std::string scenario;
  std::string command;
  std::string parse;  // bracketed
  std::string env;    // path relative to the corpus file
  std::string map;
  /// Constituent id -> grounding of the variable it introduces.
  std::map<int, GroundingValue> groundings;
  /// Constituent id -> phi of the factor it carries; unlisted factors are skipped.
  std::map<int, int> phi;

  bool operator==(const AnnotatedExample&) const = default;
};

std::string example_to_json_line(const AnnotatedExample& e);
AnnotatedExample example_from_json_line(const std::string& line);
std::string corpus_to_text(const std::vector<AnnotatedExample>& corpus);
/// Throws ParseFormatError naming the 1-based line as offset on bad records.
std::vector<AnnotatedExample> corpus_from_text(const std::string& text);
std::vector<AnnotatedExample> load_corpus(const std::filesystem::path& path);
void save_corpus(const std::vector<AnnotatedExample>& corpus, const std::filesystem::path& path);

struct World {
  EnvironmentModel env;
  TopoMap map;
};

/// Loads environments and maps referenced by a corpus, once each, and keeps
/// one factor evaluator per scenario.
class WorldStore {
 public:
  explicit WorldStore(std::filesystem::path base_dir) : base_(std::move(base_dir)) {}
  void add(const std::string& env_ref, const std::string& map_ref, World world);
  const World& world(const AnnotatedExample& e);
  FactorEvaluator& evaluator(const AnnotatedExample& e);
  void set_weights(const FeatureWeights& w);

 private:
  std::filesystem::path base_;
  std::map<std::string, World> worlds_;
  std::map<std::string, std::unique_ptr<FactorEvaluator>> evaluators_;
};

/// Scenario-disjoint split; ratio of scenarios (rounded, at least one per side) go to train.
std::pair<std::vector<AnnotatedExample>, std::vector<AnnotatedExample>> split(
    const std::vector<AnnotatedExample>& corpus, double ratio, std::uint64_t seed);

struct NegativeResult {
  std::vector<AnnotatedExample> corpus;  // input followed by generated negatives
  int candidates = 0;                    // negatives drawn before relabeling
  int relabeled = 0;
  std::vector<std::string> warnings;
};

/// For each positive factor, k records with the factor's head grounding
/// replaced by a random grounding of the same kind. Noun-phrase negatives
/// whose tags cover the phrase's tag words are relabeled positive.
NegativeResult generate_negatives(const std::vector<AnnotatedExample>& corpus, WorldStore& worlds,
                                  std::uint64_t seed, int k = 3, int horizon = 6);

struct LabeledFactor {
  std::string example;
  FactorClass cls = FactorClass::NounPhrase;
  BinaryFeatureVector features;
  int label = 0;
};

/// Feature vectors for every labeled factor whose arguments are annotated.
std::vector<LabeledFactor> labeled_factors(const std::vector<AnnotatedExample>& corpus, WorldStore& worlds);
std::vector<TrainingExample> training_examples(const std::vector<LabeledFactor>& factors);

struct PhiRow {
  std::string label;
  int n = 0, tp = 0, fp = 0, tn = 0, fn = 0;
  double precision = 1.0, recall = 1.0, f_score = 1.0, accuracy = 1.0;
};

struct PhiReport {
  std::vector<PhiRow> rows;  // one per constituent type, then "Overall"
};

/// Tallies predictions; metrics with an empty denominator are 1.
PhiRow phi_row(std::string label, const std::vector<std::pair<int, int>>& predicted_actual);
/// Classifies phi = [p >= 0.5]. Throws InvalidInput on an empty test set.
PhiReport eval_phi(const FeatureWeights& weights, const std::vector<LabeledFactor>& test);
std::string report_table(const PhiReport& r);
std::string report_csv(const PhiReport& r);

// --- route directions -------------------------------------------------------

struct DirectionExample {
  std::string id;
  std::string text;
  std::string map;
  std::string start;
  std::string goal;
  bool operator==(const DirectionExample&) const = default;
};

std::string directions_to_text(const std::vector<DirectionExample>& corpus);
std::vector<DirectionExample> directions_from_text(const std::string& text);
std::vector<DirectionExample> load_directions(const std::filesystem::path& path);
void save_directions(const std::vector<DirectionExample>& corpus, const std::filesystem::path& path);

enum class FollowMethod { Global, Exploring, Greedy, LastPhrase, Random };
std::string_view to_string(FollowMethod m);
FollowMethod follow_method_from_string(std::string_view s);
bool is_local(FollowMethod m);

DirectionHypothesis follow(FollowMethod m, const FlatCommand& flat, const TopoMap& map, const LandmarkModel& model,
                           const std::string& start, const FollowConfig& config, std::uint64_t seed);

struct DirectionsRow {
  std::string method;
  int n = 0;
  int successes = 0;
  double success_rate = 0.0;
  std::optional<double> exploration;  // mean fraction, local methods only
};

/// Maps are looked up by each example's map reference.
DirectionsRow eval_directions(FollowMethod m, const std::vector<DirectionExample>& corpus,
                              const std::map<std::string, TopoMap>& maps, const LandmarkModel& model,
                              const FollowConfig& config, std::uint64_t seed);
std::string directions_table(const std::vector<DirectionsRow>& rows);
std::string directions_csv(const std::vector<DirectionsRow>& rows);

}  // namespace g3
