#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "g3/corpus.hpp"
#include "g3/landmark.hpp"

namespace g3 {

struct YardConfig {
  int scenarios = 12;
  int commands_per_scenario = 8;
  int horizon = 6;
  std::uint64_t seed = 1;
};

/// Worlds keyed by scenario id; examples reference "envs/<id>.json" and
/// "maps/<id>.json".
struct GeneratedCorpus {
  std::vector<AnnotatedExample> examples;
  std::map<std::string, World> worlds;
};

/// One forklift yard: a 3x3 node grid, pallets and a fixed vehicle.
World make_yard(std::mt19937_64& rng);

/// Positive annotations (every factor labeled 1) for a command in a world.
/// Returns false when the goal is not reachable within the horizon.
bool annotate_command(const std::string& command, const World& world, int horizon, AnnotatedExample& out);

GeneratedCorpus generate_yard_corpus(const YardConfig& config);
/// Registers the generated worlds with a store under their file references.
void register_worlds(const GeneratedCorpus& g, WorldStore& store);
/// Writes corpus.jsonl, envs/ and maps/ under `dir`.
void save_generated(const GeneratedCorpus& g, const std::filesystem::path& dir);

struct RouteConfig {
  int instances = 60;
  std::uint64_t seed = 1;
};

struct RouteSuite {
  std::map<std::string, TopoMap> maps;  // keyed by "maps/<id>.json"
  std::vector<DirectionExample> directions;
  CooccurrenceCounts counts;
};

/// Synthetic caption statistics over region words and object labels.
CooccurrenceCounts route_counts();
RouteSuite generate_route_suite(const RouteConfig& config);
/// Writes directions.jsonl, counts.json and maps/ under `dir`.
void save_route_suite(const RouteSuite& s, const std::filesystem::path& dir);
std::map<std::string, TopoMap> load_route_maps(const std::vector<DirectionExample>& directions,
                                               const std::filesystem::path& base);

}  // namespace g3
