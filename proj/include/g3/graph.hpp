#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "g3/language.hpp"

namespace g3 {

enum class VarKind { Object, Place, Path, Event };
std::string_view to_string(VarKind k);

struct GroundingVar {
  int id = 0;
  VarKind kind = VarKind::Object;
  /// Constituent that introduced the variable.
  int constituent = 0;
};

struct CorrespondenceVar {
  int id = 0;
  std::optional<int> value;
};

enum class FactorKind { Entity, Relation };

/// Constituent class used for per-type reporting and feature selection.
enum class FactorClass { NounPhrase, PlacePhrase, PathPhrase, VerbPhrase };
std::string_view to_string(FactorClass c);
std::string_view class_label(FactorClass c);

struct FactorSpec {
  int id = 0;
  int phi = 0;
  int constituent = 0;
  std::vector<int> args;
  FactorKind kind = FactorKind::Entity;
  FactorClass cls = FactorClass::NounPhrase;
  /// Lowercased words of the constituent not covered by its arguments.
  std::vector<std::string> words;
};

struct GroundingGraph {
  std::vector<GroundingVar> vars;
  std::vector<CorrespondenceVar> phis;
  std::vector<FactorSpec> factors;
  ParseTree tree;

  /// Factor owning a constituent, if any.
  std::optional<int> factor_of(int constituent) const;
};

/// Builds the graph; variables and factors are numbered in pre-order.
/// Ids are zero-based; dumps print them one-based.
GroundingGraph build_grounding_graph(const ParseTree& tree);

std::map<int, std::vector<int>> shared_variable_map(const GroundingGraph& graph);

std::string dump(const GroundingGraph& graph);

}  // namespace g3
