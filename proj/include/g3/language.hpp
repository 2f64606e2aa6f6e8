#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace g3 {

enum class ConstituentKind { None, Entity, Relation };
std::string_view to_string(ConstituentKind k);

struct Constituent {
  int id = 0;
  std::string category;
  /// Leaf tokens of the span, as written.
  std::vector<std::string> words;
  ConstituentKind kind = ConstituentKind::None;
  std::vector<int> children;
  int parent = -1;
  /// Set when classification fell back on an unknown category.
  bool warning = false;

  bool is_preterminal() const { return children.empty(); }
};

/// Constituents stored in pre-order; ids are indices and the root is 0.
struct ParseTree {
  std::vector<Constituent> nodes;

  int root() const { return 0; }
  const Constituent& at(int id) const { return nodes.at(static_cast<std::size_t>(id)); }
  std::vector<std::string> tokens() const { return nodes.empty() ? std::vector<std::string>{} : nodes[0].words; }
  /// Copy of the subtree rooted at `id`, re-indexed.
  ParseTree subtree(int id) const;
};

/// Reads a Penn-style bracketed tree. Throws ParseFormatError with the
/// character offset of the first problem.
ParseTree read_parse(std::string_view text);
std::string serialize(const ParseTree& tree);
/// Whitespace-normalized form of a bracketed tree.
std::string canonical(std::string_view text);

/// Assigns Entity/Relation kinds. Idempotent.
ParseTree classify_constituents(ParseTree tree);

/// Factor-bearing constituents directly below `id`, looking through
/// constituents that carry no factor.
std::vector<int> factor_children(const ParseTree& tree, int id);

/// Category without function tags or indices, e.g. "NP-SBJ=2" -> "NP".
std::string base_category(std::string_view category);

/// Splits at top-level verb phrase conjunctions; returns the tree itself
/// when there is none.
std::vector<ParseTree> split_clauses(const ParseTree& tree);

bool is_punctuation_tag(std::string_view tag);
bool is_determiner(std::string_view word);
bool is_path_preposition(std::string_view word);
std::string lowercase(std::string_view s);

/// Whitespace tokenization with trailing punctuation split off.
std::vector<std::string> tokenize(std::string_view text);

/// Small pattern-based parser for imperative `V (PRT) NP (PP NP)*` commands,
/// including "and"/"then" conjunctions of such clauses.
ParseTree parse_imperative(std::string_view command);

struct DirectionSegment {
  std::vector<std::string> verb_words;
  std::optional<std::vector<std::string>> landmark_words;
  bool operator==(const DirectionSegment&) const = default;
};

struct FlatCommand {
  std::vector<DirectionSegment> segments;
};

/// Rule-based chunker for route directions: one segment per imperative clause.
FlatCommand chunk_directions(std::string_view text);
std::string to_string(const FlatCommand& flat);

}  // namespace g3
