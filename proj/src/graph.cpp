#include "g3/graph.hpp"

#include <functional>

#include "g3/error.hpp"

namespace g3 {

std::string_view to_string(VarKind k) {
  switch (k) {
    case VarKind::Object: return "object";
    case VarKind::Place: return "place";
    case VarKind::Path: return "path";
    case VarKind::Event: return "event";
  }
  return "?";
}

std::string_view to_string(FactorClass c) {
  switch (c) {
    case FactorClass::NounPhrase: return "np";
    case FactorClass::PlacePhrase: return "pp-place";
    case FactorClass::PathPhrase: return "pp-path";
    case FactorClass::VerbPhrase: return "vp";
  }
  return "?";
}

std::string_view class_label(FactorClass c) {
  switch (c) {
    case FactorClass::NounPhrase: return "Noun Phrase";
    case FactorClass::PlacePhrase: return "Prepositional Phrase (Place)";
    case FactorClass::PathPhrase: return "Prepositional Phrase (Path)";
    case FactorClass::VerbPhrase: return "Verb Phrase";
  }
  return "?";
}

std::optional<int> GroundingGraph::factor_of(int constituent) const {
  for (const FactorSpec& f : factors)
    if (f.constituent == constituent) return f.id;
  return std::nullopt;
}

namespace {

std::string preposition(const ParseTree& t, int id) {
  for (int ch : t.at(id).children) {
    const Constituent& c = t.at(ch);
    if (c.is_preterminal() && !is_punctuation_tag(c.category)) return lowercase(c.words.front());
  }
  return t.at(id).words.empty() ? std::string() : lowercase(t.at(id).words.front());
}

void own_words(const ParseTree& t, int id, bool top, std::vector<std::string>& out) {
  const Constituent& c = t.at(id);
  if (!top && c.kind != ConstituentKind::None) return;
  if (c.is_preterminal()) {
    if (!is_punctuation_tag(c.category)) out.push_back(lowercase(c.words.front()));
    return;
  }
  for (int ch : c.children) own_words(t, ch, false, out);
}

}  // namespace

GroundingGraph build_grounding_graph(const ParseTree& input) {
  GroundingGraph g;
  g.tree = classify_constituents(input);
  const ParseTree& t = g.tree;
  std::map<int, int> own_var;  // constituent -> variable it introduced

  auto new_var = [&](VarKind k, int constituent) {
    const int id = static_cast<int>(g.vars.size());
    g.vars.push_back({id, k, constituent});
    own_var[constituent] = id;
  };
  auto pp_kind = [&](int id) { return is_path_preposition(preposition(t, id)) ? VarKind::Path : VarKind::Place; };

  for (const Constituent& c : t.nodes) {
    if (c.kind == ConstituentKind::None) continue;
    const std::string cat = base_category(c.category);
    if (cat == "VP") new_var(VarKind::Event, c.id);
    else if (cat == "PP") new_var(pp_kind(c.id), c.id);
    else if (c.kind == ConstituentKind::Entity) new_var(VarKind::Object, c.id);
  }

  // Variable standing for a constituent when it fills an argument slot.
  std::function<int(int)> head_var = [&](int id) -> int {
    auto it = own_var.find(id);
    if (it != own_var.end()) return it->second;
    const auto kids = factor_children(t, id);
    if (kids.empty()) throw InvalidInput("constituent " + std::to_string(id) + " has no head");
    return head_var(kids.front());
  };

  for (const Constituent& c : t.nodes) {
    if (c.kind == ConstituentKind::None) continue;
    FactorSpec f;
    f.id = static_cast<int>(g.factors.size());
    f.phi = f.id;
    f.constituent = c.id;
    const std::string cat = base_category(c.category);
    if (cat == "VP") f.cls = FactorClass::VerbPhrase;
    else if (cat == "PP") f.cls = pp_kind(c.id) == VarKind::Path ? FactorClass::PathPhrase : FactorClass::PlacePhrase;
    else if (c.kind == ConstituentKind::Relation) f.cls = FactorClass::PlacePhrase;
    else f.cls = FactorClass::NounPhrase;

    if (c.kind == ConstituentKind::Entity) {
      f.kind = FactorKind::Entity;
      f.args = {own_var.at(c.id)};
    } else {
      f.kind = FactorKind::Relation;
      if (own_var.contains(c.id)) f.args.push_back(own_var.at(c.id));
      for (int ch : factor_children(t, c.id)) f.args.push_back(head_var(ch));
      if (f.args.size() < 2 || f.args.size() > 3)
        throw InvalidInput("relation '" + c.category + "' at constituent " + std::to_string(c.id) + " has " +
                           std::to_string(f.args.size()) + " arguments (allowed 2 to 3)");
    }
    own_words(t, c.id, true, f.words);
    g.factors.push_back(std::move(f));
    g.phis.push_back({static_cast<int>(g.phis.size()), std::nullopt});
  }
  return g;
}

std::map<int, std::vector<int>> shared_variable_map(const GroundingGraph& graph) {
  std::map<int, std::vector<int>> out;
  for (const GroundingVar& v : graph.vars) out[v.id];
  for (const FactorSpec& f : graph.factors)
    for (int a : f.args)
      if (out[a].empty() || out[a].back() != f.id) out[a].push_back(f.id);
  return out;
}

std::string dump(const GroundingGraph& graph) {
  std::string out = "vars\n";
  for (const GroundingVar& v : graph.vars)
    out += "  g" + std::to_string(v.id + 1) + " " + std::string(to_string(v.kind)) + "\n";
  out += "factors\n";
  for (const FactorSpec& f : graph.factors) {
    std::string words;
    for (const auto& w : f.words) words += (words.empty() ? "" : " ") + w;
    out += "  f" + std::to_string(f.id + 1) + " " + (f.kind == FactorKind::Entity ? "entity" : "relation") + " " +
           std::string(to_string(f.cls)) + " \"" + words + "\" (";
    for (std::size_t i = 0; i < f.args.size(); ++i) out += (i ? ", g" : "g") + std::to_string(f.args[i] + 1);
    out += ")\n";
  }
  return out;
}

}  // namespace g3
