#include "g3/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "g3/error.hpp"
#include "g3/ground.hpp"
#include "g3/world_io.hpp"

namespace g3 {

using OJson = nlohmann::ordered_json;

namespace {

OJson value_to_json(const GroundingValue& v) {
  if (const auto* id = std::get_if<std::string>(&v)) return *id;
  OJson arr = OJson::array();
  for (const ManipAction& a : std::get<ActionSeq>(v)) arr.push_back(a.str());
  return arr;
}

GroundingValue value_from_json(const OJson& j) {
  if (j.is_string()) return j.get<std::string>();
  if (!j.is_array()) throw InvalidInput("grounding must be an id or an action list");
  ActionSeq seq;
  for (const auto& a : j) seq.push_back(ManipAction::parse(a.get<std::string>()));
  return seq;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r") == std::string::npos; }

std::string world_key(const std::string& env, const std::string& map) { return env + "\x1f" + map; }

}  // namespace

std::string example_to_json_line(const AnnotatedExample& e) {
  OJson j;
  j["id"] = e.id;
  j["scenario"] = e.scenario;
  j["command"] = e.command;
  j["parse"] = e.parse;
  j["env"] = e.env;
  j["map"] = e.map;
  OJson g = OJson::array();
  for (const auto& [c, v] : e.groundings) g.push_back(OJson::array({c, value_to_json(v)}));
  j["groundings"] = g;
  OJson p = OJson::array();
  for (const auto& [c, v] : e.phi) p.push_back(OJson::array({c, v}));
  j["phi"] = p;
  return j.dump();
}

AnnotatedExample example_from_json_line(const std::string& line) {
  const OJson j = OJson::parse(line);
  AnnotatedExample e;
  e.id = j.at("id").get<std::string>();
  e.scenario = j.at("scenario").get<std::string>();
  e.command = j.at("command").get<std::string>();
  e.parse = j.at("parse").get<std::string>();
  e.env = j.at("env").get<std::string>();
  e.map = j.at("map").get<std::string>();
  for (const auto& g : j.at("groundings")) e.groundings.emplace(g.at(0).get<int>(), value_from_json(g.at(1)));
  for (const auto& p : j.at("phi")) {
    const int v = p.at(1).get<int>();
    if (v != 0 && v != 1) throw InvalidInput("phi labels must be 0 or 1");
    e.phi.emplace(p.at(0).get<int>(), v);
  }
  return e;
}

std::string corpus_to_text(const std::vector<AnnotatedExample>& corpus) {
  std::string out;
  for (const AnnotatedExample& e : corpus) out += example_to_json_line(e) + "\n";
  return out;
}

std::vector<AnnotatedExample> corpus_from_text(const std::string& text) {
  std::vector<AnnotatedExample> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    try {
      out.push_back(example_from_json_line(lines[i]));
    } catch (const nlohmann::json::exception& ex) {
      throw ParseFormatError(std::string("bad corpus record: ") + ex.what(), i + 1);
    } catch (const InvalidInput& ex) {
      throw ParseFormatError(std::string("bad corpus record: ") + ex.what(), i + 1);
    }
  }
  return out;
}

std::vector<AnnotatedExample> load_corpus(const std::filesystem::path& path) {
  return corpus_from_text(read_text_file(path));
}

void save_corpus(const std::vector<AnnotatedExample>& corpus, const std::filesystem::path& path) {
  write_text_file(path, corpus_to_text(corpus));
}

// --- worlds -------------------------------------------------------------------

void WorldStore::add(const std::string& env_ref, const std::string& map_ref, World world) {
  worlds_.insert_or_assign(world_key(env_ref, map_ref), std::move(world));
}

const World& WorldStore::world(const AnnotatedExample& e) {
  const std::string k = world_key(e.env, e.map);
  auto it = worlds_.find(k);
  if (it != worlds_.end()) return it->second;
  World w{load_environment(base_ / e.env), load_map(base_ / e.map)};
  return worlds_.emplace(k, std::move(w)).first->second;
}

FactorEvaluator& WorldStore::evaluator(const AnnotatedExample& e) {
  const std::string k = world_key(e.env, e.map);
  auto it = evaluators_.find(k);
  if (it != evaluators_.end()) return *it->second;
  const World& w = world(e);
  return *evaluators_.emplace(k, std::make_unique<FactorEvaluator>(w.env, w.map)).first->second;
}

void WorldStore::set_weights(const FeatureWeights& w) {
  for (auto& [k, ev] : evaluators_) ev->set_weights(w);
}

// --- split ----------------------------------------------------------------------

std::pair<std::vector<AnnotatedExample>, std::vector<AnnotatedExample>> split(
    const std::vector<AnnotatedExample>& corpus, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidInput("split ratio must lie in (0, 1)");
  std::set<std::string> ids;
  for (const AnnotatedExample& e : corpus) ids.insert(e.scenario);
  if (ids.size() < 2) throw InvalidInput("split needs at least two scenarios");
  std::vector<std::string> scen(ids.begin(), ids.end());
  std::mt19937_64 rng(seed);
  for (std::size_t i = scen.size() - 1; i > 0; --i) std::swap(scen[i], scen[rng() % (i + 1)]);
  const auto n = static_cast<long>(scen.size());
  const long n_train = std::clamp(std::lround(ratio * static_cast<double>(n)), 1L, n - 1);
  const std::set<std::string> train_ids(scen.begin(), scen.begin() + n_train);
  std::pair<std::vector<AnnotatedExample>, std::vector<AnnotatedExample>> out;
  for (const AnnotatedExample& e : corpus) (train_ids.contains(e.scenario) ? out.first : out.second).push_back(e);
  return out;
}

// --- negatives -------------------------------------------------------------------

namespace {

std::optional<int> factor_for_constituent(const GroundingGraph& g, int c) {
  for (const FactorSpec& f : g.factors)
    if (f.constituent == c) return f.id;
  return std::nullopt;
}

std::string join_words(const std::vector<std::string>& w) {
  std::string s;
  for (const auto& x : w) s += (s.empty() ? "" : " ") + x;
  return s;
}

}  // namespace

NegativeResult generate_negatives(const std::vector<AnnotatedExample>& corpus, WorldStore& worlds,
                                  std::uint64_t seed, int k, int horizon) {
  if (k < 0) throw InvalidInput("negative count must be non-negative");
  NegativeResult res;
  res.corpus = corpus;
  std::mt19937_64 rng(seed);
  std::map<std::string, std::vector<ActionSeq>> seq_cache;

  for (const AnnotatedExample& e : corpus) {
    const GroundingGraph graph = build_grounding_graph(read_parse(e.parse));
    FactorEvaluator& eval = worlds.evaluator(e);
    int counter = 0;
    for (const auto& [c, label] : e.phi) {
      if (label != 1) continue;
      const auto fid = factor_for_constituent(graph, c);
      if (!fid) continue;
      const FactorSpec& f = graph.factors[*fid];
      const GroundingVar& head = graph.vars[f.args.front()];
      auto pos_it = e.groundings.find(head.constituent);
      if (pos_it == e.groundings.end()) continue;
      const GroundingValue& positive = pos_it->second;

      std::vector<GroundingValue> alts;
      if (head.kind == VarKind::Object || head.kind == VarKind::Place) {
        for (const VarValue& v : eval.candidates(head.kind))
          if (GroundingValue(v.id) != positive) alts.emplace_back(v.id);
      } else {
        const std::string key = e.env + "\x1f" + e.map;
        auto it = seq_cache.find(key);
        if (it == seq_cache.end()) it = seq_cache.emplace(key, shortest_sequences(eval.space(), horizon)).first;
        const ManipState pos_end = eval.space().rollout(std::get<ActionSeq>(positive)).back();
        // A path is only the robot's motion, so its negatives must end elsewhere.
        for (const ActionSeq& s : it->second) {
          const ManipState end = eval.space().rollout(s).back();
          if (head.kind == VarKind::Path ? end.robot_node != pos_end.robot_node : end != pos_end) alts.emplace_back(s);
        }
      }

      const int draw = std::min<int>(k, static_cast<int>(alts.size()));
      if (draw < k)
        res.warnings.push_back("example " + e.id + ": '" + join_words(f.words) + "' has only " +
                               std::to_string(alts.size()) + " alternative groundings");
      for (int d = 0; d < draw; ++d) {
        const std::size_t pick = d + rng() % (alts.size() - d);
        std::swap(alts[d], alts[pick]);
        AnnotatedExample neg = e;
        neg.id = e.id + "#n" + std::to_string(counter++);
        neg.groundings[head.constituent] = alts[d];
        if (head.kind == VarKind::Event)
          for (int a : f.args) {
            const GroundingVar& v = graph.vars[a];
            auto g = neg.groundings.find(v.constituent);
            if (v.kind == VarKind::Path && g != neg.groundings.end() && g->second == positive) g->second = alts[d];
          }
        neg.phi = {{c, 0}};
        ++res.candidates;
        if (f.kind == FactorKind::Entity && head.kind == VarKind::Object) {
          std::set<std::string> all_tags;
          for (const Grounding& o : eval.env().objects) all_tags.insert(o.tags.begin(), o.tags.end());
          const Grounding& alt = eval.env().at(std::get<std::string>(alts[d]));
          bool any = false, covered = true;
          for (const std::string& w : f.words)
            if (all_tags.contains(w)) {
              any = true;
              covered &= alt.tags.contains(w);
            }
          if (any && covered) {
            neg.phi[c] = 1;
            ++res.relabeled;
          }
        }
        res.corpus.push_back(std::move(neg));
      }
    }
  }
  return res;
}

// --- factor examples -----------------------------------------------------------

std::vector<LabeledFactor> labeled_factors(const std::vector<AnnotatedExample>& corpus, WorldStore& worlds) {
  std::vector<LabeledFactor> out;
  for (const AnnotatedExample& e : corpus) {
    const GroundingGraph graph = build_grounding_graph(read_parse(e.parse));
    FactorEvaluator& eval = worlds.evaluator(e);
    for (const auto& [c, label] : e.phi) {
      const auto fid = factor_for_constituent(graph, c);
      if (!fid) throw InvalidInput("example " + e.id + ": constituent " + std::to_string(c) + " carries no factor");
      const FactorSpec& f = graph.factors[*fid];
      std::vector<VarValue> args;
      for (int a : f.args) {
        const GroundingVar& v = graph.vars[a];
        auto it = e.groundings.find(v.constituent);
        if (it == e.groundings.end()) break;
        if (const auto* id = std::get_if<std::string>(&it->second))
          args.push_back({v.kind, *id, {}});
        else
          args.push_back(VarValue::sequence(v.kind, std::get<ActionSeq>(it->second)));
      }
      if (args.size() != f.args.size()) continue;
      out.push_back({e.id, f.cls, eval.binary_features(f, args), label});
    }
  }
  return out;
}

std::vector<TrainingExample> training_examples(const std::vector<LabeledFactor>& factors) {
  std::vector<TrainingExample> out;
  out.reserve(factors.size());
  for (const LabeledFactor& f : factors) out.push_back({f.features, f.label});
  return out;
}

// --- phi evaluation -------------------------------------------------------------

PhiRow phi_row(std::string label, const std::vector<std::pair<int, int>>& predicted_actual) {
  PhiRow r;
  r.label = std::move(label);
  for (const auto& [p, a] : predicted_actual) {
    ++r.n;
    if (p && a) ++r.tp;
    if (p && !a) ++r.fp;
    if (!p && !a) ++r.tn;
    if (!p && a) ++r.fn;
  }
  r.precision = r.tp + r.fp ? static_cast<double>(r.tp) / (r.tp + r.fp) : 1.0;
  r.recall = r.tp + r.fn ? static_cast<double>(r.tp) / (r.tp + r.fn) : 1.0;
  r.f_score = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  r.accuracy = r.n ? static_cast<double>(r.tp + r.tn) / r.n : 1.0;
  return r;
}

PhiReport eval_phi(const FeatureWeights& weights, const std::vector<LabeledFactor>& test) {
  if (test.empty()) throw InvalidInput("test set is empty");
  std::map<FactorClass, std::vector<std::pair<int, int>>> by_class;
  std::vector<std::pair<int, int>> all;
  for (const LabeledFactor& f : test) {
    const int pred = loglinear_prob(weights, f.features) >= 0.5 ? 1 : 0;
    by_class[f.cls].emplace_back(pred, f.label);
    all.emplace_back(pred, f.label);
  }
  PhiReport r;
  for (FactorClass c : {FactorClass::NounPhrase, FactorClass::PlacePhrase, FactorClass::PathPhrase,
                        FactorClass::VerbPhrase})
    r.rows.push_back(phi_row(std::string(class_label(c)), by_class[c]));
  r.rows.push_back(phi_row("Overall", all));
  return r;
}

std::string report_table(const PhiReport& r) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-28s %6s %10s %8s %8s %9s\n", "Constituent type", "n", "Precision", "Recall",
                "F-score", "Accuracy");
  out += buf;
  for (const PhiRow& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%-28s %6d %10.3f %8.3f %8.3f %9.3f\n", row.label.c_str(), row.n, row.precision,
                  row.recall, row.f_score, row.accuracy);
    out += buf;
  }
  return out;
}

std::string report_csv(const PhiReport& r) {
  std::string out = "type,n,tp,fp,tn,fn,precision,recall,f_score,accuracy\n";
  char buf[200];
  for (const PhiRow& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%d,%d,%d,%.6f,%.6f,%.6f,%.6f\n", row.label.c_str(), row.n, row.tp, row.fp,
                  row.tn, row.fn, row.precision, row.recall, row.f_score, row.accuracy);
    out += buf;
  }
  return out;
}

// --- route directions ------------------------------------------------------------

std::string directions_to_text(const std::vector<DirectionExample>& corpus) {
  std::string out;
  for (const DirectionExample& d : corpus) {
    OJson j;
    j["id"] = d.id;
    j["text"] = d.text;
    j["map"] = d.map;
    j["start"] = d.start;
    j["goal"] = d.goal;
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<DirectionExample> directions_from_text(const std::string& text) {
  std::vector<DirectionExample> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    try {
      const OJson j = OJson::parse(lines[i]);
      out.push_back({j.at("id").get<std::string>(), j.at("text").get<std::string>(), j.at("map").get<std::string>(),
                     j.at("start").get<std::string>(), j.at("goal").get<std::string>()});
    } catch (const nlohmann::json::exception& ex) {
      throw ParseFormatError(std::string("bad directions record: ") + ex.what(), i + 1);
    }
  }
  return out;
}

std::vector<DirectionExample> load_directions(const std::filesystem::path& path) {
  return directions_from_text(read_text_file(path));
}

void save_directions(const std::vector<DirectionExample>& corpus, const std::filesystem::path& path) {
  write_text_file(path, directions_to_text(corpus));
}

std::string_view to_string(FollowMethod m) {
  switch (m) {
    case FollowMethod::Global: return "global";
    case FollowMethod::Exploring: return "exploring";
    case FollowMethod::Greedy: return "greedy";
    case FollowMethod::LastPhrase: return "last-phrase";
    case FollowMethod::Random: return "random";
  }
  return "?";
}

FollowMethod follow_method_from_string(std::string_view s) {
  for (FollowMethod m : {FollowMethod::Global, FollowMethod::Exploring, FollowMethod::Greedy, FollowMethod::LastPhrase,
                         FollowMethod::Random})
    if (to_string(m) == s) return m;
  throw InvalidInput("unknown method '" + std::string(s) + "'");
}

bool is_local(FollowMethod m) { return m == FollowMethod::Exploring || m == FollowMethod::Greedy; }

DirectionHypothesis follow(FollowMethod m, const FlatCommand& flat, const TopoMap& map, const LandmarkModel& model,
                           const std::string& start, const FollowConfig& config, std::uint64_t seed) {
  switch (m) {
    case FollowMethod::Global: return follow_global(flat, map, model, start, config);
    case FollowMethod::Exploring: return follow_exploring(flat, map, model, start, config);
    case FollowMethod::Greedy: return follow_greedy(flat, map, model, start, config);
    case FollowMethod::LastPhrase: return follow_last_phrase(flat, map, model, start);
    case FollowMethod::Random: return follow_random(map, start, seed);
  }
  throw InvalidInput("unknown method");
}

DirectionsRow eval_directions(FollowMethod m, const std::vector<DirectionExample>& corpus,
                              const std::map<std::string, TopoMap>& maps, const LandmarkModel& model,
                              const FollowConfig& config, std::uint64_t seed) {
  DirectionsRow row;
  row.method = std::string(to_string(m));
  double explored = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const DirectionExample& d = corpus[i];
    auto it = maps.find(d.map);
    if (it == maps.end()) throw InvalidInput("example " + d.id + ": unknown map '" + d.map + "'");
    const TopoMap& map = it->second;
    if (!map.has_node(d.goal)) throw InvalidInput("example " + d.id + ": destination '" + d.goal + "' is off the map");
    const DirectionHypothesis h = follow(m, chunk_directions(d.text), map, model, d.start, config, seed + i);
    ++row.n;
    if (node_distance(map, h.end().node, d.goal) <= kSuccessRadius) ++row.successes;
    if (is_local(m)) explored += exploration_fraction(map, d.start, d.goal, h.visited);
  }
  row.success_rate = row.n ? static_cast<double>(row.successes) / row.n : 0.0;
  if (is_local(m)) row.exploration = row.n ? explored / row.n : 0.0;
  return row;
}

std::string directions_table(const std::vector<DirectionsRow>& rows) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-14s %6s %10s %10s\n", "Method", "n", "% correct", "% explored");
  out += buf;
  for (const DirectionsRow& r : rows) {
    const std::string ex = r.exploration ? std::to_string(std::lround(100.0 * *r.exploration)) + "%" : "-";
    std::snprintf(buf, sizeof buf, "%-14s %6d %9ld%% %10s\n", r.method.c_str(), r.n, std::lround(100.0 * r.success_rate),
                  ex.c_str());
    out += buf;
  }
  return out;
}

std::string directions_csv(const std::vector<DirectionsRow>& rows) {
  std::string out = "method,n,successes,success_rate,exploration\n";
  char buf[160];
  for (const DirectionsRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%.6f,", r.method.c_str(), r.n, r.successes, r.success_rate);
    out += buf;
    if (r.exploration) {
      std::snprintf(buf, sizeof buf, "%.6f", *r.exploration);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace g3
