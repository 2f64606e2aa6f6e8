#pragma once

// Brute-force reference implementations shared by the unit and acceptance tests.

#include <cmath>
#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "g3/corpus.hpp"
#include "g3/directions.hpp"
#include "g3/generator.hpp"
#include "g3/ground.hpp"
#include "g3/verb.hpp"
#include "helpers.hpp"

namespace g3::test {

// --- manipulation worlds ------------------------------------------------------

// Up to four nodes on a 6 m square, one to three objects on distinct nodes.
inline World small_world(std::mt19937_64& rng) {
  const std::vector<NodeSpec> all{{"n0", 0, 0, {}}, {"n1", 6, 0, {}}, {"n2", 6, 6, {}}, {"n3", 0, 6, {}}};
  const int n = 2 + int(rng() % 3);
  std::vector<NodeSpec> nodes(all.begin(), all.begin() + n);
  std::vector<std::pair<std::string, std::string>> links;
  for (int k = 0; k + 1 < n; ++k) links.push_back({nodes[k].id, nodes[k + 1].id});
  if (n == 4 && rng() % 2) links.push_back({"n3", "n0"});

  World w;
  w.map = make_map(nodes, links);
  w.env.bbox = {{-4, -4}, {12, 12}};
  std::vector<int> spots(n);
  for (int k = 0; k < n; ++k) spots[k] = k;
  std::shuffle(spots.begin(), spots.end(), rng);
  const int objects = std::min(n, 1 + int(rng() % 3));
  const std::vector<std::pair<std::string, std::set<std::string>>> kinds{
      {"pallet1", {"pallet", "tire"}}, {"pallet2", {"pallet", "box"}}, {"truck", {"truck"}}};
  std::vector<int> pick{0, 1, 2};
  std::shuffle(pick.begin(), pick.end(), rng);
  for (int k = 0; k < objects; ++k) {
    const auto& [id, tags] = kinds[pick[k]];
    const Vec2 at{nodes[spots[k]].x, nodes[spots[k]].y};
    const bool truck = id == "truck";
    Grounding g = make_static_grounding(id, rect(at + Vec2{0, truck ? 2.0 : 1.5}, truck ? 4.0 : 1.2, truck ? 2.0 : 1.0),
                                        truck ? 1.0 : 0.3, tags);
    g.fixed = truck;
    w.env.objects.push_back(g);
  }
  std::sort(w.env.objects.begin(), w.env.objects.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  const NodeSpec& start = nodes[rng() % n];
  w.env.robot_start.x = start.x;
  w.env.robot_start.y = start.y;
  w.env.validate();
  return w;
}

inline std::string small_command(std::mt19937_64& rng) {
  static const char* commands[] = {"Pick up the tire pallet",      "Put the box pallet on the truck",
                                   "Go to the truck",              "Put the pallet on the truck",
                                   "Go to the pallet on the truck", "Lift the pallet",
                                   "Move the tire pallet to the truck", "the truck"};
  return commands[rng() % 8];
}

struct GroundOracle {
  std::map<int, VarValue> values;
  double score = -std::numeric_limits<double>::infinity();
  long assignments = 0;
};

// Exhaustive argmax over every joint assignment. A path argument of a verb
// phrase shares the verb's action sequence; everything else ranges freely.
inline GroundOracle exhaustive_ground(const GroundingGraph& g, const FactorEvaluator& eval, int horizon) {
  const ManipSpace& space = eval.space();
  std::vector<ActionSeq> seqs;
  ActionSeq cur;
  std::function<void(const ManipState&)> dfs = [&](const ManipState& s) {
    seqs.push_back(cur);
    if (int(cur.size()) == horizon) return;
    for (const ManipAction& a : space.legal_actions(s)) {
      cur.push_back(a);
      dfs(space.apply(s, a));
      cur.pop_back();
    }
  };
  dfs(space.initial_state());

  std::map<int, int> tied;  // path var -> event var
  for (const FactorSpec& f : g.factors) {
    if (f.args.empty() || g.vars[f.args[0]].kind != VarKind::Event) continue;
    for (std::size_t k = 1; k < f.args.size(); ++k)
      if (g.vars[f.args[k]].kind == VarKind::Path && !tied.contains(f.args[k])) {
        tied[f.args[k]] = f.args[0];
        break;
      }
  }

  auto domain = [&](VarKind kind) {
    std::vector<VarValue> out;
    if (kind == VarKind::Object)
      for (const Grounding& o : eval.env().objects) out.push_back(VarValue::object(o.id));
    if (kind == VarKind::Place)
      for (const Grounding& p : space.places()) out.push_back(VarValue::place(p.id));
    if (kind == VarKind::Event || kind == VarKind::Path)
      for (const ActionSeq& s : seqs) out.push_back(VarValue::sequence(kind, s));
    return out;
  };

  auto length = [](const std::map<int, VarValue>& vals) {
    std::set<std::string> seen;
    int n = 0;
    for (const auto& [id, v] : vals)
      if (v.is_sequence() && seen.insert(v.key()).second) n += int(v.seq.size());
    return n;
  };

  GroundOracle best;
  std::map<int, VarValue> vals;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == g.vars.size()) {
      for (const auto& [path, event] : tied) vals[path] = VarValue::sequence(VarKind::Path, vals.at(event).seq);
      double score = 0.0;
      for (const FactorSpec& f : g.factors) {
        std::vector<VarValue> args;
        for (int v : f.args) args.push_back(vals.at(v));
        score += eval.log_prob(f, args);
      }
      ++best.assignments;
      bool take = best.values.empty() || score > best.score;
      if (!take && score == best.score) {
        const int la = length(vals), lb = length(best.values);
        if (la != lb) {
          take = la < lb;
        } else {
          for (const auto& [id, v] : vals) {
            const std::string ka = v.key(), kb = best.values.at(id).key();
            if (ka != kb) {
              take = ka < kb;
              break;
            }
          }
        }
      }
      if (take) {
        best.values = vals;
        best.score = score;
      }
      return;
    }
    const GroundingVar& v = g.vars[i];
    if (tied.contains(v.id)) return rec(i + 1);
    for (const VarValue& x : domain(v.kind)) {
      vals[v.id] = x;
      rec(i + 1);
    }
  };
  rec(0);
  return best;
}

// Weights learned from a small generated forklift corpus.
inline FeatureWeights yard_weights(int scenarios, int commands, std::uint64_t seed = 3) {
  YardConfig cfg;
  cfg.scenarios = scenarios;
  cfg.commands_per_scenario = commands;
  cfg.seed = seed;
  const GeneratedCorpus gen = generate_yard_corpus(cfg);
  WorldStore store(".");
  register_worlds(gen, store);
  const NegativeResult neg = generate_negatives(gen.examples, store, seed, 3, cfg.horizon);
  return train(training_examples(labeled_factors(neg.corpus, store)), TrainConfig{}).weights;
}

// --- route directions --------------------------------------------------------

// Random connected map on a 3x3 grid (12 m spacing), optionally with a second
// level joined by vertical edges.
inline TopoMap random_route_map(std::mt19937_64& rng, int max_nodes, bool two_levels) {
  static const char* labels[] = {"fridge", "stove", "computer", "desk", "couch", "door", "window", "sign"};
  std::vector<int> cells{0, 1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<NodeSpec> nodes;
  std::vector<std::pair<std::string, std::string>> links;
  const int per_level = two_levels ? std::max(2, max_nodes / 2) : max_nodes;
  for (int level = 0; level < (two_levels ? 2 : 1); ++level) {
    // Grow a connected cell set from a random seed cell.
    std::set<int> chosen{int(rng() % 9)};
    std::vector<std::pair<int, int>> tree;
    const int want = 2 + int(rng() % (per_level - 1));
    while (int(chosen.size()) < want) {
      std::vector<std::pair<int, int>> frontier;
      for (int c : chosen)
        for (int d : {c - 3, c + 3, (c % 3) ? c - 1 : -1, (c % 3 != 2) ? c + 1 : -1})
          if (d >= 0 && d < 9 && !chosen.contains(d)) frontier.push_back({c, d});
      const auto e = frontier[rng() % frontier.size()];
      chosen.insert(e.second);
      tree.push_back(e);
    }
    auto id = [&](int c) { return "L" + std::to_string(level) + "c" + std::to_string(c); };
    for (int c : chosen) {
      std::set<std::string> tags;
      for (int k = 0; k < 2; ++k)
        if (rng() % 2) tags.insert(labels[rng() % 8]);
      nodes.push_back({id(c), 12.0 * (c % 3), 12.0 * (c / 3), tags, level});
    }
    for (const auto& [a, b] : tree) links.push_back({id(a), id(b)});
    // Occasional extra edge to create cycles.
    for (int c : chosen)
      if (c % 3 != 2 && chosen.contains(c + 1) && rng() % 3 == 0) {
        const std::pair<std::string, std::string> e{id(c), id(c + 1)};
        if (std::find(links.begin(), links.end(), e) == links.end() &&
            std::find(links.begin(), links.end(), std::make_pair(e.second, e.first)) == links.end())
          links.push_back(e);
      }
  }
  if (two_levels) {
    // One stairwell between a node on each level at the same cell, or the first two.
    std::string a, b;
    for (const NodeSpec& x : nodes)
      for (const NodeSpec& y : nodes)
        if (x.level == 0 && y.level == 1 && x.x == y.x && x.y == y.y && a.empty()) {
          a = x.id;
          b = y.id;
        }
    if (a.empty()) {
      for (NodeSpec& y : nodes)
        if (y.level == 1 && a.empty()) {
          for (const NodeSpec& x : nodes)
            if (x.level == 0) {
              a = x.id;
              break;
            }
          b = y.id;
        }
    }
    links.push_back({a, b});
  }
  return make_map(nodes, links);
}

inline FlatCommand random_flat(std::mt19937_64& rng, int max_segments, bool vertical) {
  static const std::vector<std::vector<std::string>> verbs{
      {"go"}, {"turn", "left"}, {"turn", "right"}, {"go", "straight"}, {"walk", "past"}};
  static const std::vector<std::vector<std::string>> landmarks{
      {"the", "kitchen"}, {"the", "office"}, {"the", "lobby"}, {"the", "kitchen", "table"}};
  FlatCommand f;
  const int s = 1 + int(rng() % max_segments);
  for (int k = 0; k < s; ++k) {
    DirectionSegment seg;
    seg.verb_words = verbs[rng() % verbs.size()];
    if (vertical && rng() % 3 == 0) seg.verb_words = rng() % 2 ? std::vector<std::string>{"go", "up"}
                                                                : std::vector<std::string>{"go", "down"};
    if (rng() % 4 != 0) seg.landmark_words = landmarks[rng() % landmarks.size()];
    f.segments.push_back(seg);
  }
  return f;
}

struct ViterbiOracle {
  double best = -std::numeric_limits<double>::infinity();
  // Every stage-endpoint sequence reaching the best score.
  std::vector<std::vector<DirectionState>> optimal;
  // Best prefix score per stage and end state.
  std::vector<std::map<std::pair<std::string, int>, double>> prefix;
};

// Enumerates every sequence of stage endpoints. A stage may stay, rotate in
// place, or end at another node reachable from the current one, arriving over
// one of its incoming edges (any heading after a vertical edge).
inline ViterbiOracle brute_force_follow(const FlatCommand& flat, const TopoMap& map, const LandmarkModel& model,
                                        const std::string& start) {
  const std::size_t n = map.size();
  std::vector<std::set<std::size_t>> reach(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> stack{s};
    reach[s].insert(s);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (const TopoEdge& e : map.out_edges(u)) {
        const std::size_t v = map.index_of(e.to);
        if (reach[s].insert(v).second) stack.push_back(v);
      }
    }
  }
  auto allowed = [&](const DirectionState& a, const DirectionState& b) {
    if (a.node == b.node) return true;
    const std::size_t from = map.index_of(a.node);
    if (!reach[from].contains(map.index_of(b.node))) return false;
    for (const TopoEdge& e : map.edges())
      if (e.to == b.node && reach[from].contains(map.index_of(e.from)) && (!is_horizontal(e.dir) || e.dir == b.heading))
        return true;
    return false;
  };
  auto step = [&](const DirectionSegment& seg, const DirectionState& a, const DirectionState& b) {
    const double turn = heading_angle(b.heading) - heading_angle(a.heading);
    double s = std::log(verb_prob(seg.verb_words, turn, map.node(a.node).z(), map.node(b.node).z()));
    if (seg.landmark_words)
      s += std::log(salient_landmark_prob(model, *seg.landmark_words, map.node(b.node).visible_tags).first);
    return s;
  };

  std::vector<DirectionState> states;
  for (const TopoNode& v : map.nodes())
    for (Dir h : kHeadings) states.push_back({v.id, h});

  ViterbiOracle out;
  out.prefix.resize(flat.segments.size());
  std::vector<DirectionState> ends;
  std::function<void(const DirectionState&, std::size_t, double)> rec = [&](const DirectionState& at, std::size_t k,
                                                                           double score) {
    if (k == flat.segments.size()) {
      if (score > out.best + 1e-12) {
        out.best = score;
        out.optimal = {ends};
      } else if (std::abs(score - out.best) <= 1e-12) {
        out.optimal.push_back(ends);
      }
      return;
    }
    for (const DirectionState& b : states) {
      if (!allowed(at, b)) continue;
      const double sc = score + step(flat.segments[k], at, b);
      auto key = std::make_pair(b.node, int(b.heading));
      auto it = out.prefix[k].find(key);
      if (it == out.prefix[k].end() || sc > it->second) out.prefix[k][key] = sc;
      ends.push_back(b);
      rec(b, k + 1, sc);
      ends.pop_back();
    }
  };
  for (Dir h : kHeadings) rec({start, h}, 0, 0.0);
  return out;
}

}  // namespace g3::test
