#include "g3/generator.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "g3/directions.hpp"
#include "g3/error.hpp"
#include "g3/ground.hpp"
#include "g3/world_io.hpp"

namespace g3 {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }
bool chance(std::mt19937_64& rng, double p) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; }

template <class T>
const T& choose(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[pick(rng, v.size())];
}

std::vector<Vec2> rect(Vec2 c, double w, double h) {
  return {{c.x - w / 2, c.y - h / 2}, {c.x + w / 2, c.y - h / 2}, {c.x + w / 2, c.y + h / 2}, {c.x - w / 2, c.y + h / 2}};
}

/// 4-connected grid with bidirectional edges where `keep(a, b)` holds.
TopoMap grid_map(int rows, int cols, double spacing, const std::function<bool(int, int)>& keep,
                 const std::vector<std::set<std::string>>& tags) {
  std::vector<TopoNode> nodes;
  std::vector<TopoEdge> edges;
  auto id = [&](int k) { return "n" + std::to_string(k); };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      TopoNode n;
      n.id = id(r * cols + c);
      n.pos = {c * spacing, r * spacing};
      if (!tags.empty()) n.visible_tags = tags[r * cols + c];
      nodes.push_back(std::move(n));
    }
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const int k = r * cols + c;
      if (c + 1 < cols && keep(k, k + 1)) {
        edges.push_back({id(k), Dir::East, id(k + 1)});
        edges.push_back({id(k + 1), Dir::West, id(k)});
      }
      if (r + 1 < rows && keep(k, k + cols)) {
        edges.push_back({id(k), Dir::North, id(k + cols)});
        edges.push_back({id(k + cols), Dir::South, id(k)});
      }
    }
  return TopoMap(std::move(nodes), std::move(edges));
}

std::vector<std::string> lower_words(const std::vector<std::string>& words) {
  std::vector<std::string> out;
  for (const auto& w : words) out.push_back(lowercase(w));
  return out;
}

/// Object whose tags cover the most words; none on a tie or no overlap.
std::optional<std::string> match_object(const EnvironmentModel& env, const std::vector<std::string>& words) {
  int best = 0;
  std::optional<std::string> out;
  bool tie = false;
  for (const Grounding& o : env.objects) {
    int s = 0;
    for (const auto& w : words) s += o.tags.contains(w);
    if (s > best) {
      best = s;
      out = o.id;
      tie = false;
    } else if (s == best && s > 0) {
      tie = true;
    }
  }
  if (tie) return std::nullopt;
  return out;
}

const std::set<std::string> kPickVerbs{"pick", "lift", "grab", "raise"};

}  // namespace

World make_yard(std::mt19937_64& rng) {
  constexpr double kSpacing = 6.0;
  World w;
  w.map = grid_map(3, 3, kSpacing, [](int, int) { return true; }, {});
  std::vector<int> cells{0, 1, 2, 3, 4, 5, 6, 7, 8};
  for (std::size_t i = cells.size() - 1; i > 0; --i) std::swap(cells[i], cells[pick(rng, i + 1)]);
  auto at = [&](int k) { return Vec2{(k % 3) * kSpacing, (k / 3) * kSpacing}; };

  const std::string vehicle = chance(rng, 0.5) ? "truck" : "trailer";
  Grounding tire = make_static_grounding("pallet1", rect(at(cells[0]) + Vec2{0.0, 1.5}, 1.2, 1.0), 0.3, {"pallet", "tire"});
  Grounding box = make_static_grounding("pallet2", rect(at(cells[1]) + Vec2{0.0, 1.5}, 1.2, 1.0), 0.3, {"pallet", "box"});
  Grounding veh = make_static_grounding(vehicle, rect(at(cells[2]) + Vec2{0.0, 2.0}, 4.0, 2.0), 1.0, {vehicle});
  veh.fixed = true;
  if (chance(rng, 0.5)) std::swap(tire.id, box.id);
  w.env.objects = {tire, box, veh};
  std::sort(w.env.objects.begin(), w.env.objects.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  const Vec2 s = at(cells[3]);
  w.env.robot_start.x = s.x;
  w.env.robot_start.y = s.y;
  w.env.bbox = {{-4.0, -4.0}, {16.0, 16.0}};
  w.env.validate();
  return w;
}

bool annotate_command(const std::string& command, const World& world, int horizon, AnnotatedExample& out) {
  const ParseTree tree = parse_imperative(command);
  const GroundingGraph graph = build_grounding_graph(tree);
  const EnvironmentModel env = with_generated_places(world.env);
  const ManipSpace space(env, world.map);
  out.command = command;
  out.parse = serialize(tree);
  out.groundings.clear();
  out.phi.clear();

  std::map<int, std::string> ids;  // var id -> object or place id
  for (const GroundingVar& v : graph.vars) {
    if (v.kind != VarKind::Object && v.kind != VarKind::Place) continue;
    const auto obj = match_object(env, lower_words(graph.tree.at(v.constituent).words));
    if (!obj) return false;
    ids[v.id] = v.kind == VarKind::Object ? *obj : *obj + "_top";
    if (v.kind == VarKind::Place && !env.find(ids[v.id])) return false;
  }

  // Goal test for the event, from the verb and the kinds of its arguments.
  std::function<bool(const ManipState&)> goal;
  for (const FactorSpec& f : graph.factors) {
    if (graph.vars[f.args.front()].kind != VarKind::Event) continue;
    std::optional<std::string> object, place, target;
    for (std::size_t k = 1; k < f.args.size(); ++k) {
      const GroundingVar& v = graph.vars[f.args[k]];
      if (v.kind == VarKind::Object) object = ids[v.id];
      if (v.kind == VarKind::Place) place = ids[v.id];
      if (v.kind == VarKind::Path)
        for (const FactorSpec& g : graph.factors)
          if (g.args.front() == v.id && g.args.size() > 1) target = ids[g.args[1]];
    }
    const std::string verb = f.words.empty() ? "" : f.words.front();
    if (object && place)
      goal = [o = *object, p = *place](const ManipState& s) {
        auto it = s.placements.find(o);
        return !s.carried && it != s.placements.end() && it->second == p;
      };
    else if (object && kPickVerbs.contains(verb))
      goal = [o = *object](const ManipState& s) { return s.carried && *s.carried == o; };
    else if (target)
      goal = [&space, t = *target](const ManipState& s) {
        auto it = s.placements.find(t);
        return it != s.placements.end() && space.location_node(it->second) == s.robot_node;
      };
    else
      return false;
  }

  ActionSeq plan;
  if (goal) {
    bool found = false;
    for (const ActionSeq& seq : shortest_sequences(space, horizon))
      if (goal(space.rollout(seq).back())) {
        plan = seq;
        found = true;
        break;
      }
    if (!found) return false;
  }
  for (const GroundingVar& v : graph.vars) {
    if (v.kind == VarKind::Event || v.kind == VarKind::Path)
      out.groundings[v.constituent] = plan;
    else
      out.groundings[v.constituent] = ids[v.id];
  }
  for (const FactorSpec& f : graph.factors) out.phi[f.constituent] = 1;
  return true;
}

GeneratedCorpus generate_yard_corpus(const YardConfig& config) {
  if (config.scenarios < 1 || config.commands_per_scenario < 1) throw InvalidInput("yard corpus must not be empty");
  std::mt19937_64 rng(config.seed);
  GeneratedCorpus g;
  for (int s = 0; s < config.scenarios; ++s) {
    char sid[16];
    std::snprintf(sid, sizeof sid, "yard%02d", s);
    World w = make_yard(rng);
    std::string vehicle;
    for (const Grounding& o : w.env.objects)
      if (o.fixed) vehicle = o.id;
    int made = 0;
    for (int attempt = 0; made < config.commands_per_scenario && attempt < 20 * config.commands_per_scenario;
         ++attempt) {
      const std::string kind = chance(rng, 0.5) ? "tire" : "box";
      std::string cmd;
      switch (pick(rng, 4)) {
        case 0:
          cmd = choose(rng, std::vector<std::string>{"Put", "Place", "Set"}) + " the " + kind + " pallet on the " + vehicle;
          break;
        case 1:
          cmd = choose(rng, std::vector<std::string>{"Pick up", "Lift", "Grab"}) + " the " + kind + " pallet";
          break;
        case 2:
          cmd = choose(rng, std::vector<std::string>{"Go", "Drive"}) + " to the " + vehicle;
          break;
        default:
          cmd = choose(rng, std::vector<std::string>{"Go", "Drive"}) + " to the " + kind + " pallet";
          break;
      }
      AnnotatedExample e;
      if (!annotate_command(cmd, w, config.horizon, e)) continue;
      e.id = std::string(sid) + "-" + std::to_string(made);
      e.scenario = sid;
      e.env = "envs/" + std::string(sid) + ".json";
      e.map = "maps/" + std::string(sid) + ".json";
      g.examples.push_back(std::move(e));
      ++made;
    }
    g.worlds.emplace(sid, std::move(w));
  }
  return g;
}

void register_worlds(const GeneratedCorpus& g, WorldStore& store) {
  for (const auto& [sid, w] : g.worlds) store.add("envs/" + sid + ".json", "maps/" + sid + ".json", w);
}

void save_generated(const GeneratedCorpus& g, const std::filesystem::path& dir) {
  for (const auto& [sid, w] : g.worlds) {
    save_environment(w.env, dir / "envs" / (sid + ".json"));
    save_map(w.map, dir / "maps" / (sid + ".json"));
  }
  save_corpus(g.examples, dir / "corpus.jsonl");
}

// --- route directions -------------------------------------------------------------

namespace {

struct Region {
  std::string word;
  std::vector<std::string> labels;
};

const std::vector<Region> kRegions{{"kitchen", {"fridge", "stove"}},
                                   {"office", {"computer", "desk"}},
                                   {"lobby", {"couch", "reception"}},
                                   {"lab", {"bench", "microscope"}},
                                   {"lounge", {"armchair", "television"}}};
const std::vector<std::string> kGeneric{"door", "light", "sign", "trash", "window"};

}  // namespace

CooccurrenceCounts route_counts() {
  CooccurrenceCounts c;
  c.total_captions = 1000;
  for (const Region& r : kRegions) {
    c.word_count[r.word] = 50;
    for (const std::string& l : r.labels) c.word_count[l] = 60;
  }
  for (const std::string& g : kGeneric) c.word_count[g] = 249;
  for (const Region& r : kRegions) {
    for (const Region& other : kRegions)
      for (const std::string& l : other.labels) c.pair_count[l][r.word] = &other == &r ? 48 : 1;
    for (const std::string& g : kGeneric) c.pair_count[g][r.word] = 12;
  }
  c.validate();
  return c;
}

RouteSuite generate_route_suite(const RouteConfig& config) {
  if (config.instances < 1) throw InvalidInput("route suite must not be empty");
  std::mt19937_64 rng(config.seed);
  RouteSuite suite;
  suite.counts = route_counts();
  for (int inst = 0; inst < config.instances; ++inst) {
    const int rows = 3 + static_cast<int>(pick(rng, 2));
    const int cols = 3 + static_cast<int>(pick(rng, 2));
    const int n = rows * cols;

    // Random spanning tree by depth-first search, plus a few extra edges.
    std::set<std::pair<int, int>> kept;
    std::vector<bool> seen(n, false);
    std::vector<int> stack{static_cast<int>(pick(rng, n))};
    seen[stack.back()] = true;
    while (!stack.empty()) {
      const int k = stack.back();
      std::vector<int> next;
      const int r = k / cols, c = k % cols;
      if (c > 0 && !seen[k - 1]) next.push_back(k - 1);
      if (c + 1 < cols && !seen[k + 1]) next.push_back(k + 1);
      if (r > 0 && !seen[k - cols]) next.push_back(k - cols);
      if (r + 1 < rows && !seen[k + cols]) next.push_back(k + cols);
      if (next.empty()) {
        stack.pop_back();
        continue;
      }
      const int m = choose(rng, next);
      kept.insert({std::min(k, m), std::max(k, m)});
      seen[m] = true;
      stack.push_back(m);
    }
    for (int k = 0; k < n; ++k) {
      if (k % cols + 1 < cols && chance(rng, 0.15)) kept.insert({k, k + 1});
      if (k / cols + 1 < rows && chance(rng, 0.15)) kept.insert({k, k + cols});
    }

    std::vector<int> order(n);
    for (int k = 0; k < n; ++k) order[k] = k;
    for (int i = n - 1; i > 0; --i) std::swap(order[i], order[pick(rng, i + 1)]);
    const int start = order[0];
    std::vector<std::size_t> regions_idx{0, 1, 2, 3, 4};
    for (std::size_t i = regions_idx.size() - 1; i > 0; --i) std::swap(regions_idx[i], regions_idx[pick(rng, i + 1)]);
    // Three region types; the goal type may appear twice, so the phrases
    // before the last one are needed to tell the instances apart.
    std::vector<std::pair<int, const Region*>> placed;
    for (int r = 0; r < 3; ++r) placed.emplace_back(order[1 + r], &kRegions[regions_idx[r]]);
    const Region* goal_region = placed[pick(rng, placed.size())].second;
    if (chance(rng, 0.6)) placed.emplace_back(order[4], goal_region);

    std::vector<std::set<std::string>> tags(n);
    for (int k = 0; k < n; ++k)
      for (const std::string& g : kGeneric)
        if (chance(rng, 0.3)) tags[k].insert(g);
    auto neighbors = [&](int k) {
      std::vector<int> out;
      for (const auto& [a, b] : kept) {
        if (a == k) out.push_back(b);
        if (b == k) out.push_back(a);
      }
      return out;
    };
    for (const auto& [k, reg] : placed) {
      tags[k].insert(reg->labels.begin(), reg->labels.end());
      for (int m : neighbors(k))
        if (chance(rng, 0.3)) tags[m].insert(choose(rng, reg->labels));
    }

    const std::string ref = "maps/route" + std::to_string(inst) + ".json";
    TopoMap map = grid_map(rows, cols, 12.0, [&](int a, int b) { return kept.contains({a, b}); }, tags);
    const RouteTable routes(map);

    const Region* via = nullptr;
    int via_node = start;
    std::string text;
    const std::size_t form = pick(rng, 4);
    if (form == 2)
      for (const auto& [k, reg] : placed)
        if (reg != goal_region) {
          via = reg;
          via_node = k;
          break;
        }
    switch (form) {
      case 0: text = "Go to the " + goal_region->word + "."; break;
      case 1:
        text = std::string("Turn ") + (chance(rng, 0.5) ? "left" : "right") + " and go to the " + goal_region->word + ".";
        break;
      case 2: text = "Go to the " + via->word + " and then go to the " + goal_region->word + "."; break;
      default: text = "Go straight and then go to the " + goal_region->word + "."; break;
    }
    // The intended instance is the one closest to the previous waypoint;
    // equidistant instances leave the command ambiguous, so keep the first.
    int goal = -1;
    double best = 0.0;
    for (const auto& [k, reg] : placed) {
      if (reg != goal_region) continue;
      const double d = routes.distance(static_cast<std::size_t>(via_node), static_cast<std::size_t>(k));
      if (goal < 0 || d < best) {
        goal = k;
        best = d;
      }
    }
    suite.directions.push_back({"route" + std::to_string(inst), text, ref, "n" + std::to_string(start),
                                "n" + std::to_string(goal)});
    suite.maps.emplace(ref, std::move(map));
  }
  return suite;
}

void save_route_suite(const RouteSuite& s, const std::filesystem::path& dir) {
  for (const auto& [ref, map] : s.maps) save_map(map, dir / ref);
  save_directions(s.directions, dir / "directions.jsonl");
  save_counts(s.counts, dir / "counts.json");
}

std::map<std::string, TopoMap> load_route_maps(const std::vector<DirectionExample>& directions,
                                               const std::filesystem::path& base) {
  std::map<std::string, TopoMap> out;
  for (const DirectionExample& d : directions)
    if (!out.contains(d.map)) out.emplace(d.map, load_map(base / d.map));
  return out;
}

}  // namespace g3
