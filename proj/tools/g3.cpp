#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "g3/corpus.hpp"
#include "g3/error.hpp"
#include "g3/generator.hpp"
#include "g3/ground.hpp"
#include "g3/heatmap.hpp"
#include "g3/world_io.hpp"

namespace fs = std::filesystem;
using namespace g3;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2 };

struct Options {
  std::string env, map, corpus, weights, counts, directions, out, parse_file, command, start, goal, landmark;
  std::string method = "global";
  std::string beam, kind = "yard";
  std::uint64_t seed = 1;
  int beam_np = 10, beam_vp = 5, horizon = 6, bins = 6, max_iter = 500;
  int scenarios = 12, commands = 8, instances = 60, negatives = 0;
  double l2 = 0.01, threshold = 0.05, resolution = 0.5, split_ratio = 0.0;
  std::vector<std::string> words{"to"};
};

std::optional<int> parse_beam(const std::string& s, int fallback, bool given) {
  if (!given) return fallback;
  if (s == "inf" || s == "infinity") return std::nullopt;
  const int b = std::stoi(s);
  if (b < 1) throw InvalidInput("beam width must be positive or 'inf'");
  return b;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw CLI::RequiredError(flag);
}

std::vector<AnnotatedExample> select_split(const std::vector<AnnotatedExample>& corpus, const Options& o, bool train) {
  if (o.split_ratio == 0.0) return corpus;
  auto [tr, te] = split(corpus, o.split_ratio, o.seed);
  return train ? tr : te;
}

int cmd_train(const Options& o) {
  require(o.corpus, "--corpus");
  require(o.out, "--out");
  const auto corpus = select_split(load_corpus(o.corpus), o, true);
  WorldStore worlds(fs::path(o.corpus).parent_path());
  TrainConfig cfg;
  cfg.l2_lambda = o.l2;
  cfg.max_iterations = o.max_iter;
  cfg.bins.distance_bins = o.bins;
  cfg.seed = o.seed;
  cfg.on_iteration = [](int it, double nll) { std::printf("iter %d nll %.9f\n", it, nll); };
  const TrainResult r = train(training_examples(labeled_factors(corpus, worlds)), cfg);
  save_weights(r.weights, o.out);
  std::printf("objective %.9f\ngradient_max_norm %.3e\niterations %d\nfeatures %zu\n", r.objective,
              r.gradient_max_norm, r.iterations, r.weights.weights.size());
  if (!r.converged) {
    std::fprintf(stderr, "training did not converge: gradient norm %.3e after %d iterations (%s)\n",
                 r.gradient_max_norm, r.iterations, r.message.c_str());
    return kFailure;
  }
  return kOk;
}

int cmd_ground(const Options& o, bool beam_given) {
  require(o.env, "--env");
  require(o.map, "--map");
  require(o.weights, "--weights");
  if (o.command.empty() == o.parse_file.empty()) throw CLI::ValidationError("ground", "give exactly one of --command or --parse");
  const EnvironmentModel env = load_environment(o.env);
  const TopoMap map = load_map(o.map);
  const ParseTree tree = o.parse_file.empty() ? parse_imperative(o.command) : read_parse(read_text_file(o.parse_file));
  const GroundingGraph graph = build_grounding_graph(tree);
  FactorEvaluator eval(env, map, load_weights(o.weights));
  SearchConfig sc;
  sc.beam_np = parse_beam(o.beam, o.beam_np, beam_given);
  sc.beam_vp = parse_beam(o.beam, o.beam_vp, beam_given);
  sc.horizon = o.horizon;
  std::cout << "parse " << serialize(tree) << "\n" << assignment_report(graph, ground_command(graph, eval, sc));
  return kOk;
}

int cmd_follow(const Options& o) {
  require(o.counts, "--counts");
  const CountsLandmarkModel model(load_counts(o.counts));
  const FollowMethod m = follow_method_from_string(o.method);
  FollowConfig cfg;
  cfg.threshold = o.threshold;
  std::vector<DirectionExample> items;
  std::map<std::string, TopoMap> maps;
  if (!o.directions.empty()) {
    // Each example names its own map; --map overrides them all.
    items = load_directions(o.directions);
    if (o.map.empty()) {
      maps = load_route_maps(items, fs::path(o.directions).parent_path());
    } else {
      const TopoMap shared = load_map(o.map);
      for (const auto& d : items) maps[d.map] = shared;
    }
  } else {
    require(o.map, "--map");
    require(o.command, "--command");
    require(o.start, "--start");
    items.push_back({"command", o.command, o.map, o.start, o.goal});
    maps[o.map] = load_map(o.map);
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    const DirectionExample& d = items[i];
    const TopoMap& map = maps.at(d.map);
    const FlatCommand flat = chunk_directions(d.text);
    const DirectionHypothesis h = follow(m, flat, map, model, d.start, cfg, o.seed + i);
    std::cout << "example " << d.id << "\nsegments " << to_string(flat) << "\n" << hypothesis_report(h);
    if (!d.goal.empty()) {
      if (!map.has_node(d.goal)) throw InvalidInput("destination '" + d.goal + "' is off the map");
      std::cout << "success " << (node_distance(map, h.end().node, d.goal) <= kSuccessRadius ? 1 : 0) << "\n";
      if (is_local(m)) std::printf("explored %.6f\n", exploration_fraction(map, d.start, d.goal, h.visited));
    }
  }
  return kOk;
}

int cmd_heatmap(const Options& o) {
  require(o.env, "--env");
  require(o.weights, "--weights");
  require(o.landmark, "--landmark");
  require(o.out, "--out");
  const EnvironmentModel env = load_environment(o.env);
  HeatmapConfig hc;
  hc.resolution = o.resolution;
  const Heatmap h = heatmap(o.words, env.at(o.landmark), env, load_weights(o.weights), hc);
  write_text_file(o.out + ".csv", heatmap_csv(h));
  write_text_file(o.out + ".pgm", heatmap_pgm(h));
  const Vec2 p = h.argmax_point();
  std::printf("grid %d x %d\nargmax %.3f %.3f p %.6f\n", h.width, h.height, p.x, p.y, h.prob[h.argmax]);
  return kOk;
}

int cmd_eval(const Options& o) {
  if (!o.directions.empty()) {
    require(o.counts, "--counts");
    const auto items = load_directions(o.directions);
    const auto maps = load_route_maps(items, fs::path(o.directions).parent_path());
    const CountsLandmarkModel model(load_counts(o.counts));
    FollowConfig cfg;
    cfg.threshold = o.threshold;
    std::vector<DirectionsRow> rows;
    for (FollowMethod m : {FollowMethod::Global, FollowMethod::Exploring, FollowMethod::Greedy,
                           FollowMethod::LastPhrase, FollowMethod::Random})
      rows.push_back(eval_directions(m, items, maps, model, cfg, o.seed));
    std::cout << directions_table(rows);
    if (!o.out.empty()) write_text_file(o.out, directions_csv(rows));
    return kOk;
  }
  require(o.corpus, "--corpus");
  require(o.weights, "--weights");
  const auto corpus = select_split(load_corpus(o.corpus), o, false);
  WorldStore worlds(fs::path(o.corpus).parent_path());
  const PhiReport r = eval_phi(load_weights(o.weights), labeled_factors(corpus, worlds));
  std::cout << report_table(r);
  if (!o.out.empty()) write_text_file(o.out, report_csv(r));
  return kOk;
}

int cmd_gen(const Options& o) {
  require(o.out, "--out");
  const fs::path dir = o.out;
  if (o.kind == "yard") {
    YardConfig yc;
    yc.scenarios = o.scenarios;
    yc.commands_per_scenario = o.commands;
    yc.horizon = o.horizon;
    yc.seed = o.seed;
    GeneratedCorpus g = generate_yard_corpus(yc);
    if (o.negatives > 0) {
      WorldStore store(dir);
      register_worlds(g, store);
      NegativeResult nr = generate_negatives(g.examples, store, o.seed, o.negatives, o.horizon);
      for (const std::string& w : nr.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
      std::printf("negatives %d relabeled %d\n", nr.candidates, nr.relabeled);
      g.examples = std::move(nr.corpus);
    }
    save_generated(g, dir);
    std::printf("scenarios %zu examples %zu\n", g.worlds.size(), g.examples.size());
    return kOk;
  }
  if (o.kind == "routes") {
    RouteConfig rc;
    rc.instances = o.instances;
    rc.seed = o.seed;
    const RouteSuite s = generate_route_suite(rc);
    save_route_suite(s, dir);
    std::printf("maps %zu directions %zu\n", s.maps.size(), s.directions.size());
    return kOk;
  }
  throw CLI::ValidationError("--kind", "expected yard or routes");
}

void list_features() {
  for (const FeatureInfo& f : feature_registry()) std::printf("%s\t%d\t%s\n", f.name.c_str(), f.arity, f.description.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grounding-graph command interpreter"};
  app.set_config("--config", "", "Config file (TOML/INI); flags override it");
  Options o;
  bool list = false;
  app.add_flag("--list-features", list, "Print the geometric feature catalog");
  app.add_option("--seed", o.seed, "Random seed")->envname("G3_SEED");
  app.require_subcommand(0, 1);

  auto* train = app.add_subcommand("train", "Train factor weights from an annotated corpus");
  auto* ground = app.add_subcommand("ground", "Ground a command in an environment");
  auto* fol = app.add_subcommand("follow", "Follow route directions on a topological map");
  auto* heat = app.add_subcommand("heatmap", "Path-relation probability grid around a landmark");
  auto* eval = app.add_subcommand("eval", "Phi report for a corpus, or success report for directions");
  auto* gen = app.add_subcommand("gen", "Generate synthetic worlds and corpora");
  for (CLI::App* s : {train, ground, fol, heat, eval, gen}) {
    s->add_option("--seed", o.seed, "Random seed")->envname("G3_SEED");
    s->add_option("--out", o.out, "Output file or directory");
  }
  for (CLI::App* s : {train, eval}) {
    s->add_option("--corpus", o.corpus, "Corpus (JSON lines)");
    s->add_option("--split", o.split_ratio, "Use the train/test side of a scenario split with this ratio");
  }
  for (CLI::App* s : {ground, heat}) s->add_option("--env", o.env, "Environment file");
  for (CLI::App* s : {ground, fol}) s->add_option("--map", o.map, "Topological map file");
  for (CLI::App* s : {ground, heat, eval}) s->add_option("--weights", o.weights, "Weights file");
  for (CLI::App* s : {fol, eval}) {
    s->add_option("--counts", o.counts, "Co-occurrence counts file");
    s->add_option("--directions", o.directions, "Directions corpus (JSON lines)");
    s->add_option("--threshold", o.threshold, "Exploring threshold")->check(CLI::Range(0.0, 1.0));
  }
  for (CLI::App* s : {ground, gen}) s->add_option("--horizon", o.horizon, "Action horizon")->check(CLI::PositiveNumber);
  train->add_option("--l2", o.l2, "L2 regularization strength")->check(CLI::NonNegativeNumber);
  train->add_option("--bins", o.bins, "Distance bins")->check(CLI::PositiveNumber);
  train->add_option("--max-iter", o.max_iter, "Optimizer iterations")->check(CLI::PositiveNumber);
  ground->add_option("--command", o.command, "Command text");
  ground->add_option("--parse", o.parse_file, "File holding a bracketed parse");
  ground->add_option("--beam-np", o.beam_np, "Beam for noun and place phrases")->check(CLI::PositiveNumber);
  ground->add_option("--beam-vp", o.beam_vp, "Beam for path and verb phrases")->check(CLI::PositiveNumber);
  auto* beam = ground->add_option("--beam", o.beam, "Both beams (integer or 'inf')");
  fol->add_option("--method", o.method, "global, exploring, greedy, last-phrase or random");
  fol->add_option("--command", o.command, "Direction text");
  fol->add_option("--start", o.start, "Start node");
  fol->add_option("--goal", o.goal, "True destination node");
  heat->add_option("--landmark", o.landmark, "Landmark object id");
  heat->add_option("--words", o.words, "Relation words");
  heat->add_option("--resolution", o.resolution, "Cell size, meters")->check(CLI::PositiveNumber);
  gen->add_option("--kind", o.kind, "yard or routes");
  gen->add_option("--scenarios", o.scenarios, "Yard scenarios")->check(CLI::PositiveNumber);
  gen->add_option("--commands", o.commands, "Commands per yard scenario")->check(CLI::PositiveNumber);
  gen->add_option("--instances", o.instances, "Route instances")->check(CLI::PositiveNumber);
  gen->add_option("--negatives", o.negatives, "Negatives per positive factor")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (list) {
      list_features();
      return kOk;
    }
    if (train->parsed()) return cmd_train(o);
    if (ground->parsed()) return cmd_ground(o, beam->count() > 0);
    if (fol->parsed()) return cmd_follow(o);
    if (heat->parsed()) return cmd_heatmap(o);
    if (eval->parsed()) return cmd_eval(o);
    if (gen->parsed()) return cmd_gen(o);
    std::cout << app.help();
    return kUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UngroundableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
