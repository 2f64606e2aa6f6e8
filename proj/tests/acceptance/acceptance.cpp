// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "factor_oracles.hpp"
#include "g3/error.hpp"
#include "g3/heatmap.hpp"
#include "g3/world_io.hpp"
#include "oracles.hpp"
#include "scenes.hpp"

namespace fs = std::filesystem;
using namespace g3;
using namespace g3::test;

namespace {

// Tolerances and budgets.
constexpr double kNormTol = 1e-12;
constexpr double kFdStep = 1e-5;
constexpr double kFdRelTol = 1e-4;
constexpr double kHeldOutAccuracy = 0.95;
constexpr double kScoreTol = 1e-9;
constexpr double kCancelTol = 1e-12;
constexpr double kInvarianceTol = 1e-9;
constexpr double kHeatRatio = 2.0;

fs::path g_cli, g_fixtures;

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs > budget_s) {
    std::ostringstream s;
    s << "took " << secs << " s, budget " << budget_s << " s";
    out.fail(s.str());
  }
  std::printf("%s %2d %-34s %8.3fs%s%s\n", out.ok ? "PASS" : "FAIL", id, name.c_str(), secs,
              out.detail.empty() ? "" : "  ", out.detail.c_str());
  std::fflush(stdout);
  if (!out.ok) ++failures;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

const FeatureWeights& fixture_weights() {
  static const FeatureWeights w = load_weights(g_fixtures / "yard" / "weights.json");
  return w;
}

// 1 ------------------------------------------------------------------------------
void local_normalization(Outcome& out) {
  std::mt19937_64 rng(1);
  int checked = 0;
  while (checked < 1000) {
    const World w = small_world(rng);
    FactorEvaluator eval(w.env, w.map, fixture_weights());
    const GroundingGraph g = build_grounding_graph(classify_constituents(parse_imperative(small_command(rng))));
    const auto seqs = shortest_sequences(eval.space(), 3);
    for (const FactorSpec& f : g.factors) {
      std::vector<VarValue> args;
      for (int v : f.args) {
        const VarKind k = g.vars[v].kind;
        if (k == VarKind::Event || k == VarKind::Path) {
          args.push_back(VarValue::sequence(k, seqs[rng() % seqs.size()]));
        } else {
          const auto c = eval.candidates(k);
          args.push_back(c[rng() % c.size()]);
        }
      }
      const double p1 = std::exp(eval.log_prob(f, args));
      const double z = dot(eval.weights(), eval.binary_features(f, args));
      const double p0 = std::exp(0.0) / (std::exp(z) + std::exp(0.0));
      if (!(std::abs(p1 + p0 - 1.0) <= kNormTol)) out.fail("sum " + fmt(p1 + p0));
      ++checked;
    }
  }
}

// 2 ------------------------------------------------------------------------------
void gradient_check(Outcome& out) {
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = random_design(rng, 20 + int(rng() % 60), 3 + int(rng() % 12));
    std::vector<double> theta(d.num_features);
    for (double& t : theta) t = uniform(rng, -2, 2);
    const auto obj = kernels::objective_parallel(d, theta.data(), 0.01);
    for (int f = 0; f < d.num_features; ++f) {
      auto tp = theta, tm = theta;
      tp[f] += kFdStep;
      tm[f] -= kFdStep;
      const double fd = (objective_oracle(d, tp, 0.01) - objective_oracle(d, tm, 0.01)) / (2 * kFdStep);
      const double rel = std::abs(obj.gradient[f] - fd) / std::max({std::abs(fd), std::abs(obj.gradient[f]), 1e-300});
      worst = std::max(worst, rel);
    }
  }
  if (worst > kFdRelTol) out.fail("max relative error " + fmt(worst));
  else out.detail = "max relative error " + fmt(worst);
}

// 3 ------------------------------------------------------------------------------
void training_efficacy(Outcome& out) {
  const fs::path path = g_fixtures / "yard" / "corpus.jsonl";
  const auto corpus = load_corpus(path);
  if (corpus.size() < 200) out.fail("corpus has " + std::to_string(corpus.size()) + " examples");
  const auto [train_set, test_set] = split(corpus, 0.7, 1);
  WorldStore worlds(path.parent_path());
  const TrainResult r = train(training_examples(labeled_factors(train_set, worlds)), TrainConfig{});
  if (!r.converged) out.fail("training did not converge");
  for (std::size_t k = 1; k < r.history.size(); ++k)
    if (r.history[k] > r.history[k - 1] + 1e-12) out.fail("objective history increases");
  const PhiReport report = eval_phi(r.weights, labeled_factors(test_set, worlds));
  const std::string table = report_table(report);
  std::cout << table;
  for (const char* row : {"Noun Phrase", "Prepositional Phrase (Place)", "Prepositional Phrase (Path)", "Verb Phrase",
                          "Overall"})
    if (table.find(row) == std::string::npos) out.fail(std::string("missing row ") + row);
  const double acc = report.rows.back().accuracy;
  if (acc < kHeldOutAccuracy) out.fail("held-out accuracy " + fmt(acc));
  else out.detail = "held-out accuracy " + fmt(acc) + " on " + std::to_string(report.rows.back().n) + " factors";
}

// 4 ------------------------------------------------------------------------------
void graph_golden(Outcome& out) {
  const std::string put = dump(build_grounding_graph(classify_constituents(parse_imperative("Put the pallet on the truck"))));
  const std::string go = dump(build_grounding_graph(classify_constituents(parse_imperative("Go to the pallet on the truck"))));
  if (put != "vars\n  g1 event\n  g2 object\n  g3 place\n  g4 object\nfactors\n"
             "  f1 relation vp \"put\" (g1, g2, g3)\n  f2 entity np \"the pallet\" (g2)\n"
             "  f3 relation pp-place \"on\" (g3, g4)\n  f4 entity np \"the truck\" (g4)\n")
    out.fail("put graph differs:\n" + put);
  if (go != "vars\n  g1 event\n  g2 path\n  g3 object\n  g4 object\nfactors\n"
            "  f1 relation vp \"go\" (g1, g2)\n  f2 relation pp-path \"to\" (g2, g3)\n"
            "  f3 relation pp-place \"on\" (g3, g4)\n  f4 entity np \"the pallet\" (g3)\n"
            "  f5 entity np \"the truck\" (g4)\n")
    out.fail("go graph differs:\n" + go);
  // The truck variable of the placement graph sits in two factors.
  const auto shared = shared_variable_map(build_grounding_graph(classify_constituents(parse_imperative("Put the pallet on the truck"))));
  if (shared.at(3) != std::vector<int>{2, 3}) out.fail("truck variable not shared by the place phrase and its noun");
}

// 5 ------------------------------------------------------------------------------
void beam_oracle(Outcome& out) {
  std::mt19937_64 rng(5);
  SearchConfig cfg;
  cfg.beam_np = std::nullopt;
  cfg.beam_vp = std::nullopt;
  cfg.horizon = 3;
  int agree = 0;
  for (int i = 0; i < 25; ++i) {
    const World w = small_world(rng);
    const std::string cmd = small_command(rng);
    FactorEvaluator eval(w.env, w.map, fixture_weights());
    const GroundingGraph g = build_grounding_graph(classify_constituents(parse_imperative(cmd)));
    const Assignment a = ground_command(g, eval, cfg);
    const GroundOracle o = exhaustive_ground(g, eval, cfg.horizon);
    if (a.values == o.values && std::abs(a.score - o.score) <= kScoreTol) ++agree;
    else out.fail("instance " + std::to_string(i) + " (" + cmd + ") differs");
  }
  if (out.ok) out.detail = std::to_string(agree) + "/25 identical";
}

// 6 ------------------------------------------------------------------------------
void viterbi_oracle(Outcome& out) {
  std::mt19937_64 rng(6);
  const CountsLandmarkModel model(load_counts(g_fixtures / "routes" / "counts.json"));
  int agree = 0;
  for (int i = 0; i < 25; ++i) {
    const bool two = i % 5 == 4;
    const TopoMap map = random_route_map(rng, 8, two);
    const FlatCommand flat = random_flat(rng, 3, two);
    const std::string start = map.node(rng() % map.size()).id;
    const DirectionHypothesis h = follow_global(flat, map, model, start);
    const ViterbiOracle o = brute_force_follow(flat, map, model, start);
    std::vector<DirectionState> ends;
    for (std::size_t k : h.segment_ends) ends.push_back(h.path[k]);
    const bool same_value = std::abs(h.score - o.best) <= kScoreTol;
    const bool same_path = std::find(o.optimal.begin(), o.optimal.end(), ends) != o.optimal.end();
    if (same_value && same_path) ++agree;
    else out.fail("map " + std::to_string(i) + ": value " + fmt(h.score) + " vs " + fmt(o.best));
  }
  if (out.ok) out.detail = std::to_string(agree) + "/25 identical";
}

// 7 ------------------------------------------------------------------------------
void landmark_exactness(Outcome& out) {
  TableLandmarkModel t;
  t.set_prior("kitchen", 0.5);
  t.set("kitchen", "fridge", 0.9, 0.1);
  t.set("kitchen", "door", 0.3, 0.6);
  const auto [p, subset] = salient_landmark_prob(t, {"kitchen"}, {"fridge", "door"});
  if (std::abs(p - 0.9) > 1e-12 || subset != std::vector<std::string>{"fridge"})
    out.fail("worked example gives " + fmt(p));

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<std::string> words{"kitchen", "office", "lab"};
    std::vector<std::string> labels;
    const int n = 1 + int(rng() % 10);
    for (int k = 0; k < n; ++k) labels.push_back("label" + std::to_string(k));
    const CountsLandmarkModel m(random_counts(rng, words, labels), rng() % 2 ? 1.0 : 0.5);
    std::vector<std::string> query{"the", words[rng() % 3]};
    if (rng() % 3 == 0) query.push_back(words[rng() % 3]);
    const auto want = salient_oracle(m, landmark_words(m, query), labels);
    const auto got = salient_landmark_prob(m, query, {labels.begin(), labels.end()});
    // Same arithmetic on both sides, so the probabilities agree to rounding.
    if (std::abs(got.first - want.first) > 1e-12 * want.first || got.second != want.second)
      out.fail("table " + std::to_string(trial) + ": " + fmt(got.first) + " vs " + fmt(want.first));
  }
}

// 8 ------------------------------------------------------------------------------
void nb_cancellation(Outcome& out) {
  std::mt19937_64 rng(8);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    TableLandmarkModel t;
    const int words = 1 + int(rng() % 3);
    std::vector<std::string> phrase;
    std::set<std::string> obs;
    for (int w = 0; w < words; ++w) {
      const std::string word = "w" + std::to_string(w);
      phrase.push_back(word);
      t.set_prior(word, uniform(rng, 0.02, 0.98));
      for (int k = 0; k < 5; ++k) {
        const std::string o = "o" + std::to_string(k);
        t.set(word, o, uniform(rng, 0.02, 0.98), uniform(rng, 0.02, 0.98));
        if (w == 0 && rng() % 2) obs.insert(o);
      }
      const double q = uniform(rng, 0.02, 0.98);
      t.set(word, "extra", q, q);
    }
    const double before = nb_landmark_prob(t, phrase, obs);
    obs.insert("extra");
    worst = std::max(worst, std::abs(nb_landmark_prob(t, phrase, obs) - before));
  }
  if (worst >= kCancelTol) out.fail("max change " + fmt(worst));
  else out.detail = "max change " + fmt(worst);
}

// 9 ------------------------------------------------------------------------------
void geometry_invariance(Outcome& out) {
  const auto axes = impose_axes(std::vector<Vec2>{{-3, 0}, {3, 0}}, square(-1, 1));
  if (!axes || !(axes->major_a == Vec2{-1, 0}) || !(axes->major_b == Vec2{1, 0}) || !(axes->origin == Vec2{0, 0}) ||
      !axes->minor || !(axes->minor->first == Vec2{0, -1}) || !(axes->minor->second == Vec2{0, 1}))
    out.fail("imposed axes on the unit square differ from the closed form");

  std::mt19937_64 rng(9);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Scene s = random_scene(rng);
    const Motion m{uniform(rng, -3.14, 3.14), uniform(rng, 0.1, 10.0), {uniform(rng, -50, 50), uniform(rng, -50, 50)}};
    const BaseFeatureVector a = compute_features(s.figure, s.landmark, s.bbox);
    const BaseFeatureVector b = compute_features(transform(s.figure, m), transform(s.landmark, m), transform(s.bbox, m));
    if (a.size() != b.size()) {
      out.fail("feature sets differ in scene " + std::to_string(trial));
      continue;
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k].first != b[k].first) out.fail("feature order differs");
      worst = std::max(worst, std::abs(a[k].second - b[k].second));
    }
  }
  if (worst > kInvarianceTol) out.fail("max deviation " + fmt(worst));
  else out.detail = "max deviation " + fmt(worst);
}

// 10 -----------------------------------------------------------------------------
void method_ordering(Outcome& out) {
  const fs::path path = g_fixtures / "routes" / "directions.jsonl";
  const auto items = load_directions(path);
  if (items.size() < 50) out.fail("suite has " + std::to_string(items.size()) + " instances");
  const auto maps = load_route_maps(items, path.parent_path());
  const CountsLandmarkModel model(load_counts(g_fixtures / "routes" / "counts.json"));
  std::vector<DirectionsRow> rows;
  for (FollowMethod m : {FollowMethod::Global, FollowMethod::Exploring, FollowMethod::Greedy, FollowMethod::LastPhrase,
                         FollowMethod::Random})
    rows.push_back(eval_directions(m, items, maps, model, FollowConfig{}, 1));
  std::cout << directions_table(rows);
  const double global = rows[0].success_rate, exploring = rows[1].success_rate, greedy = rows[2].success_rate,
               last = rows[3].success_rate;
  if (!(global >= exploring && exploring >= greedy)) out.fail("global >= exploring >= greedy violated");
  if (!(*rows[1].exploration < 1.0)) out.fail("exploring explored everything");
  if (!(last <= global)) out.fail("last phrase beats global");
  if (out.ok) out.detail = "global " + fmt(global) + ", exploring " + fmt(exploring) + ", greedy " + fmt(greedy) + ", last " +
               fmt(last) + ", explored " + fmt(*rows[1].exploration);
}

// 11 -----------------------------------------------------------------------------
void heatmap_hot_spot(Outcome& out) {
  const fs::path path = g_fixtures / "yard" / "corpus.jsonl";
  const auto corpus = load_corpus(path);
  WorldStore worlds(path.parent_path());
  const TrainResult r = train(training_examples(labeled_factors(corpus, worlds)), TrainConfig{});
  double worst = 1e300;
  int scenes = 0;
  for (const auto& entry : fs::directory_iterator(g_fixtures / "yard" / "envs")) {
    const EnvironmentModel env = load_environment(entry.path());
    for (const Grounding& lm : env.objects) {
      if (!lm.fixed) continue;
      const Heatmap h = heatmap({"to"}, lm, env, r.weights, HeatmapConfig{.resolution = 0.5});
      double diameter = 0.0;
      for (const Vec2& a : lm.shape.polygon)
        for (const Vec2& b : lm.shape.polygon) diameter = std::max(diameter, dist(a, b));
      double in = 0, out_sum = 0;
      int n_in = 0, n_out = 0;
      for (int j = 0; j < h.height; ++j)
        for (int i = 0; i < h.width; ++i) {
          const double d = poly::region_distance(lm.shape.polygon, h.cell_center(i, j));
          if (d <= diameter) {
            in += h.at(i, j);
            ++n_in;
          } else {
            out_sum += h.at(i, j);
            ++n_out;
          }
        }
      worst = std::min(worst, (in / n_in) / (out_sum / n_out));
      ++scenes;
    }
    if (scenes >= 6) break;
  }
  if (worst < kHeatRatio) out.fail("smallest inside/outside ratio " + fmt(worst));
  else out.detail = "smallest inside/outside ratio " + fmt(worst) + " over " + std::to_string(scenes) + " scenes";
}

// 12 -----------------------------------------------------------------------------
void elevation_rule(Outcome& out) {
  const TopoMap map = load_map(g_fixtures / "stairs" / "map.json");
  const double ground = map.node("g1").z(), upper = map.node("u1").z();
  if (!(upper > ground)) out.fail("stairs fixture has no height change");
  const double base = 1.0 / (1.0 + std::exp(0.0));
  auto factor = [&](std::vector<std::string> words, double z0, double z1) {
    return verb_prob(words, 0.0, z0, z1) / base;
  };
  const std::vector<std::pair<double, double>> expect{
      {factor({"go", "up"}, ground, upper), 1.0},        {factor({"go", "up"}, upper, ground), 0.000001},
      {factor({"go", "down"}, upper, ground), 1.0},      {factor({"go", "down"}, ground, upper), 0.000001},
      {factor({"climb"}, ground, upper), 1.0},           {factor({"go", "up"}, ground, ground), 0.000001},
      {factor({"go", "straight"}, ground, upper), 1.0},  {factor({"descend"}, ground, ground), 0.000001}};
  for (const auto& [got, want] : expect)
    if (std::abs(got - want) > 1e-15) out.fail("factor " + fmt(got) + " expected " + fmt(want));

  const CountsLandmarkModel model(load_counts(g_fixtures / "routes" / "counts.json"));
  if (map.node(follow_global(chunk_directions("Go up to the lab."), map, model, "g0").end().node).level != 1)
    out.fail("going up does not reach the upper floor");
  if (map.node(follow_global(chunk_directions("Go down."), map, model, "u2").end().node).level != 0)
    out.fail("going down does not reach the ground floor");
}

// 13 -----------------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// Every regular file under `dir`, keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  return out;
}

void cli_determinism(Outcome& out) {
  const fs::path work = fs::temp_directory_path() / "g3_acceptance_cli";
  fs::remove_all(work);
  const std::string cli = g_cli.string(), fx = g_fixtures.string();
  const std::vector<std::pair<std::string, std::string>> runs{
      {"gen-yard", "gen --kind yard --scenarios 3 --commands 4 --negatives 2 --seed 5 --out OUT"},
      {"gen-routes", "gen --kind routes --instances 10 --seed 5 --out OUT"},
      {"train", "train --corpus " + fx + "/yard/corpus.jsonl --split 0.7 --seed 1 --out OUT/weights.json"},
      {"ground", "ground --env " + fx + "/tiny/env.json --map " + fx + "/tiny/map.json --weights " + fx +
                     "/yard/weights.json --command \"Put the tire pallet on the truck\" --seed 1"},
      {"follow", "follow --map " + fx + "/junction/map.json --counts " + fx +
                     "/routes/counts.json --method random --command \"Go to the kitchen.\" --start s --seed 3"},
      {"follow-suite", "follow --directions " + fx + "/routes/directions.jsonl --counts " + fx +
                           "/routes/counts.json --method exploring"},
      {"heatmap", "heatmap --env " + fx + "/yard/envs/yard03.json --weights " + fx +
                      "/yard/weights.json --landmark truck --resolution 1 --out OUT/heat"},
      {"eval-phi", "eval --corpus " + fx + "/yard/corpus.jsonl --split 0.7 --seed 1 --weights " + fx +
                       "/yard/weights.json --out OUT/phi.csv"},
      {"eval-directions", "eval --directions " + fx + "/routes/directions.jsonl --counts " + fx +
                              "/routes/counts.json --seed 2 --out OUT/directions.csv"},
  };
  int identical = 0;
  for (const auto& [name, args] : runs) {
    std::map<std::string, std::string> result[2];
    for (int k = 0; k < 2; ++k) {
      const fs::path dir = work / (name + "_" + std::to_string(k));
      fs::create_directories(dir);
      std::string a = args;
      for (std::size_t p; (p = a.find("OUT")) != std::string::npos;) a.replace(p, 3, dir.string());
      const std::string cmd = "\"" + cli + "\" " + a + " > \"" + (dir / "stdout.txt").string() + "\" 2>&1";
      const int rc = std::system(cmd.c_str());
      if (rc != 0) out.fail(name + " exited with " + std::to_string(rc));
      result[k] = snapshot(dir);
    }
    // Output paths appear in nothing but file names, which are relative here.
    if (result[0] == result[1]) ++identical;
    else out.fail(name + " differs between runs");
  }
  if (out.ok) out.detail = std::to_string(identical) + "/" + std::to_string(runs.size()) + " subcommand runs byte-identical";
  fs::remove_all(work);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::string cli, fixtures;
  app.add_option("--cli", cli, "Path to the g3 binary")->required();
  app.add_option("--fixtures", fixtures, "Fixture directory")->required();
  CLI11_PARSE(app, argc, argv);
  g_cli = cli;
  g_fixtures = fixtures;

  criterion(1, "local normalization", 1.0, local_normalization);
  criterion(2, "gradient vs finite differences", 10.0, gradient_check);
  criterion(3, "training efficacy", 60.0, training_efficacy);
  criterion(4, "graph construction golden", 1.0, graph_golden);
  criterion(5, "beam search vs exhaustive", 60.0, beam_oracle);
  criterion(6, "global decoding vs brute force", 30.0, viterbi_oracle);
  criterion(7, "salient landmark exactness", 10.0, landmark_exactness);
  criterion(8, "naive Bayes cancellation", 0.0, nb_cancellation);
  criterion(9, "geometry invariance", 0.0, geometry_invariance);
  criterion(10, "method ordering", 300.0, method_ordering);
  criterion(11, "heat map hot spot", 60.0, heatmap_hot_spot);
  criterion(12, "verb elevation rule", 0.0, elevation_rule);
  criterion(13, "CLI determinism", 0.0, cli_determinism);

  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
