#include <doctest.h>

#include <random>

#include "g3/error.hpp"
#include "g3/heatmap.hpp"
#include "oracles.hpp"

using namespace g3;
using namespace g3::test;

namespace {

const FeatureWeights& trained() {
  static const FeatureWeights w = yard_weights(12, 8);
  return w;
}

const FeatureWeights& trained_small() {
  static const FeatureWeights w = yard_weights(4, 6);
  return w;
}

GroundingGraph graph_for(const std::string& command) {
  return build_grounding_graph(classify_constituents(parse_imperative(command)));
}

// S - J - A with a branch J - B - C. A shows a sign, C a fridge.
TopoMap y_junction() {
  return make_map({{"S", 0, 0, {}}, {"J", 12, 0, {}}, {"A", 24, 0, {"sign"}}, {"B", 12, 12, {}}, {"C", 12, 24, {"fridge"}}},
                  {{"S", "J"}, {"J", "A"}, {"J", "B"}, {"B", "C"}});
}

TableLandmarkModel kitchen_model() {
  TableLandmarkModel m;
  m.set_prior("kitchen", 0.05);
  m.set("kitchen", "sign", 0.6, 0.35);
  m.set("kitchen", "fridge", 0.99, 0.01);
  return m;
}

std::vector<DirectionState> endpoints(const DirectionHypothesis& h) {
  std::vector<DirectionState> out;
  for (std::size_t i : h.segment_ends) out.push_back(h.path.at(i));
  return out;
}

}  // namespace

TEST_SUITE("inference") {

TEST_CASE("grounds a pick and place command in a yard") {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const World w = make_yard(rng);
    const std::string vehicle = w.env.find("truck") ? "truck" : "trailer";
    std::string tire;
    for (const Grounding& o : w.env.objects)
      if (o.tags.contains("tire")) tire = o.id;
    FactorEvaluator eval(w.env, w.map, trained());
    const GroundingGraph g = graph_for("Put the tire pallet on the " + vehicle);
    const Assignment a = ground_command(g, eval, SearchConfig{});
    const ActionSeq& event = a.values.at(0).seq;
    REQUIRE(!event.empty());
    // Pick up the tire pallet, drive, put it somewhere on or beside the vehicle.
    int pick = -1, put = -1;
    for (std::size_t k = 0; k < event.size(); ++k) {
      if (event[k].kind == ManipAction::Kind::PickUp) pick = int(k);
      if (event[k].kind == ManipAction::Kind::PutDown) put = int(k);
    }
    REQUIRE(pick >= 0);
    REQUIRE(put > pick);
    CHECK(event[pick].target == tire);
    CHECK(eval.env().at(event[put].target).anchor == vehicle);
    CHECK(a.values.at(1).id == tire);
    CHECK(a.values.at(3).id == vehicle);
    ++checked;
  }
  CHECK(checked == 5);
}

TEST_CASE("a lone noun phrase grounds to a matching object") {
  std::mt19937_64 rng(4);
  const World w = make_yard(rng);
  FactorEvaluator eval(w.env, w.map, trained());
  const Assignment a = ground_command(graph_for("the tire pallet"), eval, SearchConfig{});
  REQUIRE(a.values.size() == 1);
  CHECK(eval.env().at(a.values.at(0).id).tags.contains("tire"));
  CHECK(a.factor_log_probs.size() == 1);
}

TEST_CASE("unbounded beams match exhaustive enumeration") {
  std::mt19937_64 rng(101);
  SearchConfig unbounded;
  unbounded.beam_np = std::nullopt;
  unbounded.beam_vp = std::nullopt;
  unbounded.horizon = 3;
  for (int i = 0; i < 30; ++i) {
    const World w = small_world(rng);
    const std::string cmd = small_command(rng);
    CAPTURE(cmd);
    CAPTURE(i);
    FactorEvaluator eval(w.env, w.map, trained_small());
    const GroundingGraph g = graph_for(cmd);
    const Assignment a = ground_command(g, eval, unbounded);
    const GroundOracle o = exhaustive_ground(g, eval, unbounded.horizon);
    CHECK(a.score == doctest::Approx(o.score).epsilon(1e-12));
    CHECK(a.values == o.values);
  }
}

TEST_CASE("finite beams never beat the unbounded search") {
  std::mt19937_64 rng(202);
  for (int i = 0; i < 15; ++i) {
    const World w = small_world(rng);
    const std::string cmd = small_command(rng);
    FactorEvaluator eval(w.env, w.map, trained_small());
    const GroundingGraph g = graph_for(cmd);
    SearchConfig cfg;
    cfg.horizon = 3;
    cfg.beam_np = std::nullopt;
    cfg.beam_vp = std::nullopt;
    const double exact = ground_command(g, eval, cfg).score;
    for (int k : {1, 2, 5, 10}) {
      cfg.beam_np = k;
      cfg.beam_vp = k;
      CHECK(ground_command(g, eval, cfg).score <= exact + 1e-12);
    }
  }
}

TEST_CASE("reported scores match recomputation") {
  std::mt19937_64 rng(303);
  for (int i = 0; i < 20; ++i) {
    const World w = small_world(rng);
    FactorEvaluator eval(w.env, w.map, trained_small());
    const GroundingGraph g = graph_for(small_command(rng));
    const Assignment a = ground_command(g, eval, SearchConfig{.beam_np = 3, .beam_vp = 2, .horizon = 4});
    const Assignment re = score_assignment(g, eval, a.values);
    CHECK(std::abs(re.score - a.score) <= 1e-9);
    double sum = 0.0;
    for (const auto& [f, lp] : a.factor_log_probs) {
      CHECK(lp <= 0.0);
      sum += lp;
    }
    CHECK(std::abs(sum - a.score) <= 1e-9);
    CHECK(a.factor_log_probs.size() == g.factors.size());
  }
}

TEST_CASE("search is deterministic") {
  std::mt19937_64 rng(9);
  const World w = make_yard(rng);
  FactorEvaluator e1(w.env, w.map, trained()), e2(w.env, w.map, trained());
  const GroundingGraph g = graph_for("Go to the pallet on the truck");
  CHECK(assignment_report(g, ground_command(g, e1, {})) == assignment_report(g, ground_command(g, e2, {})));
}

TEST_CASE("global decoding matches brute force") {
  std::mt19937_64 rng(55);
  const CountsLandmarkModel model(route_counts());
  for (int i = 0; i < 40; ++i) {
    const bool two = i % 4 == 3;
    const TopoMap map = random_route_map(rng, 6, two);
    const FlatCommand flat = random_flat(rng, i % 3 == 0 ? 3 : 2, two);
    const std::string start = map.node(rng() % map.size()).id;
    CAPTURE(i);
    CAPTURE(to_string(flat));
    const DirectionHypothesis h = follow_global(flat, map, model, start);
    const ViterbiOracle o = brute_force_follow(flat, map, model, start);
    CHECK(std::abs(h.score - o.best) <= 1e-9);
    const auto ends = endpoints(h);
    CHECK(std::find(o.optimal.begin(), o.optimal.end(), ends) != o.optimal.end());
    // Each prefix of the decoded path is the best way to reach its endpoint.
    double prefix = 0.0;
    REQUIRE(h.segment_scores.size() == flat.segments.size());
    for (std::size_t k = 0; k < ends.size(); ++k) {
      prefix += h.segment_scores[k];
      CHECK(std::abs(prefix - o.prefix[k].at({ends[k].node, int(ends[k].heading)})) <= 1e-9);
    }
    CHECK(std::abs(prefix - h.score) <= 1e-9);
    // The expanded path walks along edges or turns in place.
    for (std::size_t k = 1; k < h.path.size(); ++k) {
      const auto& a = h.path[k - 1];
      const auto& b = h.path[k];
      CHECK((a.node == b.node || map.adjacent(a.node, b.node)));
    }
  }
}

TEST_CASE("global decoding on a line reaches the landmark") {
  const TopoMap map = make_map({{"A", 0, 0, {}}, {"B", 12, 0, {}}, {"C", 24, 0, {"fridge"}}}, {{"A", "B"}, {"B", "C"}});
  const TableLandmarkModel model = kitchen_model();
  const FlatCommand flat = chunk_directions("Go to the kitchen.");
  CHECK(follow_global(flat, map, model, "A").end().node == "C");
  CHECK(follow_greedy(flat, map, model, "A").end().node == "C");
  CHECK(follow_exploring(flat, map, model, "A").end().node == "C");
  CHECK(exploration_fraction(map, "A", "C", follow_exploring(flat, map, model, "A").visited) == 0.0);
}

TEST_CASE("going straight on a corridor stays put") {
  // Turning zero degrees scores the same in place or after moving; the
  // shorter expansion wins.
  const TopoMap map = make_map({{"A", 0, 0, {}}, {"B", 12, 0, {}}, {"C", 24, 0, {}}}, {{"A", "B"}, {"B", "C"}});
  const CountsLandmarkModel model(route_counts());
  FollowConfig cfg;
  cfg.start_heading = Dir::East;
  const DirectionHypothesis h = follow_global(chunk_directions("Go straight."), map, model, "A", cfg);
  CHECK(h.end() == DirectionState{"A", Dir::East});
}

TEST_CASE("exploring recovers where greedy commits early") {
  const TopoMap map = y_junction();
  const TableLandmarkModel model = kitchen_model();
  const FlatCommand flat = chunk_directions("Go to the kitchen.");
  const DirectionHypothesis greedy = follow_greedy(flat, map, model, "S");
  const DirectionHypothesis exploring = follow_exploring(flat, map, model, "S");
  const DirectionHypothesis global = follow_global(flat, map, model, "S");
  CHECK(greedy.end().node == "A");
  CHECK(exploring.end().node == "C");
  CHECK(global.end().node == "C");
  // The weak sign match at A falls under the threshold, so exploring never goes there.
  CHECK(std::find(exploring.visited.begin(), exploring.visited.end(), "A") == exploring.visited.end());
  CHECK(exploration_fraction(map, "S", "C", exploring.visited) == 0.0);
  CHECK(exploration_fraction(map, "S", "C", global.visited) == 0.0);
  CHECK(rescore(flat, SegmentScorer(map, model), exploring) > rescore(flat, SegmentScorer(map, model), greedy));
  CHECK_THROWS_AS(follow_exploring(flat, map, model, "S", FollowConfig{.threshold = 1.0}), InvalidInput);
  CHECK_THROWS_AS(follow_exploring(flat, map, model, "S", FollowConfig{.threshold = -0.1}), InvalidInput);
}

TEST_CASE("threshold zero is the greedy method") {
  std::mt19937_64 rng(66);
  const CountsLandmarkModel model(route_counts());
  for (int i = 0; i < 30; ++i) {
    const TopoMap map = random_route_map(rng, 8, false);
    const FlatCommand flat = random_flat(rng, 3, false);
    const std::string start = map.node(rng() % map.size()).id;
    CHECK(hypothesis_report(follow_local(flat, map, model, start, FollowConfig{.threshold = 0.0})) ==
          hypothesis_report(follow_greedy(flat, map, model, start)));
  }
}

TEST_CASE("local decoders never beat the global score") {
  std::mt19937_64 rng(67);
  const CountsLandmarkModel model(route_counts());
  for (int i = 0; i < 30; ++i) {
    const TopoMap map = random_route_map(rng, 8, false);
    const FlatCommand flat = random_flat(rng, 3, false);
    const std::string start = map.node(rng() % map.size()).id;
    const SegmentScorer scorer(map, model);
    const double best = follow_global(flat, map, model, start).score;
    CHECK(rescore(flat, scorer, follow_greedy(flat, map, model, start)) <= best + 1e-9);
    CHECK(rescore(flat, scorer, follow_exploring(flat, map, model, start)) <= best + 1e-9);
  }
}

TEST_CASE("exploration fraction") {
  const TopoMap line = make_map({{"A", 0, 0, {}}, {"B", 12, 0, {}}, {"C", 24, 0, {}}}, {{"A", "B"}, {"B", "C"}});
  CHECK(exploration_fraction(line, "A", "C", {"A", "B", "C"}) == 0.0);
  const TopoMap y = y_junction();
  CHECK(exploration_fraction(y, "S", "C", {"S", "J", "B", "C"}) == 0.0);
  CHECK(exploration_fraction(y, "S", "A", {"S", "J", "B", "J", "A"}) == doctest::Approx(0.5));
  CHECK(exploration_fraction(y, "S", "A", {"S", "J", "B", "C", "B", "J", "A"}) == doctest::Approx(1.0));
}

TEST_CASE("baselines") {
  const TopoMap map = y_junction();
  const TableLandmarkModel model = kitchen_model();
  const DirectionHypothesis last = follow_last_phrase(chunk_directions("Turn left. Go to the kitchen."), map, model, "S");
  CHECK(last.end().node == "C");
  for (std::uint64_t seed : {0u, 1u, 2u, 3u}) {
    std::mt19937_64 rng(seed);
    CHECK(follow_random(map, "S", seed).end().node == map.node(rng() % map.size()).id);
    CHECK(hypothesis_report(follow_random(map, "S", seed)) == hypothesis_report(follow_random(map, "S", seed)));
  }
  CHECK_THROWS_AS(follow_random(map, "nowhere", 1), InvalidInput);
  CHECK(node_distance(map, "S", "C") == doctest::Approx(std::hypot(12.0, 24.0)));
}

TEST_CASE("heatmap with zero weights is uniform") {
  EnvironmentModel env;
  env.bbox = {{0, 0}, {10, 10}};
  const Grounding lm = make_static_grounding("box", rect({5, 5}, 2, 2), 1.0, {"box"});
  const Heatmap h = heatmap({"to"}, lm, env, FeatureWeights{}, HeatmapConfig{.resolution = 1.0});
  CHECK(h.width == 10);
  CHECK(h.height == 10);
  for (double p : h.prob) CHECK(p == 0.5);
  CHECK(h.start.x == doctest::Approx(0.0));
  CHECK(h.start.y == doctest::Approx(5.0));
}

TEST_CASE("heatmap argmax and kernels agree") {
  EnvironmentModel env;
  env.bbox = {{-4, -4}, {16, 16}};
  const Grounding lm = make_static_grounding("truck", rect({8, 8}, 4, 2), 1.0, {"truck"});
  for (const char* word : {"to", "past", "from"}) {
    const std::vector<std::string> words{word};
    const Heatmap par = heatmap(words, lm, env, trained(), HeatmapConfig{.resolution = 1.0, .parallel = true});
    const Heatmap ser = heatmap(words, lm, env, trained(), HeatmapConfig{.resolution = 1.0, .parallel = false});
    CHECK(par.prob == ser.prob);
    CHECK(par.argmax == ser.argmax);
    const double best = *std::max_element(par.prob.begin(), par.prob.end());
    CHECK(par.prob[par.argmax] == best);
    CHECK(std::find(par.prob.begin(), par.prob.end(), best) - par.prob.begin() == std::ptrdiff_t(par.argmax));
    const double again = path_relation_prob(words, lm, env.bbox, trained(), par.start, par.argmax_point());
    CHECK(std::abs(again - best) <= 1e-12);
  }
  const std::string csv = heatmap_csv(heatmap({"to"}, lm, env, trained(), HeatmapConfig{.resolution = 2.0}));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
}

TEST_CASE("heatmap rejects a landmark outside the scene") {
  EnvironmentModel env;
  env.bbox = {{0, 0}, {10, 10}};
  const Grounding lm = make_static_grounding("box", rect({9.5, 5}, 2, 2), 1.0, {"box"});
  CHECK_THROWS_AS(heatmap({"to"}, lm, env, FeatureWeights{}), InvalidInput);
}

}  // TEST_SUITE
