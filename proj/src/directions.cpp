#include "g3/directions.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "g3/error.hpp"
#include "g3/verb.hpp"

namespace g3 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double level_z(const TopoMap& map, const std::string& node) { return map.node(node).z(); }

std::string join(const std::vector<std::string>& w) {
  std::string s;
  for (const auto& x : w) s += (s.empty() ? "" : " ") + x;
  return s;
}

}  // namespace

double SegmentScorer::landmark_log(const DirectionSegment& seg, std::size_t node) const {
  if (!seg.landmark_words) return 0.0;
  const auto key = std::make_pair(join(*seg.landmark_words), node);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  const double p = salient_landmark_prob(model_, *seg.landmark_words, map_.node(node).visible_tags).first;
  return cache_.emplace(key, std::log(p)).first->second;
}

double SegmentScorer::verb_log(const DirectionSegment& seg, const DirectionState& from,
                               const DirectionState& to) const {
  const double turn = heading_angle(to.heading) - heading_angle(from.heading);
  return std::log(verb_prob(seg.verb_words, turn, level_z(map_, from.node), level_z(map_, to.node)));
}

RouteTable::RouteTable(const TopoMap& map) {
  const std::size_t n = map.size();
  dist_.assign(n, std::vector<double>(n, kInf));
  prev_.assign(n, std::vector<std::size_t>(n, n));
  auto pos3 = [&](std::size_t i) {
    const TopoNode& v = map.node(i);
    return std::array<double, 3>{v.pos.x, v.pos.y, v.z()};
  };
  for (std::size_t s = 0; s < n; ++s) {
    auto& d = dist_[s];
    auto& p = prev_[s];
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    d[s] = 0.0;
    pq.emplace(0.0, s);
    std::vector<bool> done(n, false);
    while (!pq.empty()) {
      const auto [du, u] = pq.top();
      pq.pop();
      if (done[u]) continue;
      done[u] = true;
      const auto a = pos3(u);
      for (const TopoEdge& e : map.out_edges(u)) {
        const std::size_t v = map.index_of(e.to);
        const auto b = pos3(v);
        const double w = std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                                   (a[2] - b[2]) * (a[2] - b[2]));
        const double nd = du + w;
        if (nd < d[v] || (nd == d[v] && !done[v] && u < p[v])) {
          d[v] = nd;
          p[v] = u;
          pq.emplace(nd, v);
        }
      }
    }
  }
}

std::vector<std::size_t> RouteTable::route(std::size_t a, std::size_t b) const {
  if (dist_[a][b] == kInf) return {};
  std::vector<std::size_t> out{b};
  while (out.back() != a) out.push_back(prev_[a][out.back()]);
  std::reverse(out.begin(), out.end());
  return out;
}

namespace {

Dir step_heading(const TopoMap& map, std::size_t u, std::size_t v, Dir current) {
  for (const TopoEdge& e : map.out_edges(u))
    if (e.to == map.node(v).id && is_horizontal(e.dir)) return e.dir;
  return current;
}

/// States walked along a node route (excluding its first node).
std::vector<DirectionState> walk(const TopoMap& map, const std::vector<std::size_t>& route, Dir heading) {
  std::vector<DirectionState> out;
  for (std::size_t k = 1; k < route.size(); ++k) {
    heading = step_heading(map, route[k - 1], route[k], heading);
    out.push_back({map.node(route[k]).id, heading});
  }
  return out;
}

}  // namespace

std::vector<GlobalTransition> global_transitions(const TopoMap& map, const RouteTable& routes,
                                                 const DirectionState& from) {
  std::vector<GlobalTransition> out;
  const std::size_t n = map.index_of(from.node);
  out.push_back({from, {}});
  for (Dir h : kHeadings)
    if (h != from.heading) out.push_back({{from.node, h}, {{from.node, h}}});

  // Incoming edges per target, grouped by the heading they leave the robot in.
  std::vector<std::vector<TopoEdge>> incoming(map.size());
  for (const TopoEdge& e : map.edges()) incoming[map.index_of(e.to)].push_back(e);

  for (std::size_t t = 0; t < map.size(); ++t) {
    if (t == n) continue;
    for (Dir h : kHeadings) {
      std::size_t best_p = map.size();
      double best_len = kInf;
      for (const TopoEdge& e : incoming[t]) {
        if (is_horizontal(e.dir) && e.dir != h) continue;
        const std::size_t p = map.index_of(e.from);
        const double len = routes.distance(n, p) + routes.distance(p, t);
        if (len == kInf) continue;
        if (len < best_len || (len == best_len && p < best_p)) {
          best_len = len;
          best_p = p;
        }
      }
      if (best_p == map.size()) continue;
      std::vector<std::size_t> r = routes.route(n, best_p);
      r.push_back(t);
      GlobalTransition tr{{map.node(t).id, h}, walk(map, r, from.heading)};
      tr.steps.back().heading = h;
      out.push_back(std::move(tr));
    }
  }
  return out;
}

bool better_path(double score_a, const std::vector<DirectionState>& a, double score_b,
                 const std::vector<DirectionState>& b) {
  if (score_a != score_b) return score_a > score_b;
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].node != b[i].node) return a[i].node < b[i].node;
    if (a[i].heading != b[i].heading) return a[i].heading < b[i].heading;
  }
  return false;
}

namespace {

std::vector<Dir> start_headings(const FollowConfig& c) {
  if (c.start_heading) return {*c.start_heading};
  return {std::begin(kHeadings), std::end(kHeadings)};
}

std::size_t state_index(const TopoMap& map, const DirectionState& s) {
  return map.index_of(s.node) * 4 + static_cast<std::size_t>(s.heading);
}

}  // namespace

DirectionHypothesis follow_global(const FlatCommand& flat, const TopoMap& map, const LandmarkModel& model,
                                  const std::string& start, const FollowConfig& config) {
  if (!map.has_node(start)) throw InvalidInput("start node '" + start + "' is not in the map");
  if (flat.segments.empty()) throw InvalidInput("command has no segments");
  const SegmentScorer scorer(map, model);
  const RouteTable routes(map);
  std::vector<std::optional<std::vector<GlobalTransition>>> trans(map.size() * 4);

  struct Entry {
    double score = 0.0;
    DirectionHypothesis hyp;
  };
  std::vector<std::optional<Entry>> cur(map.size() * 4);
  for (Dir h : start_headings(config)) {
    Entry e;
    e.hyp.path = {{start, h}};
    cur[state_index(map, {start, h})] = std::move(e);
  }

  for (const DirectionSegment& seg : flat.segments) {
    std::vector<std::optional<Entry>> next(map.size() * 4);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (!cur[i]) continue;
      const Entry& src = *cur[i];
      const DirectionState& from = src.hyp.path.back();
      if (!trans[i]) trans[i] = global_transitions(map, routes, from);
      for (const GlobalTransition& t : *trans[i]) {
        const double step = scorer.transition(seg, from, t.to);
        const double sc = src.score + step;
        const std::size_t j = state_index(map, t.to);
        auto& slot = next[j];
        if (slot) {
          if (sc < slot->score) continue;
          const std::size_t len = src.hyp.path.size() + t.steps.size();
          if (sc == slot->score && len > slot->hyp.path.size()) continue;
        }
        Entry cand;
        cand.score = sc;
        cand.hyp = src.hyp;
        cand.hyp.path.insert(cand.hyp.path.end(), t.steps.begin(), t.steps.end());
        cand.hyp.segment_ends.push_back(cand.hyp.path.size() - 1);
        cand.hyp.segment_scores.push_back(step);
        if (!slot || better_path(cand.score, cand.hyp.path, slot->score, slot->hyp.path)) slot = std::move(cand);
      }
    }
    cur = std::move(next);
  }

  const Entry* best = nullptr;
  for (const auto& e : cur)
    if (e && (!best || better_path(e->score, e->hyp.path, best->score, best->hyp.path))) best = &*e;
  DirectionHypothesis out = best->hyp;
  out.score = best->score;
  for (const DirectionState& s : out.path)
    if (out.visited.empty() || out.visited.back() != s.node) out.visited.push_back(s.node);
  return out;
}

namespace {

class LocalRun {
 public:
  LocalRun(const FlatCommand& flat, const TopoMap& map, const SegmentScorer& scorer, double threshold)
      : flat_(flat), map_(map), scorer_(scorer), tau_(threshold) {}

  DirectionHypothesis run(const std::string& start, Dir heading) {
    h_ = {};
    seen_.clear();
    cur_ = {start, heading};
    h_.path.push_back(cur_);
    visit(start);
    for (const DirectionSegment& seg : flat_.segments) segment(seg);
    h_.score = rescore(flat_, scorer_, h_);
    return h_;
  }

 private:
  enum class Kind { Move, Rotate, Stop };
  struct Candidate {
    double p;
    Kind kind;
    DirectionState to;
  };

  void visit(const std::string& node) {
    seen_.insert(node);
    h_.visited.push_back(node);
  }

  void step_to(const DirectionState& s) {
    h_.path.push_back(s);
    cur_ = s;
    visit(s.node);
  }

  // Walks back to a visited node through visited nodes only (fewest hops).
  void walk_to(const DirectionState& target) {
    const std::size_t from = map_.index_of(cur_.node), to = map_.index_of(target.node);
    std::vector<std::size_t> prev(map_.size(), map_.size());
    std::deque<std::size_t> queue{from};
    prev[from] = from;
    while (!queue.empty() && prev[to] == map_.size()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (const TopoEdge& e : map_.out_edges(u)) {
        const std::size_t v = map_.index_of(e.to);
        if (prev[v] != map_.size() || !seen_.contains(e.to)) continue;
        prev[v] = u;
        queue.push_back(v);
      }
    }
    std::vector<std::size_t> r{to};
    while (r.back() != from) r.push_back(prev[r.back()]);
    std::reverse(r.begin(), r.end());
    for (const DirectionState& s : walk(map_, r, cur_.heading)) step_to(s);
    if (cur_.heading != target.heading) {
      h_.path.push_back(target);
      cur_ = target;
    }
  }

  std::vector<Candidate> moves(const DirectionSegment& seg, const DirectionState& seg_start) const {
    std::vector<Candidate> out;
    for (const TopoEdge& e : map_.out_edges(map_.index_of(cur_.node))) {
      if (seen_.contains(e.to)) continue;
      const DirectionState to{e.to, is_horizontal(e.dir) ? e.dir : cur_.heading};
      out.push_back({std::exp(scorer_.transition(seg, seg_start, to)), Kind::Move, to});
    }
    return out;
  }

  static const Candidate* argmax(const std::vector<Candidate>& c) {
    const Candidate* best = nullptr;
    for (const Candidate& x : c)
      if (!best || x.p > best->p) best = &x;
    return best;
  }

  bool has_untried(const std::string& node) const {
    for (const TopoEdge& e : map_.out_edges(map_.index_of(node)))
      if (!seen_.contains(e.to)) return true;
    return false;
  }

  void segment(const DirectionSegment& seg) {
    const DirectionState seg_start = cur_;
    std::vector<std::string> stack{cur_.node};
    bool moved = false;
    std::optional<Candidate> best_seen;
    while (true) {
      std::vector<Candidate> cands = moves(seg, seg_start);
      if (!moved)
        for (Dir h : kHeadings)
          if (h != cur_.heading) {
            const DirectionState to{cur_.node, h};
            cands.push_back({std::exp(scorer_.transition(seg, seg_start, to)), Kind::Rotate, to});
          }
      cands.push_back({std::exp(scorer_.transition(seg, seg_start, cur_)), Kind::Stop, cur_});
      for (const Candidate& c : cands)
        if (c.kind != Kind::Move && (!best_seen || c.p > best_seen->p)) best_seen = c;

      const Candidate* best = argmax(cands);
      if (best->p >= tau_) {
        if (best->kind == Kind::Move) {
          step_to(best->to);
          stack.push_back(cur_.node);
          moved = true;
          continue;
        }
        if (best->kind == Kind::Rotate) {
          h_.path.push_back(best->to);
          cur_ = best->to;
        }
        break;
      }
      // Nothing good enough here: explore from the latest node on the stack
      // that still has an unexplored neighbor.
      while (!stack.empty() && !has_untried(stack.back())) stack.pop_back();
      if (stack.empty()) {
        walk_to(best_seen->to);
        break;
      }
      if (stack.back() != cur_.node) walk_to({stack.back(), cur_.heading});
      const std::vector<Candidate> forced = moves(seg, seg_start);
      step_to(argmax(forced)->to);
      stack.push_back(cur_.node);
      moved = true;
    }
    h_.segment_ends.push_back(h_.path.size() - 1);
  }

  const FlatCommand& flat_;
  const TopoMap& map_;
  const SegmentScorer& scorer_;
  double tau_;
  DirectionHypothesis h_;
  DirectionState cur_;
  std::set<std::string> seen_;
};

}  // namespace

double rescore(const FlatCommand& flat, const SegmentScorer& scorer, const DirectionHypothesis& h) {
  double total = 0.0;
  DirectionState from = h.path.front();
  for (std::size_t k = 0; k < flat.segments.size() && k < h.segment_ends.size(); ++k) {
    const DirectionState& to = h.path[h.segment_ends[k]];
    total += scorer.transition(flat.segments[k], from, to);
    from = to;
  }
  return total;
}

DirectionHypothesis follow_local(const FlatCommand& flat, const TopoMap& map, const LandmarkModel& model,
                                 const std::string& start, const FollowConfig& config) {
  if (!map.has_node(start)) throw InvalidInput("start node '" + start + "' is not in the map");
  if (flat.segments.empty()) throw InvalidInput("command has no segments");
  const SegmentScorer scorer(map, model);
  LocalRun run(flat, map, scorer, config.threshold);
  std::optional<DirectionHypothesis> best;
  for (Dir h : start_headings(config)) {
    DirectionHypothesis cand = run.run(start, h);
    cand.segment_scores.clear();
    DirectionState from = cand.path.front();
    for (std::size_t k = 0; k < cand.segment_ends.size(); ++k) {
      const DirectionState& to = cand.path[cand.segment_ends[k]];
      cand.segment_scores.push_back(scorer.transition(flat.segments[k], from, to));
      from = to;
    }
    if (!best || cand.score > best->score) best = std::move(cand);
  }
  return *best;
}

DirectionHypothesis follow_greedy(const FlatCommand& flat, const TopoMap& map, const LandmarkModel& model,
                                  const std::string& start, const FollowConfig& config) {
  FollowConfig c = config;
  c.threshold = 0.0;
  return follow_local(flat, map, model, start, c);
}

DirectionHypothesis follow_exploring(const FlatCommand& flat, const TopoMap& map, const LandmarkModel& model,
                                     const std::string& start, const FollowConfig& config) {
  if (config.threshold < 0.0 || config.threshold >= 1.0) throw InvalidInput("threshold must lie in [0, 1)");
  return follow_local(flat, map, model, start, config);
}

namespace {

DirectionHypothesis route_hypothesis(const TopoMap& map, const std::string& start, const std::string& goal) {
  const RouteTable routes(map);
  DirectionHypothesis h;
  h.path = {{start, Dir::East}};
  auto r = routes.route(map.index_of(start), map.index_of(goal));
  if (r.empty()) r = {map.index_of(goal)};
  for (const DirectionState& s : walk(map, r, Dir::East)) h.path.push_back(s);
  if (h.path.back().node != goal) h.path.push_back({goal, Dir::East});
  h.segment_ends = {h.path.size() - 1};
  for (const DirectionState& s : h.path) h.visited.push_back(s.node);
  return h;
}

}  // namespace

DirectionHypothesis follow_last_phrase(const FlatCommand& flat, const TopoMap& map, const LandmarkModel& model,
                                       const std::string& start) {
  if (!map.has_node(start)) throw InvalidInput("start node '" + start + "' is not in the map");
  const DirectionSegment* last = nullptr;
  for (const DirectionSegment& s : flat.segments)
    if (s.landmark_words) last = &s;
  if (!last) return route_hypothesis(map, start, start);
  const SegmentScorer scorer(map, model);
  std::size_t best = 0;
  for (std::size_t i = 1; i < map.size(); ++i)
    if (scorer.landmark_log(*last, i) > scorer.landmark_log(*last, best)) best = i;
  DirectionHypothesis h = route_hypothesis(map, start, map.node(best).id);
  h.score = scorer.landmark_log(*last, best);
  return h;
}

DirectionHypothesis follow_random(const TopoMap& map, const std::string& start, std::uint64_t seed) {
  if (!map.has_node(start)) throw InvalidInput("start node '" + start + "' is not in the map");
  std::mt19937_64 rng(seed);
  return route_hypothesis(map, start, map.node(rng() % map.size()).id);
}

double exploration_fraction(const TopoMap& map, const std::string& start, const std::string& goal,
                            const std::vector<std::string>& visited) {
  const RouteTable routes(map);
  std::set<std::string> on;
  for (std::size_t i : routes.route(map.index_of(start), map.index_of(goal))) on.insert(map.node(i).id);
  on.insert(start);
  on.insert(goal);
  const std::size_t off = map.size() - on.size();
  if (off == 0) return 0.0;
  std::set<std::string> hit;
  for (const std::string& v : visited)
    if (!on.contains(v)) hit.insert(v);
  return static_cast<double>(hit.size()) / static_cast<double>(off);
}

double node_distance(const TopoMap& map, const std::string& a, const std::string& b) {
  const TopoNode& u = map.node(a);
  const TopoNode& v = map.node(b);
  const double dz = u.z() - v.z();
  return std::sqrt(std::pow(u.pos.x - v.pos.x, 2) + std::pow(u.pos.y - v.pos.y, 2) + dz * dz);
}

std::string hypothesis_report(const DirectionHypothesis& h) {
  std::ostringstream out;
  out << std::setprecision(6) << std::fixed;
  out << "path";
  for (const DirectionState& s : h.path) out << " " << s.node << ":" << to_string(s.heading);
  out << "\nsegments";
  for (std::size_t k = 0; k < h.segment_ends.size(); ++k) {
    const DirectionState& s = h.path[h.segment_ends[k]];
    out << " " << s.node << ":" << to_string(s.heading);
    if (k < h.segment_scores.size()) out << "(" << h.segment_scores[k] << ")";
  }
  out << "\nscore " << h.score << "\nend " << h.end().node << "\n";
  return out.str();
}

}  // namespace g3
