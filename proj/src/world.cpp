#include "g3/world.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "g3/error.hpp"

namespace g3 {

// --- trajectories and groundings ---------------------------------------------

Trajectory::Trajectory(std::vector<Pose> poses) : poses_(std::move(poses)) {
  if (poses_.empty()) throw InvalidInput("trajectory must contain at least one pose");
  for (std::size_t i = 0; i < poses_.size(); ++i) {
    const Pose& p = poses_[i];
    if (!(p.tau >= 0.0)) throw InvalidInput("trajectory pose has negative time");
    if (!std::isfinite(p.roll) || !std::isfinite(p.pitch) || !std::isfinite(p.yaw))
      throw InvalidInput("trajectory pose has non-finite orientation");
    if (i > 0 && p.tau < poses_[i - 1].tau) throw InvalidInput("trajectory time decreases");
  }
}

Pose Trajectory::at(double tau) const {
  if (tau <= poses_.front().tau) return poses_.front();
  if (tau >= poses_.back().tau) return poses_.back();
  auto hi = std::upper_bound(poses_.begin(), poses_.end(), tau,
                             [](double t, const Pose& p) { return t < p.tau; });
  const Pose& b = *hi;
  const Pose& a = *(hi - 1);
  const double span = b.tau - a.tau;
  const double w = span > 0.0 ? (tau - a.tau) / span : 0.0;
  Pose out = a;
  out.tau = tau;
  out.x = a.x + w * (b.x - a.x);
  out.y = a.y + w * (b.y - a.y);
  out.z = a.z + w * (b.z - a.z);
  return out;
}

std::vector<Vec2> Grounding::footprint(std::size_t pose_index) const {
  const Pose& p0 = path.front();
  const Pose& pi = path.poses().at(pose_index);
  if (pose_index == 0) return shape.polygon;
  return poly::translated(shape.polygon, pi.xy() - p0.xy());
}

Vec2 Grounding::centroid(std::size_t pose_index) const {
  const Vec2 c0 = poly::centroid(shape.polygon);
  return c0 + (path.poses().at(pose_index).xy() - path.front().xy());
}

std::vector<Vec2> Grounding::centroid_track() const {
  std::vector<Vec2> out;
  out.reserve(path.size());
  const Vec2 c0 = poly::centroid(shape.polygon);
  const Vec2 p0 = path.front().xy();
  for (const Pose& p : path.poses()) out.push_back(c0 + (p.xy() - p0));
  return out;
}

Grounding make_static_grounding(std::string id, std::vector<Vec2> polygon, double height,
                                std::set<std::string> tags, double base_z) {
  Grounding g;
  g.id = std::move(id);
  const Vec2 c = poly::centroid(polygon);
  g.shape = Prism{std::move(polygon), height};
  g.tags = std::move(tags);
  Pose p;
  p.x = c.x;
  p.y = c.y;
  p.z = base_z;
  g.path = Trajectory({p});
  return g;
}

Grounding path_grounding(std::string id, const Trajectory& path) {
  Grounding g;
  g.id = std::move(id);
  const Vec2 c = path.front().xy();
  const double h = kRobotSize / 2.0;
  g.shape = Prism{{{c.x - h, c.y - h}, {c.x + h, c.y - h}, {c.x + h, c.y + h}, {c.x - h, c.y + h}},
                  1.5};
  g.path = path;
  return g;
}

const Grounding* EnvironmentModel::find(std::string_view id) const {
  for (const Grounding& g : objects)
    if (g.id == id) return &g;
  for (const Grounding& g : places)
    if (g.id == id) return &g;
  return nullptr;
}

const Grounding& EnvironmentModel::at(std::string_view id) const {
  const Grounding* g = find(id);
  if (!g) throw InvalidInput("unknown grounding id '" + std::string(id) + "'");
  return *g;
}

namespace {

void validate_tag(const std::string& tag) {
  if (tag.empty()) throw InvalidInput("empty tag");
  for (char c : tag)
    if (std::isspace(static_cast<unsigned char>(c)) || std::isupper(static_cast<unsigned char>(c)))
      throw InvalidInput("tag '" + tag + "' is not a lowercase token");
}

}  // namespace

void EnvironmentModel::validate() const {
  std::set<std::string> seen;
  auto check = [&](const Grounding& g) {
    if (g.id.empty()) throw InvalidInput("grounding with empty id");
    if (!seen.insert(g.id).second) throw InvalidInput("duplicate grounding id '" + g.id + "'");
    for (const std::string& t : g.tags) validate_tag(t);
    if (g.shape.polygon.size() < 3) throw InvalidInput(g.id + ": polygon needs >= 3 vertices");
    if (!poly::is_simple(g.shape.polygon)) throw InvalidInput(g.id + ": polygon is not simple");
    if (!(g.shape.height > 0.0)) throw InvalidInput(g.id + ": height must be positive");
    for (std::size_t i = 0; i < g.path.size(); ++i)
      for (const Vec2& v : g.footprint(i))
        if (!bbox.contains(v)) throw InvalidInput(g.id + ": shape outside scene bbox");
  };
  for (const Grounding& g : objects) check(g);
  for (const Grounding& g : places) check(g);
  if (!bbox.contains(robot_start.xy())) throw InvalidInput("robot start outside scene bbox");
}

EnvironmentModel with_generated_places(EnvironmentModel env) {
  std::vector<Grounding> generated;
  for (const Grounding& o : env.objects) {
    const auto fp = o.footprint();
    Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 hi{-lo.x, -lo.y};
    for (const Vec2& v : fp) {
      lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
      hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
    }
    const double w = hi.x - lo.x, h = hi.y - lo.y;
    auto add = [&](const std::string& suffix, Vec2 offset, double base) {
      Grounding p = make_static_grounding(o.id + suffix, poly::translated(fp, offset), 1.0, {}, base);
      p.anchor = o.id;
      for (const Vec2& v : p.shape.polygon)
        if (!env.bbox.contains(v)) return;
      if (env.find(p.id)) return;
      generated.push_back(std::move(p));
    };
    add("_top", {0.0, 0.0}, o.top_z());
    add("_e", {w, 0.0}, o.base_z());
    add("_n", {0.0, h}, o.base_z());
    add("_w", {-w, 0.0}, o.base_z());
    add("_s", {0.0, -h}, o.base_z());
  }
  for (Grounding& g : generated) env.places.push_back(std::move(g));
  return env;
}

// --- topological maps ----------------------------------------------------------

std::string_view to_string(Dir d) {
  switch (d) {
    case Dir::East: return "E";
    case Dir::North: return "N";
    case Dir::West: return "W";
    case Dir::South: return "S";
    case Dir::Up: return "U";
    case Dir::Down: return "D";
  }
  return "?";
}

Dir dir_from_string(std::string_view s) {
  std::string l(s);
  for (char& c : l) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (l == "e" || l == "east") return Dir::East;
  if (l == "n" || l == "north") return Dir::North;
  if (l == "w" || l == "west") return Dir::West;
  if (l == "s" || l == "south") return Dir::South;
  if (l == "u" || l == "up") return Dir::Up;
  if (l == "d" || l == "down") return Dir::Down;
  throw InvalidInput("unknown direction '" + std::string(s) + "'");
}

bool is_horizontal(Dir d) { return d != Dir::Up && d != Dir::Down; }

double heading_angle(Dir d) {
  switch (d) {
    case Dir::East: return 0.0;
    case Dir::North: return std::numbers::pi / 2.0;
    case Dir::West: return std::numbers::pi;
    case Dir::South: return -std::numbers::pi / 2.0;
    default: throw InvalidInput("vertical direction has no heading");
  }
}

Prism square_region(Vec2 c, double size) {
  const double h = size / 2.0;
  return Prism{{{c.x - h, c.y - h}, {c.x + h, c.y - h}, {c.x + h, c.y + h}, {c.x - h, c.y + h}},
               kLevelHeight};
}

TopoMap::TopoMap(std::vector<TopoNode> nodes, std::vector<TopoEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  int max_level = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    TopoNode& n = nodes_[i];
    if (n.level < 0) throw InvalidInput("node '" + n.id + "' has negative level");
    if (n.region.polygon.empty()) n.region = square_region(n.pos, 2.0);
    if (!poly::contains(n.region.polygon, n.pos))
      throw InvalidInput("node '" + n.id + "' lies outside its region");
    if (!index_.emplace(n.id, i).second) throw InvalidInput("duplicate node id '" + n.id + "'");
    max_level = std::max(max_level, n.level);
  }
  levels_ = max_level + 1;
  out_.assign(nodes_.size(), {});
  for (const TopoEdge& e : edges_) {
    if (!has_node(e.from) || !has_node(e.to))
      throw InvalidInput("edge references unknown node " + e.from + " -> " + e.to);
    if (!is_horizontal(e.dir) && levels_ < 2)
      throw InvalidInput("vertical edge in a single-level map");
    out_[index_of(e.from)].push_back(e);
  }
  for (auto& list : out_)
    std::sort(list.begin(), list.end(), [](const TopoEdge& a, const TopoEdge& b) {
      return a.to != b.to ? a.to < b.to : a.dir < b.dir;
    });
}

bool TopoMap::has_node(std::string_view id) const { return index_.contains(std::string(id)); }

std::size_t TopoMap::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) throw InvalidInput("unknown node id '" + std::string(id) + "'");
  return it->second;
}

bool TopoMap::adjacent(std::string_view a, std::string_view b) const {
  for (const TopoEdge& e : out_[index_of(a)])
    if (e.to == b) return true;
  return false;
}

std::size_t TopoMap::nearest(Vec2 p, std::optional<int> level) const {
  std::size_t best = nodes_.size();
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (level && nodes_[i].level != *level) continue;
    const double d = dist(p, nodes_[i].pos);
    if (d < best_d || (d == best_d && best < nodes_.size() && nodes_[i].id < nodes_[best].id)) {
      best = i;
      best_d = d;
    }
  }
  if (best == nodes_.size()) throw InvalidInput("map has no nodes on the requested level");
  return best;
}

TopoMap TopoMap::with_visible_tags(const std::vector<std::set<std::string>>& tags) const {
  if (tags.size() != nodes_.size()) throw InvalidInput("visibility size mismatch");
  std::vector<TopoNode> nodes = nodes_;
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i].visible_tags = tags[i];
  return TopoMap(std::move(nodes), edges_);
}

std::set<std::string> visible_objects(const TopoMap& map, std::string_view node) {
  return map.node(node).visible_tags;
}

// --- manipulation space --------------------------------------------------------

std::string ManipAction::str() const {
  switch (kind) {
    case Kind::Move: return "M:" + target;
    case Kind::PickUp: return "P:" + target;
    case Kind::PutDown: return "D:" + target;
  }
  return {};
}

ManipAction ManipAction::parse(std::string_view s) {
  if (s.size() < 3 || s[1] != ':') throw InvalidInput("malformed action '" + std::string(s) + "'");
  std::string target(s.substr(2));
  switch (s[0]) {
    case 'M': return move(target);
    case 'P': return pick_up(target);
    case 'D': return put_down(target);
    default: throw InvalidInput("malformed action '" + std::string(s) + "'");
  }
}

std::string to_string(const ActionSeq& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ',';
    out += seq[i].str();
  }
  return out;
}

ActionSeq parse_action_seq(std::string_view s) {
  ActionSeq out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    out.push_back(ManipAction::parse(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

ManipSpace::ManipSpace(const EnvironmentModel& env, const TopoMap& map) : env_(env), map_(map) {
  if (map_.size() == 0) throw InvalidInput("manipulation space needs a non-empty map");
  places_ = env_.places.empty() ? with_generated_places(env_).places : env_.places;
  const std::optional<int> ground = map_.levels() > 1 ? std::optional<int>(0) : std::nullopt;
  for (const Grounding& o : env_.objects)
    object_node_[o.id] = map_.node(map_.nearest(o.centroid(), ground)).id;
  for (const Grounding& p : places_)
    place_node_[p.id] = map_.node(map_.nearest(p.centroid(), ground)).id;
  start_node_ = map_.node(map_.nearest(env_.robot_start.xy(), ground)).id;
}

ManipState ManipSpace::initial_state() const {
  ManipState s;
  s.robot_node = start_node_;
  s.placements = object_node_;
  return s;
}

const std::string& ManipSpace::location_node(const std::string& location) const {
  if (map_.has_node(location)) return map_.node(location).id;
  auto it = place_node_.find(location);
  if (it == place_node_.end()) throw InvalidInput("unknown location '" + location + "'");
  return it->second;
}

std::vector<ManipAction> ManipSpace::legal_actions(const ManipState& s) const {
  std::vector<ManipAction> out;
  const std::size_t here = map_.index_of(s.robot_node);
  std::string last;
  for (const TopoEdge& e : map_.out_edges(here)) {
    if (e.to == last) continue;
    last = e.to;
    out.push_back(ManipAction::move(e.to));
  }
  if (!s.carried) {
    for (const auto& [object, location] : s.placements) {
      if (env_.at(object).fixed) continue;
      if (location_node(location) == s.robot_node) out.push_back(ManipAction::pick_up(object));
    }
  } else {
    std::vector<std::string> targets;
    for (const Grounding& p : places_) {
      if (p.anchor == *s.carried) continue;
      const std::string& node = place_node_.at(p.id);
      if (node == s.robot_node || map_.adjacent(s.robot_node, node)) targets.push_back(p.id);
    }
    std::sort(targets.begin(), targets.end());
    for (std::string& t : targets) out.push_back(ManipAction::put_down(std::move(t)));
  }
  return out;
}

bool ManipSpace::is_legal(const ManipState& s, const ManipAction& a) const {
  for (const ManipAction& b : legal_actions(s))
    if (a == b) return true;
  return false;
}

ManipState ManipSpace::apply(const ManipState& s, const ManipAction& a) const {
  if (!is_legal(s, a)) throw InvalidInput("illegal action " + a.str() + " at " + s.robot_node);
  ManipState next = s;
  switch (a.kind) {
    case ManipAction::Kind::Move: next.robot_node = a.target; break;
    case ManipAction::Kind::PickUp:
      next.carried = a.target;
      next.placements.erase(a.target);
      break;
    case ManipAction::Kind::PutDown:
      next.placements[*next.carried] = a.target;
      next.carried.reset();
      break;
  }
  return next;
}

std::vector<ManipState> ManipSpace::rollout(const ActionSeq& seq) const {
  std::vector<ManipState> states{initial_state()};
  for (const ManipAction& a : seq) states.push_back(apply(states.back(), a));
  return states;
}

std::optional<ManipAction> ManipSpace::transition(const ManipState& from,
                                                  const ManipState& to) const {
  for (const ManipAction& a : legal_actions(from))
    if (apply(from, a) == to) return a;
  return std::nullopt;
}

Pose ManipSpace::node_pose(const std::string& node, double tau, double yaw) const {
  const TopoNode& n = map_.node(node);
  Pose p;
  p.tau = tau;
  p.x = n.pos.x;
  p.y = n.pos.y;
  p.z = n.z();
  p.yaw = yaw;
  return p;
}

EventTrajectories ManipSpace::trajectories(std::span<const ManipState> states) const {
  if (states.empty()) throw InvalidInput("empty state sequence");
  for (std::size_t i = 1; i < states.size(); ++i)
    if (!transition(states[i - 1], states[i]))
      throw InvalidInput("illegal transition between states " + std::to_string(i - 1) + " and " +
                         std::to_string(i));

  std::vector<Pose> robot;
  double yaw = env_.robot_start.yaw;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i > 0 && states[i].robot_node != states[i - 1].robot_node) {
      const Vec2 d = map_.node(states[i].robot_node).pos - map_.node(states[i - 1].robot_node).pos;
      if (norm(d) > 0.0) yaw = std::atan2(d.y, d.x);
    }
    robot.push_back(node_pose(states[i].robot_node, static_cast<double>(i), yaw));
  }

  EventTrajectories out;
  for (const Grounding& o : env_.objects) {
    const Pose p0 = o.path.front();
    const Vec2 ref_offset = p0.xy() - poly::centroid(o.shape.polygon);
    std::vector<Pose> poses;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const ManipState& s = states[i];
      Pose p = p0;
      if (s.carried && *s.carried == o.id) {
        p = robot[i];
      } else {
        auto it = s.placements.find(o.id);
        if (it != s.placements.end() && !map_.has_node(it->second)) {
          const Grounding* place = nullptr;
          for (const Grounding& g : places_)
            if (g.id == it->second) place = &g;
          if (!place) throw InvalidInput("unknown place '" + it->second + "'");
          const Vec2 c = place->centroid() + ref_offset;
          p.x = c.x;
          p.y = c.y;
          p.z = place->base_z();
        }
      }
      p.tau = static_cast<double>(i);
      poses.push_back(p);
    }
    out.objects.emplace(o.id, Trajectory(std::move(poses)));
  }
  out.robot = Trajectory(std::move(robot));
  return out;
}

std::vector<ManipAction> legal_actions(const ManipState& state, const TopoMap& map,
                                       const EnvironmentModel& env) {
  return ManipSpace(env, map).legal_actions(state);
}

EventTrajectories state_to_trajectory(std::span<const ManipState> states,
                                      const EnvironmentModel& env, const TopoMap& map) {
  return ManipSpace(env, map).trajectories(states);
}

}  // namespace g3
