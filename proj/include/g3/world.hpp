#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "g3/polygon.hpp"

namespace g3 {

/// Vertical spacing between map levels, meters.
inline constexpr double kLevelHeight = 3.0;

struct Pose {
  double tau = 0.0;
  double x = 0.0, y = 0.0, z = 0.0;
  double roll = 0.0, pitch = 0.0, yaw = 0.0;

  Vec2 xy() const { return {x, y}; }
  bool operator==(const Pose&) const = default;
};

/// Vertical prism: a footprint polygon extruded by `height`.
struct Prism {
  std::vector<Vec2> polygon;
  double height = 1.0;
};

/// Ordered poses with non-decreasing time; position between poses is
/// interpolated linearly.
class Trajectory {
 public:
  Trajectory() : poses_{Pose{}} {}
  explicit Trajectory(std::vector<Pose> poses);

  const std::vector<Pose>& poses() const { return poses_; }
  std::size_t size() const { return poses_.size(); }
  const Pose& front() const { return poses_.front(); }
  const Pose& back() const { return poses_.back(); }
  Pose at(double tau) const;

 private:
  std::vector<Pose> poses_;
};

/// An object, place, path or event: shape, perceptual tags and trajectory.
/// The footprint polygon is given in world coordinates at the first pose;
/// later poses translate it.
struct Grounding {
  std::string id;
  Prism shape;
  std::set<std::string> tags;
  Trajectory path;
  /// For generated places, the object the place was derived from.
  std::string anchor;
  /// Fixed objects (trucks, walls) cannot be picked up.
  bool fixed = false;

  std::vector<Vec2> footprint(std::size_t pose_index = 0) const;
  Vec2 centroid(std::size_t pose_index = 0) const;
  double base_z(std::size_t pose_index = 0) const { return path.poses().at(pose_index).z; }
  double top_z(std::size_t pose_index = 0) const { return base_z(pose_index) + shape.height; }
  bool is_static() const { return path.size() == 1; }
  /// Footprint centroid at every pose.
  std::vector<Vec2> centroid_track() const;
};

struct BBox {
  Vec2 min;
  Vec2 max;

  double diagonal() const { return dist(min, max); }
  bool contains(Vec2 p) const {
    return min.x <= p.x && p.x <= max.x && min.y <= p.y && p.y <= max.y;
  }
};

struct EnvironmentModel {
  std::vector<Grounding> objects;
  std::vector<Grounding> places;
  Pose robot_start;
  BBox bbox;

  const Grounding* find(std::string_view id) const;
  const Grounding& at(std::string_view id) const;
  /// Checks id uniqueness, tag format, polygon validity and bbox containment.
  void validate() const;
};

/// Appends a top-surface place and four side places for each object.
EnvironmentModel with_generated_places(EnvironmentModel env);

Grounding make_static_grounding(std::string id, std::vector<Vec2> polygon, double height,
                                std::set<std::string> tags, double base_z = 0.0);

// --- topological maps -------------------------------------------------------

enum class Dir { East, North, West, South, Up, Down };

std::string_view to_string(Dir d);
Dir dir_from_string(std::string_view s);
bool is_horizontal(Dir d);
/// Heading angle of a horizontal direction (East = 0, counter-clockwise).
double heading_angle(Dir d);
inline constexpr Dir kHeadings[4] = {Dir::East, Dir::North, Dir::West, Dir::South};

struct TopoNode {
  std::string id;
  Vec2 pos;
  int level = 0;
  Prism region;
  std::set<std::string> visible_tags;

  double z() const { return level * kLevelHeight; }
};

struct TopoEdge {
  std::string from;
  Dir dir = Dir::East;
  std::string to;
};

class TopoMap {
 public:
  TopoMap() = default;
  TopoMap(std::vector<TopoNode> nodes, std::vector<TopoEdge> edges);

  const std::vector<TopoNode>& nodes() const { return nodes_; }
  const std::vector<TopoEdge>& edges() const { return edges_; }
  int levels() const { return levels_; }

  bool has_node(std::string_view id) const;
  std::size_t index_of(std::string_view id) const;
  const TopoNode& node(std::string_view id) const { return nodes_[index_of(id)]; }
  const TopoNode& node(std::size_t i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }

  /// Outgoing edges of a node, sorted by target id then direction.
  const std::vector<TopoEdge>& out_edges(std::size_t i) const { return out_[i]; }
  bool adjacent(std::string_view a, std::string_view b) const;

  /// Nearest node to a point (ties broken by id), optionally restricted to a level.
  std::size_t nearest(Vec2 p, std::optional<int> level = std::nullopt) const;

  TopoMap with_visible_tags(const std::vector<std::set<std::string>>& tags) const;

 private:
  std::vector<TopoNode> nodes_;
  std::vector<TopoEdge> edges_;
  std::vector<std::vector<TopoEdge>> out_;
  std::unordered_map<std::string, std::size_t> index_;
  int levels_ = 1;
};

/// Tags stored on a node; visibility is computed when the map is built.
std::set<std::string> visible_objects(const TopoMap& map, std::string_view node);

/// Default square region of side `size` around a point.
Prism square_region(Vec2 center, double size);

// --- discrete manipulation space ---------------------------------------------

struct ManipState {
  std::string robot_node;
  std::optional<std::string> carried;
  std::map<std::string, std::string> placements;  // object id -> node or place id

  bool operator==(const ManipState&) const = default;
};

struct ManipAction {
  enum class Kind { Move, PickUp, PutDown };
  Kind kind = Kind::Move;
  std::string target;

  static ManipAction move(std::string node) { return {Kind::Move, std::move(node)}; }
  static ManipAction pick_up(std::string object) { return {Kind::PickUp, std::move(object)}; }
  static ManipAction put_down(std::string place) { return {Kind::PutDown, std::move(place)}; }

  /// Compact encoding, e.g. "M:n2", "P:pallet1", "D:truck_top".
  std::string str() const;
  static ManipAction parse(std::string_view s);
  bool operator==(const ManipAction&) const = default;
};

using ActionSeq = std::vector<ManipAction>;
std::string to_string(const ActionSeq& seq);
ActionSeq parse_action_seq(std::string_view s);

struct EventTrajectories {
  Trajectory robot;
  std::map<std::string, Trajectory> objects;
};

/// State/action space over a topological map. Holds references to the
/// environment and map, which must outlive it.
class ManipSpace {
 public:
  ManipSpace(const EnvironmentModel& env, const TopoMap& map);

  const EnvironmentModel& env() const { return env_; }
  const TopoMap& map() const { return map_; }

  ManipState initial_state() const;
  std::vector<ManipAction> legal_actions(const ManipState& s) const;
  bool is_legal(const ManipState& s, const ManipAction& a) const;
  /// Throws InvalidInput on an illegal action.
  ManipState apply(const ManipState& s, const ManipAction& a) const;
  std::vector<ManipState> rollout(const ActionSeq& seq) const;
  std::optional<ManipAction> transition(const ManipState& from, const ManipState& to) const;

  EventTrajectories trajectories(std::span<const ManipState> states) const;
  EventTrajectories trajectories(const ActionSeq& seq) const { return trajectories(rollout(seq)); }

  /// Map node hosting an object location (node id or place id).
  const std::string& location_node(const std::string& location) const;
  const std::string& place_node(const std::string& place) const { return place_node_.at(place); }
  const std::vector<Grounding>& places() const { return places_; }

 private:
  Pose node_pose(const std::string& node, double tau, double yaw) const;

  const EnvironmentModel& env_;
  const TopoMap& map_;
  std::vector<Grounding> places_;
  std::map<std::string, std::string> object_node_;
  std::map<std::string, std::string> place_node_;
  std::string start_node_;
};

std::vector<ManipAction> legal_actions(const ManipState& state, const TopoMap& map,
                                       const EnvironmentModel& env);
EventTrajectories state_to_trajectory(std::span<const ManipState> states,
                                      const EnvironmentModel& env, const TopoMap& map);

/// Robot footprint used for path and event groundings, meters.
inline constexpr double kRobotSize = 1.0;

/// Wraps a trajectory as a grounding with the robot footprint.
Grounding path_grounding(std::string id, const Trajectory& path);

}  // namespace g3
