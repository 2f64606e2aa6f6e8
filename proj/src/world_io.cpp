#include "g3/world_io.hpp"

#include <fstream>
#include <sstream>

#include "g3/error.hpp"

namespace g3 {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

namespace {

double num(const Json& j, const char* key, double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) throw InvalidInput(std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

Vec2 point(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidInput("point must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Grounding grounding_from_json(const Json& j) {
  Grounding g;
  try {
    g.id = j.at("id").get<std::string>();
    for (const Json& t : j.value("tags", Json::array())) g.tags.insert(t.get<std::string>());
    for (const Json& v : j.at("polygon")) g.shape.polygon.push_back(point(v));
    g.shape.height = j.value("height", 1.0);
    g.fixed = j.value("fixed", false);
    g.anchor = j.value("anchor", std::string());
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed grounding: ") + e.what());
  }
  if (j.contains("path")) {
    std::vector<Pose> poses;
    for (const Json& p : j["path"]) poses.push_back(pose_from_json(p));
    g.path = Trajectory(std::move(poses));
  } else if (j.contains("pose")) {
    g.path = Trajectory({pose_from_json(j["pose"])});
  } else {
    const Vec2 c = poly::centroid(g.shape.polygon);
    Pose p;
    p.x = c.x;
    p.y = c.y;
    g.path = Trajectory({p});
  }
  return g;
}

Json grounding_to_json(const Grounding& g) {
  Json j;
  j["id"] = g.id;
  j["tags"] = Json(std::vector<std::string>(g.tags.begin(), g.tags.end()));
  Json poly = Json::array();
  for (const Vec2& v : g.shape.polygon) poly.push_back({v.x, v.y});
  j["polygon"] = poly;
  j["height"] = g.shape.height;
  if (g.fixed) j["fixed"] = true;
  if (!g.anchor.empty()) j["anchor"] = g.anchor;
  if (g.is_static()) {
    j["pose"] = pose_to_json(g.path.front());
  } else {
    Json path = Json::array();
    for (const Pose& p : g.path.poses()) path.push_back(pose_to_json(p));
    j["path"] = path;
  }
  return j;
}

}  // namespace

Json pose_to_json(const Pose& p) {
  return {{"tau", p.tau}, {"x", p.x}, {"y", p.y}, {"z", p.z},
          {"roll", p.roll}, {"pitch", p.pitch}, {"yaw", p.yaw}};
}

Pose pose_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("pose must be an object");
  Pose p;
  p.tau = num(j, "tau", 0.0);
  p.x = num(j, "x", 0.0);
  p.y = num(j, "y", 0.0);
  p.z = num(j, "z", 0.0);
  p.roll = num(j, "roll", 0.0);
  p.pitch = num(j, "pitch", 0.0);
  p.yaw = num(j, "yaw", 0.0);
  return p;
}

EnvironmentModel environment_from_json(const Json& j) {
  EnvironmentModel env;
  if (!j.is_object()) throw InvalidInput("environment must be an object");
  for (const Json& o : j.value("objects", Json::array())) env.objects.push_back(grounding_from_json(o));
  for (const Json& o : j.value("places", Json::array())) env.places.push_back(grounding_from_json(o));
  if (j.contains("robot_start")) env.robot_start = pose_from_json(j["robot_start"]);
  if (!j.contains("bbox") || !j["bbox"].is_array() || j["bbox"].size() != 2)
    throw InvalidInput("environment needs bbox [[xmin, ymin], [xmax, ymax]]");
  env.bbox = {point(j["bbox"][0]), point(j["bbox"][1])};
  env.validate();
  return env;
}

Json environment_to_json(const EnvironmentModel& env) {
  Json j;
  Json objects = Json::array(), places = Json::array();
  for (const Grounding& g : env.objects) objects.push_back(grounding_to_json(g));
  for (const Grounding& g : env.places) places.push_back(grounding_to_json(g));
  j["objects"] = objects;
  j["places"] = places;
  j["robot_start"] = pose_to_json(env.robot_start);
  j["bbox"] = {{env.bbox.min.x, env.bbox.min.y}, {env.bbox.max.x, env.bbox.max.y}};
  return j;
}

EnvironmentModel load_environment(const std::filesystem::path& path) {
  return environment_from_json(read_json_file(path));
}

void save_environment(const EnvironmentModel& env, const std::filesystem::path& path) {
  write_text_file(path, environment_to_json(env).dump(2) + "\n");
}

TopoMap map_from_json(const Json& j) {
  std::vector<TopoNode> nodes;
  std::vector<TopoEdge> edges;
  try {
    for (const Json& n : j.at("nodes")) {
      TopoNode node;
      node.id = n.at("id").get<std::string>();
      node.pos = point(n.at("pos"));
      node.level = n.value("level", 0);
      for (const Json& t : n.value("visible", Json::array())) node.visible_tags.insert(t.get<std::string>());
      if (n.contains("region"))
        for (const Json& v : n["region"]) node.region.polygon.push_back(point(v));
      nodes.push_back(std::move(node));
    }
    for (const Json& e : j.value("edges", Json::array())) {
      if (!e.is_array() || e.size() != 3) throw InvalidInput("edge must be [from, dir, to]");
      edges.push_back({e[0].get<std::string>(), dir_from_string(e[1].get<std::string>()),
                       e[2].get<std::string>()});
    }
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed map: ") + e.what());
  }
  return TopoMap(std::move(nodes), std::move(edges));
}

Json map_to_json(const TopoMap& map) {
  Json nodes = Json::array(), edges = Json::array();
  for (const TopoNode& n : map.nodes()) {
    Json region = Json::array();
    for (const Vec2& v : n.region.polygon) region.push_back({v.x, v.y});
    nodes.push_back({{"id", n.id},
                     {"pos", {n.pos.x, n.pos.y}},
                     {"level", n.level},
                     {"visible", std::vector<std::string>(n.visible_tags.begin(), n.visible_tags.end())},
                     {"region", region}});
  }
  for (const TopoEdge& e : map.edges()) edges.push_back({e.from, std::string(to_string(e.dir)), e.to});
  return {{"nodes", nodes}, {"edges", edges}};
}

TopoMap load_map(const std::filesystem::path& path) { return map_from_json(read_json_file(path)); }

void save_map(const TopoMap& map, const std::filesystem::path& path) {
  write_text_file(path, map_to_json(map).dump(2) + "\n");
}

}  // namespace g3
