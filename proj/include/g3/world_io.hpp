#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "g3/world.hpp"

namespace g3 {

using Json = nlohmann::json;

Json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

Json pose_to_json(const Pose& p);
Pose pose_from_json(const Json& j);

EnvironmentModel environment_from_json(const Json& j);
Json environment_to_json(const EnvironmentModel& env);
EnvironmentModel load_environment(const std::filesystem::path& path);
void save_environment(const EnvironmentModel& env, const std::filesystem::path& path);

TopoMap map_from_json(const Json& j);
Json map_to_json(const TopoMap& map);
TopoMap load_map(const std::filesystem::path& path);
void save_map(const TopoMap& map, const std::filesystem::path& path);

}  // namespace g3
