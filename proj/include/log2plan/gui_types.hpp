#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace log2plan {

struct Point {
  int x = 0;
  int y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

// A GUI control as seen through the accessibility layer: name, control type and
// on-screen position. Raw log targets use the same shape.
struct Component {
  std::string name;
  std::string control_type;
  Point position;

  friend bool operator==(const Component&, const Component&) = default;
};

using ObjectRef = Component;
using ComponentDictionary = std::vector<Component>;

enum class EnvClass { Web, Local, App };

std::string_view to_string(EnvClass env);
std::optional<EnvClass> parse_env_class(std::string_view text);

struct WindowContext {
  std::string app;
  std::string title;
  EnvClass env_class = EnvClass::Local;

  friend bool operator==(const WindowContext&, const WindowContext&) = default;
};

void to_json(nlohmann::json& j, const Point& p);
void from_json(const nlohmann::json& j, Point& p);
void to_json(nlohmann::json& j, const Component& c);
void from_json(const nlohmann::json& j, Component& c);
void to_json(nlohmann::json& j, const WindowContext& w);
void from_json(const nlohmann::json& j, WindowContext& w);

}  // namespace log2plan
