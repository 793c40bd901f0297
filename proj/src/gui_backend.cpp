#include "log2plan/gui_backend.hpp"

#include <array>

#include "log2plan/error.hpp"
#include "log2plan/text.hpp"

namespace log2plan {

namespace {

constexpr std::array<std::pair<ActionVerb, std::string_view>, 8> kVerbs{{
    {ActionVerb::press, "press"},
    {ActionVerb::type, "type"},
    {ActionVerb::click, "click"},
    {ActionVerb::double_click, "double click"},
    {ActionVerb::right_click, "right click"},
    {ActionVerb::drag, "drag"},
    {ActionVerb::scroll, "scroll"},
    {ActionVerb::focus, "focus"},
}};

}  // namespace

std::string_view to_string(ActionVerb v) {
  for (const auto& [verb, name] : kVerbs) {
    if (verb == v) return name;
  }
  return "unknown";
}

std::optional<ActionVerb> parse_action_verb(std::string_view s) {
  for (const auto& [verb, name] : kVerbs) {
    if (text::iequals(name, s)) return verb;
  }
  return std::nullopt;
}

void to_json(nlohmann::json& j, const LowLevelAction& a) {
  j = {{"verb", std::string(to_string(a.verb))}};
  if (a.target) j["target"] = *a.target;
  if (a.text) j["text"] = *a.text;
  if (a.keys) j["keys"] = *a.keys;
  if (a.destination) j["destination"] = *a.destination;
  if (a.destination_point) j["destination_point"] = *a.destination_point;
  if (a.amount) j["amount"] = *a.amount;
}

void from_json(const nlohmann::json& j, LowLevelAction& a) {
  const auto v = parse_action_verb(j.at("verb").get<std::string>());
  if (!v) throw Error(ErrorCode::schema, "unknown verb " + j.at("verb").dump());
  a.verb = *v;
  a.target = j.contains("target") ? std::optional<Component>(j.at("target").get<Component>()) : std::nullopt;
  a.text = j.contains("text") ? std::optional<std::string>(j.at("text").get<std::string>()) : std::nullopt;
  a.keys = j.contains("keys") ? std::optional<std::string>(j.at("keys").get<std::string>()) : std::nullopt;
  a.destination =
      j.contains("destination") ? std::optional<Component>(j.at("destination").get<Component>()) : std::nullopt;
  a.destination_point =
      j.contains("destination_point") ? std::optional<Point>(j.at("destination_point").get<Point>()) : std::nullopt;
  a.amount = j.contains("amount") ? std::optional<double>(j.at("amount").get<double>()) : std::nullopt;
}

std::string validate_action(const LowLevelAction& a) {
  switch (a.verb) {
    case ActionVerb::click:
    case ActionVerb::double_click:
    case ActionVerb::right_click:
    case ActionVerb::focus:
      if (!a.target) return std::string(to_string(a.verb)) + " needs a target";
      break;
    case ActionVerb::type:
      if (!a.text || a.text->empty()) return "type needs text";
      break;
    case ActionVerb::press:
      if (!a.keys || a.keys->empty()) return "press needs keys";
      break;
    case ActionVerb::drag:
      if (!a.target) return "drag needs a target";
      if (!a.destination && !a.destination_point && !a.amount) return "drag needs a destination";
      break;
    case ActionVerb::scroll:
      if (!a.target) return "scroll needs a target window";
      if (!a.amount) return "scroll needs an amount";
      break;
  }
  return {};
}

void to_json(nlohmann::json& j, const Snapshot& s) {
  j = {{"components", s.components}, {"windows", s.windows}};
  j["window"] = s.window ? nlohmann::json(*s.window) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, Snapshot& s) {
  s.components = j.value("components", ComponentDictionary{});
  s.windows = j.value("windows", std::vector<WindowContext>{});
  if (j.contains("window") && !j.at("window").is_null()) {
    s.window = j.at("window").get<WindowContext>();
  } else {
    s.window.reset();
  }
}

}  // namespace log2plan
