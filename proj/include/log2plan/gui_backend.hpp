#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "log2plan/gui_types.hpp"

namespace log2plan {

// The eight executor verbs.
enum class ActionVerb { press, type, click, double_click, right_click, drag, scroll, focus };

std::string_view to_string(ActionVerb v);
std::optional<ActionVerb> parse_action_verb(std::string_view s);

struct LowLevelAction {
  ActionVerb verb = ActionVerb::click;
  std::optional<Component> target;
  std::optional<std::string> text;
  std::optional<std::string> keys;
  std::optional<Component> destination;
  std::optional<Point> destination_point;
  std::optional<double> amount;  // fraction of window height for scroll and scroll-bar drags

  friend bool operator==(const LowLevelAction&, const LowLevelAction&) = default;
};

void to_json(nlohmann::json& j, const LowLevelAction& a);
void from_json(const nlohmann::json& j, LowLevelAction& a);

// Operand violations for the action's verb; empty when well-formed.
std::string validate_action(const LowLevelAction& a);

struct ActionResult {
  bool ok = true;
  bool changed_window = false;
  std::string detail;
};

struct Snapshot {
  ComponentDictionary components;
  std::optional<WindowContext> window;  // active window
  std::vector<WindowContext> windows;   // top-level windows, most recently used first
};

void to_json(nlohmann::json& j, const Snapshot& s);
void from_json(const nlohmann::json& j, Snapshot& s);

// apply() is synchronous: a capture() after it observes the effect. Throwing
// Error(backend_failure) means the backend itself broke, not the action.
class GuiBackend {
 public:
  virtual ~GuiBackend() = default;
  virtual Snapshot capture() = 0;
  virtual ActionResult apply(const LowLevelAction& a) = 0;
  virtual Point screen_bounds() const = 0;
};

}  // namespace log2plan
