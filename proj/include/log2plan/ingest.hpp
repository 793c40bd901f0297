#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "log2plan/gui_types.hpp"

namespace log2plan {

enum class EventKind {
  mouse_down,
  mouse_up,
  mouse_click,
  mouse_double_click,
  mouse_right_click,
  scroll,
  key_press,
  key_type,
  window_focus,
  window_open,
  window_close,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);
bool is_mouse_kind(EventKind kind);

// One OS-level interception as recorded by the hook layer.
struct RawEvent {
  std::int64_t ts = 0;  // ms since Unix epoch
  EventKind kind = EventKind::mouse_click;
  std::optional<ObjectRef> target;
  WindowContext window;
  std::optional<std::string> text;
  std::optional<std::string> keys;
  std::optional<std::int64_t> scroll_amount;

  friend bool operator==(const RawEvent&, const RawEvent&) = default;
};

// Returns an empty string when the event satisfies the per-kind field rules,
// otherwise a human-readable cause.
std::string validate_event(const RawEvent& e);

nlohmann::json event_to_json(const RawEvent& e);
RawEvent event_from_json(const nlohmann::json& j);

struct MalformedRecord {
  std::size_t line = 0;  // 1-based
  std::string cause;
};

struct ParseResult {
  std::vector<RawEvent> events;
  std::vector<MalformedRecord> malformed;
};

struct ParseOptions {
  bool strict = false;
};

// Parses newline-delimited JSON records. Malformed lines are collected (or
// thrown in strict mode); a decreasing timestamp is always fatal.
ParseResult parse_log(std::string_view bytes, const ParseOptions& opts = {});

// Inverse of parse_log for valid event lists: one compact record per line.
std::string serialize_log(const std::vector<RawEvent>& events);

inline constexpr std::int64_t kDefaultGapMs = 3'600'000;

// Partition key "<env_class>/<app>", env_class lowercased, e.g. "local/FileExplorer".
std::string env_key(const WindowContext& w);

struct Session {
  std::string id;
  std::vector<RawEvent> events;
  std::map<std::string, std::vector<RawEvent>> env_partitions;
};

// Starts a new session wherever ts[i] - ts[i-1] >= gap_ms.
std::vector<Session> sessionize(const std::vector<RawEvent>& events,
                                std::int64_t gap_ms = kDefaultGapMs);

}  // namespace log2plan
