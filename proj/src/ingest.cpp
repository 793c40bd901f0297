#include "log2plan/ingest.hpp"

#include <array>
#include <utility>

#include "log2plan/error.hpp"
#include "log2plan/text.hpp"

namespace log2plan {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 11> kKindNames{{
    {EventKind::mouse_down, "mouse-down"},
    {EventKind::mouse_up, "mouse-up"},
    {EventKind::mouse_click, "mouse-click"},
    {EventKind::mouse_double_click, "mouse-double-click"},
    {EventKind::mouse_right_click, "mouse-right-click"},
    {EventKind::scroll, "scroll"},
    {EventKind::key_press, "key-press"},
    {EventKind::key_type, "key-type"},
    {EventKind::window_focus, "window-focus"},
    {EventKind::window_open, "window-open"},
    {EventKind::window_close, "window-close"},
}};

}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<EventKind> parse_event_kind(std::string_view s) {
  for (const auto& [k, name] : kKindNames) {
    if (name == s) return k;
  }
  return std::nullopt;
}

bool is_mouse_kind(EventKind kind) {
  switch (kind) {
    case EventKind::mouse_down:
    case EventKind::mouse_up:
    case EventKind::mouse_click:
    case EventKind::mouse_double_click:
    case EventKind::mouse_right_click:
      return true;
    default:
      return false;
  }
}

std::string validate_event(const RawEvent& e) {
  if (e.window.app.empty()) return "window.app must be non-empty";
  if (e.target) {
    if (e.target->name.empty() && e.target->control_type.empty())
      return "target needs a name or a control_type";
    if (e.target->position.x < 0 || e.target->position.y < 0)
      return "target position must be non-negative";
  }
  if (is_mouse_kind(e.kind) && !e.target) return "mouse events require a target";
  if (e.kind == EventKind::key_press && (!e.keys || e.keys->empty()))
    return "key-press requires keys";
  if (e.kind == EventKind::key_type && (!e.text || e.text->empty()))
    return "key-type requires text";
  return {};
}

nlohmann::json event_to_json(const RawEvent& e) {
  nlohmann::json j;
  j["ts"] = e.ts;
  j["kind"] = std::string(to_string(e.kind));
  if (e.target) j["target"] = *e.target;
  j["window"] = e.window;
  if (e.text) j["text"] = *e.text;
  if (e.keys) j["keys"] = *e.keys;
  if (e.scroll_amount) j["scroll_amount"] = *e.scroll_amount;
  return j;
}

RawEvent event_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::schema, "record is not an object");
  RawEvent e;
  if (!j.contains("ts") || !j["ts"].is_number_integer())
    throw Error(ErrorCode::schema, "ts must be an integer");
  e.ts = j["ts"].get<std::int64_t>();
  if (!j.contains("kind") || !j["kind"].is_string())
    throw Error(ErrorCode::schema, "kind must be a string");
  const auto kind = parse_event_kind(j["kind"].get<std::string>());
  if (!kind) throw Error(ErrorCode::schema, "unknown kind '" + j["kind"].get<std::string>() + "'");
  e.kind = *kind;
  if (!j.contains("window") || !j["window"].is_object())
    throw Error(ErrorCode::schema, "window must be an object");
  e.window = j["window"].get<WindowContext>();
  if (j.contains("target") && !j["target"].is_null()) e.target = j["target"].get<ObjectRef>();
  if (j.contains("text") && !j["text"].is_null()) e.text = j["text"].get<std::string>();
  if (j.contains("keys") && !j["keys"].is_null()) e.keys = j["keys"].get<std::string>();
  if (j.contains("scroll_amount") && !j["scroll_amount"].is_null())
    e.scroll_amount = j["scroll_amount"].get<std::int64_t>();
  if (auto cause = validate_event(e); !cause.empty()) throw Error(ErrorCode::schema, cause);
  return e;
}

ParseResult parse_log(std::string_view bytes, const ParseOptions& opts) {
  ParseResult out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    auto nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) nl = bytes.size();
    const std::string line = text::trim(bytes.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;

    RawEvent e;
    try {
      e = event_from_json(nlohmann::json::parse(line));
    } catch (const std::exception& ex) {
      if (opts.strict) {
        throw Error(ErrorCode::malformed_record,
                    "line " + std::to_string(line_no) + ": " + ex.what());
      }
      out.malformed.push_back({line_no, ex.what()});
      continue;
    }
    if (!out.events.empty() && e.ts < out.events.back().ts) {
      throw Error(ErrorCode::non_monotone_timestamp,
                  "line " + std::to_string(line_no) + ": ts " + std::to_string(e.ts) +
                      " < " + std::to_string(out.events.back().ts));
    }
    out.events.push_back(std::move(e));
  }
  return out;
}

std::string serialize_log(const std::vector<RawEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    out += event_to_json(e).dump();
    out += '\n';
  }
  return out;
}

std::string env_key(const WindowContext& w) {
  return text::lower(to_string(w.env_class)) + "/" + w.app;
}

std::vector<Session> sessionize(const std::vector<RawEvent>& events, std::int64_t gap_ms) {
  if (gap_ms <= 0) throw Error(ErrorCode::invalid_argument, "gap_ms must be positive");
  std::vector<Session> sessions;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i == 0 || events[i].ts - events[i - 1].ts >= gap_ms) {
      sessions.push_back({});
      sessions.back().id = "s" + std::to_string(sessions.size() - 1);
    }
    Session& s = sessions.back();
    s.events.push_back(events[i]);
    s.env_partitions[env_key(events[i].window)].push_back(events[i]);
  }
  return sessions;
}

}  // namespace log2plan
