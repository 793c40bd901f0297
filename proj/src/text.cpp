#include "log2plan/text.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "log2plan/error.hpp"
#include "log2plan/gui_types.hpp"

namespace log2plan {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::malformed_record: return "malformed-record";
    case ErrorCode::non_monotone_timestamp: return "non-monotone-timestamp";
    case ErrorCode::missing_binding: return "missing-binding";
    case ErrorCode::unknown_variant: return "unknown-variant";
    case ErrorCode::labeler_unavailable: return "labeler-unavailable";
    case ErrorCode::invalid_labeler_output: return "invalid-labeler-output";
    case ErrorCode::provider_unavailable: return "provider-unavailable";
    case ErrorCode::empty_text: return "empty-text";
    case ErrorCode::backend_unavailable: return "backend-unavailable";
    case ErrorCode::unplannable: return "unplannable";
    case ErrorCode::revision_limit_exceeded: return "revision-limit-exceeded";
    case ErrorCode::backend_failure: return "backend-failure";
    case ErrorCode::assist_timeout: return "assist-timeout";
    case ErrorCode::no_scripted_answer: return "no-scripted-answer";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::io: return "io";
    case ErrorCode::schema: return "schema";
  }
  return "unknown";
}

std::string_view to_string(EnvClass env) {
  switch (env) {
    case EnvClass::Web: return "Web";
    case EnvClass::Local: return "Local";
    case EnvClass::App: return "App";
  }
  return "Local";
}

std::optional<EnvClass> parse_env_class(std::string_view s) {
  if (text::iequals(s, "web")) return EnvClass::Web;
  if (text::iequals(s, "local")) return EnvClass::Local;
  if (text::iequals(s, "app")) return EnvClass::App;
  return std::nullopt;
}

void to_json(nlohmann::json& j, const Point& p) { j = nlohmann::json::array({p.x, p.y}); }

void from_json(const nlohmann::json& j, Point& p) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::schema, "position must be [x, y]");
  p.x = j.at(0).get<int>();
  p.y = j.at(1).get<int>();
}

void to_json(nlohmann::json& j, const Component& c) {
  j = {{"name", c.name}, {"control_type", c.control_type}, {"position", c.position}};
}

void from_json(const nlohmann::json& j, Component& c) {
  c.name = j.value("name", "");
  c.control_type = j.value("control_type", "");
  c.position = j.contains("position") ? j.at("position").get<Point>() : Point{};
}

void to_json(nlohmann::json& j, const WindowContext& w) {
  j = {{"app", w.app}, {"title", w.title}, {"env_class", std::string(to_string(w.env_class))}};
}

void from_json(const nlohmann::json& j, WindowContext& w) {
  w.app = j.value("app", "");
  w.title = j.value("title", "");
  const auto env = parse_env_class(j.value("env_class", "Local"));
  if (!env) throw Error(ErrorCode::schema, "unknown env_class '" + j.value("env_class", "") + "'");
  w.env_class = *env;
}

}  // namespace log2plan

namespace log2plan::text {

namespace {
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
char to_lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }
}  // namespace

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), to_lower);
  return out;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (is_alnum(c)) {
      cur.push_back(to_lower(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string normalize(std::string_view s) { return join(tokens(s), " "); }

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (to_lower(a[i]) != to_lower(b[i])) return false;
  }
  return true;
}

bool icontains(std::string_view haystack, std::string_view needle) {
  return lower(haystack).find(lower(needle)) != std::string::npos;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (to_lower(a[i - 1]) == to_lower(b[j - 1]) ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint32_t fnv1a32(std::string_view s) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : s) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

bool has_extension(std::string_view s) {
  const auto dot = s.rfind('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 >= s.size()) return false;
  const auto ext = s.substr(dot + 1);
  return ext.size() <= 5 && std::all_of(ext.begin(), ext.end(), [](unsigned char c) { return std::isalnum(c); });
}

bool is_placeholder(std::string_view s) {
  return s.size() >= 2 && s.front() == '<' && s.back() == '>';
}

}  // namespace log2plan::text
