#include "log2plan/dictionary.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "log2plan/error.hpp"
#include "log2plan/text.hpp"

namespace log2plan {

namespace {

constexpr std::array<std::pair<HighLevelAction, std::string_view>, kActionCount> kActionNames{{
    {HighLevelAction::text_input, "Text Input"},
    {HighLevelAction::click, "Click"},
    {HighLevelAction::doubleclick, "Doubleclick"},
    {HighLevelAction::rightclick, "Rightclick"},
    {HighLevelAction::drag, "Drag"},
    {HighLevelAction::scroll, "Scroll"},
    {HighLevelAction::press, "Press"},
    {HighLevelAction::open, "Open"},
    {HighLevelAction::close, "Close"},
    {HighLevelAction::switch_focus, "Switch Focus"},
    {HighLevelAction::go_to, "Go To"},
    {HighLevelAction::save, "Save"},
    {HighLevelAction::copy, "Copy"},
    {HighLevelAction::paste, "Paste"},
    {HighLevelAction::delete_, "Delete"},
    {HighLevelAction::rename, "Rename"},
    {HighLevelAction::login, "Login"},
    {HighLevelAction::repeat, "Repeat"},
    {HighLevelAction::wait, "Wait"},
}};

constexpr std::array<std::pair<StepVerb, std::string_view>, 11> kVerbNames{{
    {StepVerb::click, "click"},
    {StepVerb::double_click, "doubleclick"},
    {StepVerb::right_click, "rightclick"},
    {StepVerb::mouse_down, "mousedown"},
    {StepVerb::mouse_up, "mouseup"},
    {StepVerb::press, "press"},
    {StepVerb::type, "type"},
    {StepVerb::scroll, "scroll"},
    {StepVerb::focus, "focus"},
    {StepVerb::wait, "wait"},
    {StepVerb::repeat, "repeat"},
}};

constexpr std::array<std::pair<SlotKind, std::string_view>, 5> kSlotNames{{
    {SlotKind::object, "object"},
    {SlotKind::destination, "destination"},
    {SlotKind::text, "text"},
    {SlotKind::keys, "keys"},
    {SlotKind::literal, "literal"},
}};

constexpr std::array<std::pair<SlotConstraint, std::string_view>, 4> kConstraintNames{{
    {SlotConstraint::none, "none"},
    {SlotConstraint::url, "url"},
    {SlotConstraint::arrows, "arrows"},
    {SlotConstraint::window, "window"},
}};

// Builders for the built-in table.
StepTemplate lit(StepVerb verb, std::string value) {
  StepTemplate t;
  t.verb = verb;
  t.slot = SlotKind::literal;
  t.literal = std::move(value);
  return t;
}

StepTemplate slot(StepVerb verb, SlotKind kind, std::string name) {
  StepTemplate t;
  t.verb = verb;
  t.slot = kind;
  t.name = std::move(name);
  return t;
}

StepTemplate with_fallback(StepTemplate t, std::string fallback) {
  t.fallback = std::move(fallback);
  t.has_fallback = true;
  return t;
}

StepTemplate typed(StepTemplate t, std::vector<std::string> types, bool strict = false) {
  t.control_types = std::move(types);
  t.strict = strict;
  return t;
}

StepTemplate constrained(StepTemplate t, SlotConstraint c) {
  t.constraint = c;
  return t;
}

StepTemplate repeated(StepTemplate t) {
  t.repeatable = true;
  return t;
}

PatternRule rule(HighLevelAction a, int priority, std::vector<StepTemplate> steps) {
  return PatternRule{a, std::move(steps), priority};
}

std::vector<PatternRule> builtin_rules() {
  using A = HighLevelAction;
  using V = StepVerb;
  using K = SlotKind;
  const std::vector<std::string> field_types{"Edit", "Document", "ComboBox"};

  const auto field = typed(slot(V::click, K::object, "field"), field_types);
  const auto login_steps = [&](bool tab) {
    std::vector<StepTemplate> s{
        with_fallback(typed(slot(V::click, K::object, "login_button"), {"Button", "Hyperlink"}), "Login"),
        with_fallback(typed(slot(V::click, K::object, "id_field"), field_types), "ID"),
        slot(V::type, K::text, "user_id"),
    };
    if (tab) {
      s.push_back(lit(V::press, "tab"));
    } else {
      s.push_back(with_fallback(typed(slot(V::click, K::object, "password_field"), field_types), "Password"));
    }
    s.push_back(slot(V::type, K::text, "password"));
    s.push_back(lit(V::press, "enter"));
    return s;
  };

  return {
      rule(A::text_input, 1, {field, slot(V::type, K::text, "text"), lit(V::press, "enter")}),
      rule(A::text_input, 1, {field, slot(V::type, K::text, "text"), lit(V::press, "tab")}),
      rule(A::click, 0, {slot(V::click, K::object, "object")}),
      rule(A::doubleclick, 0, {slot(V::double_click, K::object, "object")}),
      rule(A::rightclick, 1, {slot(V::right_click, K::object, "object"), lit(V::focus, "menu")}),
      rule(A::drag, 0, {slot(V::mouse_down, K::object, "object"),
                        slot(V::mouse_up, K::destination, "destination")}),
      rule(A::scroll, 1, {with_fallback(constrained(slot(V::focus, K::object, "window"),
                                                    SlotConstraint::window), ""),
                          lit(V::scroll, "2/3")}),
      rule(A::scroll, 2, {with_fallback(typed(slot(V::mouse_down, K::object, "scroll_bar"),
                                              {"ScrollBar"}, true), "Scroll Bar"),
                          lit(V::mouse_up, "2/3")}),
      rule(A::press, 0, {slot(V::press, K::keys, "keys")}),
      rule(A::open, 2, {lit(V::press, "win"), slot(V::type, K::text, "target"), lit(V::press, "enter")}),
      rule(A::open, 0, {slot(V::double_click, K::object, "target")}),
      rule(A::open, 2, {with_fallback(typed(slot(V::click, K::object, "search_bar"), field_types, true),
                                      "Search"),
                        slot(V::type, K::text, "target"), lit(V::press, "enter")}),
      rule(A::close, 1, {lit(V::focus, "title bar"),
                         with_fallback(typed(slot(V::double_click, K::object, "close_button"), {"Button"}),
                                       "Close")}),
      rule(A::close, 1, {lit(V::press, "alt+f4")}),
      rule(A::switch_focus, 1, {lit(V::press, "alt+esc")}),
      rule(A::switch_focus, 2, {lit(V::focus, "taskbar"), lit(V::press, "win+tab"),
                                repeated(constrained(slot(V::press, K::keys, "arrows"), SlotConstraint::arrows)),
                                lit(V::press, "enter")}),
      rule(A::switch_focus, 2, {lit(V::press, "ctrl+t"),
                                constrained(slot(V::type, K::text, "url"), SlotConstraint::url),
                                lit(V::press, "enter")}),
      rule(A::switch_focus, 1, {lit(V::press, "ctrl+shift+tab")}),
      rule(A::go_to, 2, {lit(V::press, "ctrl+l"),
                         constrained(slot(V::type, K::text, "url"), SlotConstraint::url),
                         lit(V::press, "enter")}),
      rule(A::go_to, 1, {typed(slot(V::click, K::object, "hyperlink"), {"Hyperlink"}, true)}),
      rule(A::go_to, 2, {typed(slot(V::click, K::object, "dropdown"), {"ComboBox"}, true),
                         repeated(constrained(slot(V::press, K::keys, "arrows"), SlotConstraint::arrows)),
                         lit(V::press, "enter")}),
      rule(A::go_to, 2, {lit(V::press, "alt"),
                         repeated(constrained(slot(V::press, K::keys, "arrows"), SlotConstraint::arrows)),
                         lit(V::press, "enter")}),
      rule(A::save, 1, {lit(V::press, "ctrl+s")}),
      rule(A::copy, 1, {slot(V::click, K::object, "target"), lit(V::press, "ctrl+c")}),
      rule(A::paste, 1, {lit(V::press, "ctrl+v")}),
      rule(A::delete_, 1, {slot(V::click, K::object, "target"), lit(V::press, "ctrl+d")}),
      rule(A::rename, 1, {slot(V::click, K::object, "object"), lit(V::press, "f2"),
                          slot(V::type, K::text, "name"), lit(V::press, "enter")}),
      rule(A::login, 1, login_steps(false)),
      rule(A::login, 1, login_steps(true)),
      rule(A::repeat, 0, {slot(V::repeat, K::text, "task"),
                          with_fallback(slot(V::repeat, K::object, "object"), "")}),
      rule(A::wait, 1, {lit(V::wait, "screen change")}),
  };
}

template <typename E, std::size_t N>
std::string_view enum_name(const std::array<std::pair<E, std::string_view>, N>& table, E v) {
  for (const auto& [e, name] : table) {
    if (e == v) return name;
  }
  return "unknown";
}

template <typename E, std::size_t N>
std::optional<E> enum_parse(const std::array<std::pair<E, std::string_view>, N>& table,
                            std::string_view s) {
  for (const auto& [e, name] : table) {
    if (text::iequals(name, s)) return e;
  }
  return std::nullopt;
}

bool verb_accepts(StepVerb verb, EventKind kind) {
  switch (verb) {
    case StepVerb::click: return kind == EventKind::mouse_click;
    case StepVerb::double_click: return kind == EventKind::mouse_double_click;
    case StepVerb::right_click: return kind == EventKind::mouse_right_click;
    case StepVerb::mouse_down: return kind == EventKind::mouse_down;
    case StepVerb::mouse_up: return kind == EventKind::mouse_up;
    case StepVerb::press: return kind == EventKind::key_press;
    case StepVerb::type: return kind == EventKind::key_type;
    case StepVerb::scroll: return kind == EventKind::scroll;
    case StepVerb::focus: return kind == EventKind::window_focus;
    case StepVerb::wait: return kind == EventKind::window_open || kind == EventKind::window_close;
    case StepVerb::repeat: return false;
  }
  return false;
}

// Operand a template step reads from an event, or nullopt when the event
// cannot satisfy the step.
std::optional<std::string> step_operand(const StepTemplate& t, const RawEvent& e) {
  if (!verb_accepts(t.verb, e.kind)) return std::nullopt;

  if (t.slot == SlotKind::literal) {
    switch (t.verb) {
      case StepVerb::press:
        if (normalize_chord(e.keys.value_or("")) != normalize_chord(t.literal)) return std::nullopt;
        break;
      case StepVerb::type:
        if (e.text.value_or("") != t.literal) return std::nullopt;
        break;
      case StepVerb::focus: {
        const bool hit = text::icontains(e.window.title, t.literal) ||
                         (e.target && text::icontains(e.target->name, t.literal));
        if (!hit) return std::nullopt;
        break;
      }
      default:
        break;
    }
    return t.literal;
  }

  switch (t.slot) {
    case SlotKind::object:
    case SlotKind::destination: {
      if (t.verb == StepVerb::focus) {
        return e.target && !e.target->name.empty() ? e.target->name : e.window.app;
      }
      if (!e.target) return std::nullopt;
      if (t.strict) {
        if (!t.control_types.empty() &&
            std::find(t.control_types.begin(), t.control_types.end(), e.target->control_type) ==
                t.control_types.end()) {
          return std::nullopt;
        }
        if (t.has_fallback && !t.fallback.empty() && !text::icontains(e.target->name, t.fallback))
          return std::nullopt;
      }
      return e.target->name;
    }
    case SlotKind::text: {
      if (!e.text) return std::nullopt;
      if (t.constraint == SlotConstraint::url && !looks_like_url(*e.text)) return std::nullopt;
      return *e.text;
    }
    case SlotKind::keys: {
      if (!e.keys) return std::nullopt;
      if (t.constraint == SlotConstraint::arrows && !is_arrow_key(*e.keys)) return std::nullopt;
      return normalize_chord(*e.keys);
    }
    case SlotKind::literal:
      break;
  }
  return std::nullopt;
}

const PatternRule* rule_for_block(const TaskBlock& b, const RuleSet& rules) {
  return b.variant >= 0 ? rules.variant(b.action, b.variant) : nullptr;
}

bool sensitive_target(std::string_view name) {
  return text::icontains(name, "password") || text::icontains(name, "passwd");
}

StepTemplate template_from_json(const nlohmann::json& j) {
  StepTemplate t;
  const auto verb = parse_step_verb(j.at("verb").get<std::string>());
  if (!verb) throw Error(ErrorCode::schema, "unknown step verb " + j.at("verb").dump());
  t.verb = *verb;
  const auto kind = parse_slot_kind(j.value("slot", "literal"));
  if (!kind) throw Error(ErrorCode::schema, "unknown slot kind " + j.value("slot", ""));
  t.slot = *kind;
  t.name = j.value("name", "");
  t.literal = j.value("literal", "");
  if (j.contains("fallback")) {
    t.fallback = j.at("fallback").get<std::string>();
    t.has_fallback = true;
  }
  t.control_types = j.value("control_types", std::vector<std::string>{});
  t.strict = j.value("strict", false);
  const auto c = enum_parse(kConstraintNames, j.value("constraint", "none"));
  if (!c) throw Error(ErrorCode::schema, "unknown constraint " + j.value("constraint", ""));
  t.constraint = *c;
  t.repeatable = j.value("repeatable", false);
  if (t.slot == SlotKind::literal && t.literal.empty() && t.verb == StepVerb::press)
    throw Error(ErrorCode::schema, "literal press step needs keys");
  if (t.slot != SlotKind::literal && t.name.empty())
    throw Error(ErrorCode::schema, "slot step needs a name");
  return t;
}

nlohmann::json template_to_json(const StepTemplate& t) {
  nlohmann::json j{{"verb", std::string(to_string(t.verb))}, {"slot", std::string(to_string(t.slot))}};
  if (t.slot == SlotKind::literal) {
    j["literal"] = t.literal;
  } else {
    j["name"] = t.name;
  }
  if (t.has_fallback) j["fallback"] = t.fallback;
  if (!t.control_types.empty()) j["control_types"] = t.control_types;
  if (t.strict) j["strict"] = true;
  if (t.constraint != SlotConstraint::none)
    j["constraint"] = std::string(enum_name(kConstraintNames, t.constraint));
  if (t.repeatable) j["repeatable"] = true;
  return j;
}

}  // namespace

const std::array<HighLevelAction, kActionCount>& all_actions() {
  static const auto actions = [] {
    std::array<HighLevelAction, kActionCount> a{};
    for (std::size_t i = 0; i < kActionCount; ++i) a[i] = kActionNames[i].first;
    return a;
  }();
  return actions;
}

std::string_view to_string(HighLevelAction a) { return enum_name(kActionNames, a); }

std::optional<HighLevelAction> parse_action(std::string_view name) {
  std::string n = text::trim(name);
  if (text::iequals(n, "Go To (Navigation)") || text::iequals(n, "Navigation")) return HighLevelAction::go_to;
  return enum_parse(kActionNames, n);
}

std::string_view to_string(StepVerb v) { return enum_name(kVerbNames, v); }
std::optional<StepVerb> parse_step_verb(std::string_view s) { return enum_parse(kVerbNames, s); }
std::string_view to_string(SlotKind k) { return enum_name(kSlotNames, k); }
std::optional<SlotKind> parse_slot_kind(std::string_view s) { return enum_parse(kSlotNames, s); }

std::vector<Slot> PatternRule::slots() const {
  std::vector<Slot> out;
  for (const auto& s : steps) {
    if (s.slot == SlotKind::literal) continue;
    const bool seen = std::any_of(out.begin(), out.end(), [&](const Slot& x) { return x.name == s.name; });
    if (!seen) out.push_back({s.name, s.slot, &s});
  }
  return out;
}

std::vector<Slot> PatternRule::required_slots() const {
  std::vector<Slot> out;
  for (auto& s : slots()) {
    if (!s.first->has_fallback) out.push_back(s);
  }
  return out;
}

void to_json(nlohmann::json& j, const TaskBlock& b) {
  j = {{"action", std::string(to_string(b.action))},
       {"objects", b.objects},
       {"user_assist", b.user_assist},
       {"variant", b.variant},
       {"app", b.app}};
}

void from_json(const nlohmann::json& j, TaskBlock& b) {
  const auto a = parse_action(j.at("action").get<std::string>());
  if (!a) throw Error(ErrorCode::schema, "unknown action " + j.at("action").dump());
  b.action = *a;
  b.objects = j.value("objects", std::vector<std::string>{});
  b.user_assist = j.value("user_assist", false);
  b.variant = j.value("variant", -1);
  b.app = j.value("app", "");
}

RuleSet::RuleSet(std::vector<PatternRule> rules) : rules_(std::move(rules)) {
  for (const auto& r : rules_) {
    if (r.steps.empty()) throw Error(ErrorCode::schema, "rule with no steps for " + std::string(to_string(r.action)));
  }
}

const RuleSet& RuleSet::builtin() {
  static const RuleSet rules(builtin_rules());
  return rules;
}

RuleSet RuleSet::from_json(const nlohmann::json& j) {
  const auto& arr = j.is_object() ? j.at("rules") : j;
  std::vector<PatternRule> rules;
  for (const auto& r : arr) {
    PatternRule pr;
    const auto a = parse_action(r.at("action").get<std::string>());
    if (!a) throw Error(ErrorCode::schema, "unknown action " + r.at("action").dump());
    pr.action = *a;
    pr.priority = r.value("priority", 0);
    for (const auto& s : r.at("steps")) pr.steps.push_back(template_from_json(s));
    rules.push_back(std::move(pr));
  }
  return RuleSet(std::move(rules));
}

RuleSet RuleSet::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open dictionary " + path);
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::schema, path + ": " + e.what());
  }
}

nlohmann::json RuleSet::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rules_) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : r.steps) steps.push_back(template_to_json(s));
    arr.push_back({{"action", std::string(log2plan::to_string(r.action))},
                   {"priority", r.priority},
                   {"steps", steps}});
  }
  return {{"rules", arr}};
}

std::vector<const PatternRule*> RuleSet::variants(HighLevelAction a) const {
  std::vector<const PatternRule*> out;
  for (const auto& r : rules_) {
    if (r.action == a) out.push_back(&r);
  }
  return out;
}

const PatternRule* RuleSet::variant(HighLevelAction a, int index) const {
  if (index < 0) return nullptr;
  const auto v = variants(a);
  return static_cast<std::size_t>(index) < v.size() ? v[index] : nullptr;
}

int RuleSet::variant_index(const PatternRule& rule) const {
  int i = 0;
  for (const auto& r : rules_) {
    if (&r == &rule) return i;
    if (r.action == rule.action) ++i;
  }
  return -1;
}

std::size_t RuleSet::table_index(const PatternRule& rule) const {
  return static_cast<std::size_t>(&rule - rules_.data());
}

std::string normalize_chord(std::string_view keys) {
  std::string out;
  for (char c : text::lower(keys)) {
    if (c != ' ') out.push_back(c);
  }
  return out;
}

bool looks_like_url(std::string_view s) {
  if (s.find(' ') != std::string_view::npos || s.empty()) return false;
  if (s.find("://") != std::string_view::npos) return true;
  const auto dot = s.find('.');
  return dot != std::string_view::npos && dot > 0 && dot + 1 < s.size();
}

bool is_arrow_key(std::string_view keys) {
  const auto k = normalize_chord(keys);
  return k == "up" || k == "down" || k == "left" || k == "right";
}

std::optional<Bindings> bind_objects(const PatternRule& rule, const std::vector<std::string>& objects) {
  const auto all = rule.slots();
  Bindings b;
  if (objects.size() == all.size()) {
    for (std::size_t i = 0; i < all.size(); ++i) b[all[i].name] = objects[i];
    return b;
  }
  const auto required = rule.required_slots();
  if (objects.size() != required.size()) return std::nullopt;
  std::size_t next = 0;
  for (const auto& s : all) {
    b[s.name] = s.first->has_fallback ? s.first->fallback : objects[next++];
  }
  return b;
}

std::vector<LowLevelStep> expand(const PatternRule& rule, const Bindings& bindings) {
  std::vector<LowLevelStep> out;
  for (const auto& t : rule.steps) {
    if (t.slot == SlotKind::literal) {
      out.push_back({t.verb, t.slot, {}, t.literal});
      continue;
    }
    std::string value;
    if (auto it = bindings.find(t.name); it != bindings.end()) {
      value = it->second;
    } else if (t.has_fallback) {
      value = t.fallback;
    } else {
      throw Error(ErrorCode::missing_binding, t.name);
    }
    if (t.repeatable) {
      std::istringstream in(value);
      std::string tok;
      while (in >> tok) out.push_back({t.verb, t.slot, t.name, tok});
    } else {
      out.push_back({t.verb, t.slot, t.name, value});
    }
  }
  return out;
}

std::vector<LowLevelStep> expand(HighLevelAction action, const Bindings& bindings,
                                 std::optional<int> variant, const RuleSet& rules) {
  const PatternRule* r = rules.variant(action, variant.value_or(0));
  if (!r) {
    throw Error(ErrorCode::unknown_variant,
                std::string(to_string(action)) + " has no variant " + std::to_string(variant.value_or(0)));
  }
  return expand(*r, bindings);
}

std::optional<RuleMatch> match_rule_at(const PatternRule& rule, std::span<const RawEvent> events,
                                       std::size_t at) {
  RuleMatch m;
  std::size_t pos = at;
  for (const auto& t : rule.steps) {
    if (pos >= events.size()) return std::nullopt;
    auto v = step_operand(t, events[pos]);
    if (!v) return std::nullopt;
    ++pos;
    std::string value = *v;
    if (t.repeatable) {
      while (pos < events.size()) {
        auto more = step_operand(t, events[pos]);
        if (!more) break;
        value += " " + *more;
        ++pos;
      }
    }
    if (t.slot != SlotKind::literal) {
      auto [it, inserted] = m.bindings.emplace(t.name, value);
      if (!inserted && it->second != value) return std::nullopt;
    }
  }
  m.length = pos - at;
  return m;
}

TaskBlock fallback_block(const RawEvent& e) {
  TaskBlock b;
  b.app = e.window.app;
  b.variant = 0;
  if (is_mouse_kind(e.kind)) {
    b.action = HighLevelAction::click;
    b.objects = {e.target ? e.target->name : std::string{}};
  } else if (e.kind == EventKind::key_press || e.kind == EventKind::key_type) {
    b.action = HighLevelAction::press;
    b.objects = {e.kind == EventKind::key_press ? normalize_chord(e.keys.value_or("")) : e.text.value_or("")};
  } else if (e.kind == EventKind::scroll) {
    b.action = HighLevelAction::scroll;
    b.objects = {e.window.app};
  } else if (e.kind == EventKind::window_focus) {
    b.action = HighLevelAction::switch_focus;
    b.objects = {e.window.app};
    b.variant = -1;
  } else {
    b.action = HighLevelAction::wait;
    b.objects = {};
  }
  return b;
}

std::vector<MatchedSpan> match_spans(std::span<const RawEvent> events, const RuleSet& rules) {
  std::vector<MatchedSpan> out;
  std::size_t pos = 0;
  while (pos < events.size()) {
    const PatternRule* best = nullptr;
    RuleMatch best_match;
    for (const auto& r : rules.rules()) {
      auto m = match_rule_at(r, events, pos);
      if (!m) continue;
      // Rules are scanned in table order, so only a strictly better
      // (length, priority) pair replaces the current winner.
      if (!best || m->length > best_match.length ||
          (m->length == best_match.length && r.priority > best->priority)) {
        best = &r;
        best_match = std::move(*m);
      }
    }

    MatchedSpan span;
    span.first = pos;
    span.window = events[pos].window;
    if (best) {
      span.count = best_match.length;
      span.rule = best;
      span.block.action = best->action;
      span.block.variant = rules.variant_index(*best);
      span.block.app = events[pos].window.app;
      for (const auto& s : best->slots()) {
        span.block.objects.push_back(best_match.bindings[s.name]);
      }
      span.block.user_assist = best->action == HighLevelAction::login;
      if (!span.block.user_assist) {
        for (std::size_t i = pos; i < pos + span.count; ++i) {
          const auto& e = events[i];
          if (e.kind == EventKind::key_type && e.target && sensitive_target(e.target->name))
            span.block.user_assist = true;
        }
        // The typed text goes into the clicked field, so check that too.
        for (const auto& s : best->slots()) {
          if (s.kind == SlotKind::object && sensitive_target(best_match.bindings[s.name]) &&
              best->action == HighLevelAction::text_input)
            span.block.user_assist = true;
        }
      }
    } else {
      span.count = 1;
      span.block = fallback_block(events[pos]);
    }
    pos += span.count;
    out.push_back(std::move(span));
  }
  return out;
}

std::vector<TaskBlock> match_stream(std::span<const RawEvent> events, const RuleSet& rules) {
  std::vector<TaskBlock> out;
  for (auto& s : match_spans(events, rules)) out.push_back(std::move(s.block));
  return out;
}

TaskBlock mask_sensitive(const TaskBlock& block, const RuleSet& rules) {
  if (!block.user_assist) return block;
  const PatternRule* r = rule_for_block(block, rules);
  if (!r) return block;
  const auto slots = r->slots();
  if (slots.size() != block.objects.size()) return block;
  TaskBlock out = block;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].kind == SlotKind::text) out.objects[i] = "<" + slots[i].name + ">";
  }
  return out;
}

}  // namespace log2plan
