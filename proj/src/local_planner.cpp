#include "log2plan/local_planner.hpp"

#include <algorithm>
#include <regex>
#include <map>
#include <set>
#include <variant>

#include "log2plan/error.hpp"
#include "log2plan/text.hpp"

namespace log2plan {

namespace {

constexpr double kScrollFraction = 2.0 / 3.0;

// Operands that name "whatever field this window has" rather than a control.
bool generic_field(std::string_view object) {
  const auto n = text::normalize(object);
  return n.empty() || n == "text field" || n == "field" || n == "text box" || n == "editor" || n == "document" ||
         n == "text";
}

struct Failure {
  std::string observation;
};

struct Resolved {
  std::vector<LowLevelAction> actions;
};

Component window_component(const std::string& app) { return Component{app, "Window", {}}; }

std::optional<WindowContext> find_window(const Snapshot& snap, std::string_view name) {
  for (const auto& w : snap.windows) {
    if (window_matches(w, name)) return w;
  }
  if (snap.window && window_matches(*snap.window, name)) return snap.window;
  return std::nullopt;
}

class Grounder {
 public:
  Grounder(const Snapshot& snap, const GroundOptions& opts) : snap_(snap), opts_(opts) {}

  std::variant<Resolved, Failure> variant(const PatternRule& rule, const PlanStep& step) {
    auto bindings = bind_objects(rule, step.objects);
    if (!bindings) {
      return Failure{std::to_string(step.objects.size()) + " object(s) do not fit " + std::string(to_string(rule.action))};
    }
    return lower(rule, *bindings);
  }

  std::variant<Resolved, Failure> lower(const PatternRule& rule, const Bindings& bindings) {
    std::vector<LowLevelStep> steps;
    try {
      steps = expand(rule, bindings);
    } catch (const Error& e) {
      return Failure{e.what()};
    }

    std::map<std::string, Component> resolved;
    for (const auto& s : rule.slots()) {
      const auto& t = *s.first;
      const std::string value = bindings.count(s.name) ? bindings.at(s.name) : t.fallback;
      if (s.kind == SlotKind::object || s.kind == SlotKind::destination) {
        auto c = resolve_object(value, t);
        if (auto* f = std::get_if<Failure>(&c)) return *f;
        resolved[s.name] = std::get<Component>(c);
      } else if (s.kind == SlotKind::text) {
        if (text::is_placeholder(value)) return Failure{"needs user input for '" + value + "'"};
        if (t.constraint == SlotConstraint::url && !looks_like_url(value)) return Failure{"'" + value + "' is not a URL"};
        if (value.empty()) return Failure{"empty text for slot '" + s.name + "'"};
      } else if (s.kind == SlotKind::keys) {
        if (value.empty()) return Failure{"no keys for slot '" + s.name + "'"};
        if (t.constraint == SlotConstraint::arrows) {
          for (const auto& tok : text::tokens(value)) {
            if (!is_arrow_key(tok)) return Failure{"'" + value + "' are not arrow keys"};
          }
        }
      }
    }

    Resolved out;
    std::optional<Component> focused_window;
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const auto& st = steps[k];
      LowLevelAction a;
      switch (st.verb) {
        case StepVerb::click:
        case StepVerb::double_click:
        case StepVerb::right_click:
          a.verb = st.verb == StepVerb::click          ? ActionVerb::click
                   : st.verb == StepVerb::double_click ? ActionVerb::double_click
                                                       : ActionVerb::right_click;
          a.target = resolved.at(st.slot_name);
          break;
        case StepVerb::mouse_down: {
          if (k + 1 >= steps.size() || steps[k + 1].verb != StepVerb::mouse_up)
            return Failure{"mouse down without release"};
          const auto& up = steps[k + 1];
          a.verb = ActionVerb::drag;
          a.target = resolved.at(st.slot_name);
          if (up.slot == SlotKind::literal) {
            a.amount = kScrollFraction;
          } else {
            a.destination = resolved.at(up.slot_name);
          }
          ++k;
          break;
        }
        case StepVerb::mouse_up:
          return Failure{"mouse up without press"};
        case StepVerb::press:
          a.verb = ActionVerb::press;
          a.keys = normalize_chord(st.value);
          break;
        case StepVerb::type:
          a.verb = ActionVerb::type;
          a.text = st.value;
          break;
        case StepVerb::scroll:
          a.verb = ActionVerb::scroll;
          if (focused_window) {
            a.target = focused_window;
          } else if (snap_.window) {
            a.target = window_component(snap_.window->app);
          } else {
            return Failure{"no focused window"};
          }
          a.amount = kScrollFraction;
          break;
        case StepVerb::focus:
          a.verb = ActionVerb::focus;
          if (st.slot == SlotKind::literal) {
            auto c = literal_focus(st.value);
            if (auto* f = std::get_if<Failure>(&c)) return *f;
            a.target = std::get<Component>(c);
          } else {
            a.target = resolved.at(st.slot_name);
            if (a.target->control_type == "Window") focused_window = a.target;
          }
          break;
        case StepVerb::wait:
          a.verb = ActionVerb::focus;
          a.target = window_component(snap_.window ? snap_.window->app : std::string{});
          break;
        case StepVerb::repeat:
          return Failure{"repeat must be resolved before lowering"};
      }
      if (auto v = validate_action(a); !v.empty()) return Failure{v};
      out.actions.push_back(std::move(a));
    }
    return out;
  }

  std::variant<Component, Failure> resolve_object(const std::string& value, const StepTemplate& t) {
    if (t.constraint == SlotConstraint::window) {
      if (value.empty()) {
        if (!snap_.window) return Failure{"no focused window"};
        return window_component(snap_.window->app);
      }
      auto w = find_window(snap_, value);
      if (!w) return Failure{"window '" + value + "' not open"};
      return window_component(w->app);
    }

    auto [name, hint] = split_type_hint(value);
    std::vector<std::string> expected = hint.empty() ? t.control_types : std::vector<std::string>{hint};
    const bool hinted = !hint.empty();

    const Component* best = nullptr;
    double best_score = -1.0;
    // A file name only ever matches that exact list item; others may be below the fold.
    const bool file_name = text::has_extension(name);
    for (const auto& c : snap_.components) {
      if (file_name && c.control_type == "ListItem" && !text::iequals(c.name, name)) continue;
      const double s = score_component(value, c, t.control_types);
      if (s > best_score) {
        best_score = s;
        best = &c;
      }
    }
    const auto type_ok = [&](const Component& c) {
      return !(t.strict || hinted) || expected.empty() ||
             std::find(expected.begin(), expected.end(), c.control_type) != expected.end();
    };
    if (best && best_score >= opts_.min_score && type_ok(*best)) return *best;

    // "type X in Notepad": pick the window's own field of an expected type.
    const bool names_window = snap_.window && !name.empty() && window_matches(*snap_.window, name);
    if (!expected.empty() && (generic_field(name) || names_window)) {
      for (const auto& type : expected) {
        for (const auto& c : snap_.components) {
          if (c.control_type == type) return c;
        }
      }
    }

    // Fallback widgets (login fields, close buttons) may appear only once the
    // sequence is under way; bind them by name and let the backend resolve.
    if (t.has_fallback && text::iequals(value, t.fallback) && !t.strict) {
      return Component{t.fallback, t.control_types.empty() ? std::string{} : t.control_types.front(), {}};
    }
    return Failure{"no component matches '" + value + "'"};
  }

  std::variant<Component, Failure> literal_focus(const std::string& literal) {
    if (text::iequals(literal, "menu")) return Component{literal, "Menu", {}};
    if (text::iequals(literal, "title bar") && !snap_.window) return Failure{"no focused window"};
    return Component{literal, "Pane", {}};
  }

 private:
  const Snapshot& snap_;
  const GroundOptions& opts_;
};

std::vector<int> variant_order(std::size_t count, std::optional<int> hint) {
  std::vector<int> order;
  if (hint && *hint >= 0 && static_cast<std::size_t>(*hint) < count) order.push_back(*hint);
  for (int v = 0; v < static_cast<int>(count); ++v) {
    if (order.empty() || order.front() != v) order.push_back(v);
  }
  return order;
}

bool all_arrow_tokens(std::string_view s) {
  const auto toks = text::tokens(s);
  return !toks.empty() && std::all_of(toks.begin(), toks.end(), [](const std::string& t) { return is_arrow_key(t); });
}

GroundedStep fail(GroundedStep g, std::string observation) {
  g.exec = ExecFlag::N;
  g.actions.clear();
  g.observation = std::move(observation);
  return g;
}

GroundedStep succeed(GroundedStep g, int variant, std::vector<LowLevelAction> actions) {
  g.exec = ExecFlag::Y;
  g.variant = variant;
  g.actions = std::move(actions);
  g.observation = "executable";
  return g;
}

// The destination window decides the key sequence: alt+esc brings up the
// next window, win+tab walks the MRU list, ctrl+t opens a URL in a new tab.
GroundedStep ground_switch_focus(GroundedStep g, const PlanStep& step, const Snapshot& snap,
                                 const GroundOptions& opts) {
  const auto& rules = *opts.rules;
  const auto variants = rules.variants(HighLevelAction::switch_focus);
  Grounder gr(snap, opts);
  const std::optional<std::string> dest =
      step.objects.empty() || step.objects.front().empty() ? std::nullopt : std::optional(step.objects.front());

  if (dest && !all_arrow_tokens(*dest) && !looks_like_url(*dest)) {
    if (snap.window && window_matches(*snap.window, *dest)) {
      LowLevelAction a;
      a.verb = ActionVerb::focus;
      a.target = window_component(snap.window->app);
      return succeed(std::move(g), -1, {a});
    }
    if (!find_window(snap, *dest)) return fail(std::move(g), "window '" + *dest + "' not open");
  }

  const bool web = snap.window && snap.window->env_class == EnvClass::Web;
  std::string last = "no Switch Focus variant reaches '" + dest.value_or("") + "'";
  for (int v : variant_order(variants.size(), step.variant)) {
    const PatternRule& r = *variants[v];
    std::optional<Bindings> b;
    const auto slots = r.slots();
    if (slots.empty()) {
      // alt+esc and ctrl+shift+tab take no operands.
      if (v == 0 && (!dest || (snap.windows.size() >= 2 && window_matches(snap.windows[1], *dest)))) b = Bindings{};
      if (v != 0 && !dest && web) b = Bindings{};
    } else if (slots.front().first->constraint == SlotConstraint::arrows) {
      if (dest && all_arrow_tokens(*dest)) {
        b = Bindings{{slots.front().name, *dest}};
      } else if (dest) {
        for (std::size_t p = 1; p < snap.windows.size(); ++p) {
          if (!window_matches(snap.windows[p], *dest)) continue;
          std::string arrows;
          for (std::size_t n = 0; n < p; ++n) arrows += n ? " right" : "right";
          b = Bindings{{slots.front().name, arrows}};
          break;
        }
      }
    } else if (slots.front().first->constraint == SlotConstraint::url) {
      if (dest && looks_like_url(*dest) && web) b = Bindings{{slots.front().name, *dest}};
    } else if (auto fit = bind_objects(r, step.objects)) {
      b = fit;
    }
    if (!b) continue;
    auto res = gr.lower(r, *b);
    if (auto* ok = std::get_if<Resolved>(&res)) return succeed(std::move(g), v, std::move(ok->actions));
    last = std::get<Failure>(res).observation;
  }
  return fail(std::move(g), last);
}

std::optional<std::size_t> parse_step_ref(std::string_view s) {
  std::string digits;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c))) digits.push_back(c);
    else if (!digits.empty()) break;
  }
  if (digits.empty() || digits.size() > 6) return std::nullopt;
  return static_cast<std::size_t>(std::stoul(digits));
}

}  // namespace

nlohmann::json grounded_to_json(const GroundedStep& g) {
  return {{"source", g.source},
          {"variant", g.variant},
          {"actions", g.actions},
          {"exec", g.exec == ExecFlag::Y ? "Y" : "N"},
          {"observation", g.observation}};
}

std::pair<std::string, std::string> split_type_hint(std::string_view object) {
  std::string s = text::trim(object);
  if (s.size() > 2 && s.back() == ')') {
    const auto open = s.rfind('(');
    if (open != std::string::npos && open > 0) {
      const std::string type = s.substr(open + 1, s.size() - open - 2);
      const bool word = !type.empty() && std::all_of(type.begin(), type.end(), [](unsigned char c) {
        return std::isalpha(c);
      }) && std::isupper(static_cast<unsigned char>(type.front()));
      if (word) return {text::trim(std::string_view(s).substr(0, open)), type};
    }
  }
  return {s, ""};
}

double score_component(std::string_view object, const Component& c, std::span<const std::string> expected_types) {
  const auto [name, hint] = split_type_hint(object);
  const auto a = text::tokens(name);
  const auto b = text::tokens(c.name);
  const std::set<std::string> sa(a.begin(), a.end());
  const std::set<std::string> sb(b.begin(), b.end());
  std::size_t inter = 0;
  for (const auto& t : sa) inter += sb.count(t);
  const std::size_t uni = sa.size() + sb.size() - inter;
  const double jaccard = uni ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;

  const auto na = text::normalize(name);
  const auto nb = text::normalize(c.name);
  const bool substring = !na.empty() && nb.find(na) != std::string::npos;

  bool type_fit = true;
  if (!hint.empty()) {
    type_fit = text::iequals(hint, c.control_type);
  } else if (!expected_types.empty()) {
    type_fit = std::any_of(expected_types.begin(), expected_types.end(),
                           [&](const std::string& t) { return text::iequals(t, c.control_type); });
  }
  return 0.6 * jaccard + (substring ? 0.3 : 0.0) + (type_fit ? 0.1 : 0.0);
}

bool window_matches(const WindowContext& w, std::string_view name) {
  const auto n = text::trim(name);
  if (n.empty()) return false;
  if (text::iequals(w.app, n) || text::icontains(w.title, n)) return true;
  return w.app.size() >= 3 && text::icontains(n, w.app);
}

GroundedStep ground(const GlobalPlan& plan, std::size_t i, const Snapshot& snap, const GroundOptions& opts) {
  if (i >= plan.steps.size()) throw Error(ErrorCode::invalid_argument, "step index out of range");
  const PlanStep& step = plan.steps[i];
  GroundedStep g;
  g.source = step;

  const auto action = parse_action(step.action);
  if (!action) return fail(std::move(g), "unknown action '" + step.action + "'");

  if (*action == HighLevelAction::repeat) {
    const auto ref = step.objects.empty() ? std::nullopt : parse_step_ref(step.objects.front());
    if (!ref || *ref < 1 || *ref > i) return fail(std::move(g), "repeat target is not an earlier step");
    PlanStep copy = plan.steps[*ref - 1];
    if (parse_action(copy.action) == HighLevelAction::repeat) return fail(std::move(g), "repeat of a repeat");
    if (step.objects.size() > 1 && !step.objects[1].empty()) {
      if (copy.objects.empty()) copy.objects.push_back(step.objects[1]);
      else copy.objects.front() = step.objects[1];
    }
    copy.revisions = step.revisions;
    GlobalPlan tmp = plan;
    tmp.steps[i] = copy;
    auto inner = ground(tmp, i, snap, opts);
    inner.source = step;
    return inner;
  }

  // The window a step expects must be in front before its controls are used.
  std::optional<std::string> expected = step.window;
  PlanStep effective = step;
  if (*action == HighLevelAction::close && !step.objects.empty()) {
    if (find_window(snap, step.objects.front())) expected = step.objects.front();
    effective.objects.clear();
  }
  const bool moves_focus = *action == HighLevelAction::open || *action == HighLevelAction::switch_focus;
  if (expected && !expected->empty() && !moves_focus) {
    if (!snap.window || !window_matches(*snap.window, *expected)) {
      const bool open = find_window(snap, *expected).has_value();
      return fail(std::move(g), "window '" + *expected + "' " + (open ? "not focused" : "not open"));
    }
  }

  if (*action == HighLevelAction::switch_focus) return ground_switch_focus(std::move(g), step, snap, opts);

  const auto variants = opts.rules->variants(*action);
  if (variants.empty()) return fail(std::move(g), "no dictionary rule for " + step.action);

  Grounder gr(snap, opts);
  std::string first_failure;
  for (int v : variant_order(variants.size(), step.variant)) {
    auto res = gr.variant(*variants[v], effective);
    if (auto* ok = std::get_if<Resolved>(&res)) return succeed(std::move(g), v, std::move(ok->actions));
    if (first_failure.empty()) first_failure = std::get<Failure>(res).observation;
  }
  return fail(std::move(g), first_failure);
}

GroundedStep ground(const GlobalPlan& plan, std::size_t i, const ComponentDictionary& components,
                    const GroundOptions& opts) {
  Snapshot snap;
  snap.components = components;
  return ground(plan, i, snap, opts);
}

GlobalPlan revise(const GlobalPlan& plan, std::size_t i, const GroundedStep& verdict, int max_revisions) {
  if (i >= plan.steps.size()) throw Error(ErrorCode::invalid_argument, "step index out of range");
  if (verdict.exec == ExecFlag::Y) throw Error(ErrorCode::invalid_argument, "revise needs an infeasible verdict");
  const PlanStep& step = plan.steps[i];
  if (step.revisions >= max_revisions) {
    throw Error(ErrorCode::revision_limit_exceeded,
                "step " + std::to_string(i + 1) + " after " + std::to_string(step.revisions) +
                    " revisions: " + verdict.observation);
  }

  GlobalPlan out = plan;
  PlanStep& target = out.steps[i];
  const int prior = target.revisions;
  ++target.revisions;

  static const std::regex not_focused("window '(.+)' not focused");
  static const std::regex not_open("window '(.+)' not open");
  static const std::regex no_component("no component matches '(.+)'");
  std::smatch m;
  const auto recovery = [](std::string action, std::string object) {
    PlanStep s;
    s.action = std::move(action);
    s.objects = {std::move(object)};
    s.recovery = true;
    return s;
  };
  if (std::regex_search(verdict.observation, m, not_focused)) {
    out.steps.insert(out.steps.begin() + static_cast<std::ptrdiff_t>(i), recovery("Switch Focus", m[1]));
  } else if (std::regex_search(verdict.observation, m, not_open)) {
    out.steps.insert(out.steps.begin() + static_cast<std::ptrdiff_t>(i), recovery("Open", m[1]));
  } else if (prior == 0 && std::regex_search(verdict.observation, m, no_component)) {
    PlanStep scroll;
    scroll.action = "Scroll";
    scroll.recovery = true;
    out.steps.insert(out.steps.begin() + static_cast<std::ptrdiff_t>(i), scroll);
  } else {
    target.user_assist = true;
  }
  return out;
}

}  // namespace log2plan
