#include "log2plan/planner.hpp"

#include <algorithm>
#include <fstream>
#include <regex>

#include "log2plan/error.hpp"
#include "log2plan/text.hpp"

namespace log2plan {

namespace {

const std::vector<std::string_view>& known_apps() {
  static const std::vector<std::string_view> apps{
      "Notepad", "Word",  "Excel",   "PowerPoint", "Outlook", "Chrome", "Edge",  "Firefox",
      "File Explorer", "Explorer", "Calculator", "Paint", "Teams", "Slack", "Calendar"};
  return apps;
}

std::optional<std::string> as_known_app(std::string_view s) {
  for (auto app : known_apps()) {
    if (text::iequals(app, s)) return std::string(app);
  }
  return std::nullopt;
}

const std::vector<std::string_view>& key_names() {
  static const std::vector<std::string_view> keys{"enter", "tab", "esc", "escape", "up", "down", "left",
                                                  "right", "win", "alt", "f2", "f4", "delete", "backspace"};
  return keys;
}

bool looks_like_chord(std::string_view s) {
  const auto k = normalize_chord(s);
  if (k.find('+') != std::string::npos) return true;
  return std::find(key_names().begin(), key_names().end(), k) != key_names().end();
}

// Drops articles, quotes and trailing punctuation around an operand.
std::string clean_object(std::string s) {
  s = text::trim(s);
  while (!s.empty() && (s.back() == '.' || s.back() == '!' || s.back() == '?') &&
         !(s.size() > 1 && s[s.size() - 2] == '"')) {
    s.pop_back();
  }
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\''))) {
    return s.substr(1, s.size() - 2);
  }
  for (std::string_view art : {"the ", "a ", "an ", "my "}) {
    if (s.size() > art.size() && text::iequals(std::string_view(s).substr(0, art.size()), art)) {
      s = text::trim(std::string_view(s).substr(art.size()));
      break;
    }
  }
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

std::string strip_suffix_word(std::string s, std::string_view word) {
  const std::string suffix = " " + std::string(word);
  if (s.size() > suffix.size() && text::iequals(std::string_view(s).substr(s.size() - suffix.size()), suffix)) {
    s.resize(s.size() - suffix.size());
  }
  return s;
}

// File-list operand: "the paper folder" names the item "paper".
std::string item(const std::string& s) { return strip_suffix_word(clean_object(s), "folder"); }

PlanStep step(std::string_view action, std::vector<std::string> objects) {
  PlanStep s;
  s.action = std::string(action);
  s.objects = std::move(objects);
  return s;
}

using Compiler = std::vector<PlanStep> (*)(const std::smatch&);

struct ClauseRule {
  std::regex pattern;
  Compiler compile;
};

std::regex re(const char* p) { return std::regex(p, std::regex::icase | std::regex::ECMAScript); }

std::string group(const std::smatch& m, std::size_t i) { return m.size() > i && m[i].matched ? m[i].str() : ""; }

std::vector<PlanStep> with_window(PlanStep s, const std::string& app) {
  if (!app.empty()) s.window = clean_object(app);
  return {std::move(s)};
}

const std::vector<ClauseRule>& clause_rules() {
  static const std::vector<ClauseRule> rules = [] {
    std::vector<ClauseRule> r;
    r.push_back({re(R"(^(?:log ?in|sign ?in)(?: (?:to|on|at|into) (.+))?$)"), [](const std::smatch& m) {
                   PlanStep s = step("Login", {"<user id>", "<password>"});
                   s.user_assist = true;
                   return with_window(std::move(s), group(m, 1));
                 }});
    r.push_back({re(R"(^rename (.+?) (?:to|as) (.+)$)"), [](const std::smatch& m) {
                   return std::vector{step("Rename", {item(m[1]), clean_object(m[2])})};
                 }});
    r.push_back({re(R"(^save(?: (?:the |my )?(?:document|file|changes|work|it))?(?: (?:in|on) (.+))?$)"),
                 [](const std::smatch& m) { return with_window(step("Save", {}), group(m, 1)); }});
    r.push_back({re(R"(^(?:open|launch|start|run) (.+)$)"), [](const std::smatch& m) {
                   std::string target = clean_object(m[1]);
                   const std::string folder = strip_suffix_word(target, "folder");
                   PlanStep s = step("Open", {folder});
                   if (folder != target || text::has_extension(folder)) s.variant = 1;
                   return std::vector{s};
                 }});
    r.push_back({re(R"(^(?:close|quit|exit)(?: (.+))?$)"), [](const std::smatch& m) {
                   const std::string target = clean_object(group(m, 1));
                   if (target.empty() || text::iequals(target, "window") || text::iequals(target, "it"))
                     return std::vector{step("Close", {})};
                   return std::vector{step("Close", {strip_suffix_word(target, "window")})};
                 }});
    r.push_back({re(R"(^(?:switch (?:back )?to|focus(?: on)?|go back to|return to|bring up) (.+)$)"),
                 [](const std::smatch& m) {
                   return std::vector{step("Switch Focus", {strip_suffix_word(clean_object(m[1]), "window")})};
                 }});
    r.push_back({re(R"(^(?:go to|navigate to|visit|browse to|follow(?: the)?(?: link)?) (.+?)(?: (?:in|on) (.+))?$)"),
                 [](const std::smatch& m) {
                   const std::string target = strip_suffix_word(clean_object(m[1]), "link");
                   return with_window(step("Go To", {target}), group(m, 2));
                 }});
    r.push_back({re(R"(^(?:search|look up)(?: for)? (.+?)(?: (?:in|on|using) (.+))?$)"), [](const std::smatch& m) {
                   return with_window(step("Text Input", {"Search", clean_object(m[1])}), group(m, 2));
                 }});
    r.push_back({re(R"(^(?:type|enter|write|input) (.+?) (?:in|into) (.+)$)"), [](const std::smatch& m) {
                   const std::string target = strip_suffix_word(clean_object(m[2]), "field");
                   PlanStep s = step("Text Input", {target, clean_object(m[1])});
                   if (auto app = as_known_app(target)) s.window = *app;
                   return std::vector{s};
                 }});
    r.push_back({re(R"(^fill(?: in)? (.+?) with (.+)$)"), [](const std::smatch& m) {
                   return std::vector{
                       step("Text Input", {strip_suffix_word(clean_object(m[1]), "field"), clean_object(m[2])})};
                 }});
    r.push_back({re(R"(^(?:type|write|enter) (.+)$)"), [](const std::smatch& m) {
                   return std::vector{step("Text Input", {"text field", clean_object(m[1])})};
                 }});
    r.push_back({re(R"(^copy (.+?)(?: to (?:the )?clipboard)?$)"), [](const std::smatch& m) {
                   return std::vector{step("Copy", {item(m[1])})};
                 }});
    r.push_back({re(R"(^paste(?: it| the clipboard| text)?(?: (?:into|in|to) (.+))?$)"), [](const std::smatch& m) {
                   const std::string target = strip_suffix_word(clean_object(group(m, 1)), "field");
                   if (target.empty()) return std::vector{step("Paste", {})};
                   return std::vector{step("Click", {target}), step("Paste", {})};
                 }});
    r.push_back({re(R"(^(?:delete|remove|trash) (.+)$)"), [](const std::smatch& m) {
                   return std::vector{step("Delete", {item(m[1])})};
                 }});
    r.push_back({re(R"(^double[- ]?click(?: on)? (.+)$)"), [](const std::smatch& m) {
                   return std::vector{step("Doubleclick", {item(m[1])})};
                 }});
    r.push_back({re(R"(^right[- ]?click(?: on)? (.+)$)"), [](const std::smatch& m) {
                   return std::vector{step("Rightclick", {item(m[1])})};
                 }});
    r.push_back({re(R"(^press (.+)$)"), [](const std::smatch& m) {
                   const std::string target = clean_object(m[1]);
                   if (looks_like_chord(target)) return std::vector{step("Press", {normalize_chord(target)})};
                   return std::vector{step("Click", {strip_suffix_word(target, "button")})};
                 }});
    r.push_back({re(R"(^(?:click|select|choose|tap)(?: on)? (.+)$)"), [](const std::smatch& m) {
                   return std::vector{step("Click", {strip_suffix_word(clean_object(m[1]), "button")})};
                 }});
    r.push_back({re(R"(^(?:drag|move) (.+?) (?:to|into|onto) (.+)$)"), [](const std::smatch& m) {
                   return std::vector{step("Drag", {item(m[1]), item(m[2])})};
                 }});
    r.push_back({re(R"(^scroll(?: down| up)?(?: (?:in|on) (.+))?$)"), [](const std::smatch& m) {
                   const std::string target = clean_object(group(m, 1));
                   if (target.empty()) return std::vector{step("Scroll", {})};
                   return std::vector{step("Scroll", {target})};
                 }});
    r.push_back({re(R"(^wait(?: .*)?$)"), [](const std::smatch&) { return std::vector{step("Wait", {})}; }});
    r.push_back({re(R"(^repeat (?:step |task )?#?(\d+)(?: (?:on|for|with) (.+))?$)"), [](const std::smatch& m) {
                   std::vector<std::string> objects{m[1].str()};
                   if (m[2].matched) objects.push_back(clean_object(m[2]));
                   return std::vector{step("Repeat", objects)};
                 }});
    return r;
  }();
  return rules;
}

std::string strip_lead(std::string clause) {
  for (bool changed = true; changed;) {
    changed = false;
    for (std::string_view lead : {"and ", "then ", "please ", "finally ", "next ", "also "}) {
      if (clause.size() > lead.size() && text::iequals(std::string_view(clause).substr(0, lead.size()), lead)) {
        clause = text::trim(std::string_view(clause).substr(lead.size()));
        changed = true;
      }
    }
  }
  while (!clause.empty() && (clause.back() == '.' || clause.back() == ',')) clause.pop_back();
  return text::trim(clause);
}

std::vector<PlanStep> compile_clause(const std::string& clause) {
  std::smatch m;
  for (const auto& r : clause_rules()) {
    if (std::regex_match(clause, m, r.pattern)) return r.compile(m);
  }
  return {step("Click", {clean_object(clause)})};
}

bool objects_fit(HighLevelAction a, const std::vector<std::string>& objects, const RuleSet& rules) {
  // A Switch Focus object names the destination window; the grounder picks the keys.
  if (a == HighLevelAction::switch_focus) return objects.size() <= 1;
  for (const auto* r : rules.variants(a)) {
    if (bind_objects(*r, objects)) return true;
  }
  return false;
}

}  // namespace

void to_json(nlohmann::json& j, const PlanStep& s) {
  j = {{"user_assist", s.user_assist}, {"action", s.action}, {"objects", s.objects}};
  if (s.variant) j["variant"] = *s.variant;
  if (s.window) j["window"] = *s.window;
  if (s.revisions) j["revisions"] = s.revisions;
  if (s.recovery) j["recovery"] = true;
}

void from_json(const nlohmann::json& j, PlanStep& s) {
  const auto& ua = j.at("user_assist");
  // The flag is written T/F in plan listings; accept both spellings.
  if (ua.is_string()) {
    s.user_assist = text::iequals(ua.get<std::string>(), "T") || text::iequals(ua.get<std::string>(), "true");
  } else {
    s.user_assist = ua.get<bool>();
  }
  s.action = j.at("action").get<std::string>();
  s.objects = j.value("objects", std::vector<std::string>{});
  s.variant = j.contains("variant") ? std::optional<int>(j.at("variant").get<int>()) : std::nullopt;
  s.window = j.contains("window") ? std::optional<std::string>(j.at("window").get<std::string>()) : std::nullopt;
  s.revisions = j.value("revisions", 0);
  s.recovery = j.value("recovery", false);
}

nlohmann::json plan_to_json(const GlobalPlan& p) {
  return {{"command", p.command}, {"steps", p.steps}, {"references", retrieval_to_json(p.references)}};
}

GlobalPlan plan_from_json(const nlohmann::json& j) {
  try {
    GlobalPlan p;
    p.command = j.value("command", "");
    p.steps = j.at("steps").get<std::vector<PlanStep>>();
    if (j.contains("references")) p.references = retrieval_from_json(j.at("references"));
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::schema, std::string("plan: ") + e.what());
  }
}

GlobalPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open plan " + path);
  try {
    return plan_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::schema, path + ": " + e.what());
  }
}

std::string render_step(const PlanStep& s) {
  std::string out = s.action;
  for (const auto& o : s.objects) {
    if (o.empty() || text::is_placeholder(o)) continue;
    out += " " + o;
  }
  return out;
}

PlanStep step_from_block(const TaskBlock& b) {
  PlanStep s;
  s.user_assist = b.user_assist;
  s.action = std::string(to_string(b.action));
  s.objects = b.objects;
  if (b.variant >= 0) s.variant = b.variant;
  if (!b.app.empty()) s.window = b.app;
  return s;
}

std::vector<std::string> validate_plan(const GlobalPlan& plan, const RuleSet& rules) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const auto& s = plan.steps[i];
    const auto a = parse_action(s.action);
    if (!a || rules.variants(*a).empty()) {
      out.push_back("unknown-action@" + std::to_string(i));
      continue;
    }
    if (!objects_fit(*a, s.objects, rules)) out.push_back("missing-slot@" + std::to_string(i));
  }
  return out;
}

std::vector<std::string> split_clauses(std::string_view command) {
  static const std::vector<std::string_view> separators{", and then ", ", then ", " and then ", " then ",
                                                        ", and ", "; ", ";", " and ", ", "};
  std::vector<std::string> out;
  std::string current;
  char quote = 0;
  std::size_t i = 0;
  const auto flush = [&] {
    auto c = strip_lead(current);
    if (!c.empty()) out.push_back(std::move(c));
    current.clear();
  };
  while (i < command.size()) {
    const char c = command[i];
    if (quote) {
      if (c == quote) quote = 0;
      current.push_back(c);
      ++i;
      continue;
    }
    if (c == '"') {
      quote = c;
      current.push_back(c);
      ++i;
      continue;
    }
    bool split = false;
    for (auto sep : separators) {
      if (text::iequals(command.substr(i, sep.size()), sep)) {
        flush();
        i += sep.size();
        split = true;
        break;
      }
    }
    if (!split) {
      current.push_back(c);
      ++i;
    }
  }
  flush();
  return out;
}

std::vector<PlanStep> compile_command(std::string_view command) {
  std::vector<PlanStep> out;
  for (const auto& clause : split_clauses(command)) {
    for (auto& s : compile_clause(clause)) out.push_back(std::move(s));
  }
  return out;
}

std::vector<PlanStep> DeterministicPlanner::draft(std::string_view command, const PlanContext& ctx) {
  auto draft = compile_command(command);
  if (ctx.groups.empty() || !ctx.embedder || draft.empty()) return draft;

  std::vector<std::string> texts;
  for (const auto& s : draft) texts.push_back(render_step(s));
  const auto matches = match_tasks(texts, ctx.groups, *ctx.embedder, 1);

  std::vector<PlanStep> out;
  for (std::size_t i = 0; i < draft.size(); ++i) {
    const auto it = matches.find(static_cast<int>(i));
    const TaskMatch* best = it != matches.end() && !it->second.empty() ? &it->second.front() : nullptr;
    const IndividualTask* task = nullptr;
    if (best && best->score > ctx.reuse_threshold) {
      for (const auto& g : ctx.groups) {
        if (g.id != best->group_id) continue;
        for (const auto& t : g.tasks) {
          if (t.index == best->task) task = &t;
        }
      }
    }
    if (!task) {
      out.push_back(std::move(draft[i]));
      continue;
    }
    const auto& blocks = task->blocks;
    if (blocks.size() == 1 && to_string(blocks.front().action) == draft[i].action &&
        blocks.front().objects.size() == draft[i].objects.size()) {
      // Same step with other operands: keep the user's unless the summary names them.
      PlanStep merged = step_from_block(blocks.front());
      for (std::size_t k = 0; k < merged.objects.size(); ++k) {
        const auto& mine = draft[i].objects[k];
        if (!mine.empty() && !text::icontains(task->summary, mine)) merged.objects[k] = mine;
      }
      merged.user_assist = merged.user_assist || draft[i].user_assist;
      out.push_back(std::move(merged));
      continue;
    }
    for (const auto& b : blocks) out.push_back(step_from_block(b));
  }
  return out;
}

std::optional<GlobalPlan> repair_plan(const GlobalPlan& plan, const RuleSet& rules) {
  GlobalPlan out = plan;
  for (auto& s : out.steps) {
    auto a = parse_action(s.action);
    if (!a || rules.variants(*a).empty()) {
      std::optional<HighLevelAction> nearest;
      std::size_t best = 4;
      for (auto cand : all_actions()) {
        if (rules.variants(cand).empty()) continue;
        const auto d = text::edit_distance(s.action, to_string(cand));
        if (d < best) {
          best = d;
          nearest = cand;
        }
      }
      if (!nearest) return std::nullopt;
      a = nearest;
    }
    s.action = std::string(to_string(*a));
    if (objects_fit(*a, s.objects, rules)) continue;

    const PatternRule* r = rules.variant(*a, s.variant.value_or(0));
    if (!r) r = rules.variants(*a).front();
    const auto all = r->slots();
    const auto required = r->required_slots();
    if (s.objects.size() > all.size()) {
      s.objects.resize(all.size());
    } else {
      const auto& target = s.objects.size() > required.size() ? all : required;
      for (std::size_t k = s.objects.size(); k < target.size(); ++k)
        s.objects.push_back("<" + target[k].name + ">");
      s.user_assist = true;
    }
    if (!objects_fit(*a, s.objects, rules)) return std::nullopt;
  }
  return out;
}

GlobalPlan plan(std::string_view command, const RetrievalResult& retrieval, Planner& backend,
                std::span<const TaskGroup> groups, Embedder& embedder, const RuleSet& rules,
                double reuse_threshold) {
  if (text::trim(command).empty()) throw Error(ErrorCode::invalid_argument, "empty command");

  PlanContext ctx;
  ctx.retrieval = &retrieval;
  ctx.groups = groups;
  ctx.embedder = &embedder;
  ctx.reuse_threshold = reuse_threshold;

  auto steps = backend.draft(command, ctx);
  if (steps.empty()) steps = backend.draft(command, ctx);
  if (steps.empty()) throw Error(ErrorCode::unplannable, std::string(command));

  GlobalPlan draft{std::string(command), std::move(steps), retrieval};
  auto repaired = repair_plan(draft, rules);
  if (!repaired) throw Error(ErrorCode::unplannable, "backend output cannot be repaired: " + std::string(command));

  std::vector<std::string> texts;
  for (const auto& s : repaired->steps) texts.push_back(render_step(s));
  repaired->references.task_matches = match_tasks(texts, groups, embedder, 2);
  return *repaired;
}

}  // namespace log2plan
