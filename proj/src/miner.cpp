#include "log2plan/miner.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>

#include "log2plan/error.hpp"
#include "log2plan/text.hpp"

namespace log2plan {

namespace {

const std::regex kEnvPattern(R"(^ENV\[[^/\[\]]+/[^\[\]]+\]$)");
const std::regex kActPattern(R"(^ACT\[[^/\[\]]+/[^\[\]]+\]$)");

// Wraps "a/b" into "PREFIX[a/b]"; leaves conforming labels untouched.
std::optional<std::string> repair_label(const std::string& raw, const std::string& prefix,
                                        const std::regex& pattern) {
  const std::string s = text::trim(raw);
  if (std::regex_match(s, pattern)) return s;
  std::string body = s;
  const std::string open = prefix + "[";
  if (text::lower(body.substr(0, open.size())) == text::lower(open) && !body.empty() && body.back() == ']') {
    body = body.substr(open.size(), body.size() - open.size() - 1);
  }
  body = text::trim(body);
  const std::string fixed = prefix + "[" + body + "]";
  if (std::regex_match(fixed, pattern)) return fixed;
  return std::nullopt;
}

// Most frequent value, ties resolved by first occurrence.
template <typename T>
T dominant(const std::vector<T>& values) {
  std::map<T, int> counts;
  for (const auto& v : values) ++counts[v];
  T best = values.front();
  int best_count = 0;
  for (const auto& v : values) {
    if (counts[v] > best_count) {
      best = v;
      best_count = counts[v];
    }
  }
  return best;
}

std::string sentence(std::string s) {
  s = text::trim(s);
  if (!s.empty() && s.back() != '.') s += '.';
  return s;
}

}  // namespace

std::string action_category(HighLevelAction a) {
  switch (a) {
    case HighLevelAction::text_input: return "input/text-input";
    case HighLevelAction::click: return "interaction/click";
    case HighLevelAction::doubleclick: return "interaction/doubleclick";
    case HighLevelAction::rightclick: return "interaction/rightclick";
    case HighLevelAction::drag: return "interaction/drag";
    case HighLevelAction::scroll: return "navigation/scroll";
    case HighLevelAction::press: return "keyboard/press";
    case HighLevelAction::open: return "navigation/open";
    case HighLevelAction::close: return "window/close";
    case HighLevelAction::switch_focus: return "window/switch-focus";
    case HighLevelAction::go_to: return "navigation/go-to";
    case HighLevelAction::save: return "file/save";
    case HighLevelAction::copy: return "edit/copy";
    case HighLevelAction::paste: return "edit/paste";
    case HighLevelAction::delete_: return "file-management/delete";
    case HighLevelAction::rename: return "file-management/rename";
    case HighLevelAction::login: return "auth/login";
    case HighLevelAction::repeat: return "control/repeat";
    case HighLevelAction::wait: return "control/wait";
  }
  return "interaction/click";
}

bool is_structural(HighLevelAction a) {
  return a == HighLevelAction::open || a == HighLevelAction::close ||
         a == HighLevelAction::switch_focus || a == HighLevelAction::wait;
}

std::string render_block(const TaskBlock& b) {
  std::string out(to_string(b.action));
  for (const auto& o : b.objects) {
    if (o.empty() || text::is_placeholder(o)) continue;
    out += " " + o;
  }
  return out;
}

void to_json(nlohmann::json& j, const TaskGroup& g) {
  nlohmann::json tasks = nlohmann::json::array();
  for (const auto& t : g.tasks) {
    tasks.push_back({{"index", t.index}, {"summary", t.summary}, {"blocks", t.blocks}});
  }
  j = {{"id", g.id},
       {"env", g.env},
       {"act", g.act},
       {"title", g.title},
       {"description", g.description},
       {"source_session", g.source_session},
       {"tasks", tasks}};
}

void from_json(const nlohmann::json& j, TaskGroup& g) {
  g.id = j.at("id").get<std::string>();
  g.env = j.at("env").get<std::string>();
  g.act = j.at("act").get<std::string>();
  g.title = j.at("title").get<std::string>();
  g.description = j.at("description").get<std::string>();
  g.source_session = j.value("source_session", "");
  g.tasks.clear();
  for (const auto& t : j.at("tasks")) {
    IndividualTask it;
    it.index = t.at("index").get<int>();
    it.summary = t.value("summary", "");
    it.blocks = t.at("blocks").get<std::vector<TaskBlock>>();
    g.tasks.push_back(std::move(it));
  }
}

std::string group_id(const TaskGroup& g) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& t : g.tasks) blocks.push_back(t.blocks);
  const std::string key = g.env + "\x1f" + g.act + "\x1f" + g.title + "\x1f" + blocks.dump();
  return "g-" + text::hex64(text::fnv1a64(key));
}

std::vector<std::string> validate_group(const TaskGroup& g) {
  std::vector<std::string> out;
  if (!std::regex_match(g.env, kEnvPattern)) out.push_back("env '" + g.env + "' is not ENV[a/b]");
  if (!std::regex_match(g.act, kActPattern)) out.push_back("act '" + g.act + "' is not ACT[a/b]");
  if (text::trim(g.description).empty()) out.push_back("description is empty");
  if (g.tasks.empty()) out.push_back("group has no tasks");
  for (std::size_t i = 0; i < g.tasks.size(); ++i) {
    if (g.tasks[i].index != static_cast<int>(i) + 1) out.push_back("task indices must be 1..n");
    if (g.tasks[i].blocks.empty()) out.push_back("task " + std::to_string(i + 1) + " has no blocks");
  }
  return out;
}

nlohmann::json request_to_json(const LabelerRequest& r) {
  return {{"source", r.source}, {"blocks", r.blocks}, {"contexts", r.contexts}};
}

LabelerRequest request_from_json(const nlohmann::json& j) {
  LabelerRequest r;
  r.source = j.value("source", "");
  r.blocks = j.at("blocks").get<std::vector<TaskBlock>>();
  r.contexts = j.at("contexts").get<std::vector<WindowContext>>();
  return r;
}

nlohmann::json response_to_json(const LabelerResponse& r) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : r.groups) {
    nlohmann::json tasks = nlohmann::json::array();
    for (const auto& t : g.tasks) tasks.push_back({{"start", t.start}, {"summary", t.summary}});
    groups.push_back({{"start", g.start},
                      {"env", g.env},
                      {"act", g.act},
                      {"title", g.title},
                      {"description", g.description},
                      {"tasks", tasks}});
  }
  return {{"groups", groups}};
}

LabelerResponse response_from_json(const nlohmann::json& j) {
  LabelerResponse r;
  try {
    for (const auto& g : j.at("groups")) {
      GroupLabel gl;
      gl.start = g.at("start").get<std::size_t>();
      gl.env = g.value("env", "");
      gl.act = g.value("act", "");
      gl.title = g.value("title", "");
      gl.description = g.value("description", "");
      if (g.contains("tasks")) {
        for (const auto& t : g.at("tasks")) {
          gl.tasks.push_back({t.at("start").get<std::size_t>(), t.value("summary", "")});
        }
      }
      r.groups.push_back(std::move(gl));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_labeler_output, e.what());
  }
  return r;
}

LabelerResponse RuleBasedLabeler::label(const LabelerRequest& req) {
  const auto& blocks = req.blocks;
  const auto& ctx = req.contexts;
  LabelerResponse resp;
  if (blocks.empty()) return resp;

  std::vector<std::size_t> group_starts{0};
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    const bool app_change = ctx[i].app != ctx[i - 1].app;
    const bool opens = blocks[i].action == HighLevelAction::open;
    const bool after_close = blocks[i - 1].action == HighLevelAction::close;
    if (app_change || opens || after_close) group_starts.push_back(i);
  }

  for (std::size_t g = 0; g < group_starts.size(); ++g) {
    const std::size_t begin = group_starts[g];
    const std::size_t end = g + 1 < group_starts.size() ? group_starts[g + 1] : blocks.size();

    GroupLabel gl;
    gl.start = begin;

    std::vector<std::string> apps;
    std::map<std::string, EnvClass> env_of;
    for (std::size_t i = begin; i < end; ++i) {
      apps.push_back(ctx[i].app);
      env_of.emplace(ctx[i].app, ctx[i].env_class);
    }
    const std::string app = dominant(apps);
    gl.env = "ENV[" + text::lower(to_string(env_of[app])) + "/" + app + "]";

    std::vector<int> votes;
    for (std::size_t i = begin; i < end; ++i) {
      if (!is_structural(blocks[i].action)) votes.push_back(static_cast<int>(blocks[i].action));
    }
    if (votes.empty()) {
      for (std::size_t i = begin; i < end; ++i) votes.push_back(static_cast<int>(blocks[i].action));
    }
    const auto act = static_cast<HighLevelAction>(dominant(votes));
    gl.act = "ACT[" + action_category(act) + "]";

    const TaskBlock* lead = nullptr;
    for (std::size_t i = begin; i < end && !lead; ++i) {
      if (blocks[i].action == act) lead = &blocks[i];
    }
    std::string subject;
    for (const auto& o : lead->objects) {
      if (!o.empty() && !text::is_placeholder(o)) {
        subject = o;
        break;
      }
    }
    gl.title = std::string(to_string(act)) + (subject.empty() ? " in " + app : " " + subject);
    gl.description = sentence(gl.title + (subject.empty() ? "" : " in " + app) + " using " +
                              std::to_string(end - begin) + " recorded action" +
                              (end - begin == 1 ? "" : "s"));

    std::vector<std::size_t> task_starts{begin};
    for (std::size_t i = begin + 1; i < end; ++i) {
      if (ctx[i].title != ctx[i - 1].title || blocks[i - 1].action == HighLevelAction::save)
        task_starts.push_back(i);
    }
    for (std::size_t t = 0; t < task_starts.size(); ++t) {
      const std::size_t tb = task_starts[t];
      const std::size_t te = t + 1 < task_starts.size() ? task_starts[t + 1] : end;
      std::vector<std::string> parts;
      for (std::size_t i = tb; i < te; ++i) parts.push_back(render_block(blocks[i]));
      gl.tasks.push_back({tb, text::join(parts, ", ")});
    }
    resp.groups.push_back(std::move(gl));
  }
  return resp;
}

std::vector<std::string> validate_response(const LabelerResponse& r, std::size_t n) {
  std::vector<std::string> out;
  if (r.groups.empty()) {
    out.push_back("no groups");
    return out;
  }
  if (r.groups.front().start != 0) out.push_back("first group must start at block 0");
  for (std::size_t g = 0; g < r.groups.size(); ++g) {
    const auto& gl = r.groups[g];
    const std::size_t end = g + 1 < r.groups.size() ? r.groups[g + 1].start : n;
    if (gl.start >= n) out.push_back("group " + std::to_string(g) + " starts out of range");
    if (g > 0 && gl.start <= r.groups[g - 1].start) out.push_back("group starts not strictly increasing");
    if (!std::regex_match(gl.env, kEnvPattern)) out.push_back("group " + std::to_string(g) + " env malformed");
    if (!std::regex_match(gl.act, kActPattern)) out.push_back("group " + std::to_string(g) + " act malformed");
    if (text::trim(gl.title).empty()) out.push_back("group " + std::to_string(g) + " title empty");
    if (text::trim(gl.description).empty()) out.push_back("group " + std::to_string(g) + " description empty");
    if (gl.tasks.empty() || gl.tasks.front().start != gl.start) {
      out.push_back("group " + std::to_string(g) + " first task must start at the group start");
    }
    for (std::size_t t = 0; t < gl.tasks.size(); ++t) {
      if (gl.tasks[t].start < gl.start || gl.tasks[t].start >= end)
        out.push_back("group " + std::to_string(g) + " task start out of range");
      if (t > 0 && gl.tasks[t].start <= gl.tasks[t - 1].start)
        out.push_back("group " + std::to_string(g) + " task starts not strictly increasing");
      if (text::trim(gl.tasks[t].summary).empty())
        out.push_back("group " + std::to_string(g) + " task summary empty");
    }
  }
  return out;
}

std::optional<LabelerResponse> repair_response(const LabelerResponse& r, std::size_t n) {
  if (n == 0) return std::nullopt;
  std::vector<GroupLabel> groups;
  for (const auto& g : r.groups) {
    if (g.start < n) groups.push_back(g);
  }
  if (groups.empty()) return std::nullopt;
  std::stable_sort(groups.begin(), groups.end(),
                   [](const GroupLabel& a, const GroupLabel& b) { return a.start < b.start; });
  groups.erase(std::unique(groups.begin(), groups.end(),
                           [](const GroupLabel& a, const GroupLabel& b) { return a.start == b.start; }),
               groups.end());
  groups.front().start = 0;

  LabelerResponse out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    GroupLabel gl = groups[g];
    const std::size_t end = g + 1 < groups.size() ? groups[g + 1].start : n;
    auto env = repair_label(gl.env, "ENV", kEnvPattern);
    auto act = repair_label(gl.act, "ACT", kActPattern);
    if (!env || !act) return std::nullopt;
    gl.env = *env;
    gl.act = *act;
    gl.title = text::trim(gl.title);
    gl.description = text::trim(gl.description);
    if (gl.title.empty() || gl.description.empty()) return std::nullopt;

    std::vector<TaskLabel> tasks;
    for (const auto& t : gl.tasks) {
      if (t.start >= gl.start && t.start < end) tasks.push_back(t);
    }
    std::stable_sort(tasks.begin(), tasks.end(),
                     [](const TaskLabel& a, const TaskLabel& b) { return a.start < b.start; });
    tasks.erase(std::unique(tasks.begin(), tasks.end(),
                            [](const TaskLabel& a, const TaskLabel& b) { return a.start == b.start; }),
                tasks.end());
    if (tasks.empty() || tasks.front().start != gl.start) {
      tasks.insert(tasks.begin(), TaskLabel{gl.start, gl.title});
    }
    for (auto& t : tasks) {
      t.summary = text::trim(t.summary);
      if (t.summary.empty()) t.summary = gl.title;
    }
    gl.tasks = std::move(tasks);
    out.groups.push_back(std::move(gl));
  }
  return out;
}

std::vector<TaskGroup> build_groups(const LabelerRequest& req, const LabelerResponse& resp) {
  const std::size_t n = req.blocks.size();
  std::vector<TaskGroup> out;
  for (std::size_t g = 0; g < resp.groups.size(); ++g) {
    const auto& gl = resp.groups[g];
    const std::size_t end = g + 1 < resp.groups.size() ? resp.groups[g + 1].start : n;
    TaskGroup tg;
    tg.env = gl.env;
    tg.act = gl.act;
    tg.title = gl.title;
    tg.description = gl.description;
    tg.source_session = req.source;
    for (std::size_t t = 0; t < gl.tasks.size(); ++t) {
      const std::size_t tb = gl.tasks[t].start;
      const std::size_t te = t + 1 < gl.tasks.size() ? gl.tasks[t + 1].start : end;
      IndividualTask it;
      it.index = static_cast<int>(t) + 1;
      it.summary = gl.tasks[t].summary;
      for (std::size_t i = tb; i < te; ++i) it.blocks.push_back(mask_sensitive(req.blocks[i]));
      tg.tasks.push_back(std::move(it));
    }
    tg.id = group_id(tg);
    out.push_back(std::move(tg));
  }
  return out;
}

SegmentOutcome segment_and_label(const LabelerRequest& raw, Labeler& labeler) {
  if (raw.blocks.empty()) throw Error(ErrorCode::invalid_argument, "no task blocks to label");
  if (raw.contexts.size() != raw.blocks.size())
    throw Error(ErrorCode::invalid_argument, "contexts must align 1:1 with blocks");
  // Labelers only ever see masked blocks.
  LabelerRequest req = raw;
  for (auto& b : req.blocks) b = mask_sensitive(b);

  SegmentOutcome out;
  const std::size_t n = req.blocks.size();
  for (int attempt = 0; attempt < 2; ++attempt) {
    LabelerResponse resp;
    try {
      resp = labeler.label(req);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::invalid_labeler_output) throw;
      out.notes.push_back(e.what());
      continue;
    }
    const auto problems = validate_response(resp, n);
    if (problems.empty()) {
      out.groups = build_groups(req, resp);
      return out;
    }
    out.notes.push_back("invalid-labeler-output: " + problems.front());
    if (auto fixed = repair_response(resp, n); fixed && validate_response(*fixed, n).empty()) {
      out.repaired = true;
      out.groups = build_groups(req, *fixed);
      return out;
    }
  }
  RuleBasedLabeler fallback;
  out.used_fallback = true;
  out.groups = build_groups(req, fallback.label(req));
  return out;
}

std::vector<TaskGroup> segment_and_label(const std::vector<TaskBlock>& blocks,
                                         const std::vector<WindowContext>& ctx, Labeler& labeler,
                                         const std::string& source) {
  return segment_and_label(LabelerRequest{source, blocks, ctx}, labeler).groups;
}

}  // namespace log2plan
