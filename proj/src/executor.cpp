#include "log2plan/executor.hpp"

#include <poll.h>
#include <unistd.h>

#include <fstream>
#include <iostream>

#include "log2plan/error.hpp"
#include "log2plan/text.hpp"

namespace log2plan {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Fills placeholders in order; with none, one answer replaces the first object.
void collect_assist(PlanStep& step, int index, AssistChannel& assist) {
  bool any = false;
  for (auto& o : step.objects) {
    if (!text::is_placeholder(o)) continue;
    any = true;
    o = assist.request(index, "step " + std::to_string(index) + " (" + step.action + "): enter " +
                                  o.substr(1, o.size() - 2));
  }
  if (any) return;
  const std::string what = step.objects.empty() ? "the operand" : "a replacement for '" + step.objects.front() + "'";
  auto answer = assist.request(index, "step " + std::to_string(index) + " (" + render_step(step) + "): enter " + what);
  if (step.objects.empty()) {
    step.objects.push_back(std::move(answer));
  } else {
    step.objects.front() = std::move(answer);
  }
}

struct Applied {
  bool ok = true;
  std::string observation;
  std::size_t count = 0;
};

Applied apply_all(const std::vector<LowLevelAction>& actions, GuiBackend& backend) {
  Applied out;
  for (std::size_t k = 0; k < actions.size(); ++k) {
    const auto res = backend.apply(actions[k]);
    ++out.count;
    if (!res.ok) {
      out.ok = false;
      out.observation = "action " + std::to_string(k + 1) + " (" + std::string(to_string(actions[k].verb)) +
                        ") failed: " + (res.detail.empty() ? "unspecified" : res.detail);
      return out;
    }
    // Let the backend settle; a later grounding re-captures anyway.
    if (res.changed_window) backend.capture();
  }
  return out;
}

}  // namespace

ScriptedAssist::ScriptedAssist(const nlohmann::json& answers) {
  if (!answers.is_object()) throw Error(ErrorCode::schema, "assist answers must be an object keyed by step");
  for (const auto& [key, value] : answers.items()) {
    int step = 0;
    try {
      step = std::stoi(key);
    } catch (const std::exception&) {
      throw Error(ErrorCode::schema, "assist key '" + key + "' is not a step number");
    }
    auto& list = answers_[step];
    if (value.is_array()) {
      for (const auto& v : value) list.push_back(v.get<std::string>());
    } else {
      list.push_back(value.get<std::string>());
    }
  }
}

ScriptedAssist ScriptedAssist::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open assist answers " + path);
  try {
    return ScriptedAssist(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::schema, path + ": " + e.what());
  }
}

std::string ScriptedAssist::request(int step, std::string_view prompt) {
  std::lock_guard lock(mu_);
  const auto it = answers_.find(step);
  auto& used = consumed_[step];
  if (it == answers_.end() || used >= it->second.size()) {
    throw Error(ErrorCode::no_scripted_answer, "step " + std::to_string(step) + ": " + std::string(prompt));
  }
  return it->second[used++];
}

std::string TerminalAssist::request(int step, std::string_view prompt) {
  std::cerr << "[assist] " << prompt << "\n> " << std::flush;
  pollfd fd{STDIN_FILENO, POLLIN, 0};
  const int ready = ::poll(&fd, 1, static_cast<int>(timeout_.count()));
  if (ready <= 0) throw Error(ErrorCode::assist_timeout, "no input for step " + std::to_string(step));
  std::string line;
  if (!std::getline(std::cin, line)) throw Error(ErrorCode::assist_timeout, "input closed for step " + std::to_string(step));
  return line;
}

std::string_view to_string(StepOutcome o) {
  switch (o) {
    case StepOutcome::succeeded: return "succeeded";
    case StepOutcome::user_assisted: return "user-assisted";
    case StepOutcome::failed: return "failed";
    case StepOutcome::user_assist_failed: return "user-assist-failed";
    case StepOutcome::skipped: return "skipped";
  }
  return "unknown";
}

nlohmann::json report_to_json(const RunReport& r) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"index", s.index},
                     {"step", s.step},
                     {"outcome", std::string(to_string(s.outcome))},
                     {"variant", s.variant},
                     {"actions", s.actions},
                     {"recovery", s.recovery},
                     {"revisions", s.revisions},
                     {"detail", s.detail},
                     {"time_ms", s.time_ms}});
  }
  return {{"success", r.success},
          {"subtask_completion_rate", r.subtask_completion_rate},
          {"counts",
           {{"total", r.steps.size()},
            {"succeeded", r.succeeded},
            {"user_assisted", r.user_assisted},
            {"failed", r.failed},
            {"user_assist_failed", r.user_assist_failed},
            {"skipped", r.skipped}}},
          {"low_level_actions", r.low_level_actions},
          {"aborted", r.aborted},
          {"error", r.error},
          {"steps", steps},
          {"total_time_ms", r.total_time_ms}};
}

RunReport run(const GlobalPlan& plan, GuiBackend& backend, AssistChannel& assist, const RunOptions& opts) {
  if (auto v = validate_plan(plan, *opts.ground.rules); !v.empty()) {
    throw Error(ErrorCode::invalid_argument, "plan does not validate: " + text::join(v, ", "));
  }
  const auto run_start = Clock::now();
  RunReport report;
  GlobalPlan work = plan;
  bool stop = false;

  for (std::size_t cursor = 0; cursor < work.steps.size(); ++cursor) {
    StepReport sr;
    sr.index = static_cast<int>(cursor) + 1;
    sr.step = work.steps[cursor];
    if (stop) {
      sr.outcome = StepOutcome::skipped;
      sr.detail = "skipped after an earlier failure";
      report.steps.push_back(std::move(sr));
      continue;
    }

    const auto step_start = Clock::now();
    bool assisted = false;
    try {
      for (;;) {
        Snapshot snap = backend.capture();
        if (work.steps[cursor].user_assist && !assisted) {
          try {
            collect_assist(work.steps[cursor], sr.index, assist);
            assisted = true;
          } catch (const Error& e) {
            if (e.code() != ErrorCode::no_scripted_answer && e.code() != ErrorCode::assist_timeout) throw;
            sr.outcome = StepOutcome::user_assist_failed;
            sr.detail = e.what();
            stop = true;
            break;
          }
        }

        GroundedStep g = ground(work, cursor, snap, opts.ground);
        if (g.exec == ExecFlag::Y) {
          const auto applied = apply_all(g.actions, backend);
          report.low_level_actions += applied.count;
          if (applied.ok) {
            sr.outcome = work.steps[cursor].user_assist ? StepOutcome::user_assisted : StepOutcome::succeeded;
            sr.variant = g.variant;
            sr.actions = g.actions;
            if (work.steps[cursor].user_assist) {
              for (auto& a : sr.actions) {
                if (a.text) a.text = "<assisted>";
              }
            }
            sr.detail = g.observation;
            break;
          }
          g.exec = ExecFlag::N;
          g.observation = applied.observation;
        }

        GlobalPlan revised;
        try {
          revised = revise(work, cursor, g, opts.max_revisions);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::revision_limit_exceeded) throw;
          sr.outcome = work.steps[cursor].user_assist ? StepOutcome::user_assist_failed : StepOutcome::failed;
          sr.detail = e.what();
          stop = true;
          break;
        }
        const std::size_t inserted = revised.steps.size() - work.steps.size();
        const bool flipped = !work.steps[cursor].user_assist && revised.steps[cursor + inserted].user_assist;
        work = std::move(revised);
        if (flipped) assisted = false;

        // Recovery steps run inline and leave the plan once executed.
        for (std::size_t r = 0; r < inserted; ++r) {
          const auto rg = ground(work, cursor + r, backend.capture(), opts.ground);
          sr.recovery.push_back(work.steps[cursor + r]);
          if (rg.exec == ExecFlag::Y) report.low_level_actions += apply_all(rg.actions, backend).count;
        }
        work.steps.erase(work.steps.begin() + static_cast<std::ptrdiff_t>(cursor),
                         work.steps.begin() + static_cast<std::ptrdiff_t>(cursor + inserted));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::backend_failure) throw;
      sr.outcome = StepOutcome::failed;
      sr.detail = e.what();
      report.aborted = true;
      report.error = e.what();
      stop = true;
    }
    // Keep placeholders in the report; assist answers may be secrets.
    sr.step.user_assist = work.steps[cursor].user_assist;
    sr.revisions = work.steps[cursor].revisions;
    sr.time_ms = elapsed_ms(step_start);
    report.steps.push_back(std::move(sr));
  }

  for (const auto& s : report.steps) {
    switch (s.outcome) {
      case StepOutcome::succeeded: ++report.succeeded; break;
      case StepOutcome::user_assisted: ++report.user_assisted; break;
      case StepOutcome::failed: ++report.failed; break;
      case StepOutcome::user_assist_failed: ++report.user_assist_failed; break;
      case StepOutcome::skipped: ++report.skipped; break;
    }
  }
  const std::size_t n = report.steps.size();
  const std::size_t done = report.succeeded + report.user_assisted;
  report.subtask_completion_rate = n ? static_cast<double>(done) / static_cast<double>(n) : 1.0;
  report.success = done == n;
  report.total_time_ms = elapsed_ms(run_start);
  return report;
}

}  // namespace log2plan
