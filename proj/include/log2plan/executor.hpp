#pragma once

#include <chrono>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "log2plan/local_planner.hpp"

namespace log2plan {

class AssistChannel {
 public:
  virtual ~AssistChannel() = default;
  // `step` is the 1-based index of the step in the user's plan. Throws
  // Error(no_scripted_answer) or Error(assist_timeout).
  virtual std::string request(int step, std::string_view prompt) = 0;
};

// Headless answers: {"3": "hunter2"} or {"2": ["alice", "s3cret"]}; array
// entries are handed out in order.
class ScriptedAssist final : public AssistChannel {
 public:
  ScriptedAssist() = default;
  explicit ScriptedAssist(const nlohmann::json& answers);
  static ScriptedAssist load(const std::string& path);

  std::string request(int step, std::string_view prompt) override;

 private:
  std::mutex mu_;
  std::map<int, std::vector<std::string>> answers_;
  std::map<int, std::size_t> consumed_;
};

class TerminalAssist final : public AssistChannel {
 public:
  explicit TerminalAssist(std::chrono::milliseconds timeout = std::chrono::seconds(120))
      : timeout_(timeout) {}
  std::string request(int step, std::string_view prompt) override;

 private:
  std::chrono::milliseconds timeout_;
};

enum class StepOutcome { succeeded, user_assisted, failed, user_assist_failed, skipped };

std::string_view to_string(StepOutcome o);

struct StepReport {
  int index = 0;  // 1-based
  PlanStep step;
  StepOutcome outcome = StepOutcome::skipped;
  int variant = -1;
  std::vector<LowLevelAction> actions;  // actions applied for the step itself
  std::vector<PlanStep> recovery;       // recovery steps executed before it
  int revisions = 0;
  std::string detail;
  double time_ms = 0.0;
};

struct RunReport {
  std::vector<StepReport> steps;
  std::size_t succeeded = 0;
  std::size_t user_assisted = 0;
  std::size_t failed = 0;
  std::size_t user_assist_failed = 0;
  std::size_t skipped = 0;
  std::size_t low_level_actions = 0;
  double subtask_completion_rate = 1.0;
  bool success = true;
  bool aborted = false;
  std::string error;
  double total_time_ms = 0.0;
};

nlohmann::json report_to_json(const RunReport& r);

struct RunOptions {
  GroundOptions ground;
  int max_revisions = kMaxRevisions;
};

// Steps are grounded against a fresh capture; actions fail fast; infeasible
// steps are revised and retried; after an unrepaired failure the remaining
// steps are skipped. A backend failure aborts with a partial report.
RunReport run(const GlobalPlan& plan, GuiBackend& backend, AssistChannel& assist, const RunOptions& opts = {});

}  // namespace log2plan
