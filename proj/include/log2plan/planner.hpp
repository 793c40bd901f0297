#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "log2plan/dictionary.hpp"
#include "log2plan/retrieval.hpp"

namespace log2plan {

struct PlanStep {
  bool user_assist = false;
  std::string action;  // kept as text so invalid backend output can be reported
  std::vector<std::string> objects;
  std::optional<int> variant;         // preferred dictionary variant
  std::optional<std::string> window;  // app the step expects to be focused
  int revisions = 0;
  bool recovery = false;  // inserted by revise(), not part of the user's plan

  friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

void to_json(nlohmann::json& j, const PlanStep& s);
void from_json(const nlohmann::json& j, PlanStep& s);

struct GlobalPlan {
  std::string command;
  std::vector<PlanStep> steps;
  RetrievalResult references;

  friend bool operator==(const GlobalPlan& a, const GlobalPlan& b) {
    return a.command == b.command && a.steps == b.steps;
  }
};

nlohmann::json plan_to_json(const GlobalPlan& p);
GlobalPlan plan_from_json(const nlohmann::json& j);
GlobalPlan load_plan(const std::string& path);

// "Rename report.docx Final": the text embedded for step-level task matching.
std::string render_step(const PlanStep& s);
PlanStep step_from_block(const TaskBlock& b);

// "unknown-action@i" / "missing-slot@i" entries, 0-based step index.
std::vector<std::string> validate_plan(const GlobalPlan& plan, const RuleSet& rules = RuleSet::builtin());

struct PlanContext {
  const RetrievalResult* retrieval = nullptr;
  std::span<const TaskGroup> groups;  // the retrieved groups, in retrieval order
  Embedder* embedder = nullptr;
  double reuse_threshold = 0.8;
};

class Planner {
 public:
  virtual ~Planner() = default;
  // Throws Error(backend_unavailable) when the backend cannot be reached.
  virtual std::vector<PlanStep> draft(std::string_view command, const PlanContext& ctx) = 0;
};

// Clauses are compiled with keyword templates; a step whose rendering matches
// a retrieved individual task above the reuse threshold is replaced by that
// task's blocks. A one-block task of the same shape only supplies the operands
// the task summary names.
class DeterministicPlanner final : public Planner {
 public:
  std::vector<PlanStep> draft(std::string_view command, const PlanContext& ctx) override;
};

// Keyword compiler alone, without reference reuse.
std::vector<PlanStep> compile_command(std::string_view command);
std::vector<std::string> split_clauses(std::string_view command);

// Repairs unknown actions (nearest name by edit distance <= 3) and missing
// slots (placeholders, user assist). Returns nullopt when a step cannot be
// repaired.
std::optional<GlobalPlan> repair_plan(const GlobalPlan& plan, const RuleSet& rules = RuleSet::builtin());

GlobalPlan plan(std::string_view command, const RetrievalResult& retrieval, Planner& backend,
                std::span<const TaskGroup> groups, Embedder& embedder,
                const RuleSet& rules = RuleSet::builtin(), double reuse_threshold = 0.8);

}  // namespace log2plan
