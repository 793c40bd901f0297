#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "log2plan/config.hpp"
#include "log2plan/executor.hpp"
#include "log2plan/miner.hpp"
#include "log2plan/planner.hpp"
#include "log2plan/retrieval.hpp"

namespace log2plan {

struct Retrieved {
  QueryLabels labels;
  RetrievalResult result;
  std::vector<TaskGroup> groups;  // selected groups in selection order
};

// Decomposes the command, embeds its ENV/ACT/Title rendering and runs the
// staged selection. An empty index yields an empty result.
Retrieved retrieve(std::string_view command, const VectorIndex& index, std::span<const TaskGroup> pool,
                   Embedder& embedder, QueryDecomposer* decomposer, const SelectionConfig& selection);

struct EvalCase {
  std::string name;
  std::string command;
  nlohmann::json scenario;
  std::vector<nlohmann::json> expect;  // SimDesktop::check predicates
  nlohmann::json assist = nlohmann::json::object();
  nlohmann::json plan;  // fixed global plan; null plans from the command
};

// {"name", "logs": [...], "labels"?: path, "cases": [...]}; a case's
// "scenario" is an object or a path, and an optional "plan" replaces planning.
// Paths are relative to the suite file.
struct EvalSuite {
  std::string name;
  std::vector<std::filesystem::path> logs;
  std::string labels;
  std::vector<EvalCase> cases;

  static EvalSuite from_json(const nlohmann::json& j, const std::filesystem::path& base = {});
  static EvalSuite load(const std::filesystem::path& path);
};

struct EvalOptions {
  Config config;
  bool retrieval = true;
  const RuleSet* rules = &RuleSet::builtin();
};

struct CaseResult {
  std::string name;
  std::string command;
  bool success = false;
  double subtask_completion_rate = 0.0;
  double execution_time_ms = 0.0;
  std::size_t steps = 0;
  std::size_t low_level_actions = 0;
  std::vector<std::string> failed_checks;
  std::string error;
  nlohmann::json plan;
  nlohmann::json run;
};

struct EvalReport {
  std::string suite;
  bool retrieval = true;
  std::size_t groups = 0;  // task groups available for retrieval
  std::vector<CaseResult> cases;
  double success_rate = 0.0;
  double avg_subtask_completion_rate = 0.0;
  double avg_execution_time_ms = 0.0;
};

// Runs one case end to end on a private simulator. Never throws for
// case-level problems; they are recorded on the result.
CaseResult run_case(const EvalCase& c, const VectorIndex& index, std::span<const TaskGroup> pool,
                    const EvalOptions& opts);

// Mines the suite's logs (recorded labels when given), then runs every case.
EvalReport evaluate(const EvalSuite& suite, const EvalOptions& opts);
// Uses an existing group pool instead of the suite's logs.
EvalReport evaluate(const EvalSuite& suite, std::span<const TaskGroup> pool, const EvalOptions& opts);

nlohmann::json eval_report_to_json(const EvalReport& r);

// Schema and aggregate consistency problems; empty when the report is sound.
std::vector<std::string> check_report(const nlohmann::json& report);

// Removes every "*time_ms" member recursively.
nlohmann::json strip_timing(const nlohmann::json& j);

}  // namespace log2plan
