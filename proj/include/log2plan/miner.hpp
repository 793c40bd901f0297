#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "log2plan/dictionary.hpp"

namespace log2plan {

struct IndividualTask {
  int index = 1;
  std::vector<TaskBlock> blocks;
  std::string summary;

  friend bool operator==(const IndividualTask&, const IndividualTask&) = default;
};

struct TaskGroup {
  std::string id;
  std::string env;          // ENV[<environment>/<platform>]
  std::string act;          // ACT[<category>/<specific>]
  std::string title;
  std::string description;  // one sentence
  std::vector<IndividualTask> tasks;
  std::string source_session;

  friend bool operator==(const TaskGroup&, const TaskGroup&) = default;
};

void to_json(nlohmann::json& j, const TaskGroup& g);
void from_json(const nlohmann::json& j, TaskGroup& g);

// Stable content hash of (env, act, title, blocks).
std::string group_id(const TaskGroup& g);

// Violations of the TaskGroup invariants; empty when valid.
std::vector<std::string> validate_group(const TaskGroup& g);

// "Rename report.docx Final" style rendering used for summaries and plan text.
std::string render_block(const TaskBlock& b);

// "file-management/rename" style ACT body for an action.
std::string action_category(HighLevelAction a);
bool is_structural(HighLevelAction a);

struct LabelerRequest {
  std::string source;  // "<log>:<session>:<env key>", keys recorded responses
  std::vector<TaskBlock> blocks;
  std::vector<WindowContext> contexts;
};

struct TaskLabel {
  std::size_t start = 0;  // absolute block index
  std::string summary;

  friend bool operator==(const TaskLabel&, const TaskLabel&) = default;
};

struct GroupLabel {
  std::size_t start = 0;  // absolute block index
  std::string env;
  std::string act;
  std::string title;
  std::string description;
  std::vector<TaskLabel> tasks;

  friend bool operator==(const GroupLabel&, const GroupLabel&) = default;
};

struct LabelerResponse {
  std::vector<GroupLabel> groups;

  friend bool operator==(const LabelerResponse&, const LabelerResponse&) = default;
};

nlohmann::json request_to_json(const LabelerRequest& r);
LabelerRequest request_from_json(const nlohmann::json& j);
nlohmann::json response_to_json(const LabelerResponse& r);
LabelerResponse response_from_json(const nlohmann::json& j);

class Labeler {
 public:
  virtual ~Labeler() = default;
  virtual LabelerResponse label(const LabelerRequest& request) = 0;
};

// Deterministic stand-in for a hosted model. Groups break at app changes,
// before Open and after Close; tasks break at window-title changes and after
// Save.
class RuleBasedLabeler final : public Labeler {
 public:
  LabelerResponse label(const LabelerRequest& request) override;
};

std::vector<std::string> validate_response(const LabelerResponse& r, std::size_t block_count);

// Normalizes boundaries and label formats. Returns nullopt when the response
// cannot be made valid (e.g. empty titles). Idempotent.
std::optional<LabelerResponse> repair_response(const LabelerResponse& r, std::size_t block_count);

// Turns a valid response into groups over the request's blocks.
std::vector<TaskGroup> build_groups(const LabelerRequest& request, const LabelerResponse& response);

struct SegmentOutcome {
  std::vector<TaskGroup> groups;
  bool used_fallback = false;
  bool repaired = false;
  std::vector<std::string> notes;
};

// Invalid labeler output is repaired when possible, otherwise requested once
// more, then replaced by the rule-based labeler.
SegmentOutcome segment_and_label(const LabelerRequest& request, Labeler& labeler);

std::vector<TaskGroup> segment_and_label(const std::vector<TaskBlock>& blocks,
                                         const std::vector<WindowContext>& ctx, Labeler& labeler,
                                         const std::string& source = "adhoc");

}  // namespace log2plan
