#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "log2plan/gui_backend.hpp"
#include "log2plan/planner.hpp"

namespace log2plan {

enum class ExecFlag { Y, N };

struct GroundedStep {
  PlanStep source;
  int variant = -1;  // dictionary variant used; -1 when none was satisfiable
  std::vector<LowLevelAction> actions;
  ExecFlag exec = ExecFlag::N;
  std::string observation;
};

nlohmann::json grounded_to_json(const GroundedStep& g);

struct GroundOptions {
  double min_score = 0.35;
  const RuleSet* rules = &RuleSet::builtin();
};

// 0.6 * token Jaccard + 0.3 when the component name contains the object +
// 0.1 * control-type fit. A
// trailing "(Type)" on the object overrides `expected_types`; no expectation
// counts as a fit.
double score_component(std::string_view object, const Component& c,
                       std::span<const std::string> expected_types = {});

// Splits "name (Type)" into its parts; the type is empty when absent.
std::pair<std::string, std::string> split_type_hint(std::string_view object);

bool window_matches(const WindowContext& w, std::string_view name);

// Infeasibility is reported through exec = N and the observation, never thrown.
GroundedStep ground(const GlobalPlan& plan, std::size_t i, const Snapshot& snapshot,
                    const GroundOptions& opts = {});
GroundedStep ground(const GlobalPlan& plan, std::size_t i, const ComponentDictionary& components,
                    const GroundOptions& opts = {});

inline constexpr int kMaxRevisions = 2;

// Missing window -> Switch Focus / Open inserted before i; missing component
// -> Scroll inserted on the first revision; anything else marks step i for
// user assist. Throws Error(revision_limit_exceeded) past `max_revisions`.
GlobalPlan revise(const GlobalPlan& plan, std::size_t i, const GroundedStep& verdict,
                  int max_revisions = kMaxRevisions);

}  // namespace log2plan
