#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "log2plan/ingest.hpp"

namespace log2plan {

enum class HighLevelAction {
  text_input,
  click,
  doubleclick,
  rightclick,
  drag,
  scroll,
  press,
  open,
  close,
  switch_focus,
  go_to,
  save,
  copy,
  paste,
  delete_,
  rename,
  login,
  repeat,
  wait,
};

inline constexpr std::size_t kActionCount = 19;

const std::array<HighLevelAction, kActionCount>& all_actions();
std::string_view to_string(HighLevelAction a);
// Case-insensitive; accepts "Go To (Navigation)".
std::optional<HighLevelAction> parse_action(std::string_view name);

// Verbs of the low-level event sequences in the dictionary. Broader than the
// executor's eight verbs: mouse_down/mouse_up pairs lower to drag, wait lowers
// to focus, repeat is resolved by the grounder.
enum class StepVerb {
  click,
  double_click,
  right_click,
  mouse_down,
  mouse_up,
  press,
  type,
  scroll,
  focus,
  wait,
  repeat,
};

std::string_view to_string(StepVerb v);
std::optional<StepVerb> parse_step_verb(std::string_view s);

enum class SlotKind { object, destination, text, keys, literal };

std::string_view to_string(SlotKind k);
std::optional<SlotKind> parse_slot_kind(std::string_view s);

enum class SlotConstraint {
  none,
  url,     // text must look like a URL
  arrows,  // keys must be arrow keys
  window,  // object names a top-level window, not a control
};

struct StepTemplate {
  StepVerb verb = StepVerb::click;
  SlotKind slot = SlotKind::literal;
  std::string name;     // binding key (non-literal slots)
  std::string literal;  // fixed operand (literal slots)
  std::string fallback; // used when no binding is supplied; empty = required
  bool has_fallback = false;
  std::vector<std::string> control_types;  // expected control types for object slots
  bool strict = false;  // control_types / fallback name are hard constraints
  SlotConstraint constraint = SlotConstraint::none;
  bool repeatable = false;  // one or more consecutive events ("arrow keys ...")

  friend bool operator==(const StepTemplate&, const StepTemplate&) = default;
};

struct Slot {
  std::string name;
  SlotKind kind = SlotKind::object;
  const StepTemplate* first = nullptr;  // first step that uses the slot
};

struct PatternRule {
  HighLevelAction action = HighLevelAction::click;
  std::vector<StepTemplate> steps;
  int priority = 0;

  // Distinct non-literal slots in first-appearance order; these are the
  // block's objects.
  std::vector<Slot> slots() const;
  // Slots without a fallback, i.e. the ones a plan step must supply.
  std::vector<Slot> required_slots() const;

  friend bool operator==(const PatternRule& a, const PatternRule& b) {
    return a.action == b.action && a.steps == b.steps && a.priority == b.priority;
  }
};

using Bindings = std::map<std::string, std::string>;

// One fully bound dictionary step.
struct LowLevelStep {
  StepVerb verb = StepVerb::click;
  SlotKind slot = SlotKind::literal;
  std::string slot_name;
  std::string value;

  friend bool operator==(const LowLevelStep&, const LowLevelStep&) = default;
};

struct TaskBlock {
  HighLevelAction action = HighLevelAction::click;
  std::vector<std::string> objects;
  bool user_assist = false;
  int variant = -1;  // matched rule variant; -1 for fallback blocks
  std::string app;   // window app the block was recorded in

  friend bool operator==(const TaskBlock&, const TaskBlock&) = default;
};

void to_json(nlohmann::json& j, const TaskBlock& b);
void from_json(const nlohmann::json& j, TaskBlock& b);

// Immutable rule table. Rules are kept in table order; variant numbers are
// the position of a rule among the rules of the same action.
class RuleSet {
 public:
  RuleSet() = default;
  explicit RuleSet(std::vector<PatternRule> rules);

  static const RuleSet& builtin();
  static RuleSet from_json(const nlohmann::json& j);
  static RuleSet load(const std::string& path);
  nlohmann::json to_json() const;

  std::span<const PatternRule> rules() const { return rules_; }
  std::vector<const PatternRule*> variants(HighLevelAction a) const;
  const PatternRule* variant(HighLevelAction a, int index) const;
  int variant_index(const PatternRule& rule) const;
  std::size_t table_index(const PatternRule& rule) const;

 private:
  std::vector<PatternRule> rules_;
};

std::string normalize_chord(std::string_view keys);
bool looks_like_url(std::string_view s);
bool is_arrow_key(std::string_view keys);

// Binds step objects positionally to a rule's slots. Accepts either one object
// per slot or one object per required slot (fallbacks fill the rest).
std::optional<Bindings> bind_objects(const PatternRule& rule, const std::vector<std::string>& objects);

std::vector<LowLevelStep> expand(const PatternRule& rule, const Bindings& bindings);
std::vector<LowLevelStep> expand(HighLevelAction action, const Bindings& bindings,
                                 std::optional<int> variant = std::nullopt,
                                 const RuleSet& rules = RuleSet::builtin());

struct MatchedSpan {
  std::size_t first = 0;
  std::size_t count = 0;
  const PatternRule* rule = nullptr;  // null for fallback blocks
  TaskBlock block;
  WindowContext window;  // window of the first event
};

// Greedy left-to-right longest match; ties by priority then table order.
// Events no rule matches become single-event fallback blocks.
std::vector<MatchedSpan> match_spans(std::span<const RawEvent> events, const RuleSet& rules);
std::vector<TaskBlock> match_stream(std::span<const RawEvent> events,
                                    const RuleSet& rules = RuleSet::builtin());

// Length of a rule match at position `at`, with extracted bindings.
struct RuleMatch {
  std::size_t length = 0;
  Bindings bindings;
};
std::optional<RuleMatch> match_rule_at(const PatternRule& rule, std::span<const RawEvent> events,
                                       std::size_t at);
TaskBlock fallback_block(const RawEvent& e);

// Replaces text operands of user-assist blocks with "<slot>" placeholders.
TaskBlock mask_sensitive(const TaskBlock& block, const RuleSet& rules = RuleSet::builtin());

}  // namespace log2plan
