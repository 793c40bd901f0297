#include "support.hpp"

#include "log2plan/error.hpp"
#include "log2plan/local_planner.hpp"

using namespace l2t;

namespace {

PlanStep step(std::string action, std::vector<std::string> objects = {}) {
  PlanStep s;
  s.action = std::move(action);
  s.objects = std::move(objects);
  return s;
}

GlobalPlan one(PlanStep s) { return GlobalPlan{"c", {std::move(s)}, {}}; }

Component comp(std::string name, std::string type) { return Component{std::move(name), std::move(type), {40, 60}}; }

std::vector<std::string> describe(const GroundedStep& g) {
  std::vector<std::string> out;
  for (const auto& a : g.actions) {
    std::string s(to_string(a.verb));
    if (a.target) s += " " + a.target->name;
    if (a.keys) s += " " + *a.keys;
    if (a.text) s += " " + *a.text;
    if (a.destination) s += " -> " + a.destination->name;
    out.push_back(s);
  }
  return out;
}

Snapshot explorer(ComponentDictionary c) {
  Snapshot s;
  s.components = std::move(c);
  s.window = window("File Explorer", "paper - File Explorer");
  s.windows = {*s.window, window("Word", "report.docx - Word", EnvClass::App)};
  return s;
}

GroundedStep verdict(std::string observation) {
  GroundedStep g;
  g.exec = ExecFlag::N;
  g.observation = std::move(observation);
  return g;
}

}  // namespace

TEST(Ground, WorkedRename) {
  const ComponentDictionary c{comp("1. Attention is all you need!", "ListItem"), comp("2. BERT", "ListItem")};
  const auto g = ground(one(step("Rename", {"1. Attention is all you need! (ListItem)", "Transformer"})), 0, c);
  ASSERT_EQ(g.exec, ExecFlag::Y) << g.observation;
  EXPECT_EQ(describe(g), (std::vector<std::string>{"click 1. Attention is all you need!", "press f2", "type Transformer",
                                                   "press enter"}));
  EXPECT_EQ(g.actions[0].target->position, (Point{40, 60}));
  EXPECT_EQ(g.variant, 0);
}

TEST(Ground, ClickOnEmptyDictionary) {
  const auto g = ground(one(step("Click", {"Submit"})), 0, ComponentDictionary{});
  EXPECT_EQ(g.exec, ExecFlag::N);
  EXPECT_EQ(g.observation, "no component matches 'Submit'");
  EXPECT_TRUE(g.actions.empty());
}

TEST(Ground, OpenNotepadWithoutIconUsesStartMenu) {
  const auto g = ground(one(step("Open", {"Notepad"})), 0, explorer({comp("Documents", "ListItem")}));
  ASSERT_EQ(g.exec, ExecFlag::Y) << g.observation;
  EXPECT_EQ(g.variant, 0);
  EXPECT_EQ(describe(g), (std::vector<std::string>{"press win", "type Notepad", "press enter"}));
}

TEST(Ground, OpenIconPrefersDoubleClickWhenHinted) {
  auto s = step("Open", {"notes.txt"});
  s.variant = 1;
  const auto g = ground(one(s), 0, explorer({comp("notes.txt", "ListItem")}));
  ASSERT_EQ(g.exec, ExecFlag::Y);
  EXPECT_EQ(g.variant, 1);
  EXPECT_EQ(describe(g), std::vector<std::string>{"double click notes.txt"});
}

TEST(Ground, FileNamesNeedAnExactListItem) {
  const auto g = ground(one(step("Delete", {"budget.xlsx"})), 0, explorer({comp("FY24_Budget_final.xlsx", "ListItem")}));
  EXPECT_EQ(g.exec, ExecFlag::N);
  EXPECT_EQ(g.observation, "no component matches 'budget.xlsx'");
}

TEST(Ground, DragResolvesBothEnds) {
  const auto g = ground(one(step("Drag", {"photo.png", "paper"})), 0,
                        explorer({comp("photo.png", "ListItem"), comp("paper", "ListItem")}));
  ASSERT_EQ(g.exec, ExecFlag::Y) << g.observation;
  EXPECT_EQ(describe(g), std::vector<std::string>{"drag photo.png -> paper"});
}

TEST(Ground, ExpectedWindowMustBeFocused) {
  auto s = step("Save");
  s.window = "Word";
  const auto g = ground(one(s), 0, explorer({}));
  EXPECT_EQ(g.exec, ExecFlag::N);
  EXPECT_EQ(g.observation, "window 'Word' not focused");
  s.window = "Excel";
  EXPECT_EQ(ground(one(s), 0, explorer({})).observation, "window 'Excel' not open");
}

TEST(Ground, SwitchFocusWalksTheWindowList) {
  const auto g = ground(one(step("Switch Focus", {"Word"})), 0, explorer({}));
  ASSERT_EQ(g.exec, ExecFlag::Y) << g.observation;
  EXPECT_EQ(g.variant, 0);
  EXPECT_EQ(describe(g), std::vector<std::string>{"press alt+esc"});
  const auto here = ground(one(step("Switch Focus", {"File Explorer"})), 0, explorer({}));
  ASSERT_EQ(here.exec, ExecFlag::Y);
  EXPECT_EQ(describe(here), std::vector<std::string>{"focus File Explorer"});
}

TEST(Ground, UserAssistPlaceholderIsInfeasible) {
  const auto g = ground(one(step("Rename", {"notes.txt", "<name>"})), 0, explorer({comp("notes.txt", "ListItem")}));
  EXPECT_EQ(g.exec, ExecFlag::N);
  EXPECT_NE(g.observation.find("needs user input"), std::string::npos);
}

TEST(Ground, RepeatGroundsTheEarlierStep) {
  GlobalPlan p{"c", {step("Click", {"OK"}), step("Repeat", {"1"})}, {}};
  const auto g = ground(p, 1, explorer({comp("OK", "Button")}));
  ASSERT_EQ(g.exec, ExecFlag::Y) << g.observation;
  EXPECT_EQ(describe(g), std::vector<std::string>{"click OK"});
  EXPECT_EQ(g.source.action, "Repeat");
  GlobalPlan bad{"c", {step("Repeat", {"1"})}, {}};
  EXPECT_EQ(ground(bad, 0, explorer({})).exec, ExecFlag::N);
}

TEST(Ground, UnknownActionAndIndex) {
  EXPECT_EQ(ground(one(step("Frobnicate")), 0, ComponentDictionary{}).exec, ExecFlag::N);
  EXPECT_THROW(ground(one(step("Save")), 3, ComponentDictionary{}), Error);
}

TEST(Ground, Deterministic) {
  const auto snap = explorer({comp("notes.txt", "ListItem"), comp("notes-old.txt", "ListItem"), comp("OK", "Button")});
  const GlobalPlan p{"c", {step("Copy", {"notes.txt"}), step("Click", {"ok"})}, {}};
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    EXPECT_EQ(grounded_to_json(ground(p, i, snap)), grounded_to_json(ground(p, i, snap)));
  }
}

TEST(Score, Extremes) {
  EXPECT_DOUBLE_EQ(score_component("Submit", comp("Submit", "Button"), std::vector<std::string>{"Button"}), 1.0);
  EXPECT_DOUBLE_EQ(score_component("alpha", comp("beta", "Button"), std::vector<std::string>{"Edit"}), 0.0);
}

TEST(Score, WorkedFixtureTable) {
  const ComponentDictionary fixture{comp("Documents", "ListItem"), comp("1. Attention is all you need!", "ListItem"),
                                    comp("Budget 2024.xlsx", "ListItem"), comp("Close", "Button"),
                                    comp("Search", "Edit")};
  const std::string object = "paper about Multihead Attention";
  // Jaccard {attention} / 9 tokens, no substring, type fits: 0.6/9 + 0.1.
  EXPECT_NEAR(score_component(object, fixture[1], std::vector<std::string>{"ListItem"}), 0.6 / 9 + 0.1, 1e-12);
  std::size_t best = 0;
  for (std::size_t i = 1; i < fixture.size(); ++i) {
    if (score_component(object, fixture[i], std::vector<std::string>{"ListItem"}) >
        score_component(object, fixture[best], std::vector<std::string>{"ListItem"}))
      best = i;
  }
  EXPECT_EQ(fixture[best].name, "1. Attention is all you need!");
}

TEST(Score, TypeHintOverridesExpectation) {
  EXPECT_DOUBLE_EQ(score_component("OK (Button)", comp("OK", "Button"), std::vector<std::string>{"Edit"}), 1.0);
  EXPECT_DOUBLE_EQ(score_component("OK (Edit)", comp("OK", "Button")), 0.9);
  EXPECT_EQ(split_type_hint("1. Attention is all you need! (ListItem)"),
            (std::pair<std::string, std::string>{"1. Attention is all you need!", "ListItem"}));
  EXPECT_EQ(split_type_hint("IMG_0042 (1).png").second, "");
}

TEST(Revise, MissingWindowInsertsSwitchFocus) {
  GlobalPlan p{"c", {step("Click", {"File"}), step("Save")}, {}};
  const auto out = revise(p, 1, verdict("window 'Word' not focused"));
  ASSERT_EQ(out.steps.size(), 3u);
  EXPECT_EQ(out.steps[1].action, "Switch Focus");
  EXPECT_EQ(out.steps[1].objects, std::vector<std::string>{"Word"});
  EXPECT_TRUE(out.steps[1].recovery);
  EXPECT_EQ(out.steps[2].revisions, 1);
  expect_golden("revise_switch_focus", plan_to_json(out));
}

TEST(Revise, ClosedWindowInsertsOpen) {
  const auto out = revise(one(step("Save")), 0, verdict("window 'Excel' not open"));
  ASSERT_EQ(out.steps.size(), 2u);
  EXPECT_EQ(out.steps[0].action, "Open");
  EXPECT_EQ(out.steps[0].objects, std::vector<std::string>{"Excel"});
}

TEST(Revise, MissingItemScrollsOnce) {
  const auto first = revise(one(step("Click", {"zeta"})), 0, verdict("no component matches 'zeta'"));
  ASSERT_EQ(first.steps.size(), 2u);
  EXPECT_EQ(first.steps[0].action, "Scroll");
  const auto second = revise(first, 1, verdict("no component matches 'zeta'"));
  EXPECT_EQ(second.steps.size(), 2u);
  EXPECT_TRUE(second.steps[1].user_assist);
}

TEST(Revise, UnmatchedBlockerFlipsUserAssist) {
  const auto p = one(step("Click", {"x"}));
  const auto out = revise(p, 0, verdict("something odd"));
  ASSERT_EQ(out.steps.size(), 1u);
  EXPECT_TRUE(out.steps[0].user_assist);
  EXPECT_EQ(out.steps[0].action, p.steps[0].action);
  EXPECT_EQ(out.steps[0].objects, p.steps[0].objects);
}

TEST(Revise, ThirdFailureHitsTheCap) {
  auto p = one(step("Click", {"x"}));
  p = revise(p, 0, verdict("odd"));
  p = revise(p, 0, verdict("odd"));
  try {
    revise(p, 0, verdict("odd"));
    FAIL() << "expected revision_limit_exceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::revision_limit_exceeded);
  }
}

TEST(Revise, RejectsFeasibleVerdict) {
  GroundedStep ok;
  ok.exec = ExecFlag::Y;
  EXPECT_THROW(revise(one(step("Save")), 0, ok), Error);
}
