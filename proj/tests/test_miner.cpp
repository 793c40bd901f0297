#include "support.hpp"

#include "log2plan/error.hpp"
#include "log2plan/miner.hpp"
#include "log2plan/repository.hpp"

using namespace l2t;

namespace {

TaskBlock block(HighLevelAction a, std::vector<std::string> objects = {}, std::string app = "Word") {
  TaskBlock b;
  b.action = a;
  b.objects = std::move(objects);
  b.variant = 0;
  b.app = std::move(app);
  return b;
}

LabelerRequest request(std::vector<TaskBlock> blocks, std::vector<WindowContext> ctx) {
  return LabelerRequest{"fixture", std::move(blocks), std::move(ctx)};
}

class ScriptedLabeler final : public Labeler {
 public:
  explicit ScriptedLabeler(std::vector<LabelerResponse> replies) : replies_(std::move(replies)) {}
  LabelerResponse label(const LabelerRequest&) override {
    ++calls;
    if (replies_.empty()) throw Error(ErrorCode::invalid_labeler_output, "no reply");
    auto r = replies_.front();
    replies_.erase(replies_.begin());
    return r;
  }
  int calls = 0;

 private:
  std::vector<LabelerResponse> replies_;
};

class UnavailableLabeler final : public Labeler {
 public:
  LabelerResponse label(const LabelerRequest&) override {
    throw Error(ErrorCode::labeler_unavailable, "offline");
  }
};

const WindowContext kFx = window("FileExplorer", "Documents - File Explorer");

}  // namespace

TEST(RuleBasedLabeler, FileExplorerSession) {
  const WindowContext paper = window("FileExplorer", "paper - File Explorer");
  const std::vector<TaskBlock> blocks{
      block(HighLevelAction::open, {"paper folder"}, "FileExplorer"),
      block(HighLevelAction::rename, {"1. Attention is all you need!", "Transformer"}, "FileExplorer"),
  };
  const std::vector<WindowContext> ctx{kFx, paper};
  RuleBasedLabeler labeler;
  const auto groups = segment_and_label(blocks, ctx, labeler, "fixture");
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].env, "ENV[local/FileExplorer]");
  EXPECT_EQ(groups[0].act, "ACT[file-management/rename]");
  EXPECT_TRUE(validate_group(groups[0]).empty());
  nlohmann::json j = groups[0];
  expect_golden("miner_file_explorer", j);
}

TEST(RuleBasedLabeler, SingleSave) {
  RuleBasedLabeler labeler;
  const auto groups = segment_and_label({block(HighLevelAction::save)}, {window("Word")}, labeler);
  ASSERT_EQ(groups.size(), 1u);
  ASSERT_EQ(groups[0].tasks.size(), 1u);
  EXPECT_EQ(groups[0].tasks[0].blocks.size(), 1u);
}

TEST(RuleBasedLabeler, BoundaryAtAppChange) {
  RuleBasedLabeler labeler;
  const auto r = labeler.label(request(
      {block(HighLevelAction::click, {"File"}), block(HighLevelAction::save), block(HighLevelAction::go_to, {"x.com"}, "Chrome")},
      {window("Word"), window("Word"), window("Chrome", "", EnvClass::Web)}));
  ASSERT_EQ(r.groups.size(), 2u);
  EXPECT_EQ(r.groups[1].start, 2u);
  EXPECT_EQ(r.groups[1].env, "ENV[web/Chrome]");
}

TEST(RuleBasedLabeler, ThreeSavesOneGroup) {
  RuleBasedLabeler labeler;
  const auto r = labeler.label(request({block(HighLevelAction::save), block(HighLevelAction::save),
                                        block(HighLevelAction::save)},
                                       {window("Word"), window("Word"), window("Word")}));
  ASSERT_EQ(r.groups.size(), 1u);
  EXPECT_EQ(r.groups[0].act, "ACT[file/save]");
  // Tasks end after every Save.
  EXPECT_EQ(r.groups[0].tasks.size(), 3u);
  expect_golden("labeler_three_saves", response_to_json(r));
}

TEST(RuleBasedLabeler, TenBlockFixtureGivesThreeGroups) {
  using A = HighLevelAction;
  const WindowContext word = window("Word", "Document1 - Word", EnvClass::App);
  const WindowContext report = window("Word", "report.docx - Word", EnvClass::App);
  const WindowContext chrome = window("Chrome", "Google", EnvClass::Web);
  const std::vector<TaskBlock> blocks{
      block(A::click, {"Document"}), block(A::text_input, {"Document", "Hello"}), block(A::save),
      block(A::open, {"report.docx"}), block(A::text_input, {"Document", "Q3"}), block(A::save),
      block(A::go_to, {"news.example.com"}, "Chrome"), block(A::click, {"World"}, "Chrome"),
      block(A::text_input, {"Search", "weather"}, "Chrome"), block(A::close, {"Close"}, "Chrome"),
  };
  const std::vector<WindowContext> ctx{word, word, word, report, report, report, chrome, chrome, chrome, chrome};

  // Hand-applied rules: Open at 3 starts a group, the app changes at 6.
  RuleBasedLabeler labeler;
  const auto r = labeler.label(request(blocks, ctx));
  ASSERT_EQ(r.groups.size(), 3u);
  EXPECT_EQ(r.groups[0].start, 0u);
  EXPECT_EQ(r.groups[1].start, 3u);
  EXPECT_EQ(r.groups[2].start, 6u);
  EXPECT_TRUE(validate_response(r, blocks.size()).empty());
}

TEST(BuildGroups, EveryBlockCoveredOnce) {
  using A = HighLevelAction;
  std::mt19937_64 rng(11);
  const std::vector<A> actions{A::click, A::save, A::open, A::close, A::text_input, A::rename};
  const std::vector<std::string> apps{"Word", "Chrome", "Notepad"};
  RuleBasedLabeler labeler;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<TaskBlock> blocks;
    std::vector<WindowContext> ctx;
    const std::size_t n = 1 + rng() % 25;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string app = apps[rng() % apps.size()];
      blocks.push_back(block(actions[rng() % actions.size()], {"item" + std::to_string(i)}, app));
      ctx.push_back(window(app, app + " " + std::to_string(rng() % 2)));
    }
    const auto groups = segment_and_label(blocks, ctx, labeler);
    std::vector<TaskBlock> flat;
    for (const auto& g : groups) {
      EXPECT_TRUE(validate_group(g).empty());
      for (const auto& t : g.tasks) flat.insert(flat.end(), t.blocks.begin(), t.blocks.end());
    }
    EXPECT_EQ(flat, blocks);
  }
}

TEST(RepairResponse, NormalizesAndIsIdempotent) {
  LabelerResponse r;
  r.groups.push_back({2, "web/Chrome", "ACT[navigation/go-to]", " Browse ", "Browse a site.", {{3, "b"}, {2, "a"}}});
  r.groups.push_back({1, "ENV[app/Word]", "file/save", "Save", "Save a file.", {}});
  EXPECT_FALSE(validate_response(r, 5).empty());
  const auto fixed = repair_response(r, 5);
  ASSERT_TRUE(fixed);
  EXPECT_TRUE(validate_response(*fixed, 5).empty());
  EXPECT_EQ(fixed->groups[0].start, 0u);
  EXPECT_EQ(fixed->groups[0].act, "ACT[file/save]");
  EXPECT_EQ(fixed->groups[1].env, "ENV[web/Chrome]");
  EXPECT_EQ(fixed->groups[1].title, "Browse");
  EXPECT_EQ(repair_response(*fixed, 5), fixed);
}

TEST(RepairResponse, UnrepairableReturnsNullopt) {
  LabelerResponse r;
  r.groups.push_back({0, "ENV[app/Word]", "ACT[file/save]", "", "", {}});
  EXPECT_FALSE(repair_response(r, 2));
  EXPECT_FALSE(repair_response(LabelerResponse{}, 2));
}

TEST(SegmentAndLabel, InvalidOutputRetriedThenFallsBack) {
  LabelerResponse bad;
  bad.groups.push_back({0, "nonsense", "", "", "", {}});
  ScriptedLabeler labeler({bad, bad});
  const auto out = segment_and_label(request({block(HighLevelAction::save)}, {window("Word")}), labeler);
  EXPECT_EQ(labeler.calls, 2);
  EXPECT_TRUE(out.used_fallback);
  ASSERT_EQ(out.groups.size(), 1u);
  EXPECT_EQ(out.groups[0].act, "ACT[file/save]");
}

TEST(SegmentAndLabel, SecondAttemptSucceeds) {
  LabelerResponse bad;
  bad.groups.push_back({0, "nonsense", "", "", "", {}});
  LabelerResponse good;
  good.groups.push_back({0, "ENV[app/Word]", "ACT[file/save]", "Save report", "Save the report.", {{0, "Save it"}}});
  ScriptedLabeler labeler({bad, good});
  const auto out = segment_and_label(request({block(HighLevelAction::save)}, {window("Word")}), labeler);
  EXPECT_FALSE(out.used_fallback);
  ASSERT_EQ(out.groups.size(), 1u);
  EXPECT_EQ(out.groups[0].title, "Save report");
  EXPECT_EQ(out.groups[0].tasks[0].summary, "Save it");
}

TEST(SegmentAndLabel, UnavailableLabelerPropagates) {
  UnavailableLabeler labeler;
  try {
    segment_and_label(request({block(HighLevelAction::save)}, {window("Word")}), labeler);
    FAIL() << "expected labeler_unavailable";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::labeler_unavailable);
  }
}

TEST(SegmentAndLabel, RejectsEmptyAndMisaligned) {
  RuleBasedLabeler labeler;
  EXPECT_THROW(segment_and_label(request({}, {}), labeler), Error);
  EXPECT_THROW(segment_and_label(request({block(HighLevelAction::save)}, {}), labeler), Error);
}

TEST(GroupId, StableAndContentSensitive) {
  RuleBasedLabeler labeler;
  const auto a = segment_and_label({block(HighLevelAction::save)}, {window("Word")}, labeler);
  const auto b = segment_and_label({block(HighLevelAction::save)}, {window("Word")}, labeler, "other");
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].id, b[0].id);
  EXPECT_EQ(a[0].id, group_id(a[0]));
  EXPECT_EQ(a[0].id.rfind("g-", 0), 0u);
  TaskGroup changed = a[0];
  changed.title += "!";
  EXPECT_NE(group_id(changed), a[0].id);
}

TEST(TaskGroup, JsonRoundTrip) {
  RuleBasedLabeler labeler;
  const auto g = segment_and_label({block(HighLevelAction::rename, {"a.txt", "b"}, "Notepad")},
                                   {window("Notepad")}, labeler)[0];
  nlohmann::json j = g;
  EXPECT_EQ(j.get<TaskGroup>(), g);
}

TEST(MaskedGroups, LoginTextNeverStored) {
  TaskBlock login = block(HighLevelAction::login, {"Login", "ID", "alice", "Password", "s3cret"}, "Chrome");
  login.user_assist = true;
  RuleBasedLabeler labeler;
  const auto g = segment_and_label({login}, {window("Chrome", "Portal", EnvClass::Web)}, labeler);
  const std::string dumped = nlohmann::json(g[0]).dump();
  EXPECT_EQ(dumped.find("s3cret"), std::string::npos);
  EXPECT_EQ(dumped.find("alice"), std::string::npos);
}

TEST(MineFiles, FixtureLogs) {
  RuleBasedLabeler labeler;
  const auto mined = mine_files({suites("logs/basic")}, labeler);
  EXPECT_EQ(mined.stats.files, 1u);
  EXPECT_EQ(mined.stats.malformed, 0u);
  EXPECT_EQ(mined.groups.size(), 4u);
  EXPECT_EQ(mined.stats.groups, mined.groups.size());
  for (const auto& g : mined.groups) EXPECT_TRUE(validate_group(g).empty()) << g.id;
}

TEST(MineFiles, GarbledFixtureCountsMalformed) {
  RuleBasedLabeler labeler;
  const auto mined = mine_files({test_data("data/twelve.jsonl")}, labeler);
  EXPECT_EQ(mined.stats.events, 11u);
  EXPECT_EQ(mined.stats.malformed, 1u);
  EXPECT_GE(mined.groups.size(), 1u);
}
