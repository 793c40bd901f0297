#include "support.hpp"

#include "log2plan/error.hpp"

using namespace l2t;

namespace {

constexpr std::int64_t kMin = 60'000;

std::vector<RawEvent> at_times(const std::vector<std::int64_t>& ts) {
  std::vector<RawEvent> out;
  for (auto t : ts) out.push_back(press(t, "ctrl+s", window("Word", "", EnvClass::App)));
  return out;
}

}  // namespace

TEST(ParseLog, EmptyStream) {
  const auto r = parse_log("");
  EXPECT_TRUE(r.events.empty());
  EXPECT_TRUE(r.malformed.empty());
}

TEST(ParseLog, SingleRecord) {
  const auto r = parse_log(R"({"ts":0,"kind":"key-press","keys":"ctrl+s","window":{"app":"Word"}})");
  ASSERT_EQ(r.events.size(), 1u);
  EXPECT_EQ(r.events[0].keys, "ctrl+s");
  EXPECT_EQ(r.events[0].window.app, "Word");
  EXPECT_EQ(r.events[0].kind, EventKind::key_press);
}

TEST(ParseLog, FixtureWithGarbledLine) {
  const std::string bytes = read_text(test_data("data/twelve.jsonl"));
  std::size_t lines = 0, parseable = 0;
  std::istringstream in(bytes);
  for (std::string line; std::getline(in, line);) {
    ++lines;
    if (nlohmann::json::accept(line)) ++parseable;
  }
  ASSERT_EQ(lines, 12u);

  const auto r = parse_log(bytes);
  EXPECT_EQ(r.events.size(), parseable);
  EXPECT_EQ(r.events.size(), 11u);
  ASSERT_EQ(r.malformed.size(), 1u);
  EXPECT_EQ(r.malformed[0].line, 7u);
}

TEST(ParseLog, StrictModeThrows) {
  const std::string bytes = read_text(test_data("data/twelve.jsonl"));
  try {
    parse_log(bytes, {.strict = true});
    FAIL() << "expected malformed_record";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::malformed_record);
    EXPECT_NE(std::string(e.what()).find("line 7"), std::string::npos);
  }
}

TEST(ParseLog, DecreasingTimestampIsFatal) {
  const std::string bytes =
      R"({"ts":5,"kind":"key-press","keys":"a","window":{"app":"Word"}})"
      "\n"
      R"({"ts":4,"kind":"key-press","keys":"b","window":{"app":"Word"}})";
  try {
    parse_log(bytes);
    FAIL() << "expected non_monotone_timestamp";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::non_monotone_timestamp);
  }
}

TEST(ParseLog, EqualTimestampsAllowed) {
  const std::string bytes =
      R"({"ts":5,"kind":"key-press","keys":"a","window":{"app":"Word"}})"
      "\n"
      R"({"ts":5,"kind":"key-press","keys":"b","window":{"app":"Word"}})";
  EXPECT_EQ(parse_log(bytes).events.size(), 2u);
}

TEST(ParseLog, PerKindFieldRules) {
  const std::vector<std::string> bad{
      R"({"ts":1,"kind":"mouse-click","window":{"app":"Word"}})",
      R"({"ts":1,"kind":"key-type","window":{"app":"Word"}})",
      R"({"ts":1,"kind":"key-press","window":{"app":"Word"}})",
      R"({"ts":1,"kind":"mouse-click","target":{"name":"a","control_type":"Button","position":[-1,0]},"window":{"app":"Word"}})",
      R"({"ts":1,"kind":"mouse-click","target":{"name":"","control_type":""},"window":{"app":"Word"}})",
      R"({"ts":1,"kind":"key-press","keys":"a","window":{"app":""}})",
      R"({"ts":1,"kind":"teleport","window":{"app":"Word"}})",
      R"({"ts":"1","kind":"key-press","keys":"a","window":{"app":"Word"}})",
      R"([1,2,3])",
  };
  for (const auto& line : bad) {
    const auto r = parse_log(line);
    EXPECT_TRUE(r.events.empty()) << line;
    EXPECT_EQ(r.malformed.size(), 1u) << line;
  }
}

TEST(ParseLog, SerializeRoundTrip) {
  const auto first = parse_log(read_text(test_data("data/twelve.jsonl")));
  const std::string bytes = serialize_log(first.events);
  const auto second = parse_log(bytes);
  EXPECT_TRUE(second.malformed.empty());
  EXPECT_EQ(second.events, first.events);
  EXPECT_EQ(serialize_log(second.events), bytes);
}

TEST(Sessionize, GapsSplitAtOneHour) {
  const auto s = sessionize(at_times({0, 10 * kMin, 130 * kMin, 135 * kMin}));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].events.size(), 2u);
  EXPECT_EQ(s[1].events.size(), 2u);
  EXPECT_EQ(s[0].id, "s0");
  EXPECT_EQ(s[1].id, "s1");
}

TEST(Sessionize, SmallGapsStayTogether) {
  const auto s = sessionize(at_times({0, 59 * kMin, 118 * kMin, 177 * kMin}));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].events.size(), 4u);
}

TEST(Sessionize, GapEqualToThresholdSplits) {
  EXPECT_EQ(sessionize(at_times({0, kDefaultGapMs})).size(), 2u);
  EXPECT_EQ(sessionize(at_times({0, kDefaultGapMs - 1})).size(), 1u);
}

TEST(Sessionize, EmptyAndInvalidGap) {
  EXPECT_TRUE(sessionize({}).empty());
  EXPECT_THROW(sessionize(at_times({0}), 0), Error);
}

TEST(Sessionize, EnvPartitions) {
  std::vector<RawEvent> ev{
      press(1, "a", window("Word", "", EnvClass::App)),
      press(2, "b", window("Chrome", "", EnvClass::Web)),
      press(3, "c", window("Word", "", EnvClass::App)),
  };
  const auto s = sessionize(ev);
  ASSERT_EQ(s.size(), 1u);
  ASSERT_EQ(s[0].env_partitions.size(), 2u);
  EXPECT_EQ(s[0].env_partitions.at("app/Word").size(), 2u);
  EXPECT_EQ(s[0].env_partitions.at("web/Chrome").size(), 1u);
  EXPECT_EQ(s[0].env_partitions.at("app/Word")[1].keys, "c");
}

TEST(EnvKey, LowercasesEnvClass) {
  EXPECT_EQ(env_key(window("FileExplorer")), "local/FileExplorer");
}
