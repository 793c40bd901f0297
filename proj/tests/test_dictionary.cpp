#include "support.hpp"

#include <set>

#include "log2plan/error.hpp"

using namespace l2t;

namespace {

const WindowContext kExplorer = window("File Explorer", "Documents - File Explorer");

std::vector<std::string> verbs(const std::vector<LowLevelStep>& steps) {
  std::vector<std::string> out;
  for (const auto& s : steps) out.push_back(std::string(to_string(s.verb)) + " " + s.value);
  return out;
}

// Key ranking one tiling piece: longer first, then priority, then earlier table row.
using PieceKey = std::tuple<std::size_t, int, long>;

struct Tiling {
  std::vector<PieceKey> keys;
  std::vector<TaskBlock> blocks;
};

// Enumerates every tiling of events[at..] into rule matches (or a single-event
// fallback where nothing matches) and keeps the one whose piece keys are
// lexicographically greatest from the left.
Tiling best_tiling(const std::vector<RawEvent>& ev, std::size_t at, const RuleSet& rules) {
  if (at == ev.size()) return {};
  std::optional<Tiling> best;
  bool any = false;
  const auto rs = rules.rules();
  for (std::size_t r = 0; r < rs.size(); ++r) {
    auto m = match_rule_at(rs[r], ev, at);
    if (!m) continue;
    any = true;
    Tiling rest = best_tiling(ev, at + m->length, rules);
    TaskBlock b;
    b.action = rs[r].action;
    b.variant = rules.variant_index(rs[r]);
    b.app = ev[at].window.app;
    for (const auto& s : rs[r].slots()) b.objects.push_back(m->bindings[s.name]);
    b.user_assist = rs[r].action == HighLevelAction::login;
    Tiling t;
    t.keys.push_back({m->length, rs[r].priority, -static_cast<long>(r)});
    t.keys.insert(t.keys.end(), rest.keys.begin(), rest.keys.end());
    t.blocks.push_back(b);
    t.blocks.insert(t.blocks.end(), rest.blocks.begin(), rest.blocks.end());
    if (!best || t.keys > best->keys) best = std::move(t);
  }
  if (!any) {
    Tiling rest = best_tiling(ev, at + 1, rules);
    Tiling t;
    t.keys.push_back({1, -1, 0});
    t.keys.insert(t.keys.end(), rest.keys.begin(), rest.keys.end());
    t.blocks.push_back(fallback_block(ev[at]));
    t.blocks.insert(t.blocks.end(), rest.blocks.begin(), rest.blocks.end());
    return t;
  }
  return *best;
}

// Random stream over a small alphabet so that many rules overlap.
std::vector<RawEvent> random_stream(std::mt19937_64& rng, std::size_t n) {
  std::vector<RawEvent> out;
  const std::vector<std::string> items{"notes.txt", "report.docx", "paper"};
  const std::vector<std::string> keys{"ctrl+c", "ctrl+v", "ctrl+s", "f2", "enter", "tab", "down", "ctrl+l", "alt"};
  std::int64_t ts = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ts += 250;
    switch (rng() % 7) {
      case 0:
      case 1: out.push_back(click(ts, items[rng() % items.size()], rng() % 4 ? "ListItem" : "Edit", kExplorer)); break;
      case 2:
      case 3: out.push_back(press(ts, keys[rng() % keys.size()], kExplorer)); break;
      case 4: out.push_back(type_text(ts, rng() % 2 ? "example.com" : "Transformer", kExplorer)); break;
      case 5: out.push_back(click(ts, items[rng() % items.size()], "ListItem", kExplorer, EventKind::mouse_double_click)); break;
      default: out.push_back(event(ts, EventKind::window_open, kExplorer)); break;
    }
  }
  return out;
}

}  // namespace

TEST(Dictionary, AllActionsAndVariants) {
  const auto& rules = RuleSet::builtin();
  EXPECT_EQ(all_actions().size(), 19u);
  EXPECT_EQ(rules.rules().size(), 31u);
  const std::map<std::string, std::size_t> expected{
      {"Text Input", 2}, {"Click", 1}, {"Doubleclick", 1}, {"Rightclick", 1}, {"Drag", 1},
      {"Scroll", 2},     {"Press", 1}, {"Open", 3},        {"Close", 2},      {"Switch Focus", 4},
      {"Go To", 4},      {"Save", 1},  {"Copy", 1},        {"Paste", 1},      {"Delete", 1},
      {"Rename", 1},     {"Login", 2}, {"Repeat", 1},      {"Wait", 1},
  };
  for (auto a : all_actions()) {
    EXPECT_EQ(rules.variants(a).size(), expected.at(std::string(to_string(a)))) << to_string(a);
  }
}

TEST(Dictionary, ActionNames) {
  for (auto a : all_actions()) EXPECT_EQ(parse_action(to_string(a)), a);
  EXPECT_EQ(parse_action("go to (navigation)"), HighLevelAction::go_to);
  EXPECT_EQ(parse_action("Frobnicate"), std::nullopt);
}

TEST(MatchStream, SaveChord) {
  const auto b = match_stream(std::vector{press(1, "ctrl+s", window("Word"))});
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].action, HighLevelAction::save);
  EXPECT_TRUE(b[0].objects.empty());
}

TEST(MatchStream, Rename) {
  const std::vector<RawEvent> ev{
      click(1, "1. Attention is all you need!", "ListItem", kExplorer),
      press(2, "f2", kExplorer),
      type_text(3, "Transformer", kExplorer),
      press(4, "enter", kExplorer),
  };
  const auto b = match_stream(ev);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].action, HighLevelAction::rename);
  EXPECT_EQ(b[0].objects, (std::vector<std::string>{"1. Attention is all you need!", "Transformer"}));
  EXPECT_EQ(b[0].app, "File Explorer");
  EXPECT_FALSE(b[0].user_assist);
}

TEST(MatchStream, EmptyStream) { EXPECT_TRUE(match_stream(std::vector<RawEvent>{}).empty()); }

TEST(MatchStream, UnmatchedEventsBecomeFallbackBlocks) {
  const auto b = match_stream(std::vector{event(1, EventKind::scroll, kExplorer)});
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].action, HighLevelAction::scroll);
  EXPECT_EQ(b[0].objects, std::vector<std::string>{"File Explorer"});
}

TEST(MatchStream, PasswordTypingIsUserAssist) {
  const std::vector<RawEvent> ev{
      click(1, "Password", "Edit", kExplorer),
      type_text(2, "hunter2", kExplorer),
      press(3, "enter", kExplorer),
  };
  const auto b = match_stream(ev);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].action, HighLevelAction::text_input);
  EXPECT_TRUE(b[0].user_assist);
}

TEST(MatchStream, ThirtyEventStreamsMatchExhaustiveTilingOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const auto ev = random_stream(rng, 30);
    const auto oracle = best_tiling(ev, 0, RuleSet::builtin());
    EXPECT_EQ(match_stream(ev), oracle.blocks) << "trial " << trial;
  }
}

TEST(MatchSpans, PartitionTheStream) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ev = random_stream(rng, 40);
    const auto spans = match_spans(ev, RuleSet::builtin());
    std::size_t next = 0;
    for (const auto& s : spans) {
      EXPECT_EQ(s.first, next);
      EXPECT_GT(s.count, 0u);
      next += s.count;
    }
    EXPECT_EQ(next, ev.size());
  }
}

TEST(Expand, Save) {
  const auto s = expand(HighLevelAction::save, {});
  EXPECT_EQ(verbs(s), std::vector<std::string>{"press ctrl+s"});
}

TEST(Expand, Rename) {
  const auto s = expand(HighLevelAction::rename,
                        {{"object", "1. Attention is all you need! (ListItem)"}, {"name", "Transformer"}});
  EXPECT_EQ(verbs(s), (std::vector<std::string>{"click 1. Attention is all you need! (ListItem)", "press f2",
                                                "type Transformer", "press enter"}));
}

TEST(Expand, MissingBinding) {
  try {
    expand(HighLevelAction::rename, {});
    FAIL() << "expected missing_binding";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::missing_binding);
    EXPECT_NE(std::string(e.what()).find("object"), std::string::npos);
  }
}

TEST(Expand, UnknownVariant) {
  try {
    expand(HighLevelAction::save, {}, 3);
    FAIL() << "expected unknown_variant";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unknown_variant);
  }
}

TEST(Expand, FallbacksFillOptionalSlots) {
  const auto s = expand(HighLevelAction::close, {}, 0);
  EXPECT_EQ(verbs(s), (std::vector<std::string>{"focus title bar", "doubleclick Close"}));
}

TEST(Expand, RepeatableSlotSplitsOnWhitespace) {
  const auto s = expand(HighLevelAction::go_to, {{"arrows", "down down right"}}, 3);
  EXPECT_EQ(verbs(s), (std::vector<std::string>{"press alt", "press down", "press down", "press right",
                                                "press enter"}));
}

TEST(BindObjects, PositionalAndRequiredOnly) {
  const auto* login = RuleSet::builtin().variant(HighLevelAction::login, 0);
  ASSERT_NE(login, nullptr);
  const auto full = bind_objects(*login, {"Sign in", "User", "alice", "Pass", "pw"});
  ASSERT_TRUE(full);
  EXPECT_EQ(full->at("login_button"), "Sign in");
  const auto req = bind_objects(*login, {"alice", "pw"});
  ASSERT_TRUE(req);
  EXPECT_EQ(req->at("user_id"), "alice");
  EXPECT_EQ(req->at("password"), "pw");
  EXPECT_FALSE(bind_objects(*login, {"alice"}));
}

TEST(Expand, RoundTripsThroughMatcherForEveryRule) {
  std::mt19937_64 rng(5);
  const auto& rules = RuleSet::builtin();
  for (const auto& r : rules.rules()) {
    const auto x = random_expansion(r, rng);
    if (!prefix_ambiguity(r, x.bindings, rules).empty()) continue;
    const auto blocks = match_stream(synthesize(r, x.steps, kExplorer));
    ASSERT_EQ(blocks.size(), 1u) << to_string(r.action) << " v" << rules.variant_index(r);
    EXPECT_EQ(blocks[0].action, r.action);
    EXPECT_EQ(blocks[0].variant, rules.variant_index(r));
    EXPECT_EQ(blocks[0].objects, x.objects);
  }
}

TEST(RuleSet, JsonRoundTrip) {
  const auto& rules = RuleSet::builtin();
  const auto copy = RuleSet::from_json(rules.to_json());
  ASSERT_EQ(copy.rules().size(), rules.rules().size());
  for (std::size_t i = 0; i < rules.rules().size(); ++i) EXPECT_EQ(copy.rules()[i], rules.rules()[i]) << i;
  EXPECT_EQ(copy.to_json(), rules.to_json());
}

TEST(RuleSet, LoadRejectsBadTables) {
  EXPECT_THROW(RuleSet::from_json(nlohmann::json::parse(R"({"rules":[{"action":"Frobnicate","steps":[]}]})")),
               Error);
  EXPECT_THROW(RuleSet::from_json(
                   nlohmann::json::parse(R"({"rules":[{"action":"Save","steps":[{"verb":"teleport"}]}]})")),
               Error);
}

TEST(Chords, Normalization) {
  EXPECT_EQ(normalize_chord("Ctrl + S"), "ctrl+s");
  EXPECT_TRUE(is_arrow_key("Down"));
  EXPECT_FALSE(is_arrow_key("enter"));
  EXPECT_TRUE(looks_like_url("news.example.com/world"));
  EXPECT_TRUE(looks_like_url("https://a.org"));
  EXPECT_FALSE(looks_like_url("Transformer"));
}

TEST(MaskSensitive, LoginTextBecomesPlaceholders) {
  TaskBlock b;
  b.action = HighLevelAction::login;
  b.variant = 0;
  b.user_assist = true;
  b.objects = {"Login", "User ID", "alice", "Password", "s3cret"};
  const auto m = mask_sensitive(b);
  EXPECT_EQ(m.objects, (std::vector<std::string>{"Login", "User ID", "<user_id>", "Password", "<password>"}));
  b.user_assist = false;
  EXPECT_EQ(mask_sensitive(b), b);
}

TEST(TaskBlock, JsonRoundTrip) {
  TaskBlock b{HighLevelAction::rename, {"notes.txt", "meeting-notes"}, false, 0, "File Explorer"};
  nlohmann::json j = b;
  EXPECT_EQ(j.get<TaskBlock>(), b);
}
