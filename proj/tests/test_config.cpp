#include "support.hpp"

#include <unistd.h>

#include "log2plan/config.hpp"
#include "log2plan/error.hpp"

using namespace l2t;

namespace {

EnvLookup env_of(std::map<std::string, std::string> vars) {
  return [vars = std::move(vars)](const char* name) -> std::optional<std::string> {
    if (auto it = vars.find(name); it != vars.end()) return it->second;
    return std::nullopt;
  };
}

EnvLookup no_env() { return env_of({}); }

std::string temp_config(const nlohmann::json& j) {
  std::string tmpl = (fs::temp_directory_path() / "log2plan-cfg-XXXXXX").string();
  const int fd = mkstemp(tmpl.data());
  close(fd);
  std::ofstream(tmpl) << j.dump();
  return tmpl;
}

}  // namespace

TEST(Config, Defaults) {
  const auto c = load_config(std::nullopt, no_env());
  EXPECT_EQ(c.labeler, "deterministic");
  EXPECT_EQ(c.session_gap_ms, kDefaultGapMs);
  EXPECT_EQ(c.selection.k, 9u);
  EXPECT_EQ(c.selection.per_stage, 3u);
  EXPECT_DOUBLE_EQ(c.reuse_threshold, 0.8);
  EXPECT_EQ(c.max_revisions, 2);
}

TEST(Config, FileThenEnvThenFlags) {
  const auto path = temp_config({{"planner", "external"}, {"labeler", "recorded"}, {"retrieval", {{"k", 5}}}});
  auto c = load_config(path, env_of({{"LOG2PLAN_PLANNER", "deterministic"}}));
  fs::remove(path);
  EXPECT_EQ(c.labeler, "recorded");
  EXPECT_EQ(c.planner, "deterministic");
  EXPECT_EQ(c.selection.k, 5u);
  set_config_value(c, "labeler", "external");
  EXPECT_EQ(c.labeler, "external");
}

TEST(Config, NestedAndDottedKeysAgree) {
  Config a, b;
  apply_config_json(a, {{"grounder", {{"min_score", 0.5}}}, {"planner", "external"}});
  apply_config_json(b, {{"grounder.min_score", 0.5}, {"planner", "external"}});
  EXPECT_EQ(config_to_json(a), config_to_json(b));
  EXPECT_DOUBLE_EQ(a.min_score, 0.5);
}

TEST(Config, UnknownKeysAndBadValuesThrow) {
  auto expect_schema = [](const nlohmann::json& j) {
    Config c;
    try {
      apply_config_json(c, j);
      FAIL() << j.dump();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::schema) << j.dump();
    }
  };
  expect_schema({{"retreival", {{"k", 3}}}});
  expect_schema({{"retrieval", {{"k", "three"}}}});
  expect_schema({{"sessions", {{"gap_ms", 0}}}});
  expect_schema({{"retrieval", {{"per_stage", 0}}}});
  expect_schema({{"eval", {{"jobs", 0}}}});
  expect_schema(nlohmann::json::array());
  EXPECT_THROW(load_config("/nonexistent/config.json", no_env()), Error);
}

TEST(Config, KeyIsMaskedInDump) {
  Config c;
  apply_env(c, env_of({{"LOG2PLAN_PROVIDER_KEY", "sk-secret"}, {"LOG2PLAN_PROVIDER_URL", "http://x"}}));
  EXPECT_EQ(c.provider_key, "sk-secret");
  const auto dump = config_to_json(c).dump();
  EXPECT_EQ(dump.find("sk-secret"), std::string::npos);
  EXPECT_EQ(config_to_json(c).at("provider.url"), "http://x");
}
