#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "log2plan/ingest.hpp"
#include "log2plan/retrieval.hpp"

namespace log2plan {

struct Config {
  std::string labeler = "deterministic";  // deterministic | external | recorded
  std::string planner = "deterministic";  // deterministic | external
  std::string embedder = "deterministic"; // deterministic | external
  std::string provider_url;
  std::string provider_key;
  std::string labels_path;  // recorded labeler responses
  int embed_dim = 256;
  std::int64_t session_gap_ms = kDefaultGapMs;
  SelectionConfig selection;
  double reuse_threshold = 0.8;
  double min_score = 0.35;
  int max_revisions = 2;
  int assist_timeout_ms = 120'000;
  int provider_timeout_ms = 10'000;
  int eval_jobs = 1;
};

using EnvLookup = std::function<std::optional<std::string>(const char*)>;

// Reads the process environment.
std::optional<std::string> process_env(const char* name);

// Keys are dotted ("grounder.min_score"); nested objects are flattened, so
// "planner" and "planner.reuse_threshold" can both be set at top level.
// Unknown keys and ill-typed values throw Error(schema).
void apply_config_json(Config& cfg, const nlohmann::json& j);
void set_config_value(Config& cfg, const std::string& key, const nlohmann::json& value);
void apply_env(Config& cfg, const EnvLookup& env);

// Defaults, then the file (if any), then LOG2PLAN_* variables. Flags are the
// caller's last layer.
Config load_config(const std::optional<std::string>& path, const EnvLookup& env = process_env);

nlohmann::json config_to_json(const Config& cfg);

}  // namespace log2plan
