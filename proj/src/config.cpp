#include "log2plan/config.hpp"

#include <cstdlib>
#include <fstream>

#include "log2plan/error.hpp"

namespace log2plan {

namespace {

void flatten(const nlohmann::json& j, const std::string& prefix, Config& cfg) {
  for (const auto& [k, v] : j.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object()) {
      flatten(v, key, cfg);
    } else {
      set_config_value(cfg, key, v);
    }
  }
}

void check_choice(const std::string& key, const std::string& v, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (v == a) return;
  }
  throw Error(ErrorCode::schema, "config " + key + ": unsupported value '" + v + "'");
}

}  // namespace

std::optional<std::string> process_env(const char* name) {
  const char* v = std::getenv(name);
  if (!v) return std::nullopt;
  return std::string(v);
}

void set_config_value(Config& cfg, const std::string& key, const nlohmann::json& v) {
  try {
    if (key == "labeler") {
      cfg.labeler = v.get<std::string>();
      check_choice(key, cfg.labeler, {"deterministic", "external", "recorded"});
    } else if (key == "planner") {
      cfg.planner = v.get<std::string>();
      check_choice(key, cfg.planner, {"deterministic", "external"});
    } else if (key == "embedder") {
      cfg.embedder = v.get<std::string>();
      check_choice(key, cfg.embedder, {"deterministic", "external"});
    } else if (key == "provider.url") {
      cfg.provider_url = v.get<std::string>();
    } else if (key == "provider.key") {
      cfg.provider_key = v.get<std::string>();
    } else if (key == "provider.timeout_ms") {
      cfg.provider_timeout_ms = v.get<int>();
    } else if (key == "labels") {
      cfg.labels_path = v.get<std::string>();
    } else if (key == "embedder.dim") {
      cfg.embed_dim = v.get<int>();
      if (cfg.embed_dim <= 0) throw Error(ErrorCode::schema, "config embedder.dim must be positive");
    } else if (key == "sessions.gap_ms") {
      cfg.session_gap_ms = v.get<std::int64_t>();
      if (cfg.session_gap_ms <= 0) throw Error(ErrorCode::schema, "config sessions.gap_ms must be positive");
    } else if (key == "retrieval.k") {
      cfg.selection.k = v.get<std::size_t>();
    } else if (key == "retrieval.per_stage") {
      cfg.selection.per_stage = v.get<std::size_t>();
      if (cfg.selection.per_stage == 0) throw Error(ErrorCode::schema, "config retrieval.per_stage must be positive");
    } else if (key == "retrieval.exclusions_per_selected") {
      cfg.selection.exclusions_per_selected = v.get<std::size_t>();
    } else if (key == "planner.reuse_threshold") {
      cfg.reuse_threshold = v.get<double>();
    } else if (key == "grounder.min_score") {
      cfg.min_score = v.get<double>();
    } else if (key == "executor.max_revisions") {
      cfg.max_revisions = v.get<int>();
    } else if (key == "assist.timeout_ms") {
      cfg.assist_timeout_ms = v.get<int>();
    } else if (key == "eval.jobs") {
      cfg.eval_jobs = v.get<int>();
      if (cfg.eval_jobs < 1) throw Error(ErrorCode::schema, "config eval.jobs must be at least 1");
    } else {
      throw Error(ErrorCode::schema, "unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::schema, "config " + key + ": " + e.what());
  }
}

void apply_config_json(Config& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::schema, "config must be a JSON object");
  flatten(j, "", cfg);
}

void apply_env(Config& cfg, const EnvLookup& env) {
  static constexpr std::pair<const char*, const char*> kVars[] = {
      {"LOG2PLAN_LABELER", "labeler"},
      {"LOG2PLAN_PLANNER", "planner"},
      {"LOG2PLAN_EMBEDDER", "embedder"},
      {"LOG2PLAN_PROVIDER_URL", "provider.url"},
      {"LOG2PLAN_PROVIDER_KEY", "provider.key"},
  };
  for (const auto& [var, key] : kVars) {
    if (auto v = env(var); v && !v->empty()) set_config_value(cfg, key, *v);
  }
}

Config load_config(const std::optional<std::string>& path, const EnvLookup& env) {
  Config cfg;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw Error(ErrorCode::io, "cannot open config " + *path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::schema, *path + ": " + e.what());
    }
    apply_config_json(cfg, j);
  }
  apply_env(cfg, env);
  return cfg;
}

nlohmann::json config_to_json(const Config& c) {
  return {{"labeler", c.labeler},
          {"planner", c.planner},
          {"embedder", c.embedder},
          {"provider.url", c.provider_url},
          {"provider.key", c.provider_key.empty() ? "" : "***"},
          {"provider.timeout_ms", c.provider_timeout_ms},
          {"labels", c.labels_path},
          {"embedder.dim", c.embed_dim},
          {"sessions.gap_ms", c.session_gap_ms},
          {"retrieval.k", c.selection.k},
          {"retrieval.per_stage", c.selection.per_stage},
          {"retrieval.exclusions_per_selected", c.selection.exclusions_per_selected},
          {"planner.reuse_threshold", c.reuse_threshold},
          {"grounder.min_score", c.min_score},
          {"executor.max_revisions", c.max_revisions},
          {"assist.timeout_ms", c.assist_timeout_ms},
          {"eval.jobs", c.eval_jobs}};
}

}  // namespace log2plan
