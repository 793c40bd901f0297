#pragma once

#include <map>
#include <memory>
#include <string>

#include <json.hpp>

#include "log2plan/config.hpp"
#include "log2plan/miner.hpp"
#include "log2plan/planner.hpp"
#include "log2plan/retrieval.hpp"

namespace log2plan {

// JSON-over-HTTP client for hosted models. Plain http only; the key is sent
// as a bearer token. Transport failures throw Error(provider_unavailable).
class HttpProvider {
 public:
  HttpProvider(std::string url, std::string key, int timeout_ms = 10'000);
  nlohmann::json post(const std::string& path, const nlohmann::json& body) const;

 private:
  std::string origin_;
  std::string base_;
  std::string key_;
  int timeout_ms_;
};

// POST <url>/label with the request JSON; expects a LabelerResponse.
class ExternalLabeler final : public Labeler {
 public:
  explicit ExternalLabeler(HttpProvider http) : http_(std::move(http)) {}
  LabelerResponse label(const LabelerRequest& request) override;

 private:
  HttpProvider http_;
};

// Replays responses recorded per request source; unknown sources get the
// rule-based labeling.
class RecordedLabeler final : public Labeler {
 public:
  explicit RecordedLabeler(const nlohmann::json& recorded);
  static RecordedLabeler load(const std::string& path);
  LabelerResponse label(const LabelerRequest& request) override;

 private:
  std::map<std::string, nlohmann::json> recorded_;
};

// POST <url>/embed {"text"} -> {"vector": [...]}.
class ExternalEmbedder final : public Embedder {
 public:
  ExternalEmbedder(HttpProvider http, std::size_t dim) : http_(std::move(http)), dim_(dim) {}
  EmbeddingVector embed(std::string_view text) override;

 private:
  HttpProvider http_;
  std::size_t dim_;
};

// POST <url>/plan {"command", "references"} -> {"steps": [...]}.
class ExternalPlanner final : public Planner {
 public:
  explicit ExternalPlanner(HttpProvider http) : http_(std::move(http)) {}
  std::vector<PlanStep> draft(std::string_view command, const PlanContext& ctx) override;

 private:
  HttpProvider http_;
};

// POST <url>/decompose {"command"} -> {"env", "act", "title"}.
class ExternalDecomposer final : public QueryDecomposer {
 public:
  explicit ExternalDecomposer(HttpProvider http) : http_(std::move(http)) {}
  QueryLabels decompose(std::string_view command) override;

 private:
  HttpProvider http_;
};

std::unique_ptr<Labeler> make_labeler(const Config& cfg);
std::unique_ptr<Embedder> make_embedder(const Config& cfg);
std::unique_ptr<Planner> make_planner(const Config& cfg);
// Null for the deterministic planner; keyword decomposition is used then.
std::unique_ptr<QueryDecomposer> make_decomposer(const Config& cfg);

}  // namespace log2plan
