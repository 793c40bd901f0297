#include "log2plan/providers.hpp"

#include <fstream>

#include <httplib.h>

#include "log2plan/error.hpp"

namespace log2plan {

namespace {

HttpProvider http_from(const Config& cfg) {
  if (cfg.provider_url.empty()) {
    throw Error(ErrorCode::provider_unavailable, "external provider selected but LOG2PLAN_PROVIDER_URL is not set");
  }
  return HttpProvider(cfg.provider_url, cfg.provider_key, cfg.provider_timeout_ms);
}

}  // namespace

HttpProvider::HttpProvider(std::string url, std::string key, int timeout_ms)
    : key_(std::move(key)), timeout_ms_(timeout_ms) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos || url.substr(0, scheme) != "http") {
    throw Error(ErrorCode::provider_unavailable, "provider url must start with http:// (got '" + url + "')");
  }
  const auto path = url.find('/', scheme + 3);
  origin_ = path == std::string::npos ? url : url.substr(0, path);
  base_ = path == std::string::npos ? "" : url.substr(path);
  while (!base_.empty() && base_.back() == '/') base_.pop_back();
}

nlohmann::json HttpProvider::post(const std::string& path, const nlohmann::json& body) const {
  httplib::Client client(origin_);
  const auto secs = timeout_ms_ / 1000;
  const auto usecs = (timeout_ms_ % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  httplib::Headers headers;
  if (!key_.empty()) headers.emplace("Authorization", "Bearer " + key_);
  const auto res = client.Post(base_ + path, headers, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::provider_unavailable, origin_ + base_ + path + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::provider_unavailable, origin_ + base_ + path + ": HTTP " + std::to_string(res->status));
  }
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error&) {
    throw Error(ErrorCode::provider_unavailable, origin_ + base_ + path + ": reply is not JSON");
  }
}

LabelerResponse ExternalLabeler::label(const LabelerRequest& request) {
  nlohmann::json reply;
  try {
    reply = http_.post("/label", request_to_json(request));
  } catch (const Error& e) {
    throw Error(ErrorCode::labeler_unavailable, e.what());
  }
  try {
    return response_from_json(reply);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::invalid_labeler_output, e.what());
  }
}

RecordedLabeler::RecordedLabeler(const nlohmann::json& recorded) {
  if (!recorded.is_object()) throw Error(ErrorCode::schema, "recorded labels must map request sources to responses");
  for (const auto& [source, resp] : recorded.items()) recorded_[source] = resp;
}

RecordedLabeler RecordedLabeler::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open recorded labels " + path);
  try {
    return RecordedLabeler(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::schema, path + ": " + e.what());
  }
}

LabelerResponse RecordedLabeler::label(const LabelerRequest& request) {
  const auto it = recorded_.find(request.source);
  if (it == recorded_.end()) return RuleBasedLabeler().label(request);
  try {
    return response_from_json(it->second);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::invalid_labeler_output, request.source + ": " + e.what());
  }
}

EmbeddingVector ExternalEmbedder::embed(std::string_view text) {
  const auto reply = http_.post("/embed", {{"text", std::string(text)}});
  EmbeddingVector v;
  try {
    v.values = reply.at("vector").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::provider_unavailable, std::string("embed reply: ") + e.what());
  }
  if (v.dim() != dim_) {
    throw Error(ErrorCode::provider_unavailable,
                "embed reply has dimension " + std::to_string(v.dim()) + ", expected " + std::to_string(dim_));
  }
  return v;
}

std::vector<PlanStep> ExternalPlanner::draft(std::string_view command, const PlanContext& ctx) {
  nlohmann::json refs = nlohmann::json::array();
  for (const auto& g : ctx.groups) refs.push_back(g);
  nlohmann::json reply;
  try {
    reply = http_.post("/plan", {{"command", std::string(command)}, {"references", refs}});
  } catch (const Error& e) {
    throw Error(ErrorCode::backend_unavailable, e.what());
  }
  try {
    return reply.at("steps").get<std::vector<PlanStep>>();
  } catch (const std::exception&) {
    // A malformed draft counts as empty; the planner retries once.
    return {};
  }
}

QueryLabels ExternalDecomposer::decompose(std::string_view command) {
  const auto reply = http_.post("/decompose", {{"command", std::string(command)}});
  try {
    return {reply.at("env").get<std::string>(), reply.at("act").get<std::string>(), reply.at("title").get<std::string>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::provider_unavailable, std::string("decompose reply: ") + e.what());
  }
}

std::unique_ptr<Labeler> make_labeler(const Config& cfg) {
  if (cfg.labeler == "external") return std::make_unique<ExternalLabeler>(http_from(cfg));
  if (cfg.labeler == "recorded") {
    if (cfg.labels_path.empty()) throw Error(ErrorCode::labeler_unavailable, "recorded labeler needs a labels file");
    return std::make_unique<RecordedLabeler>(RecordedLabeler::load(cfg.labels_path));
  }
  return std::make_unique<RuleBasedLabeler>();
}

std::unique_ptr<Embedder> make_embedder(const Config& cfg) {
  if (cfg.embedder == "external") {
    return std::make_unique<ExternalEmbedder>(http_from(cfg), static_cast<std::size_t>(cfg.embed_dim));
  }
  return std::make_unique<HashingEmbedder>(static_cast<std::size_t>(cfg.embed_dim));
}

std::unique_ptr<Planner> make_planner(const Config& cfg) {
  if (cfg.planner == "external") return std::make_unique<ExternalPlanner>(http_from(cfg));
  return std::make_unique<DeterministicPlanner>();
}

std::unique_ptr<QueryDecomposer> make_decomposer(const Config& cfg) {
  if (cfg.planner == "external" && !cfg.provider_url.empty()) return std::make_unique<ExternalDecomposer>(http_from(cfg));
  return nullptr;
}

}  // namespace log2plan
