#pragma once

#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "log2plan/miner.hpp"

namespace log2plan {

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
  double norm() const;

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

// Cosine similarity; a zero vector on either side scores -infinity so it sorts last.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual EmbeddingVector embed(std::string_view text) = 0;
};

// Lowercase alphanumeric tokens feature-hashed into `dim` buckets, L2-normalized.
class HashingEmbedder final : public Embedder {
 public:
  static constexpr std::size_t kDefaultDim = 256;

  explicit HashingEmbedder(std::size_t dim = kDefaultDim) : dim_(dim) {}
  EmbeddingVector embed(std::string_view text) override;

 private:
  std::size_t dim_;
};

// Rejects blank text before delegating to the provider.
EmbeddingVector embed(std::string_view text, Embedder& provider);

struct IndexEntry {
  std::string group_id;
  std::string text;
  EmbeddingVector vector;
};

// Concatenated ENV/ACT/Title/Description string that is embedded per group.
std::string group_text(const TaskGroup& g);

class VectorIndex {
 public:
  VectorIndex() = default;
  VectorIndex(std::size_t dim, std::vector<IndexEntry> entries);

  static VectorIndex build(std::span<const TaskGroup> groups, Embedder& embedder);
  static VectorIndex from_json(const nlohmann::json& j);
  static VectorIndex load(const std::string& path);
  nlohmann::json to_json() const;
  void save(const std::string& path) const;

  std::size_t dim() const { return dim_; }
  std::span<const IndexEntry> entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::size_t dim_ = 0;
  std::vector<IndexEntry> entries_;
};

// Readers take a snapshot; rebuilds publish a whole new index.
class IndexHandle {
 public:
  std::shared_ptr<const VectorIndex> get() const;
  void publish(VectorIndex index);

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const VectorIndex> current_ = std::make_shared<VectorIndex>();
};

struct SelectionConfig {
  std::size_t k = 9;
  std::size_t per_stage = 3;
  std::size_t exclusions_per_selected = 1;
};

struct ScoredGroup {
  std::string group_id;
  double score = 0.0;

  friend bool operator==(const ScoredGroup&, const ScoredGroup&) = default;
};

// Stage 1 takes the top `per_stage` by cosine. Before each later stage every
// group picked in the previous stage removes its most similar remaining
// candidate from the pool, unless that would leave too few candidates to
// reach k. Output is ordered by stage, then score; ties by group id.
std::vector<ScoredGroup> staged_diverse_select(const EmbeddingVector& query,
                                               std::span<const IndexEntry> index,
                                               const SelectionConfig& cfg = {});

struct TaskMatch {
  std::string group_id;
  int task = 0;  // IndividualTask index
  double score = 0.0;

  friend bool operator==(const TaskMatch&, const TaskMatch&) = default;
};

using TaskMatches = std::map<int, std::vector<TaskMatch>>;

struct RetrievalResult {
  std::vector<ScoredGroup> groups;
  TaskMatches task_matches;
};

nlohmann::json retrieval_to_json(const RetrievalResult& r);
RetrievalResult retrieval_from_json(const nlohmann::json& j);

// Top-`k` individual tasks per step text, scored by summary cosine.
TaskMatches match_tasks(std::span<const std::string> step_texts, std::span<const TaskGroup> groups,
                        Embedder& embedder, std::size_t k = 2);

struct QueryLabels {
  std::string env;
  std::string act;
  std::string title;

  std::string rendering() const { return env + " " + act + " " + title; }
};

class QueryDecomposer {
 public:
  virtual ~QueryDecomposer() = default;
  virtual QueryLabels decompose(std::string_view command) = 0;
};

// Keyword rules: verb -> ACT, app mention -> ENV, the command itself -> Title.
QueryLabels keyword_decompose(std::string_view command);

// Uses `provider` when given; falls back to keyword rules if it is unavailable.
QueryLabels decompose_query(std::string_view command, QueryDecomposer* provider = nullptr);

}  // namespace log2plan
