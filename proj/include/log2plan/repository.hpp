#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "log2plan/dictionary.hpp"
#include "log2plan/ingest.hpp"
#include "log2plan/miner.hpp"
#include "log2plan/retrieval.hpp"

namespace log2plan {

inline constexpr int kRepositorySchemaVersion = 1;

struct RepositoryManifest {
  int schema_version = kRepositorySchemaVersion;
  std::size_t groups = 0;
  std::size_t tasks = 0;
  std::size_t blocks = 0;
  bool has_index = false;
};

// <root>/manifest.json, <root>/groups/<group_id>.json, <root>/index.json.
class TaskRepository {
 public:
  // Creates an empty repository when `root` is missing or empty. Throws
  // Error(schema) on a version mismatch or when the manifest disagrees with
  // the directory.
  static TaskRepository open(const std::filesystem::path& root);

  TaskRepository(TaskRepository&& other) noexcept;

  const std::filesystem::path& root() const { return root_; }
  const std::vector<TaskGroup>& groups() const { return groups_; }  // sorted by id
  const TaskGroup* find(const std::string& id) const;
  RepositoryManifest manifest() const;

  struct AddResult {
    std::size_t added = 0;
    std::size_t skipped = 0;  // ids already present
  };
  AddResult add(const std::vector<TaskGroup>& groups);

  std::optional<VectorIndex> load_index() const;
  // Only ids present in the repository may be indexed.
  void save_index(const VectorIndex& index);

 private:
  explicit TaskRepository(std::filesystem::path root) : root_(std::move(root)) {}
  void write_manifest();

  std::filesystem::path root_;
  std::vector<TaskGroup> groups_;
  bool has_index_ = false;
  mutable std::mutex mu_;
};

struct MineOptions {
  std::int64_t gap_ms = kDefaultGapMs;
  const RuleSet* rules = &RuleSet::builtin();
};

struct MineStats {
  std::size_t files = 0;
  std::size_t events = 0;
  std::size_t malformed = 0;
  std::size_t sessions = 0;
  std::size_t partitions = 0;
  std::size_t blocks = 0;
  std::size_t groups = 0;
  std::size_t fallbacks = 0;
  std::size_t repaired = 0;
  std::vector<std::string> notes;
};

nlohmann::json stats_to_json(const MineStats& s);

struct MinedGroups {
  std::vector<TaskGroup> groups;  // first occurrence of each id, in mining order
  MineStats stats;
};

// Sessionizes, splits by environment, matches task blocks and labels them.
// Request sources are "<source>:<session id>:<env key>".
MinedGroups mine_events(const std::string& source, const std::vector<RawEvent>& events, Labeler& labeler,
                        const MineOptions& opts = {});

// `inputs` may name log files or directories (their *.jsonl files, sorted).
// Sources are file names without directories.
MinedGroups mine_files(const std::vector<std::filesystem::path>& inputs, Labeler& labeler,
                       const MineOptions& opts = {});

}  // namespace log2plan
