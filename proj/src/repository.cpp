#include "log2plan/repository.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "log2plan/error.hpp"

namespace fs = std::filesystem;

namespace log2plan {

namespace {

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorCode::io, "cannot open " + p.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::schema, p.string() + ": " + e.what());
  }
}

// Write-then-rename so readers never see a torn file.
void write_atomic(const fs::path& p, const std::string& content) {
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error(ErrorCode::io, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, p, ec);
  if (ec) throw Error(ErrorCode::io, "cannot replace " + p.string() + ": " + ec.message());
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TaskRepository::TaskRepository(TaskRepository&& other) noexcept
    : root_(std::move(other.root_)), groups_(std::move(other.groups_)), has_index_(other.has_index_) {}

TaskRepository TaskRepository::open(const fs::path& root) {
  TaskRepository repo(root);
  const fs::path manifest = root / "manifest.json";
  std::error_code ec;
  if (!fs::exists(manifest)) {
    if (fs::exists(root) && !fs::is_empty(root, ec)) {
      throw Error(ErrorCode::schema, root.string() + " is not empty and has no manifest.json");
    }
    fs::create_directories(root / "groups", ec);
    if (ec) throw Error(ErrorCode::io, "cannot create " + root.string() + ": " + ec.message());
    repo.write_manifest();
    return repo;
  }

  const auto m = read_json(manifest);
  const int version = m.value("schema_version", -1);
  if (version != kRepositorySchemaVersion) {
    throw Error(ErrorCode::schema, "repository schema version " + std::to_string(version) + " (expected " +
                                       std::to_string(kRepositorySchemaVersion) + ")");
  }
  if (fs::exists(root / "groups")) {
    for (const auto& entry : fs::directory_iterator(root / "groups")) {
      if (entry.path().extension() != ".json") continue;
      TaskGroup g;
      try {
        g = read_json(entry.path()).get<TaskGroup>();
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::schema, entry.path().string() + ": " + e.what());
      }
      if (entry.path().stem().string() != g.id || group_id(g) != g.id) {
        throw Error(ErrorCode::schema, entry.path().string() + ": id does not match content");
      }
      repo.groups_.push_back(std::move(g));
    }
  }
  std::sort(repo.groups_.begin(), repo.groups_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  repo.has_index_ = fs::exists(root / "index.json");

  const auto actual = repo.manifest();
  if (m.value("groups", std::size_t{0}) != actual.groups || m.value("tasks", std::size_t{0}) != actual.tasks ||
      m.value("blocks", std::size_t{0}) != actual.blocks) {
    throw Error(ErrorCode::schema, "manifest counts disagree with " + (root / "groups").string());
  }
  return repo;
}

const TaskGroup* TaskRepository::find(const std::string& id) const {
  const auto it = std::lower_bound(groups_.begin(), groups_.end(), id,
                                   [](const TaskGroup& g, const std::string& v) { return g.id < v; });
  return it != groups_.end() && it->id == id ? &*it : nullptr;
}

RepositoryManifest TaskRepository::manifest() const {
  RepositoryManifest m;
  m.groups = groups_.size();
  for (const auto& g : groups_) {
    m.tasks += g.tasks.size();
    for (const auto& t : g.tasks) m.blocks += t.blocks.size();
  }
  m.has_index = has_index_;
  return m;
}

void TaskRepository::write_manifest() {
  const auto m = manifest();
  const nlohmann::json j{{"schema_version", m.schema_version},
                         {"groups", m.groups},
                         {"tasks", m.tasks},
                         {"blocks", m.blocks},
                         {"index", m.has_index ? "index.json" : ""}};
  write_atomic(root_ / "manifest.json", j.dump(2) + "\n");
}

TaskRepository::AddResult TaskRepository::add(const std::vector<TaskGroup>& groups) {
  std::lock_guard lock(mu_);
  AddResult r;
  for (const auto& g : groups) {
    if (auto problems = validate_group(g); !problems.empty()) {
      throw Error(ErrorCode::schema, "group " + g.id + ": " + problems.front());
    }
    if (find(g.id)) {
      ++r.skipped;
      continue;
    }
    write_atomic(root_ / "groups" / (g.id + ".json"), nlohmann::json(g).dump(2) + "\n");
    const auto pos = std::lower_bound(groups_.begin(), groups_.end(), g.id,
                                      [](const TaskGroup& x, const std::string& v) { return x.id < v; });
    groups_.insert(pos, g);
    ++r.added;
  }
  if (r.added) write_manifest();
  return r;
}

std::optional<VectorIndex> TaskRepository::load_index() const {
  const fs::path p = root_ / "index.json";
  if (!fs::exists(p)) return std::nullopt;
  return VectorIndex::load(p.string());
}

void TaskRepository::save_index(const VectorIndex& index) {
  std::lock_guard lock(mu_);
  for (const auto& e : index.entries()) {
    if (!find(e.group_id)) throw Error(ErrorCode::invalid_argument, "index references unknown group " + e.group_id);
  }
  write_atomic(root_ / "index.json", index.to_json().dump() + "\n");
  has_index_ = true;
  write_manifest();
}

nlohmann::json stats_to_json(const MineStats& s) {
  return {{"files", s.files},       {"events", s.events},     {"malformed", s.malformed},
          {"sessions", s.sessions}, {"partitions", s.partitions}, {"blocks", s.blocks},
          {"groups", s.groups},     {"fallbacks", s.fallbacks}, {"repaired", s.repaired},
          {"notes", s.notes}};
}

MinedGroups mine_events(const std::string& source, const std::vector<RawEvent>& events, Labeler& labeler,
                        const MineOptions& opts) {
  MinedGroups out;
  std::set<std::string> seen;
  out.stats.events = events.size();
  for (const auto& session : sessionize(events, opts.gap_ms)) {
    ++out.stats.sessions;
    for (const auto& [key, partition] : session.env_partitions) {
      ++out.stats.partitions;
      LabelerRequest req;
      req.source = source + ":" + session.id + ":" + key;
      for (auto& span : match_spans(partition, *opts.rules)) {
        req.blocks.push_back(mask_sensitive(span.block, *opts.rules));
        req.contexts.push_back(span.window);
      }
      if (req.blocks.empty()) continue;
      out.stats.blocks += req.blocks.size();
      auto outcome = segment_and_label(req, labeler);
      if (outcome.used_fallback) ++out.stats.fallbacks;
      if (outcome.repaired) ++out.stats.repaired;
      for (auto& n : outcome.notes) out.stats.notes.push_back(req.source + ": " + n);
      for (auto& g : outcome.groups) {
        if (seen.insert(g.id).second) out.groups.push_back(std::move(g));
      }
    }
  }
  out.stats.groups = out.groups.size();
  return out;
}

MinedGroups mine_files(const std::vector<fs::path>& inputs, Labeler& labeler, const MineOptions& opts) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ".jsonl") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::exists(in)) {
      files.push_back(in);
    } else {
      throw Error(ErrorCode::io, "no such log " + in.string());
    }
  }

  MinedGroups out;
  std::set<std::string> seen;
  for (const auto& f : files) {
    const auto parsed = parse_log(read_file(f));
    auto mined = mine_events(f.filename().string(), parsed.events, labeler, opts);
    out.stats.files += 1;
    out.stats.events += mined.stats.events;
    out.stats.malformed += parsed.malformed.size();
    out.stats.sessions += mined.stats.sessions;
    out.stats.partitions += mined.stats.partitions;
    out.stats.blocks += mined.stats.blocks;
    out.stats.fallbacks += mined.stats.fallbacks;
    out.stats.repaired += mined.stats.repaired;
    for (const auto& m : parsed.malformed) {
      out.stats.notes.push_back(f.filename().string() + ":" + std::to_string(m.line) + ": " + m.cause);
    }
    for (auto& n : mined.stats.notes) out.stats.notes.push_back(std::move(n));
    for (auto& g : mined.groups) {
      if (seen.insert(g.id).second) out.groups.push_back(std::move(g));
    }
  }
  out.stats.groups = out.groups.size();
  return out;
}

}  // namespace log2plan
