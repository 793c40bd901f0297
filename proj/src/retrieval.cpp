#include "log2plan/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "log2plan/error.hpp"
#include "log2plan/text.hpp"

namespace log2plan {

namespace {

struct Candidate {
  const IndexEntry* entry;
  double score;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.entry->group_id < b.entry->group_id;
}

struct KeywordRule {
  std::vector<std::string_view> words;
  std::string_view label;
};

const std::vector<KeywordRule>& verb_rules() {
  static const std::vector<KeywordRule> rules{
      {{"rename"}, "file-management/rename"},
      {{"delete", "remove", "trash"}, "file-management/delete"},
      {{"save"}, "file/save"},
      {{"copy", "duplicate"}, "edit/copy"},
      {{"paste"}, "edit/paste"},
      {{"search", "find", "look"}, "search/text-input"},
      {{"login", "log", "sign"}, "auth/login"},
      {{"type", "write", "enter", "input", "fill"}, "input/text-input"},
      {{"go", "navigate", "visit", "browse"}, "navigation/go-to"},
      {{"open", "launch", "start"}, "navigation/open"},
      {{"close", "quit", "exit"}, "window/close"},
      {{"switch", "focus"}, "window/switch-focus"},
      {{"scroll"}, "navigation/scroll"},
      {{"drag", "move"}, "interaction/drag"},
      {{"click", "select", "press"}, "interaction/click"},
  };
  return rules;
}

const std::vector<KeywordRule>& app_rules() {
  static const std::vector<KeywordRule> rules{
      {{"chrome"}, "web/chrome"},
      {{"edge"}, "web/edge"},
      {{"firefox"}, "web/firefox"},
      {{"browser", "website", "web", "portal"}, "web/browser"},
      {{"word"}, "app/Word"},
      {{"excel", "spreadsheet"}, "app/Excel"},
      {{"powerpoint", "slides"}, "app/PowerPoint"},
      {{"outlook", "calendar", "email", "mail"}, "app/Outlook"},
      {{"notepad"}, "local/Notepad"},
      {{"explorer", "folder", "folders"}, "local/FileExplorer"},
  };
  return rules;
}

}  // namespace

double EmbeddingVector::norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::invalid_argument, "embedding dimensions differ");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) dot += a.values[i] * b.values[i];
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return -std::numeric_limits<double>::infinity();
  return std::clamp(dot / (na * nb), -1.0, 1.0);
}

EmbeddingVector HashingEmbedder::embed(std::string_view input) {
  EmbeddingVector v;
  v.values.assign(dim_, 0.0);
  auto toks = text::tokens(input);
  if (toks.empty()) {
    const auto whole = text::trim(input);
    if (!whole.empty()) toks.push_back(whole);
  }
  for (const auto& t : toks) v.values[text::fnv1a32(t) % dim_] += 1.0;
  const double n = v.norm();
  if (n > 0.0) {
    for (double& x : v.values) x /= n;
  }
  return v;
}

EmbeddingVector embed(std::string_view input, Embedder& provider) {
  if (text::trim(input).empty()) throw Error(ErrorCode::empty_text, "cannot embed blank text");
  return provider.embed(input);
}

std::string group_text(const TaskGroup& g) {
  return g.env + " " + g.act + " " + g.title + " " + g.description;
}

VectorIndex::VectorIndex(std::size_t dim, std::vector<IndexEntry> entries)
    : dim_(dim), entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.vector.dim() != dim_)
      throw Error(ErrorCode::schema, "entry " + e.group_id + " has dim " + std::to_string(e.vector.dim()));
  }
}

VectorIndex VectorIndex::build(std::span<const TaskGroup> groups, Embedder& embedder) {
  std::vector<IndexEntry> entries;
  std::size_t dim = 0;
  for (const auto& g : groups) {
    IndexEntry e{g.id, group_text(g), embed(group_text(g), embedder)};
    dim = e.vector.dim();
    entries.push_back(std::move(e));
  }
  std::sort(entries.begin(), entries.end(),
            [](const IndexEntry& a, const IndexEntry& b) { return a.group_id < b.group_id; });
  return VectorIndex(dim, std::move(entries));
}

nlohmann::json VectorIndex::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries_) {
    arr.push_back({{"group_id", e.group_id}, {"text", e.text}, {"values", e.vector.values}});
  }
  return {{"dim", dim_}, {"entries", arr}};
}

VectorIndex VectorIndex::from_json(const nlohmann::json& j) {
  try {
    std::vector<IndexEntry> entries;
    for (const auto& e : j.at("entries")) {
      entries.push_back({e.at("group_id").get<std::string>(), e.value("text", ""),
                         EmbeddingVector{e.at("values").get<std::vector<double>>()}});
    }
    return VectorIndex(j.at("dim").get<std::size_t>(), std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::schema, std::string("index: ") + e.what());
  }
}

VectorIndex VectorIndex::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open index " + path);
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::schema, path + ": " + e.what());
  }
}

void VectorIndex::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write index " + path);
  out << to_json().dump(2) << '\n';
}

std::shared_ptr<const VectorIndex> IndexHandle::get() const {
  std::lock_guard lock(mu_);
  return current_;
}

void IndexHandle::publish(VectorIndex index) {
  auto next = std::make_shared<const VectorIndex>(std::move(index));
  std::lock_guard lock(mu_);
  current_ = std::move(next);
}

std::vector<ScoredGroup> staged_diverse_select(const EmbeddingVector& query,
                                               std::span<const IndexEntry> index,
                                               const SelectionConfig& cfg) {
  std::vector<Candidate> pool;
  pool.reserve(index.size());
  for (const auto& e : index) pool.push_back({&e, cosine(query, e.vector)});

  std::vector<ScoredGroup> out;
  std::vector<const IndexEntry*> previous_stage;
  while (out.size() < cfg.k && !pool.empty()) {
    for (const IndexEntry* anchor : previous_stage) {
      for (std::size_t x = 0; x < cfg.exclusions_per_selected; ++x) {
        const std::size_t still_needed = cfg.k - out.size();
        if (pool.size() <= still_needed) break;
        auto nearest = pool.begin();
        double best = cosine(anchor->vector, nearest->entry->vector);
        for (auto it = std::next(pool.begin()); it != pool.end(); ++it) {
          const double s = cosine(anchor->vector, it->entry->vector);
          if (s > best || (s == best && it->entry->group_id < nearest->entry->group_id)) {
            best = s;
            nearest = it;
          }
        }
        pool.erase(nearest);
      }
    }

    std::sort(pool.begin(), pool.end(), better);
    const std::size_t take = std::min({cfg.per_stage, cfg.k - out.size(), pool.size()});
    previous_stage.clear();
    for (std::size_t i = 0; i < take; ++i) {
      out.push_back({pool[i].entry->group_id, pool[i].score});
      previous_stage.push_back(pool[i].entry);
    }
    pool.erase(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
  }
  return out;
}

nlohmann::json retrieval_to_json(const RetrievalResult& r) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : r.groups) groups.push_back({{"group_id", g.group_id}, {"score", g.score}});
  nlohmann::json matches = nlohmann::json::object();
  for (const auto& [step, list] : r.task_matches) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : list) arr.push_back({{"group_id", m.group_id}, {"task", m.task}, {"score", m.score}});
    matches[std::to_string(step)] = arr;
  }
  return {{"groups", groups}, {"task_matches", matches}};
}

RetrievalResult retrieval_from_json(const nlohmann::json& j) {
  RetrievalResult r;
  if (j.is_null()) return r;
  for (const auto& g : j.value("groups", nlohmann::json::array())) {
    r.groups.push_back({g.at("group_id").get<std::string>(), g.at("score").get<double>()});
  }
  const auto matches = j.value("task_matches", nlohmann::json::object());
  for (const auto& [key, list] : matches.items()) {
    auto& dst = r.task_matches[std::stoi(key)];
    for (const auto& m : list) {
      dst.push_back({m.at("group_id").get<std::string>(), m.at("task").get<int>(), m.at("score").get<double>()});
    }
  }
  return r;
}

TaskMatches match_tasks(std::span<const std::string> step_texts, std::span<const TaskGroup> groups,
                        Embedder& embedder, std::size_t k) {
  struct Pooled {
    const TaskGroup* group;
    const IndividualTask* task;
    EmbeddingVector vec;
  };
  std::vector<Pooled> pool;
  for (const auto& g : groups) {
    for (const auto& t : g.tasks) {
      if (text::trim(t.summary).empty()) continue;
      pool.push_back({&g, &t, embed(t.summary, embedder)});
    }
  }

  TaskMatches out;
  for (std::size_t i = 0; i < step_texts.size(); ++i) {
    auto& list = out[static_cast<int>(i)];
    if (text::trim(step_texts[i]).empty()) continue;
    const auto q = embed(step_texts[i], embedder);
    std::vector<TaskMatch> scored;
    for (const auto& p : pool) scored.push_back({p.group->id, p.task->index, cosine(q, p.vec)});
    std::sort(scored.begin(), scored.end(), [](const TaskMatch& a, const TaskMatch& b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.group_id != b.group_id) return a.group_id < b.group_id;
      return a.task < b.task;
    });
    if (scored.size() > k) scored.resize(k);
    list = std::move(scored);
  }
  return out;
}

QueryLabels keyword_decompose(std::string_view command) {
  const std::string title = text::trim(command);
  if (title.empty()) throw Error(ErrorCode::invalid_argument, "empty command");
  const auto toks = text::tokens(title);
  const auto has = [&](std::string_view w) { return std::find(toks.begin(), toks.end(), w) != toks.end(); };

  std::string env = "local/desktop";
  bool env_found = false;
  for (const auto& r : app_rules()) {
    for (auto w : r.words) {
      if (has(w)) {
        env = r.label;
        env_found = true;
        break;
      }
    }
    if (env_found) break;
  }
  if (!env_found) {
    for (const auto& t : toks) {
      if (t == "com" || t == "org" || t == "net" || t == "http" || t == "https") {
        env = "web/browser";
        break;
      }
    }
  }

  std::string act = "task/general";
  bool act_found = false;
  for (const auto& t : toks) {
    for (const auto& r : verb_rules()) {
      if (std::find(r.words.begin(), r.words.end(), t) != r.words.end()) {
        act = r.label;
        act_found = true;
        break;
      }
    }
    if (act_found) break;
  }
  return {"ENV[" + env + "]", "ACT[" + act + "]", title};
}

QueryLabels decompose_query(std::string_view command, QueryDecomposer* provider) {
  if (text::trim(command).empty()) throw Error(ErrorCode::invalid_argument, "empty command");
  if (provider) {
    try {
      return provider->decompose(command);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::provider_unavailable) throw;
    }
  }
  return keyword_decompose(command);
}

}  // namespace log2plan
