#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "log2plan/dictionary.hpp"
#include "log2plan/ingest.hpp"
#include "log2plan/retrieval.hpp"
#include "log2plan/sim_desktop.hpp"
#include "log2plan/text.hpp"

namespace l2t {

namespace fs = std::filesystem;
using namespace log2plan;

#ifdef LOG2PLAN_TEST_DATA
inline fs::path test_data(const std::string& rel) { return fs::path(LOG2PLAN_TEST_DATA) / rel; }
#endif

#ifdef LOG2PLAN_SUITES
inline fs::path suites(const std::string& rel) { return fs::path(LOG2PLAN_SUITES) / rel; }
#endif

inline std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(read_text(p)); }

inline WindowContext window(const std::string& app, const std::string& title = "",
                            EnvClass env = EnvClass::Local) {
  return WindowContext{app, title.empty() ? app : title, env};
}

inline RawEvent event(std::int64_t ts, EventKind kind, const WindowContext& w) {
  RawEvent e;
  e.ts = ts;
  e.kind = kind;
  e.window = w;
  return e;
}

inline RawEvent click(std::int64_t ts, const std::string& target, const std::string& type,
                      const WindowContext& w, EventKind kind = EventKind::mouse_click) {
  RawEvent e = event(ts, kind, w);
  e.target = Component{target, type, {10, 10}};
  return e;
}

inline RawEvent press(std::int64_t ts, const std::string& keys, const WindowContext& w) {
  RawEvent e = event(ts, EventKind::key_press, w);
  e.keys = keys;
  return e;
}

inline RawEvent type_text(std::int64_t ts, const std::string& text, const WindowContext& w) {
  RawEvent e = event(ts, EventKind::key_type, w);
  e.text = text;
  return e;
}

// Raw events a recorder would capture for a bound dictionary expansion.
inline std::vector<RawEvent> synthesize(const PatternRule& rule, const std::vector<LowLevelStep>& steps,
                                        const WindowContext& w, std::int64_t t0 = 1'000) {
  std::map<std::string, const StepTemplate*> by_name;
  for (const auto& t : rule.steps) {
    if (!t.name.empty()) by_name[t.name] = &t;
  }
  std::vector<RawEvent> out;
  std::int64_t ts = t0;
  for (const auto& s : steps) {
    ts += 100;
    const StepTemplate* t = s.slot_name.empty() ? nullptr : by_name.at(s.slot_name);
    const std::string type = t && !t->control_types.empty() ? t->control_types.front() : "ListItem";
    switch (s.verb) {
      case StepVerb::click: out.push_back(click(ts, s.value, type, w)); break;
      case StepVerb::double_click: out.push_back(click(ts, s.value, type, w, EventKind::mouse_double_click)); break;
      case StepVerb::right_click: out.push_back(click(ts, s.value, type, w, EventKind::mouse_right_click)); break;
      case StepVerb::mouse_down: out.push_back(click(ts, s.value, type, w, EventKind::mouse_down)); break;
      case StepVerb::mouse_up:
        out.push_back(click(ts, s.slot == SlotKind::literal ? "Scroll Bar" : s.value, type, w, EventKind::mouse_up));
        break;
      case StepVerb::press: out.push_back(press(ts, s.value, w)); break;
      case StepVerb::type: out.push_back(type_text(ts, s.value, w)); break;
      case StepVerb::scroll: {
        RawEvent e = event(ts, EventKind::scroll, w);
        e.scroll_amount = -3;
        out.push_back(e);
        break;
      }
      case StepVerb::focus:
        if (s.slot == SlotKind::literal) {
          out.push_back(event(ts, EventKind::window_focus, window(w.app, s.value, w.env_class)));
        } else {
          out.push_back(click(ts, s.value, "Window", w, EventKind::window_focus));
        }
        break;
      case StepVerb::wait: out.push_back(event(ts, EventKind::window_open, w)); break;
      case StepVerb::repeat: break;
    }
  }
  return out;
}

// Why a (rule, bindings) pair cannot round-trip through match_stream, or
// empty when it should. Each entry names the rule that wins instead.
inline std::string prefix_ambiguity(const PatternRule& rule, const Bindings& b, const RuleSet& rules) {
  const int v = rules.variant_index(rule);
  const auto keys = [&](const std::string& k) { return normalize_chord(b.count(k) ? b.at(k) : ""); };
  switch (rule.action) {
    case HighLevelAction::repeat: return "Repeat refers to earlier tasks and never appears in a log";
    case HighLevelAction::open:
      if (v == 1) return "Open by double click records exactly like Doubleclick";
      break;
    case HighLevelAction::text_input:
      if (v == 0 && b.count("field") && text::icontains(b.at("field"), "search"))
        return "typing into a Search field and pressing enter is Open via the search bar";
      break;
    case HighLevelAction::press: {
      static const std::vector<std::string> owned{"ctrl+s", "ctrl+v", "alt+f4", "alt+esc", "ctrl+shift+tab"};
      for (const auto& k : owned) {
        if (keys("keys") == k) return "press " + k + " is a dedicated single-chord action";
      }
      break;
    }
    default: break;
  }
  return {};
}

struct Expansion {
  const PatternRule* rule = nullptr;
  Bindings bindings;
  std::vector<std::string> objects;  // slot values in slot order
  std::vector<LowLevelStep> steps;
};

// Random ground binding for every slot of `rule`.
inline Expansion random_expansion(const PatternRule& rule, std::mt19937_64& rng) {
  static const std::vector<std::string> names{"report.docx", "Budget 2024", "Submit", "paper", "notes.txt",
                                              "Quarterly Review", "OK", "Photos", "draft_v2.txt", "Inbox"};
  static const std::vector<std::string> words{"Transformer", "hello world", "42", "minutes", "alice",
                                              "s3cret", "pet-friendly cafes", "Q3 plan"};
  static const std::vector<std::string> urls{"example.com", "news.example.com/world", "maps.google.com",
                                             "https://wiki.example.org/a"};
  static const std::vector<std::string> chords{"ctrl+a", "ctrl+z", "f5", "shift+tab", "ctrl+p", "esc"};
  static const std::vector<std::string> arrows{"down", "up", "right", "left"};
  const auto pick = [&](const std::vector<std::string>& v) { return v[rng() % v.size()]; };

  Expansion x;
  x.rule = &rule;
  for (const auto& s : rule.slots()) {
    const auto& t = *s.first;
    std::string value;
    switch (s.kind) {
      case SlotKind::object:
      case SlotKind::destination:
        value = t.strict && t.has_fallback && !t.fallback.empty() ? t.fallback : pick(names);
        break;
      case SlotKind::text: value = t.constraint == SlotConstraint::url ? pick(urls) : pick(words); break;
      case SlotKind::keys:
        if (t.constraint == SlotConstraint::arrows) {
          const std::size_t n = 1 + rng() % 3;
          for (std::size_t i = 0; i < n; ++i) value += (i ? " " : "") + pick(arrows);
        } else {
          value = pick(chords);
        }
        break;
      case SlotKind::literal: break;
    }
    x.bindings[s.name] = value;
    x.objects.push_back(value);
  }
  x.steps = expand(rule, x.bindings);
  return x;
}


// Step-by-step reimplementation of staged diverse selection.
inline std::vector<ScoredGroup> selection_oracle(const EmbeddingVector& q, const std::vector<IndexEntry>& index,
                                                 std::size_t k = 9, std::size_t per_stage = 3) {
  const auto cos = [](const EmbeddingVector& a, const EmbeddingVector& b) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      dot += a.values[i] * b.values[i];
      na += a.values[i] * a.values[i];
      nb += b.values[i] * b.values[i];
    }
    if (na == 0 || nb == 0) return -std::numeric_limits<double>::infinity();
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
  };
  std::vector<std::size_t> remaining;
  for (std::size_t i = 0; i < index.size(); ++i) remaining.push_back(i);
  std::vector<ScoredGroup> out;
  std::vector<std::size_t> last_stage;
  while (out.size() < k && !remaining.empty()) {
    for (std::size_t anchor : last_stage) {
      if (remaining.size() <= k - out.size()) break;
      std::size_t pos = 0;
      for (std::size_t j = 1; j < remaining.size(); ++j) {
        const double sj = cos(index[anchor].vector, index[remaining[j]].vector);
        const double sp = cos(index[anchor].vector, index[remaining[pos]].vector);
        if (sj > sp || (sj == sp && index[remaining[j]].group_id < index[remaining[pos]].group_id)) pos = j;
      }
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pos));
    }
    last_stage.clear();
    for (std::size_t n = 0; n < per_stage && out.size() < k && !remaining.empty(); ++n) {
      std::size_t pos = 0;
      for (std::size_t j = 1; j < remaining.size(); ++j) {
        const double sj = cos(q, index[remaining[j]].vector);
        const double sp = cos(q, index[remaining[pos]].vector);
        if (sj > sp || (sj == sp && index[remaining[j]].group_id < index[remaining[pos]].group_id)) pos = j;
      }
      out.push_back({index[remaining[pos]].group_id, cos(q, index[remaining[pos]].vector)});
      last_stage.push_back(remaining[pos]);
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pos));
    }
  }
  return out;
}

// Random corpus with a few planted near-duplicate clusters.
inline std::vector<IndexEntry> random_corpus(std::mt19937_64& rng, std::size_t n, std::size_t dim,
                                             std::size_t clusters = 3) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<EmbeddingVector> centers(clusters);
  for (auto& c : centers) {
    c.values.resize(dim);
    for (auto& v : c.values) v = g(rng);
  }
  std::vector<IndexEntry> out;
  for (std::size_t i = 0; i < n; ++i) {
    IndexEntry e;
    e.group_id = "g" + std::to_string(1000 + (rng() % 9000)) + "-" + std::to_string(i);
    e.vector.values.resize(dim);
    const bool clustered = clusters > 0 && rng() % 2 == 0;
    const auto& c = centers[rng() % std::max<std::size_t>(clusters, 1)];
    for (std::size_t d = 0; d < dim; ++d) e.vector.values[d] = clustered ? c.values[d] + 0.05 * g(rng) : g(rng);
    if (clustered && rng() % 4 == 0) e.vector = c;  // exact duplicate
    out.push_back(std::move(e));
  }
  return out;
}

// Session sizes found by scanning every adjacent gap.
inline std::vector<std::size_t> session_sizes_oracle(const std::vector<RawEvent>& ev, std::int64_t gap_ms) {
  std::vector<std::size_t> sizes;
  std::size_t run = 0;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const bool split = i > 0 && ev[i].ts - ev[i - 1].ts >= gap_ms;
    if (split) {
      sizes.push_back(run);
      run = 0;
    }
    ++run;
  }
  if (run) sizes.push_back(run);
  return sizes;
}

inline std::vector<RawEvent> random_timed_stream(std::mt19937_64& rng, std::int64_t gap_ms) {
  const std::vector<WindowContext> wins{window("Word", "Doc", EnvClass::App), window("Chrome", "Google", EnvClass::Web),
                                        window("File Explorer", "Documents")};
  std::vector<RawEvent> out;
  const std::size_t n = rng() % 60;
  std::int64_t ts = static_cast<std::int64_t>(rng() % 1'000'000'000);
  for (std::size_t i = 0; i < n; ++i) {
    switch (rng() % 4) {
      case 0: ts += gap_ms; break;
      case 1: ts += gap_ms - 1; break;
      case 2: ts += static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(3 * gap_ms)); break;
      default: ts += static_cast<std::int64_t>(rng() % 1000); break;
    }
    out.push_back(press(ts, "k" + std::to_string(i), wins[rng() % wins.size()]));
  }
  return out;
}

inline SimDesktop load_scenario(const fs::path& p) { return SimDesktop::from_json(read_json(p)); }

}  // namespace l2t
