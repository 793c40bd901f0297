// Acceptance checks 1-7. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "log2plan/eval.hpp"

using namespace l2t;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

void within(Outcome& o, double elapsed, double limit) {
  if (elapsed >= limit) o.fail("took " + fmt(elapsed) + " s, limit " + fmt(limit) + " s");
}

Outcome dictionary_coverage() {
  Outcome o;
  const auto start = Clock::now();
  const auto suite = EvalSuite::load(suites("dictionary.json"));
  const auto report = evaluate(suite, EvalOptions{});
  const auto& rules = RuleSet::builtin();
  std::set<std::pair<std::string, int>> covered;
  for (std::size_t i = 0; i < report.cases.size(); ++i) {
    const auto& c = report.cases[i];
    if (!c.success) {
      o.fail(c.name + ": " + (c.error.empty() ? nlohmann::json(c.failed_checks).dump() : c.error));
      continue;
    }
    const auto& planned = suite.cases[i].plan.at("steps");
    const auto& ran = c.run.at("steps");
    for (std::size_t s = 0; s < planned.size(); ++s) {
      const auto action = planned[s].at("action").get<std::string>();
      const int hint = planned[s].value("variant", -1);
      if (hint < 0) continue;
      if (ran.at(s).at("variant").get<int>() != hint) {
        o.fail(c.name + ": grounded variant " + ran.at(s).at("variant").dump() + ", expected " + std::to_string(hint));
      }
      covered.insert({action, hint});
    }
  }
  std::set<std::string> actions;
  for (const auto& r : rules.rules()) {
    const std::string name(to_string(r.action));
    actions.insert(name);
    if (!covered.count({name, rules.variant_index(r)})) {
      o.fail("no case executes " + name + " v" + std::to_string(rules.variant_index(r)));
    }
  }
  if (actions.size() != 19) o.fail(std::to_string(actions.size()) + " actions in the dictionary, expected 19");
  within(o, seconds_since(start), 5.0);
  if (o.ok) o.detail = std::to_string(covered.size()) + " variants over " + std::to_string(actions.size()) + " actions";
  return o;
}

Outcome mining_round_trip() {
  Outcome o;
  const auto start = Clock::now();
  const auto& rules = RuleSet::builtin();
  const WindowContext w = window("File Explorer", "Documents - File Explorer");
  std::mt19937_64 rng(2024);
  std::size_t checked = 0, excluded = 0;
  for (int round = 0; checked < 200 || round < 8; ++round) {
    for (const auto& r : rules.rules()) {
      const auto x = random_expansion(r, rng);
      if (!prefix_ambiguity(r, x.bindings, rules).empty()) {
        ++excluded;
        continue;
      }
      ++checked;
      const auto blocks = match_stream(synthesize(r, x.steps, w, 1000 * round));
      const std::string label = std::string(to_string(r.action)) + " v" + std::to_string(rules.variant_index(r));
      if (blocks.size() != 1) {
        o.fail(label + ": " + std::to_string(blocks.size()) + " blocks");
      } else if (blocks[0].action != r.action || blocks[0].objects != x.objects) {
        o.fail(label + ": recovered " + nlohmann::json(blocks[0]).dump());
      }
    }
  }
  within(o, seconds_since(start), 10.0);
  if (o.ok) o.detail = std::to_string(checked) + " expansions, " + std::to_string(excluded) + " prefix-ambiguous skipped";
  return o;
}

Outcome retrieval_oracle() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(77);
  HashingEmbedder embedder;
  int top3 = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 50;
    std::vector<IndexEntry> corpus = random_corpus(rng, n, HashingEmbedder::kDefaultDim);
    // Every third corpus uses real deterministic embeddings of group text.
    if (trial % 3 == 0) {
      for (auto& e : corpus) e.vector = embed("group " + e.group_id + " task " + std::to_string(rng() % 7), embedder);
    }
    const auto q = trial % 3 == 0 ? embed("task " + std::to_string(trial % 7), embedder) : corpus[rng() % n].vector;
    const auto got = staged_diverse_select(q, corpus);
    const auto want = selection_oracle(q, corpus);
    if (got.size() != want.size()) {
      o.fail("trial " + std::to_string(trial) + ": size " + std::to_string(got.size()) + " vs " +
             std::to_string(want.size()));
      continue;
    }
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (got[i].group_id != want[i].group_id || std::abs(got[i].score - want[i].score) > 1e-12) {
        o.fail("trial " + std::to_string(trial) + ": position " + std::to_string(i) + " differs");
        break;
      }
    }
    auto sorted = corpus;
    std::stable_sort(sorted.begin(), sorted.end(), [&](const IndexEntry& a, const IndexEntry& b) {
      const double sa = cosine(q, a.vector), sb = cosine(q, b.vector);
      return sa != sb ? sa > sb : a.group_id < b.group_id;
    });
    for (std::size_t i = 0; i < std::min<std::size_t>(3, sorted.size()); ++i) {
      if (got[i].group_id != sorted[i].group_id) o.fail("trial " + std::to_string(trial) + ": first-3 != top-3");
    }
    ++top3;
  }
  within(o, seconds_since(start), 10.0);
  if (o.ok) o.detail = "100 corpora match the oracle; first-3 = top-3 on " + std::to_string(top3);
  return o;
}

Outcome end_to_end() {
  Outcome o;
  auto t = Clock::now();
  const auto basic = evaluate(EvalSuite::load(suites("basic-20.json")), EvalOptions{});
  const double basic_s = seconds_since(t);
  if (basic.cases.size() != 20) o.fail("basic-20 has " + std::to_string(basic.cases.size()) + " cases");
  if (basic.success_rate != 1.0) o.fail("basic-20 success " + fmt(basic.success_rate));
  if (basic.avg_subtask_completion_rate != 1.0) o.fail("basic-20 completion " + fmt(basic.avg_subtask_completion_rate));
  within(o, basic_s, 60.0);

  t = Clock::now();
  const auto lh = evaluate(EvalSuite::load(suites("long-horizon.json")), EvalOptions{});
  const double lh_s = seconds_since(t);
  if (lh.cases.size() != 5) o.fail("long-horizon has " + std::to_string(lh.cases.size()) + " cases");
  for (const auto& c : lh.cases) {
    if (c.low_level_actions < 25) o.fail(c.name + ": only " + std::to_string(c.low_level_actions) + " low-level actions");
  }
  if (lh.success_rate < 0.8) o.fail("long-horizon success " + fmt(lh.success_rate));
  within(o, lh_s, 60.0);
  if (o.ok) {
    o.detail = "basic-20 " + fmt(basic.success_rate) + "/" + fmt(basic.avg_subtask_completion_rate) + " in " +
               fmt(basic_s) + " s; long-horizon " + fmt(lh.success_rate) + " in " + fmt(lh_s) + " s";
  }
  return o;
}

Outcome ablation() {
  Outcome o;
  const auto suite = EvalSuite::load(suites("ablation-10.json"));
  EvalOptions with, without;
  without.retrieval = false;
  const auto a = evaluate(suite, with);
  const auto b = evaluate(suite, without);
  if (suite.cases.size() != 10) o.fail("ablation suite has " + std::to_string(suite.cases.size()) + " cases");
  if (!(a.success_rate > b.success_rate)) o.fail("with " + fmt(a.success_rate) + " vs without " + fmt(b.success_rate));
  if (o.ok) o.detail = "with retrieval " + fmt(a.success_rate) + " > without " + fmt(b.success_rate);
  return o;
}

Outcome sessionization() {
  Outcome o;
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000 && o.ok; ++trial) {
    const std::int64_t gap = trial % 2 ? kDefaultGapMs : 1 + static_cast<std::int64_t>(rng() % 5000);
    const auto ev = random_timed_stream(rng, gap);
    const auto sessions = sessionize(ev, gap);
    const auto want = session_sizes_oracle(ev, gap);
    std::vector<std::size_t> got;
    std::vector<RawEvent> joined;
    for (const auto& s : sessions) {
      got.push_back(s.events.size());
      joined.insert(joined.end(), s.events.begin(), s.events.end());
      std::size_t parts = 0;
      for (const auto& [key, part] : s.env_partitions) parts += part.size();
      if (parts != s.events.size()) o.fail("trial " + std::to_string(trial) + ": partitions lose events");
    }
    if (got != want) o.fail("trial " + std::to_string(trial) + ": session sizes disagree with the oracle");
    if (joined != ev) o.fail("trial " + std::to_string(trial) + ": concatenation differs from the input");
  }
  if (o.ok) o.detail = "1000 streams agree with the gap-scan oracle";
  return o;
}

Outcome determinism() {
  Outcome o;
  for (const char* file : {"basic-20.json", "ablation-10.json", "long-horizon.json"}) {
    const auto suite = EvalSuite::load(suites(file));
    std::string first;
    for (int jobs : {1, 1, 4}) {
      EvalOptions opts;
      opts.config.eval_jobs = jobs;
      const auto dump = strip_timing(eval_report_to_json(evaluate(suite, opts))).dump();
      if (first.empty()) {
        first = dump;
      } else if (dump != first) {
        o.fail(std::string(file) + ": report differs with jobs=" + std::to_string(jobs));
      }
    }
  }
  if (o.ok) o.detail = "3 suites, 3 runs each, identical modulo timing";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"dictionary coverage and executability", dictionary_coverage},
      {"mining round-trip", mining_round_trip},
      {"retrieval oracle equivalence", retrieval_oracle},
      {"end-to-end scaled benchmark", end_to_end},
      {"ablation direction", ablation},
      {"sessionization property", sessionization},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    if (!o.ok) ++failed;
    std::cout << (o.ok ? "PASS " : "FAIL ") << i + 1 << " " << criteria[i].first;
    if (!o.detail.empty()) std::cout << " (" << o.detail << ")";
    std::cout << std::endl;
  }
  return failed ? 1 : 0;
}
