#include "log2plan/eval.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include "log2plan/error.hpp"
#include "log2plan/providers.hpp"
#include "log2plan/repository.hpp"
#include "log2plan/sim_desktop.hpp"

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

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

// Action-count bins for long-horizon reporting.
std::string bin_of(std::size_t actions) {
  if (actions < 10) return "1-9";
  if (actions < 25) return "10-24";
  return "25+";
}

bool near(double a, double b) { return std::fabs(a - b) <= 1e-9; }

}  // namespace

Retrieved retrieve(std::string_view command, const VectorIndex& index, std::span<const TaskGroup> pool,
                   Embedder& embedder, QueryDecomposer* decomposer, const SelectionConfig& selection) {
  Retrieved out;
  out.labels = decompose_query(command, decomposer);
  if (index.empty()) return out;
  const auto query = embed(out.labels.rendering(), embedder);
  out.result.groups = staged_diverse_select(query, index.entries(), selection);
  for (const auto& sg : out.result.groups) {
    for (const auto& g : pool) {
      if (g.id == sg.group_id) {
        out.groups.push_back(g);
        break;
      }
    }
  }
  return out;
}

EvalSuite EvalSuite::from_json(const nlohmann::json& j, const fs::path& base) {
  EvalSuite s;
  try {
    s.name = j.value("name", "suite");
    for (const auto& l : j.value("logs", nlohmann::json::array())) s.logs.push_back(resolve(base, l.get<std::string>()));
    if (j.contains("labels")) s.labels = resolve(base, j.at("labels").get<std::string>()).string();
    for (const auto& cj : j.at("cases")) {
      EvalCase c;
      c.name = cj.value("name", "case-" + std::to_string(s.cases.size() + 1));
      if (cj.contains("plan")) c.plan = cj.at("plan");
      c.command = c.plan.is_null() ? cj.at("command").get<std::string>()
                                   : cj.value("command", c.plan.value("command", std::string{}));
      const auto& sc = cj.at("scenario");
      c.scenario = sc.is_string() ? read_json(resolve(base, sc.get<std::string>())) : sc;
      for (const auto& e : cj.value("expect", nlohmann::json::array())) c.expect.push_back(e);
      c.assist = cj.value("assist", nlohmann::json::object());
      s.cases.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::schema, std::string("suite: ") + e.what());
  }
  return s;
}

EvalSuite EvalSuite::load(const fs::path& path) { return from_json(read_json(path), path.parent_path()); }

CaseResult run_case(const EvalCase& c, const VectorIndex& index, std::span<const TaskGroup> pool,
                    const EvalOptions& opts) {
  CaseResult r;
  r.name = c.name;
  r.command = c.command;
  const auto start = std::chrono::steady_clock::now();
  try {
    auto sim = SimDesktop::from_json(c.scenario);
    auto embedder = make_embedder(opts.config);
    auto planner = make_planner(opts.config);
    auto decomposer = make_decomposer(opts.config);

    GlobalPlan p;
    if (!c.plan.is_null()) {
      p = plan_from_json(c.plan);
    } else {
      Retrieved got;
      if (opts.retrieval) got = retrieve(c.command, index, pool, *embedder, decomposer.get(), opts.config.selection);
      p = plan(c.command, got.result, *planner, got.groups, *embedder, *opts.rules, opts.config.reuse_threshold);
    }
    r.plan = plan_to_json(p);
    r.steps = p.steps.size();

    ScriptedAssist assist(c.assist);
    RunOptions ro;
    ro.ground.rules = opts.rules;
    ro.ground.min_score = opts.config.min_score;
    ro.max_revisions = opts.config.max_revisions;
    const RunReport report = run(p, sim, assist, ro);
    r.run = report_to_json(report);
    r.subtask_completion_rate = report.subtask_completion_rate;
    r.low_level_actions = report.low_level_actions;
    if (report.aborted) r.error = report.error;

    for (const auto& pred : c.expect) {
      if (auto why = sim.check(pred)) r.failed_checks.push_back(*why);
    }
    r.success = report.success && r.failed_checks.empty();
  } catch (const std::exception& e) {
    r.error = e.what();
    r.success = false;
    r.subtask_completion_rate = 0.0;
  }
  r.execution_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

EvalReport evaluate(const EvalSuite& suite, std::span<const TaskGroup> pool, const EvalOptions& opts) {
  EvalReport rep;
  rep.suite = suite.name;
  rep.retrieval = opts.retrieval;
  rep.groups = pool.size();
  rep.cases.resize(suite.cases.size());

  VectorIndex index;
  if (opts.retrieval && !pool.empty()) {
    auto embedder = make_embedder(opts.config);
    index = VectorIndex::build(pool, *embedder);
  }

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < suite.cases.size(); i = next++) {
      rep.cases[i] = run_case(suite.cases[i], index, pool, opts);
    }
  };
  const auto jobs = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, opts.config.eval_jobs)),
                                          std::max<std::size_t>(1, suite.cases.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  if (!rep.cases.empty()) {
    double ok = 0, rate = 0, time = 0;
    for (const auto& c : rep.cases) {
      ok += c.success ? 1.0 : 0.0;
      rate += c.subtask_completion_rate;
      time += c.execution_time_ms;
    }
    const double n = static_cast<double>(rep.cases.size());
    rep.success_rate = ok / n;
    rep.avg_subtask_completion_rate = rate / n;
    rep.avg_execution_time_ms = time / n;
  }
  return rep;
}

EvalReport evaluate(const EvalSuite& suite, const EvalOptions& opts) {
  std::vector<TaskGroup> pool;
  if (!suite.logs.empty()) {
    Config cfg = opts.config;
    if (!suite.labels.empty()) {
      cfg.labeler = "recorded";
      cfg.labels_path = suite.labels;
    }
    auto labeler = make_labeler(cfg);
    MineOptions mo;
    mo.rules = opts.rules;
    mo.gap_ms = cfg.session_gap_ms;
    pool = mine_files(suite.logs, *labeler, mo).groups;
  }
  return evaluate(suite, pool, opts);
}

nlohmann::json eval_report_to_json(const EvalReport& r) {
  nlohmann::json cases = nlohmann::json::array();
  std::map<std::string, std::pair<std::size_t, std::size_t>> bins;
  for (const auto& c : r.cases) {
    cases.push_back({{"name", c.name},
                     {"command", c.command},
                     {"success", c.success},
                     {"subtask_completion_rate", c.subtask_completion_rate},
                     {"execution_time_ms", c.execution_time_ms},
                     {"steps", c.steps},
                     {"low_level_actions", c.low_level_actions},
                     {"failed_checks", c.failed_checks},
                     {"error", c.error},
                     {"plan", c.plan},
                     {"run", c.run}});
    auto& b = bins[bin_of(c.low_level_actions)];
    ++b.first;
    if (c.success) ++b.second;
  }
  nlohmann::json by_bin = nlohmann::json::object();
  for (const auto& [bin, counts] : bins) {
    by_bin[bin] = {{"cases", counts.first},
                   {"success_rate", static_cast<double>(counts.second) / static_cast<double>(counts.first)}};
  }
  return {{"suite", r.suite},
          {"retrieval", r.retrieval},
          {"groups", r.groups},
          {"cases", cases},
          {"case_count", r.cases.size()},
          {"success_rate", r.success_rate},
          {"avg_subtask_completion_rate", r.avg_subtask_completion_rate},
          {"avg_execution_time_ms", r.avg_execution_time_ms},
          {"by_action_count", by_bin}};
}

std::vector<std::string> check_report(const nlohmann::json& j) {
  std::vector<std::string> out;
  const auto need = [&](const nlohmann::json& obj, const char* key, nlohmann::json::value_t type, const std::string& where) {
    if (!obj.contains(key)) {
      out.push_back(where + ": missing " + key);
      return false;
    }
    const auto t = obj.at(key).type();
    const bool numeric = type == nlohmann::json::value_t::number_float &&
                         (t == nlohmann::json::value_t::number_integer || t == nlohmann::json::value_t::number_unsigned);
    const bool unsigned_ok = type == nlohmann::json::value_t::number_unsigned && t == nlohmann::json::value_t::number_integer &&
                             obj.at(key).get<std::int64_t>() >= 0;
    if (t != type && !numeric && !unsigned_ok) {
      out.push_back(where + ": " + key + " has type " + obj.at(key).type_name());
      return false;
    }
    return true;
  };
  using V = nlohmann::json::value_t;
  if (!j.is_object()) return {"report is not an object"};
  need(j, "suite", V::string, "report");
  need(j, "retrieval", V::boolean, "report");
  need(j, "success_rate", V::number_float, "report");
  need(j, "avg_subtask_completion_rate", V::number_float, "report");
  need(j, "avg_execution_time_ms", V::number_float, "report");
  need(j, "case_count", V::number_unsigned, "report");
  if (!need(j, "cases", V::array, "report") || !out.empty()) return out;

  double ok = 0, rate = 0, time = 0;
  for (std::size_t i = 0; i < j.at("cases").size(); ++i) {
    const auto& c = j.at("cases")[i];
    const std::string where = "case " + std::to_string(i);
    const bool fields = need(c, "name", V::string, where) && need(c, "success", V::boolean, where) &&
                        need(c, "subtask_completion_rate", V::number_float, where) &&
                        need(c, "execution_time_ms", V::number_float, where) && need(c, "steps", V::number_unsigned, where);
    if (!fields) continue;
    const double r = c.at("subtask_completion_rate").get<double>();
    if (r < 0.0 || r > 1.0) out.push_back(where + ": completion rate out of range");
    if (c.at("success").get<bool>() && !near(r, 1.0)) out.push_back(where + ": success with completion rate below 1");
    ok += c.at("success").get<bool>() ? 1.0 : 0.0;
    rate += r;
    time += c.at("execution_time_ms").get<double>();
  }
  if (!out.empty()) return out;
  const std::size_t n = j.at("cases").size();
  if (j.at("case_count").get<std::size_t>() != n) out.push_back("case_count does not match cases");
  if (n) {
    const double dn = static_cast<double>(n);
    if (!near(j.at("success_rate").get<double>(), ok / dn)) out.push_back("success_rate is not successes / cases");
    if (!near(j.at("avg_subtask_completion_rate").get<double>(), rate / dn))
      out.push_back("avg_subtask_completion_rate is not the mean of case rates");
    if (std::fabs(j.at("avg_execution_time_ms").get<double>() - time / dn) > 1e-6)
      out.push_back("avg_execution_time_ms is not the mean of case times");
  }
  return out;
}

nlohmann::json strip_timing(const nlohmann::json& j) {
  if (j.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [k, v] : j.items()) {
      if (k.size() >= 7 && k.compare(k.size() - 7, 7, "time_ms") == 0) continue;
      out[k] = strip_timing(v);
    }
    return out;
  }
  if (j.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : j) out.push_back(strip_timing(v));
    return out;
  }
  return j;
}

}  // namespace log2plan
