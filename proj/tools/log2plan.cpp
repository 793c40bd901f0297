#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "log2plan/config.hpp"
#include "log2plan/error.hpp"
#include "log2plan/eval.hpp"
#include "log2plan/executor.hpp"
#include "log2plan/ingest.hpp"
#include "log2plan/local_planner.hpp"
#include "log2plan/planner.hpp"
#include "log2plan/providers.hpp"
#include "log2plan/repository.hpp"
#include "log2plan/sim_desktop.hpp"

namespace fs = std::filesystem;
using namespace log2plan;

namespace {

struct Globals {
  bool json = false;
  std::string config;
  std::string labeler;
  std::string planner;
  std::string embedder;
  std::string dictionary;
  RuleSet custom_rules;

  const RuleSet& rules() const { return dictionary.empty() ? RuleSet::builtin() : custom_rules; }
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const fs::path& p) {
  try {
    return nlohmann::json::parse(read_file(p));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::schema, p.string() + ": " + e.what());
  }
}

void write_file(const fs::path& p, const std::string& content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write " + p.string());
  out << content;
}

Config effective_config(const Globals& g) {
  Config cfg = load_config(g.config.empty() ? std::nullopt : std::optional<std::string>(g.config));
  if (!g.labeler.empty()) set_config_value(cfg, "labeler", g.labeler);
  if (!g.planner.empty()) set_config_value(cfg, "planner", g.planner);
  if (!g.embedder.empty()) set_config_value(cfg, "embedder", g.embedder);
  return cfg;
}

std::string sanitize(std::string s) {
  for (auto& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return s;
}

void print(const Globals& g, const nlohmann::json& j, const std::string& human) {
  if (g.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << human;
  }
}

std::string plan_text(const GlobalPlan& p) {
  std::ostringstream out;
  out << "command: " << p.command << "\n";
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const auto& s = p.steps[i];
    out << i + 1 << ". [" << (s.user_assist ? "T" : "F") << "] " << render_step(s);
    if (s.window) out << "  (in " << *s.window << ")";
    out << "\n";
  }
  return out.str();
}

struct Pipeline {
  std::vector<TaskGroup> pool;
  VectorIndex index;
};

Pipeline load_pipeline(const std::string& repo_dir) {
  Pipeline p;
  if (repo_dir.empty()) return p;
  auto repo = TaskRepository::open(repo_dir);
  p.pool = repo.groups();
  if (auto idx = repo.load_index()) p.index = std::move(*idx);
  return p;
}

GlobalPlan plan_command(const Globals& g, const std::string& command, const std::string& repo_dir, bool retrieval,
                        const Config& cfg) {
  const Pipeline pipe = retrieval ? load_pipeline(repo_dir) : Pipeline{};
  auto embedder = make_embedder(cfg);
  auto planner = make_planner(cfg);
  auto decomposer = make_decomposer(cfg);
  const Retrieved got = retrieve(command, pipe.index, pipe.pool, *embedder, decomposer.get(), cfg.selection);
  return plan(command, got.result, *planner, got.groups, *embedder, g.rules(), cfg.reuse_threshold);
}

int cmd_ingest(const Globals& g, const std::vector<std::string>& inputs, const std::string& out_dir, bool strict,
               std::int64_t gap_ms) {
  const Config cfg = effective_config(g);
  if (gap_ms <= 0) gap_ms = cfg.session_gap_ms;
  nlohmann::json summary = nlohmann::json::array();
  std::ostringstream human;
  for (const auto& in : inputs) {
    const auto parsed = parse_log(read_file(in), ParseOptions{strict});
    const auto sessions = sessionize(parsed.events, gap_ms);
    nlohmann::json files = nlohmann::json::array();
    for (const auto& s : sessions) {
      for (const auto& [key, events] : s.env_partitions) {
        const std::string name = fs::path(in).stem().string() + "." + s.id + "." + sanitize(key) + ".jsonl";
        if (!out_dir.empty()) write_file(fs::path(out_dir) / name, serialize_log(events));
        files.push_back({{"session", s.id}, {"env", key}, {"events", events.size()}, {"file", name}});
      }
    }
    nlohmann::json malformed = nlohmann::json::array();
    for (const auto& m : parsed.malformed) malformed.push_back({{"line", m.line}, {"cause", m.cause}});
    summary.push_back({{"input", in},
                       {"events", parsed.events.size()},
                       {"malformed", malformed},
                       {"sessions", sessions.size()},
                       {"partitions", files}});
    human << in << ": " << parsed.events.size() << " events, " << parsed.malformed.size() << " malformed, "
          << sessions.size() << " sessions, " << files.size() << " environment logs\n";
    for (const auto& m : parsed.malformed) human << "  line " << m.line << ": " << m.cause << "\n";
  }
  print(g, summary, human.str());
  return 0;
}

void rebuild_index(TaskRepository& repo, const Config& cfg) {
  auto embedder = make_embedder(cfg);
  repo.save_index(VectorIndex::build(repo.groups(), *embedder));
}

int cmd_mine(const Globals& g, const std::vector<std::string>& inputs, const std::string& repo_dir,
             const std::string& labels) {
  Config cfg = effective_config(g);
  if (!labels.empty()) {
    cfg.labeler = "recorded";
    cfg.labels_path = labels;
  }
  auto labeler = make_labeler(cfg);
  std::vector<fs::path> paths(inputs.begin(), inputs.end());
  MineOptions mo;
  mo.gap_ms = cfg.session_gap_ms;
  mo.rules = &g.rules();
  const auto mined = mine_files(paths, *labeler, mo);
  auto repo = TaskRepository::open(repo_dir);
  const auto added = repo.add(mined.groups);
  rebuild_index(repo, cfg);
  const auto m = repo.manifest();
  nlohmann::json j = stats_to_json(mined.stats);
  j["added"] = added.added;
  j["skipped"] = added.skipped;
  j["repository"] = {{"groups", m.groups}, {"tasks", m.tasks}, {"blocks", m.blocks}};
  std::ostringstream human;
  human << "mined " << mined.stats.groups << " groups from " << mined.stats.files << " logs (" << mined.stats.blocks
        << " task blocks); added " << added.added << ", already present " << added.skipped << "; repository holds "
        << m.groups << " groups\n";
  print(g, j, human.str());
  return 0;
}

int cmd_index_build(const Globals& g, const std::string& repo_dir) {
  const Config cfg = effective_config(g);
  auto repo = TaskRepository::open(repo_dir);
  rebuild_index(repo, cfg);
  print(g, {{"indexed", repo.groups().size()}}, "indexed " + std::to_string(repo.groups().size()) + " groups\n");
  return 0;
}

int cmd_index_query(const Globals& g, const std::string& repo_dir, const std::string& command, std::size_t k) {
  Config cfg = effective_config(g);
  if (k) cfg.selection.k = k;
  const Pipeline pipe = load_pipeline(repo_dir);
  if (pipe.index.empty() && !pipe.pool.empty()) {
    throw Error(ErrorCode::invalid_argument, "repository has no index; run 'index build' first");
  }
  auto embedder = make_embedder(cfg);
  auto decomposer = make_decomposer(cfg);
  const Retrieved got = retrieve(command, pipe.index, pipe.pool, *embedder, decomposer.get(), cfg.selection);
  nlohmann::json j{{"query", {{"env", got.labels.env}, {"act", got.labels.act}, {"title", got.labels.title}}},
                   {"results", nlohmann::json::array()}};
  std::ostringstream human;
  human << "query: " << got.labels.rendering() << "\n";
  for (std::size_t i = 0; i < got.groups.size(); ++i) {
    const auto& grp = got.groups[i];
    const double score = got.result.groups[i].score;
    j["results"].push_back({{"group_id", grp.id}, {"score", score}, {"env", grp.env}, {"act", grp.act}, {"title", grp.title}});
    human << i + 1 << ". " << std::fixed << std::setprecision(3) << score << "  " << grp.env << " " << grp.act << " "
          << grp.title << "\n";
  }
  print(g, j, human.str());
  return 0;
}

int cmd_plan(const Globals& g, const std::string& command, const std::string& repo_dir, bool no_retrieval,
             const std::string& out) {
  const Config cfg = effective_config(g);
  const GlobalPlan p = plan_command(g, command, repo_dir, !no_retrieval, cfg);
  if (!out.empty()) write_file(out, plan_to_json(p).dump(2) + "\n");
  print(g, plan_to_json(p), plan_text(p));
  return 0;
}

int cmd_ground(const Globals& g, const std::string& plan_path, const std::string& scenario, int step) {
  const Config cfg = effective_config(g);
  const GlobalPlan p = load_plan(plan_path);
  auto sim = SimDesktop::load(scenario);
  const Snapshot snap = sim.capture();
  GroundOptions opts;
  opts.min_score = cfg.min_score;
  opts.rules = &g.rules();
  nlohmann::json out = nlohmann::json::array();
  std::ostringstream human;
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    if (step > 0 && static_cast<std::size_t>(step) != i + 1) continue;
    const auto gs = ground(p, i, snap, opts);
    out.push_back(grounded_to_json(gs));
    human << i + 1 << ". " << render_step(p.steps[i]) << " -> E=" << (gs.exec == ExecFlag::Y ? "Y" : "N");
    if (gs.exec == ExecFlag::Y) {
      human << " variant " << gs.variant << ", " << gs.actions.size() << " actions\n";
    } else {
      human << " (" << gs.observation << ")\n";
    }
  }
  if (step > 0 && out.empty()) throw Error(ErrorCode::invalid_argument, "plan has no step " + std::to_string(step));
  print(g, step > 0 ? out.front() : out, human.str());
  return 0;
}

int cmd_run(const Globals& g, const std::string& plan_path, const std::string& command, const std::string& scenario,
            const std::string& repo_dir, const std::string& answers, bool interactive, const std::string& report_path) {
  const Config cfg = effective_config(g);
  const GlobalPlan p = plan_path.empty() ? plan_command(g, command, repo_dir, true, cfg) : load_plan(plan_path);
  auto sim = SimDesktop::load(scenario);
  std::unique_ptr<AssistChannel> assist;
  if (interactive) {
    assist = std::make_unique<TerminalAssist>(std::chrono::milliseconds(cfg.assist_timeout_ms));
  } else {
    assist = std::make_unique<ScriptedAssist>(answers.empty() ? nlohmann::json::object() : read_json(answers));
  }
  RunOptions ro;
  ro.ground.min_score = cfg.min_score;
  ro.max_revisions = cfg.max_revisions;
  ro.ground.rules = &g.rules();
  const RunReport r = run(p, sim, *assist, ro);
  nlohmann::json j = report_to_json(r);
  j["final_state_hash"] = sim.hash();
  if (!report_path.empty()) write_file(report_path, j.dump(2) + "\n");
  std::ostringstream human;
  for (const auto& s : r.steps) {
    human << s.index << ". " << render_step(s.step) << ": " << to_string(s.outcome);
    if (!s.recovery.empty()) human << " after " << s.recovery.size() << " recovery step(s)";
    if (s.outcome != StepOutcome::succeeded && s.outcome != StepOutcome::user_assisted && !s.detail.empty())
      human << " (" << s.detail << ")";
    human << "\n";
  }
  human << (r.success ? "success" : "failure") << ", subtask completion " << r.subtask_completion_rate << ", "
        << r.low_level_actions << " low-level actions\n";
  print(g, j, human.str());
  return r.success ? 0 : 1;
}

int cmd_eval(const Globals& g, const std::string& suite_path, const std::string& repo_dir, bool no_retrieval,
             int jobs, const std::string& out) {
  Config cfg = effective_config(g);
  if (jobs > 0) cfg.eval_jobs = jobs;
  const auto suite = EvalSuite::load(suite_path);
  EvalOptions opts{cfg, !no_retrieval, &g.rules()};
  EvalReport rep;
  if (repo_dir.empty()) {
    rep = evaluate(suite, opts);
  } else {
    const Pipeline pipe = load_pipeline(repo_dir);
    rep = evaluate(suite, pipe.pool, opts);
  }
  const auto j = eval_report_to_json(rep);
  if (auto problems = check_report(j); !problems.empty()) {
    throw Error(ErrorCode::schema, "inconsistent report: " + problems.front());
  }
  if (!out.empty()) write_file(out, j.dump(2) + "\n");
  std::ostringstream human;
  for (const auto& c : rep.cases) {
    human << (c.success ? "PASS " : "FAIL ") << c.name << "  completion " << c.subtask_completion_rate << ", "
          << c.low_level_actions << " actions";
    if (!c.error.empty()) human << "  error: " << c.error;
    for (const auto& f : c.failed_checks) human << "  check: " << f;
    human << "\n";
  }
  human << "success_rate " << rep.success_rate << ", avg_subtask_completion_rate " << rep.avg_subtask_completion_rate
        << ", avg_execution_time_ms " << rep.avg_execution_time_ms << "\n";
  print(g, j, human.str());
  return 0;
}

int cmd_sim_hash(const Globals& g, const std::string& scenario, const std::string& actions_path) {
  auto sim = SimDesktop::load(scenario);
  nlohmann::json results = nlohmann::json::array();
  if (!actions_path.empty()) {
    const auto actions = read_json(actions_path);
    if (!actions.is_array()) throw Error(ErrorCode::schema, actions_path + ": expected an array of actions");
    for (const auto& aj : actions) {
      const auto r = sim.apply(aj.get<LowLevelAction>());
      results.push_back({{"ok", r.ok}, {"detail", r.detail}});
    }
  }
  print(g, {{"hash", sim.hash()}, {"results", results}}, sim.hash() + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mine GUI task knowledge from interaction logs and plan desktop automation."};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--json", g.json, "Machine-readable JSON on stdout");
  app.add_option("--config", g.config, "Configuration file (JSON)");
  app.add_option("--labeler", g.labeler, "deterministic | external | recorded");
  app.add_option("--planner", g.planner, "deterministic | external");
  app.add_option("--embedder", g.embedder, "deterministic | external");
  app.add_option("--dictionary", g.dictionary, "Pattern-rule table replacing the built-in dictionary");

  std::vector<std::string> inputs;
  std::string out, repo, labels, command, plan_path, scenario, answers, suite, actions, backend, report;
  bool strict = false, no_retrieval = false, interactive = false;
  std::int64_t gap_ms = 0;
  std::size_t k = 0;
  int step = 0, jobs = 0;

  auto* ingest = app.add_subcommand("ingest", "Parse, validate and split raw logs into session/environment logs");
  ingest->add_option("--in", inputs, "Raw log files")->required();
  ingest->add_option("--out", out, "Directory for the split logs");
  ingest->add_flag("--strict", strict, "Fail on the first malformed record");
  ingest->add_option("--gap-ms", gap_ms, "Session gap in milliseconds");

  auto* mine = app.add_subcommand("mine", "Mine task groups into a repository and rebuild its index");
  mine->add_option("--in", inputs, "Log files or directories")->required();
  mine->add_option("--repo", repo, "Repository directory")->required();
  mine->add_option("--labels", labels, "Recorded labeler responses");

  auto* index = app.add_subcommand("index", "Build or query the repository index");
  index->require_subcommand(1);
  auto* build = index->add_subcommand("build", "Embed every group in the repository");
  build->add_option("--repo", repo, "Repository directory")->required();
  auto* query = index->add_subcommand("query", "Staged diverse retrieval for a command");
  query->add_option("--repo", repo, "Repository directory")->required();
  query->add_option("--command", command, "Natural-language command")->required();
  query->add_option("--k", k, "Number of groups to retrieve");

  auto* plan_cmd = app.add_subcommand("plan", "Produce a global plan for a command");
  plan_cmd->add_option("command,--command", command, "Natural-language command")->required();
  plan_cmd->add_option("--repo,--corpus", repo, "Repository with mined references");
  plan_cmd->add_option("--backend", g.planner, "Planning backend: deterministic | external");
  plan_cmd->add_flag("--no-retrieval", no_retrieval, "Plan without mined references");
  plan_cmd->add_option("--out", out, "Write the plan JSON here");

  auto* ground_cmd = app.add_subcommand("ground", "Ground plan steps against a scenario's initial screen");
  ground_cmd->add_option("--plan", plan_path, "Plan JSON")->required();
  ground_cmd->add_option("--scenario", scenario, "Simulator scenario")->required();
  ground_cmd->add_option("--step", step, "Only this 1-based step");

  auto* run_cmd = app.add_subcommand("run", "Plan (or load a plan) and execute it on a simulated desktop");
  auto* plan_opt = run_cmd->add_option("plan,--plan", plan_path, "Plan JSON");
  auto* command_opt = run_cmd->add_option("--command", command, "Natural-language command");
  plan_opt->excludes(command_opt);
  run_cmd->add_option("--scenario", scenario, "Simulator scenario")->required();
  run_cmd->add_option("--repo", repo, "Repository with mined references");
  run_cmd->add_option("--assist", answers, "Scripted user-assist answers");
  run_cmd->add_flag("--interactive", interactive, "Prompt on the terminal for user assist");
  run_cmd->add_option("--backend", backend, "GUI backend")->check(CLI::IsMember({"sim"}));
  run_cmd->add_option("--report", report, "Write the run report JSON here");

  auto* eval_cmd = app.add_subcommand("eval", "Run an evaluation suite");
  eval_cmd->add_option("--suite", suite, "Suite JSON")->required();
  eval_cmd->add_option("--repo", repo, "Use this repository instead of the suite's logs");
  eval_cmd->add_flag("--no-retrieval", no_retrieval, "Disable mined references");
  eval_cmd->add_option("--jobs", jobs, "Parallel cases");
  eval_cmd->add_option("--out", out, "Write the report JSON here");

  auto* sim = app.add_subcommand("sim", "Simulator utilities");
  sim->require_subcommand(1);
  auto* hash = sim->add_subcommand("hash", "Print the state hash after optional actions");
  hash->add_option("--scenario", scenario, "Simulator scenario")->required();
  hash->add_option("--actions", actions, "JSON array of low-level actions to apply first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (run_cmd->parsed() && plan_path.empty() && command.empty()) {
    std::cerr << "run: one of --plan or --command is required\n";
    return 2;
  }

  try {
    if (!g.dictionary.empty()) g.custom_rules = RuleSet::load(g.dictionary);
    if (ingest->parsed()) return cmd_ingest(g, inputs, out, strict, gap_ms);
    if (mine->parsed()) return cmd_mine(g, inputs, repo, labels);
    if (build->parsed()) return cmd_index_build(g, repo);
    if (query->parsed()) return cmd_index_query(g, repo, command, k);
    if (plan_cmd->parsed()) return cmd_plan(g, command, repo, no_retrieval, out);
    if (ground_cmd->parsed()) return cmd_ground(g, plan_path, scenario, step);
    if (run_cmd->parsed()) return cmd_run(g, plan_path, command, scenario, repo, answers, interactive, report);
    if (eval_cmd->parsed()) return cmd_eval(g, suite, repo, no_retrieval, jobs, out);
    if (hash->parsed()) return cmd_sim_hash(g, scenario, actions);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
