#include "cli.hpp"

#include "mcu/alignment.hpp"
#include "mcu/annotation_service.hpp"
#include "mcu/app_config.hpp"
#include "mcu/autoeval.hpp"
#include "mcu/catalog.hpp"
#include "mcu/config_forge.hpp"
#include "mcu/env_init.hpp"
#include "mcu/harness.hpp"
#include "mcu/lint.hpp"
#include "mcu/mock_env.hpp"
#include "mcu/model_client.hpp"
#include "mcu/prompts.hpp"
#include "mcu/report.hpp"
#include "mcu/strings.hpp"
#include "mcu/task_expr.hpp"
#include "mcu/trajectory.hpp"
#include "mcu/world.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <unistd.h>

namespace mcu::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  std::string difficulty = "simple";
  std::string env = "mock";
  std::string out;
  std::string replay;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "key=value settings file");
  sub->add_option("--seed", c.seed, "seed for every random choice");
  sub->add_option("--difficulty", c.difficulty, "simple or hard")->check(CLI::IsMember({"simple", "hard"}));
  sub->add_option("--env", c.env, "mock or external")->check(CLI::IsMember({"mock", "external"}));
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--replay", c.replay, "replay fixture for every model call (overrides model.replay)");
}

/// Everything loaded from the data directory.
struct Workspace {
  AppConfig cfg;
  std::string data_dir;
  CategoryTable categories;
  Catalog catalog;
  cmd::IdRegistry registry;
  cmd::RecipeBook recipes;
  PromptLibrary prompts;
  forge::SpawnDb spawns;
  forge::PreconditionRules preconditions;
  forge::DistractorPool distractors;

  forge::ForgeContext forge_context() const { return {&prompts, &registry, &recipes, {}}; }
  forge::InitialStateSources sources() const { return {&spawns, &preconditions, &distractors}; }
};

std::string path_in(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

std::unique_ptr<Workspace> load_workspace(const Common& c) {
  auto w = std::make_unique<Workspace>();
  if (!c.config.empty()) w->cfg = AppConfig::load(c.config);
  w->cfg.apply_environment();
  w->data_dir = w->cfg.get_or("data_dir", default_data_dir());
  const auto& d = w->data_dir;
  w->categories = CategoryTable::load(path_in(d, "categories.tsv"));
  w->catalog = load_catalog(w->cfg.get_or("catalog", path_in(d, "catalog.tsv")), w->categories);
  auto subsets = fs::path(d) / "subsets";
  if (fs::is_directory(subsets))
    for (const auto& e : fs::directory_iterator(subsets))
      if (e.path().extension() == ".txt")
        w->catalog.add_subset(e.path().stem().string(), load_subset_file(e.path().string()));
  w->registry = cmd::IdRegistry::load(path_in(d, "registry.txt"));
  w->recipes = cmd::RecipeBook::load(path_in(d, "recipes.tsv"));
  w->prompts = PromptLibrary::load(path_in(d, "prompts"));
  w->spawns = forge::SpawnDb::load(path_in(d, "spawns.tsv"));
  w->preconditions = forge::PreconditionRules::load(path_in(d, "preconditions.tsv"));
  w->distractors = forge::DistractorPool::load(path_in(d, "distractors.tsv"));
  return w;
}

/// `role` is "model" (config generation) or "judge" (evaluation); judge keys
/// fall back to the model keys.
std::unique_ptr<ModelClient> make_model(const AppConfig& cfg, const std::string& role, const std::string& replay) {
  auto key = [&](const std::string& k) -> std::optional<std::string> {
    if (auto v = cfg.get(role + "." + k)) return v;
    if (role != "model") return cfg.get("model." + k);
    return std::nullopt;
  };
  auto vision = key("vision").value_or("true") != "false" ? Capability::Vision : Capability::Text;
  std::string fixture = replay.empty() ? key("replay").value_or("") : replay;
  if (!fixture.empty()) return std::make_unique<ReplayClient>(ReplayClient::load_entries(fixture), vision);
  HttpClientSettings s;
  s.endpoint = key("endpoint").value_or(s.endpoint);
  s.path = key("path").value_or(s.path);
  s.model = key("name").value_or(s.model);
  s.api_key = key("api_key").value_or("");
  s.capability = vision;
  s.timeout_seconds = static_cast<int>(cfg.get_int(role + ".timeout", s.timeout_seconds));
  if (s.api_key.empty() && s.endpoint.starts_with("https://api."))
    throw ValidationError("no API key: set model.api_key, MCU_API_KEY or OPENAI_API_KEY, or pass --replay");
  return make_http_client(s);
}

void write_out(const Common& c, const std::string& name, const std::string& content) {
  if (c.out.empty()) return;
  fs::create_directories(c.out);
  str::write_file(path_in(c.out, name), content);
}

/// A TaskConfig JSON file, or plain text with one "/command" per line.
forge::TaskConfig read_config_input(const std::string& path, const std::string& task) {
  auto text = str::read_file(path);
  auto t = str::trim(text);
  if (!t.empty() && t.front() == '{') {
    auto cfg = forge::task_config_from_json(t);
    if (!task.empty()) cfg.task = task;
    return cfg;
  }
  forge::TaskConfig cfg;
  cfg.task = task;
  std::size_t lineno = 0;
  for (const auto& raw : str::split(text, '\n')) {
    ++lineno;
    auto line = str::trim(raw);
    while (!line.empty() && (line.front() == '-' || line.front() == '*' || line.front() == ' ')) line.remove_prefix(1);
    if (line.empty() || line.front() != '/') continue;
    try {
      cfg.commands.push_back(cmd::parse_command(line));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return cfg;
}

harness::EnvFactory env_factory(const Common& c, const Workspace& w, const std::string& env_command) {
  if (harness::parse_env_backend(c.env) == harness::EnvBackend::Mock) {
    proto::MockEnvOptions o;
    o.registry = &w.registry;
    return harness::mock_env_factory(o);
  }
  auto command = env_command.empty() ? w.cfg.get_or("env.command", "") : env_command;
  if (command.empty()) throw ValidationError("--env external needs --env-command or env.command");
  return harness::external_env_factory(command);
}

std::vector<eval::ScoreReport> load_scores(const std::string& path) {
  std::vector<eval::ScoreReport> out;
  for (const auto& raw : str::split(str::read_file(path), '\n')) {
    auto line = str::trim(raw);
    if (!line.empty()) out.push_back(eval::score_report_from_json(line));
  }
  return out;
}

std::optional<eval::CriteriaSet> read_criteria(const std::string& path, const std::string& task) {
  if (path.empty()) return std::nullopt;
  return eval::parse_criteria(str::read_file(path), task);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minecraft task generation, environment set-up and trajectory evaluation"};
  app.require_subcommand(1);
  Common c;

  // gen-config
  auto* gen = app.add_subcommand("gen-config", "generate and verify an initialization config for one task");
  add_common(gen, c);
  std::string task, mode_name;
  int max_attempts = 3;
  gen->add_option("--task", task, "catalog id, task expression or free text")->required();
  gen->add_option("--mode", mode_name, "atomic or compositional (default: inferred)");
  gen->add_option("--max-attempts", max_attempts)->check(CLI::PositiveNumber);

  // compose
  auto* compose = app.add_subcommand("compose", "draw compositional tasks from the catalog");
  add_common(compose, c);
  std::string format = "three-mixed";
  int count = 1;
  compose->add_option("--format", format, "three-mixed, two or single-from-scratch");
  compose->add_option("--count", count)->check(CLI::PositiveNumber);

  // lint / simulate
  std::string input;
  auto* lint = app.add_subcommand("lint", "static checks on a config");
  add_common(lint, c);
  lint->add_option("--input", input, "config JSON or command list")->required();
  lint->add_option("--task", task);
  auto* simulate = app.add_subcommand("simulate", "execute a config against the desk-scale world");
  add_common(simulate, c);
  std::uint64_t world_seed = 19961103;
  simulate->add_option("--input", input, "config JSON or command list")->required();
  simulate->add_option("--task", task);
  simulate->add_option("--world-seed", world_seed);

  // run
  auto* runc = app.add_subcommand("run", "batch evaluation over tasks and seeds");
  add_common(runc, c);
  std::vector<std::string> tasks;
  std::string tasks_file, subset, agent = "mock-agent", env_command;
  int seeds = 1, parallel = 1, max_steps = 90;
  std::size_t stride = 30;
  runc->add_option("--tasks", tasks, "catalog ids, expressions or free text");
  runc->add_option("--tasks-file", tasks_file, "one task per line");
  runc->add_option("--subset", subset, "named catalog subset, e.g. mcu-turbo");
  runc->add_option("--seeds-per-task", seeds)->check(CLI::PositiveNumber);
  runc->add_option("--parallel", parallel)->check(CLI::PositiveNumber);
  runc->add_option("--agent", agent);
  runc->add_option("--env-command", env_command, "runner command for --env external");
  runc->add_option("--max-steps", max_steps)->check(CLI::PositiveNumber);
  runc->add_option("--frame-stride", stride)->check(CLI::PositiveNumber);
  runc->add_option("--max-attempts", max_attempts)->check(CLI::PositiveNumber);

  // eval / compare
  std::string traj_dir, criteria_path;
  auto* evalc = app.add_subcommand("eval", "score one trajectory");
  add_common(evalc, c);
  evalc->add_option("--trajectory", traj_dir)->required();
  evalc->add_option("--task", task, "defaults to the trajectory's task");
  evalc->add_option("--criteria", criteria_path, "criteria file; generated when absent");
  evalc->add_option("--frame-stride", stride)->check(CLI::PositiveNumber);
  auto* comparec = app.add_subcommand("compare", "compare two trajectories of one task");
  add_common(comparec, c);
  std::string dir_a, dir_b, compare_mode = "score-diff";
  comparec->add_option("--a", dir_a)->required();
  comparec->add_option("--b", dir_b)->required();
  comparec->add_option("--task", task);
  comparec->add_option("--criteria", criteria_path);
  comparec->add_option("--mode", compare_mode)->check(CLI::IsMember({"score-diff", "direct"}));
  comparec->add_option("--frame-stride", stride)->check(CLI::PositiveNumber);

  // align
  auto* alignc = app.add_subcommand("align", "agreement between automatic and human judgments");
  add_common(alignc, c);
  std::string annotations_path, comparisons_path, scores_path;
  alignc->add_option("--annotations", annotations_path, "exported annotation records")->required();
  alignc->add_option("--comparisons", comparisons_path, "automatic comparisons, one JSON object per line");
  alignc->add_option("--scores", scores_path, "automatic score reports, one JSON object per line");

  // serve-annotations
  auto* serve = app.add_subcommand("serve-annotations", "annotation collection HTTP API");
  add_common(serve, c);
  std::string host = "127.0.0.1", export_path;
  int port = 8080;
  serve->add_option("--trajectories", traj_dir)->required();
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--export", export_path, "append-only record file (default <out>/annotations.jsonl)");

  // report
  auto* reportc = app.add_subcommand("report", "tabulate one or more run reports");
  add_common(reportc, c);
  std::vector<std::string> report_paths;
  std::string report_format = "table", dimension = "TaskProgress";
  reportc->add_option("--reports", report_paths)->required();
  reportc->add_option("--format", report_format, "table, csv or json");
  reportc->add_option("--dimension", dimension);

  // mock-env
  auto* mock = app.add_subcommand("mock-env", "serve the env protocol on stdin/stdout with the mock runner");
  add_common(mock, c);

  std::vector<char*> argv;
  std::vector<std::string> storage(args);
  for (auto& a : storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    auto difficulty = parse_difficulty(c.difficulty);
    auto w = load_workspace(c);

    if (*gen) {
      auto spec = harness::resolve_task(task, &w->catalog);
      auto mode = mode_name.empty() ? spec.mode : forge::parse_task_mode(mode_name);
      auto client = make_model(w->cfg, "model", c.replay);
      forge::GenerateOptions go;
      go.max_attempts = max_attempts;
      auto cfg = forge::generate(spec.text, mode, difficulty, *client, w->forge_context(), go);
      auto init = forge::sample_initial_state(cfg, harness::RunPlan{}.world_seeds.front(), w->sources(), c.seed);
      out << forge::to_json(cfg) << "\n";
      write_out(c, "config.json", forge::to_json(cfg) + "\n");
      write_out(c, "env_init.json", forge::to_json(init) + "\n");
      return 0;
    }
    if (*compose) {
      auto f = parse_composition_format(format);
      std::string lines;
      for (int i = 0; i < count; ++i)
        lines += render(compose_random(w->catalog, f, c.seed + static_cast<std::uint64_t>(i))) + "\n";
      out << lines;
      write_out(c, "compositions.txt", lines);
      return 0;
    }
    if (*lint) {
      auto cfg = read_config_input(input, task);
      cmd::LintContext ctx{&w->registry, &w->recipes, {}};
      auto findings = cmd::lint_config(cfg.commands, cfg.task, ctx);
      std::string text;
      for (const auto& f : findings)
        text += f.rule + " " + std::string(cmd::to_string(f.severity)) + " command " +
                std::to_string(f.command_index + 1) + ": " + f.message + "\n";
      if (findings.empty()) text = "clean\n";
      out << text;
      write_out(c, "lint.txt", text);
      return cmd::has_errors(findings) ? 1 : 0;
    }
    if (*simulate) {
      auto cfg = read_config_input(input, task);
      cfg.difficulty = difficulty;
      auto init = forge::sample_initial_state(cfg, world_seed, w->sources(), c.seed);
      auto commands = init.all_commands();
      auto report = sim::run_config(commands, &w->registry);
      out << report.to_text();
      write_out(c, "simulation.txt", report.to_text());
      write_out(c, "env_init.json", forge::to_json(init) + "\n");
      return report.ok() ? 0 : 1;
    }
    if (*runc) {
      harness::RunPlan plan;
      plan.tasks = tasks;
      if (!tasks_file.empty())
        for (const auto& raw : str::split(str::read_file(tasks_file), '\n'))
          if (auto t = str::trim(raw); !t.empty() && t.front() != '#') plan.tasks.emplace_back(t);
      if (!subset.empty())
        for (const auto& e : w->catalog.subset(subset)) plan.tasks.push_back(e);
      plan.difficulty = difficulty;
      plan.seed = c.seed;
      plan.seeds_per_task = seeds;
      plan.backend = harness::parse_env_backend(c.env);
      plan.env_command = env_command;
      plan.agent = agent;
      plan.out_dir = c.out.empty() ? "run-out" : c.out;
      plan.parallelism = parallel;
      plan.max_steps = max_steps;
      plan.frame_stride = stride;
      plan.max_attempts = max_attempts;
      auto config_client = make_model(w->cfg, "model", c.replay);
      auto judge_client = make_model(w->cfg, "judge", c.replay);
      auto limit = w->cfg.get_int("model.max_in_flight", 8);
      ThrottledClient cfg_throttled(*config_client, limit), judge_throttled(*judge_client, limit);
      harness::RunContext ctx;
      ctx.forge = w->forge_context();
      ctx.sources = w->sources();
      ctx.catalog = &w->catalog;
      ctx.config_client = &cfg_throttled;
      ctx.judge_client = &judge_throttled;
      ctx.env = env_factory(c, *w, env_command);
      auto report = harness::run_batch(plan, ctx);
      fs::create_directories(plan.out_dir);
      str::write_file(path_in(plan.out_dir, "report.json"), report.to_json() + "\n");
      out << harness::emit_report({report}, harness::ReportFormat::Table);
      out << "completed " << report.completed << ", failed " << report.failed << "\n";
      for (const auto& f : report.failures) out << "  " << f << "\n";
      out << "report hash " << report.hash() << "\n";
      return 0;
    }
    if (*evalc) {
      auto traj = eval::read_trajectory(traj_dir);
      if (task.empty()) task = traj.meta.task;
      auto judge = make_model(w->cfg, "judge", c.replay);
      auto criteria = read_criteria(criteria_path, task);
      if (!criteria) criteria = eval::generate_criteria(task, *judge, w->prompts);
      auto score = eval::score_trajectory(traj, *criteria, *judge, w->prompts, stride);
      out << eval::to_json(score) << "\n";
      write_out(c, "criteria.txt", criteria->render());
      write_out(c, "score.json", eval::to_json(score) + "\n");
      return 0;
    }
    if (*comparec) {
      auto a = eval::read_trajectory(dir_a), b = eval::read_trajectory(dir_b);
      if (task.empty()) task = a.meta.task;
      if (a.meta.task != b.meta.task && task == a.meta.task)
        throw ValidationError("trajectories belong to different tasks; pass --task to override");
      auto judge = make_model(w->cfg, "judge", c.replay);
      auto criteria = read_criteria(criteria_path, task);
      if (!criteria) criteria = eval::generate_criteria(task, *judge, w->prompts);
      align::AutoComparison cmp{task, a.meta.id, b.meta.id, {}};
      if (compare_mode == "direct") {
        cmp.result = eval::compare_direct(a, b, *criteria, *judge, w->prompts, stride);
      } else {
        auto sa = eval::score_trajectory(a, *criteria, *judge, w->prompts, stride);
        auto sb = eval::score_trajectory(b, *criteria, *judge, w->prompts, stride);
        cmp.result = eval::compare_scores(sa, sb);
        write_out(c, "scores.jsonl", eval::to_json(sa) + "\n" + eval::to_json(sb) + "\n");
      }
      out << align::to_json(cmp) << "\n";
      write_out(c, "comparison.json", align::to_json(cmp) + "\n");
      return 0;
    }
    if (*alignc) {
      auto annotations = align::load_annotations(annotations_path);
      std::vector<align::AutoComparison> comparisons;
      if (!comparisons_path.empty()) comparisons = align::load_auto_comparisons(comparisons_path);
      std::vector<eval::ScoreReport> scores;
      if (!scores_path.empty()) scores = load_scores(scores_path);
      std::map<std::string, std::string> categories;
      for (const auto& t : w->catalog.tasks()) categories[t.id] = t.category;
      auto report = align::alignment_report(annotations, comparisons, scores, categories);
      out << report.to_text();
      write_out(c, "alignment.json", report.to_json() + "\n");
      return 0;
    }
    if (*serve) {
      annot::ServiceConfig sc;
      sc.trajectories_dir = traj_dir;
      sc.seed = c.seed;
      sc.export_path = !export_path.empty() ? export_path : c.out.empty() ? "" : path_in(c.out, "annotations.jsonl");
      if (!c.out.empty()) fs::create_directories(c.out);
      sigset_t set;
      sigemptyset(&set);
      sigaddset(&set, SIGINT);
      sigaddset(&set, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &set, nullptr);
      annot::AnnotationService service(sc);
      int bound = service.start(host, port);
      out << "listening on http://" << host << ":" << bound << std::endl;
      int sig = 0;
      sigwait(&set, &sig);
      service.stop();
      return 0;
    }
    if (*reportc) {
      std::vector<harness::RunReport> reports;
      for (const auto& p : report_paths) reports.push_back(harness::run_report_from_json(str::read_file(p)));
      auto fmt = harness::parse_report_format(report_format);
      auto text = harness::emit_report(reports, fmt, eval::parse_dimension(dimension));
      out << text;
      write_out(c, fmt == harness::ReportFormat::Csv ? "report.csv" : fmt == harness::ReportFormat::Json ? "report.json"
                                                                                                         : "report.txt",
                text);
      return 0;
    }
    if (*mock) {
      proto::MockEnvOptions o;
      o.registry = &w->registry;
      proto::MockEnv env(o);
      proto::FdStream io(STDIN_FILENO, STDOUT_FILENO, false);
      env.serve(io);
      return 0;
    }
  } catch (const forge::ExhaustedAttemptsError& e) {
    err << "error: " << e.what() << "\n" << e.last_report().error_log();
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

} // namespace mcu::cli
