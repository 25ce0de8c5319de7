#include "mcu/harness.hpp"

#include "mcu/hash.hpp"
#include "mcu/random.hpp"
#include "mcu/strings.hpp"
#include "mcu/task_expr.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <mutex>
#include <set>
#include <thread>

namespace mcu::harness {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(EnvBackend b) { return b == EnvBackend::Mock ? "mock" : "external"; }

EnvBackend parse_env_backend(std::string_view s) {
  if (s == "mock") return EnvBackend::Mock;
  if (s == "external") return EnvBackend::External;
  throw ValidationError("unknown env backend '" + std::string(s) + "'");
}

void validate(const RunPlan& p) {
  if (p.tasks.empty()) throw ValidationError("run plan has no tasks");
  if (p.seeds_per_task < 1) throw ValidationError("seeds per task must be >= 1");
  if (p.world_seeds.empty()) throw ValidationError("run plan has no world seeds");
  if (p.parallelism < 1) throw ValidationError("parallelism must be >= 1");
  if (p.max_steps < 1) throw ValidationError("max_steps must be >= 1");
  if (p.frame_stride < 1) throw ValidationError("frame stride must be >= 1");
  if (p.max_attempts < 1) throw ValidationError("max_attempts must be >= 1");
  if (p.out_dir.empty()) throw ValidationError("run plan has no output directory");
  if (p.backend == EnvBackend::External && p.env_command.empty())
    throw ValidationError("external backend needs an env command");
}

namespace {

TaskExpr substitute(const TaskExpr& e, const Catalog& catalog, std::set<std::string>& categories) {
  switch (e.kind()) {
  case TaskExpr::Kind::Atom: {
    if (const auto* t = catalog.find(e.text())) {
      categories.insert(t->category);
      return TaskExpr::atom(t->description);
    }
    categories.insert("uncategorized");
    return e;
  }
  case TaskExpr::Kind::And:
    return TaskExpr::all_of(substitute(e.left(), catalog, categories), substitute(e.right(), catalog, categories));
  case TaskExpr::Kind::Or:
    return TaskExpr::any_of(substitute(e.left(), catalog, categories), substitute(e.right(), catalog, categories));
  case TaskExpr::Kind::Constrained:
    return TaskExpr::constrained(substitute(e.inner(), catalog, categories), e.text());
  }
  return e;
}

} // namespace

TaskSpec resolve_task(const std::string& entry, const Catalog* catalog) {
  TaskSpec s;
  s.entry = entry;
  if (catalog) {
    if (const auto* t = catalog->find(entry)) {
      s.id = t->id;
      s.text = t->description;
      s.category = t->category;
      return s;
    }
  }
  s.id = str::slugify(entry);
  if (entry.find('[') != std::string::npos) {
    auto expr = parse_task_expr(entry);
    std::set<std::string> cats;
    if (catalog) expr = substitute(expr, *catalog, cats);
    s.text = expr.kind() == TaskExpr::Kind::Atom ? expr.text() : render(expr);
    s.mode = expr.kind() == TaskExpr::Kind::Atom ? forge::TaskMode::Atomic : forge::TaskMode::Compositional;
    s.category = cats.size() == 1 ? *cats.begin() : "compositional";
    return s;
  }
  s.text = std::string(str::trim(entry));
  s.category = "uncategorized";
  return s;
}

namespace {

class InProcessSession : public EnvSession {
public:
  explicit InProcessSession(proto::MockEnvOptions o) : env_(std::move(o)) {}
  proto::Stream& stream() override { return env_.stream(); }

private:
  proto::InProcessEnv env_;
};

class ChildSession : public EnvSession {
public:
  explicit ChildSession(const std::string& command) : env_(command) {}
  proto::Stream& stream() override { return env_.stream(); }

private:
  proto::ChildProcessEnv env_;
};

} // namespace

EnvFactory mock_env_factory(proto::MockEnvOptions options) {
  return [options] { return std::make_unique<InProcessSession>(options); };
}

EnvFactory external_env_factory(std::string command) {
  return [command] { return std::make_unique<ChildSession>(command); };
}

void RunReport::aggregate() {
  dimension_means = {};
  category_means.clear();
  completed = failed = 0;
  failures.clear();
  std::map<std::string, std::size_t> per_cat;
  for (const auto& c : cells) {
    if (!c.ok || !c.score) {
      ++failed;
      failures.push_back(c.trajectory_id + ": " + c.error);
      continue;
    }
    ++completed;
    auto a = c.score->anchors();
    auto& cat = category_means[c.category];
    ++per_cat[c.category];
    for (std::size_t i = 0; i < eval::kDimensionCount; ++i) {
      dimension_means[i] += a[i];
      cat[i] += a[i];
    }
  }
  if (completed)
    for (auto& v : dimension_means) v /= static_cast<double>(completed);
  for (auto& [cat, v] : category_means)
    for (auto& x : v) x /= static_cast<double>(per_cat[cat]);
}

namespace {

json dims_json(const std::array<double, eval::kDimensionCount>& v) {
  json j = json::object();
  for (auto d : eval::kDimensions) j[std::string(eval::to_string(d))] = v[static_cast<std::size_t>(d)];
  return j;
}

std::array<double, eval::kDimensionCount> dims_from(const json& j) {
  std::array<double, eval::kDimensionCount> v{};
  for (auto d : eval::kDimensions) v[static_cast<std::size_t>(d)] = j.at(std::string(eval::to_string(d))).get<double>();
  return v;
}

} // namespace

std::string RunReport::to_json(bool include_timing) const {
  json j;
  j["agent"] = agent;
  j["difficulty"] = std::string(mcu::to_string(difficulty));
  auto& cs = j["cells"] = json::array();
  for (const auto& c : cells) {
    json x{{"task_id", c.task_id},
           {"task", c.task},
           {"category", c.category},
           {"seed_index", c.seed_index},
           {"world_seed", c.world_seed},
           {"rng_seed", c.rng_seed},
           {"trajectory", c.trajectory_id},
           {"ok", c.ok},
           {"error", c.error},
           {"attempts", c.attempts},
           {"init_retries", c.init_retries}};
    if (include_timing) x["wall_ms"] = c.wall_ms;
    x["score"] = c.score ? json::parse(eval::to_json(*c.score)) : json(nullptr);
    cs.push_back(std::move(x));
  }
  j["dimension_means"] = dims_json(dimension_means);
  j["category_means"] = json::object();
  for (const auto& [cat, v] : category_means) j["category_means"][cat] = dims_json(v);
  j["completed"] = completed;
  j["failed"] = failed;
  j["failures"] = failures;
  return j.dump(2);
}

std::string RunReport::hash() const { return sha256_hex(to_json(false)); }

RunReport run_report_from_json(std::string_view text) {
  try {
    auto j = json::parse(text);
    RunReport r;
    r.agent = j.at("agent").get<std::string>();
    r.difficulty = parse_difficulty(j.at("difficulty").get<std::string>());
    for (const auto& x : j.at("cells")) {
      CellResult c;
      c.task_id = x.at("task_id").get<std::string>();
      c.task = x.at("task").get<std::string>();
      c.category = x.at("category").get<std::string>();
      c.seed_index = x.at("seed_index").get<int>();
      c.world_seed = x.at("world_seed").get<std::uint64_t>();
      c.rng_seed = x.at("rng_seed").get<std::uint64_t>();
      c.trajectory_id = x.at("trajectory").get<std::string>();
      c.ok = x.at("ok").get<bool>();
      c.error = x.value("error", "");
      c.attempts = x.value("attempts", 0);
      c.init_retries = x.value("init_retries", 0);
      c.wall_ms = x.value("wall_ms", 0.0);
      if (!x.at("score").is_null()) c.score = eval::score_report_from_json(x["score"].dump());
      r.cells.push_back(std::move(c));
    }
    r.aggregate();
    if (j.contains("dimension_means")) r.dimension_means = dims_from(j["dimension_means"]);
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("run report: ") + e.what());
  }
}

namespace {

struct TaskState {
  TaskSpec spec;
  std::optional<forge::TaskConfig> config;
  std::optional<eval::CriteriaSet> criteria;
  std::string error;
};

/// Runs fn(i) for i in [0, n) on `workers` threads; fn must not throw.
template <class F> void parallel_for(std::size_t n, int workers, F&& fn) {
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers && static_cast<std::size_t>(w) < n; ++w) pool.emplace_back(loop);
  loop();
  for (auto& t : pool) t.join();
}

} // namespace

RunReport run_batch(const RunPlan& plan, const RunContext& ctx) {
  validate(plan);
  if (!ctx.config_client || !ctx.judge_client) throw ValidationError("run_batch: model clients not set");
  if (!ctx.forge.prompts) throw ValidationError("run_batch: no prompt library");
  if (!ctx.env) throw ValidationError("run_batch: no env backend");
  const auto& prompts = *ctx.forge.prompts;
  auto traj_root = (fs::path(plan.out_dir) / "trajectories").string();
  fs::create_directories(traj_root);

  std::vector<TaskState> tasks;
  for (const auto& entry : plan.tasks) {
    TaskState t;
    try {
      t.spec = resolve_task(entry, ctx.catalog);
    } catch (const Error& e) {
      t.spec.entry = entry;
      t.spec.id = str::slugify(entry);
      t.spec.text = entry;
      t.spec.category = "uncategorized";
      t.error = e.what();
    }
    tasks.push_back(std::move(t));
  }

  parallel_for(tasks.size(), plan.parallelism, [&](std::size_t i) {
    auto& t = tasks[i];
    if (!t.error.empty()) return;
    try {
      forge::GenerateOptions go;
      go.max_attempts = plan.max_attempts;
      t.config = forge::generate(t.spec.text, t.spec.mode, plan.difficulty, *ctx.config_client, ctx.forge, go);
      t.criteria = eval::generate_criteria(t.spec.text, *ctx.judge_client, prompts);
    } catch (const std::exception& e) {
      t.error = e.what();
    }
  });

  // the first session doubles as the reachability check for the backend
  std::vector<std::unique_ptr<EnvSession>> sessions;
  std::mutex sessions_mu;
  sessions.push_back(ctx.env());

  RunReport report;
  report.agent = plan.agent;
  report.difficulty = plan.difficulty;
  for (const auto& t : tasks)
    for (int s = 0; s < plan.seeds_per_task; ++s) {
      CellResult c;
      c.task_id = t.spec.id;
      c.task = t.spec.text;
      c.category = t.spec.category;
      c.seed_index = s;
      c.world_seed = plan.world_seeds[static_cast<std::size_t>(s) % plan.world_seeds.size()];
      c.rng_seed = fnv1a(t.spec.id, plan.seed ^ 0x9e3779b97f4a7c15ULL) + static_cast<std::uint64_t>(s);
      c.trajectory_id = str::slugify(t.spec.id) + "-" + std::to_string(s);
      report.cells.push_back(std::move(c));
    }

  auto acquire = [&]() -> std::unique_ptr<EnvSession> {
    {
      std::lock_guard lk(sessions_mu);
      if (!sessions.empty()) {
        auto s = std::move(sessions.back());
        sessions.pop_back();
        return s;
      }
    }
    return ctx.env();
  };
  auto release = [&](std::unique_ptr<EnvSession> s) {
    std::lock_guard lk(sessions_mu);
    sessions.push_back(std::move(s));
  };

  const std::size_t per_task = static_cast<std::size_t>(plan.seeds_per_task);
  parallel_for(report.cells.size(), plan.parallelism, [&](std::size_t i) {
    auto& cell = report.cells[i];
    const auto& task = tasks[i / per_task];
    auto start = std::chrono::steady_clock::now();
    std::unique_ptr<EnvSession> session;
    try {
      if (!task.error.empty()) throw Error("task setup failed: " + task.error);
      auto config = *task.config;
      cell.attempts = config.provenance.attempts;
      session = acquire();
      auto& stream = session->stream();
      for (int retry = 0;; ++retry) {
        auto init = forge::sample_initial_state(config, cell.world_seed, ctx.sources, cell.rng_seed);
        auto ack = std::get<proto::InitAck>(proto::request(stream, proto::Init{task.spec.text, init}));
        if (ack.ok) break;
        if (retry >= plan.max_init_retries) throw Error("env init failed: " + ack.error_log);
        forge::GenerateOptions go;
        go.max_attempts = plan.max_attempts;
        go.initial_feedback = ack.error_log;
        config = forge::generate(task.spec.text, task.spec.mode, plan.difficulty, *ctx.config_client, ctx.forge, go);
        cell.attempts += config.provenance.attempts;
        cell.init_retries = retry + 1;
      }
      auto done = std::get<proto::TrajectoryDone>(
          proto::request(stream, proto::Rollout{plan.max_steps, cell.trajectory_id, traj_root, plan.agent}));
      if (!done.ok) throw Error("rollout failed: " + done.error_log);
      auto traj = eval::read_trajectory(done.path);
      cell.score = eval::score_trajectory(traj, *task.criteria, *ctx.judge_client, prompts, plan.frame_stride);
      cell.ok = true;
      release(std::move(session));
    } catch (const proto::ProtocolError& e) {
      cell.error = e.what();  // connection state unknown: drop the session
    } catch (const std::bad_variant_access&) {
      cell.error = "env replied with an unexpected message type";
    } catch (const std::exception& e) {
      cell.error = e.what();
      if (session) release(std::move(session));
    }
    cell.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  });

  report.aggregate();
  return report;
}

} // namespace mcu::harness
