#pragma once

#include "mcu/autoeval.hpp"
#include "mcu/catalog.hpp"
#include "mcu/config_forge.hpp"
#include "mcu/env_init.hpp"
#include "mcu/mock_env.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mcu::harness {

enum class EnvBackend { Mock, External };
std::string_view to_string(EnvBackend b);
EnvBackend parse_env_backend(std::string_view s);

struct RunPlan {
  std::vector<std::string> tasks;  // catalog ids, expressions over ids, or free text
  Difficulty difficulty = Difficulty::Simple;
  std::uint64_t seed = 0;
  int seeds_per_task = 1;
  std::vector<std::uint64_t> world_seeds = {19961103, 20010501, 12345};
  EnvBackend backend = EnvBackend::Mock;
  std::string env_command;  // external backend
  std::string agent = "mock-agent";
  std::string out_dir;
  int parallelism = 1;
  int max_steps = 90;
  std::size_t frame_stride = 30;
  int max_attempts = 3;
  int max_init_retries = 1;
};

/// Throws ValidationError when the plan breaks an invariant.
void validate(const RunPlan& plan);

struct TaskSpec {
  std::string entry;  // as written in the plan
  std::string id;     // catalog id or slug
  std::string text;   // what the models see
  std::string category;
  forge::TaskMode mode = forge::TaskMode::Atomic;
};
TaskSpec resolve_task(const std::string& entry, const Catalog* catalog);

/// One connection to an env runner; one request in flight at a time.
class EnvSession {
public:
  virtual ~EnvSession() = default;
  virtual proto::Stream& stream() = 0;
};
using EnvFactory = std::function<std::unique_ptr<EnvSession>()>;
EnvFactory mock_env_factory(proto::MockEnvOptions options);
EnvFactory external_env_factory(std::string command);

struct RunContext {
  forge::ForgeContext forge;
  forge::InitialStateSources sources;
  const Catalog* catalog = nullptr;
  ModelClient* config_client = nullptr;
  ModelClient* judge_client = nullptr;
  EnvFactory env;
};

struct CellResult {
  std::string task_id;
  std::string task;
  std::string category;
  int seed_index = 0;
  std::uint64_t world_seed = 0;
  std::uint64_t rng_seed = 0;
  std::string trajectory_id;
  bool ok = false;
  std::string error;
  int attempts = 0;
  int init_retries = 0;
  double wall_ms = 0;
  std::optional<eval::ScoreReport> score;
};

struct RunReport {
  std::string agent;
  Difficulty difficulty = Difficulty::Simple;
  std::vector<CellResult> cells;  // task-major, then seed order
  std::array<double, eval::kDimensionCount> dimension_means{};
  std::map<std::string, std::array<double, eval::kDimensionCount>> category_means;
  std::size_t completed = 0;
  std::size_t failed = 0;
  std::vector<std::string> failures;

  /// Recomputes the aggregates from `cells`.
  void aggregate();
  std::string to_json(bool include_timing = true) const;
  /// sha256 of the report without wall times.
  std::string hash() const;
};

RunReport run_report_from_json(std::string_view text);

/// Configs and criteria are produced once per task; each (task, seed) cell
/// then runs init -> rollout -> score in isolation. Env init failures trigger
/// config regeneration with the returned error log.
RunReport run_batch(const RunPlan& plan, const RunContext& ctx);

} // namespace mcu::harness
