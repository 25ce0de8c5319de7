#pragma once

#include "mcu/catalog.hpp"
#include "mcu/command.hpp"
#include "mcu/lint.hpp"
#include "mcu/model_client.hpp"
#include "mcu/prompts.hpp"
#include "mcu/registry.hpp"
#include "mcu/world.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcu::forge {

enum class TaskMode { Atomic, Compositional };
std::string_view to_string(TaskMode m);
TaskMode parse_task_mode(std::string_view s);

struct Provenance {
  int attempts = 0;           // generation sends
  int reflection_calls = 0;
  std::string model;
  std::vector<std::string> reflection_notes;
};

struct TaskConfig {
  std::string task;         // atomic description or rendered task expression
  TaskMode mode = TaskMode::Atomic;
  std::string description;  // one-line instruction for text-conditioned agents
  std::vector<cmd::Command> commands;
  Difficulty difficulty = Difficulty::Simple;
  Provenance provenance;
  std::vector<std::string> warnings;
};

std::string to_json(const TaskConfig& config);
TaskConfig task_config_from_json(std::string_view text);

/// Static inputs shared by every generation call.
struct ForgeContext {
  const PromptLibrary* prompts = nullptr;
  const cmd::IdRegistry* registry = nullptr;
  const cmd::RecipeBook* recipes = nullptr;
  cmd::LintPolicy policy;
};

/// Template for the mode plus the task; hard difficulty appends the
/// adverse-conditions clause, and a non-empty `feedback` appends the
/// regeneration request with the previous error log.
PromptBundle build_prompt(const PromptLibrary& prompts, const std::string& task, Difficulty difficulty,
                          TaskMode mode, int attempt = 1, std::string_view feedback = {});

struct DraftConfig {
  std::string description;
  std::vector<cmd::Command> commands;
  std::vector<std::string> command_errors;  // "<line>: <message>" for unparseable commands
  std::vector<std::string> warnings;
};

/// Extracts the first "Task description:" line and every "- /..." line after
/// "custom_init_commands:". Throws ParseError when either is missing.
DraftConfig parse_response(std::string_view text);

struct Verdict {
  bool ok = false;
  std::string reason;
};
/// Reads "Verdict: yes|no" and an optional "Reason:" line.
std::optional<Verdict> parse_verdict(std::string_view text);

struct VerifyReport {
  std::vector<std::string> command_errors;
  std::vector<cmd::LintFinding> findings;
  std::optional<sim::SimReport> sim;
  std::optional<Verdict> reflection;  // absent when an earlier stage failed
  bool passed = false;

  /// Text block fed back to the generator on regeneration.
  std::string error_log() const;
};

/// Lints, then simulates, then asks the model; stops at the first failing stage.
VerifyReport verify(const TaskConfig& config, ModelClient& client, const ForgeContext& ctx);

class ExhaustedAttemptsError : public Error {
public:
  ExhaustedAttemptsError(int attempts, VerifyReport last, std::string last_error);
  int attempts() const { return attempts_; }
  const VerifyReport& last_report() const { return last_; }

private:
  int attempts_;
  VerifyReport last_;
};

struct GenerateOptions {
  int max_attempts = 3;
  std::string initial_feedback;              // e.g. an env error log from a failed init
  ModelClient* reflection_client = nullptr;  // defaults to the generation client
};

/// build_prompt -> send -> parse_response -> verify, re-prompting with the
/// error log until a config passes or attempts run out.
TaskConfig generate(const std::string& task, TaskMode mode, Difficulty difficulty, ModelClient& client,
                    const ForgeContext& ctx, const GenerateOptions& options = {});

} // namespace mcu::forge
