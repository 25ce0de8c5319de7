#include "mcu/config_forge.hpp"

#include "mcu/strings.hpp"

#include <json.hpp>

#include <cctype>

namespace mcu::forge {

using json = nlohmann::json;

std::string_view to_string(TaskMode m) { return m == TaskMode::Atomic ? "atomic" : "compositional"; }

TaskMode parse_task_mode(std::string_view s) {
  auto l = str::lower(str::trim(s));
  if (l == "atomic") return TaskMode::Atomic;
  if (l == "compositional") return TaskMode::Compositional;
  throw ValidationError("unknown task mode '" + std::string(s) + "'");
}

std::string to_json(const TaskConfig& c) {
  json j;
  j["task"] = c.task;
  j["mode"] = std::string(to_string(c.mode));
  j["description"] = c.description;
  j["difficulty"] = std::string(to_string(c.difficulty));
  auto& cmds = j["commands"] = json::array();
  for (const auto& cmd : c.commands) cmds.push_back(cmd::format_command(cmd));
  j["provenance"] = {{"attempts", c.provenance.attempts},
                     {"reflection_calls", c.provenance.reflection_calls},
                     {"model", c.provenance.model},
                     {"reflection_notes", c.provenance.reflection_notes}};
  j["warnings"] = c.warnings;
  return j.dump(2);
}

TaskConfig task_config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("task config: ") + e.what());
  }
  try {
    TaskConfig c;
    c.task = j.at("task").get<std::string>();
    c.mode = parse_task_mode(j.value("mode", "atomic"));
    c.description = j.at("description").get<std::string>();
    c.difficulty = parse_difficulty(j.value("difficulty", "simple"));
    for (const auto& s : j.at("commands")) c.commands.push_back(cmd::parse_command(s.get<std::string>()));
    if (j.contains("provenance")) {
      const auto& p = j["provenance"];
      c.provenance.attempts = p.value("attempts", 0);
      c.provenance.reflection_calls = p.value("reflection_calls", 0);
      c.provenance.model = p.value("model", "");
      c.provenance.reflection_notes = p.value("reflection_notes", std::vector<std::string>{});
    }
    c.warnings = j.value("warnings", std::vector<std::string>{});
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("task config: ") + e.what());
  }
}

PromptBundle build_prompt(const PromptLibrary& prompts, const std::string& task, Difficulty difficulty,
                          TaskMode mode, int attempt, std::string_view feedback) {
  if (str::trim(task).empty()) throw ValidationError("empty task");
  PromptBundle b;
  b.kind = PromptKind::Config;
  b.subject = task;
  b.attempt = attempt;
  b.system = prompts.text(mode == TaskMode::Atomic ? "config_atomic" : "config_compositional");
  b.user = "The task I want to complete: " + task + ".";
  if (difficulty == Difficulty::Hard) b.user += "\n\n" + prompts.text("hard_mode");
  if (!feedback.empty()) {
    b.user += "\n\n" + prompts.text("regenerate");
    if (b.user.back() != '\n') b.user += '\n';
    b.user += feedback;
  }
  return b;
}

namespace {

std::string_view strip_bullet(std::string_view t) {
  t = str::trim(t);
  while (t.size() >= 2 && (t[0] == '-' || t[0] == '*' || t[0] == '+') && t[1] == ' ') t = str::trim(t.substr(2));
  return t;
}

std::string strip_bold(std::string_view t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == '*' && i + 1 < t.size() && t[i + 1] == '*') {
      ++i;
      continue;
    }
    out += t[i];
  }
  return out;
}

} // namespace

DraftConfig parse_response(std::string_view text) {
  static constexpr std::string_view kDesc = "task description:";
  static constexpr std::string_view kCmds = "custom_init_commands:";
  DraftConfig d;
  bool in_commands = false;
  bool have_desc = false;
  std::size_t lineno = 0;
  for (const auto& raw : str::split(text, '\n')) {
    ++lineno;
    auto t = strip_bullet(raw);
    if (t.empty() || t.starts_with("```")) continue;
    if (in_commands && t.front() == '/') {
      try {
        d.commands.push_back(cmd::parse_command(t));
      } catch (const ParseError& e) {
        d.command_errors.push_back("line " + std::to_string(lineno) + ": " + e.what());
      }
      continue;
    }
    auto plain = strip_bold(t);
    auto pv = str::trim(plain);
    if (str::starts_with_ci(pv, kDesc)) {
      auto value = std::string(str::trim(pv.substr(kDesc.size())));
      if (!have_desc) {
        d.description = value;
        have_desc = !value.empty();
      } else {
        d.warnings.push_back("line " + std::to_string(lineno) + ": extra task description ignored");
      }
    } else if (str::starts_with_ci(pv, kCmds)) {
      in_commands = true;
    }
  }
  if (!have_desc) throw ParseError("response has no task description");
  if (d.commands.empty() && d.command_errors.empty()) throw ParseError("response has no commands");
  return d;
}

std::optional<Verdict> parse_verdict(std::string_view text) {
  std::optional<Verdict> v;
  for (const auto& raw : str::split(text, '\n')) {
    auto line = strip_bold(strip_bullet(raw));
    auto t = str::trim(line);
    if (!v && str::starts_with_ci(t, "verdict:")) {
      auto words = str::split_ws(str::lower(t.substr(8)));
      if (words.empty()) continue;
      auto w = words.front();
      while (!w.empty() && !std::isalpha(static_cast<unsigned char>(w.back()))) w.pop_back();
      if (w == "yes") v = Verdict{true, {}};
      else if (w == "no") v = Verdict{false, {}};
    } else if (v && v->reason.empty() && str::starts_with_ci(t, "reason:")) {
      v->reason = std::string(str::trim(t.substr(7)));
    }
  }
  return v;
}

std::string VerifyReport::error_log() const {
  std::string out;
  for (const auto& e : command_errors) out += "[PARSE] " + e + "\n";
  for (const auto& f : findings)
    out += "[LINT " + f.rule + " " + std::string(cmd::to_string(f.severity)) + "] command " +
           std::to_string(f.command_index + 1) + ": " + f.message + "\n";
  if (sim) out += sim->error_log();
  if (reflection && !reflection->ok)
    out += "[REFLECTION] the configuration does not support the task" +
           (reflection->reason.empty() ? std::string() : ": " + reflection->reason) + "\n";
  return out;
}

namespace {

std::string reflection_user(const TaskConfig& c) {
  std::string u = "Task: " + c.task + "\nTask description: " + c.description + "\nCommands:\n";
  for (const auto& cmd : c.commands) u += cmd::format_command(cmd) + "\n";
  u += "Does this configuration support the task?";
  return u;
}

} // namespace

VerifyReport verify(const TaskConfig& config, ModelClient& client, const ForgeContext& ctx) {
  VerifyReport r;
  if (config.commands.empty()) r.command_errors.push_back("configuration has no commands");
  if (str::trim(config.description).empty()) r.command_errors.push_back("configuration has no task description");
  if (!r.command_errors.empty()) return r;

  cmd::LintContext lctx{ctx.registry, ctx.recipes, ctx.policy};
  r.findings = cmd::lint_config(config.commands, config.task, lctx);
  if (cmd::has_errors(r.findings)) return r;

  r.sim = sim::run_config(config.commands, ctx.registry);
  if (!r.sim->ok()) return r;

  if (!ctx.prompts) throw ValidationError("verify: no prompt library");
  PromptBundle b;
  b.kind = PromptKind::Reflection;
  b.subject = config.task;
  b.attempt = config.provenance.attempts;
  b.system = ctx.prompts->text("reflection");
  b.user = reflection_user(config);
  auto reply = client.send(b);
  r.reflection = parse_verdict(reply);
  if (!r.reflection) r.reflection = Verdict{false, "reflection reply had no verdict"};
  r.passed = r.reflection->ok;
  return r;
}

ExhaustedAttemptsError::ExhaustedAttemptsError(int attempts, VerifyReport last, std::string last_error)
    : Error("config generation failed after " + std::to_string(attempts) + " attempt(s): " + last_error),
      attempts_(attempts),
      last_(std::move(last)) {}

TaskConfig generate(const std::string& task, TaskMode mode, Difficulty difficulty, ModelClient& client,
                    const ForgeContext& ctx, const GenerateOptions& options) {
  if (options.max_attempts < 1) throw ValidationError("max_attempts must be >= 1");
  if (!ctx.prompts) throw ValidationError("generate: no prompt library");
  ModelClient& judge = options.reflection_client ? *options.reflection_client : client;

  std::string feedback = options.initial_feedback;
  VerifyReport last;
  int reflection_calls = 0;
  std::vector<std::string> notes;
  for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
    auto reply = client.send(build_prompt(*ctx.prompts, task, difficulty, mode, attempt, feedback));
    TaskConfig c;
    c.task = task;
    c.mode = mode;
    c.difficulty = difficulty;
    c.provenance.attempts = attempt;
    c.provenance.model = client.model_id();
    try {
      auto draft = parse_response(reply);
      c.description = std::move(draft.description);
      c.commands = std::move(draft.commands);
      c.warnings = std::move(draft.warnings);
      if (!draft.command_errors.empty()) {
        last = VerifyReport{};
        last.command_errors = std::move(draft.command_errors);
        feedback = last.error_log();
        continue;
      }
    } catch (const ParseError& e) {
      last = VerifyReport{};
      last.command_errors.push_back(e.what());
      feedback = last.error_log();
      continue;
    }
    last = verify(c, judge, ctx);
    if (last.reflection) {
      ++reflection_calls;
      if (!last.reflection->reason.empty()) notes.push_back(last.reflection->reason);
    }
    if (last.passed) {
      c.provenance.reflection_calls = reflection_calls;
      c.provenance.reflection_notes = std::move(notes);
      return c;
    }
    feedback = last.error_log();
  }
  auto log = last.error_log();
  auto first_line = log.substr(0, log.find('\n'));
  throw ExhaustedAttemptsError(options.max_attempts, std::move(last), first_line);
}

} // namespace mcu::forge
