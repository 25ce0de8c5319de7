#pragma once

#include "mcu/command.hpp"
#include "mcu/registry.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mcu::cmd {

enum class Severity { Warn, Error };
std::string_view to_string(Severity s);

struct LintRule {
  std::string_view id;
  Severity severity;
  std::string_view summary;
};

/// Registered rules; every finding's rule id comes from here.
std::span<const LintRule> lint_rules();

struct LintFinding {
  std::string rule;
  Severity severity = Severity::Error;
  std::string message;
  std::size_t command_index = 0;
  bool operator==(const LintFinding&) const = default;
};

/// Thresholds the config generator is held to. "Inaccessible" is not defined
/// precisely anywhere, so the fill limits are policy.
struct LintPolicy {
  double max_summon_distance = 4.0;   // Chebyshev, blocks
  double max_fill_floor_offset = 2.0; // lowest relative y of a fill region
  double max_absolute_fill_y = 256.0;
  double min_absolute_fill_y = -64.0;
};

struct LintContext {
  const IdRegistry* registry = nullptr;
  const RecipeBook* recipes = nullptr;
  LintPolicy policy;
};

/// Target objects named by acquisition verbs ("craft a crafting table" ->
/// "crafting table"). Lowercase, underscores read as spaces.
std::vector<std::string> task_targets(std::string_view task);

/// Findings ordered by command index, then by rule id.
std::vector<LintFinding> lint_config(std::span<const Command> commands, std::string_view task,
                                     const LintContext& ctx = {});

bool has_errors(std::span<const LintFinding> findings);

} // namespace mcu::cmd
