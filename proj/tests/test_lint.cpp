#include "support.hpp"

#include "mcu/lint.hpp"

#include <gtest/gtest.h>

using namespace mcu;
using namespace mcu::cmd;

namespace {

std::vector<Command> parse_all(std::initializer_list<const char*> lines) {
  std::vector<Command> out;
  for (auto l : lines) out.push_back(parse_command(l));
  return out;
}

LintContext shipped_context() {
  const auto& d = test::shipped();
  return {&d.registry, &d.recipes, {}};
}

bool has_rule(const std::vector<LintFinding>& fs, std::string_view rule) {
  for (const auto& f : fs)
    if (f.rule == rule) return true;
  return false;
}

} // namespace

TEST(Lint, RuleTableIsStable) {
  auto rules = lint_rules();
  ASSERT_EQ(rules.size(), 6u);
  EXPECT_EQ(rules[0].id, "R1");
  EXPECT_EQ(rules[3].id, "R4");
  EXPECT_EQ(rules[2].severity, Severity::Warn);
}

TEST(Lint, SummonBeyondFourBlocksFailsR1) {
  auto cmds = parse_all({"/summon minecraft:zombie ~6 ~ ~"});
  auto fs = lint_config(cmds, "combat a zombie", shipped_context());
  ASSERT_EQ(fs.size(), 1u);
  EXPECT_EQ(fs[0].rule, "R1");
  EXPECT_EQ(fs[0].severity, Severity::Error);
  EXPECT_EQ(fs[0].command_index, 0u);
  EXPECT_TRUE(lint_config(parse_all({"/summon minecraft:zombie ~4 ~ ~-4"}), "combat a zombie", shipped_context()).empty());
}

TEST(Lint, FillFarAbovePlayerFailsR2) {
  auto fs = lint_config(parse_all({"/fill ~ ~30 ~ ~2 ~32 ~2 minecraft:iron_ore"}), "mine iron ore", shipped_context());
  ASSERT_EQ(fs.size(), 1u);
  EXPECT_EQ(fs[0].rule, "R2");
  EXPECT_TRUE(has_errors(fs));
}

TEST(Lint, FillOverThePlayerCellFailsR2) {
  auto fs = lint_config(parse_all({"/fill ~-1 ~ ~-1 ~1 ~1 ~1 minecraft:stone"}), "mine stone", shipped_context());
  EXPECT_TRUE(has_rule(fs, "R2"));
  EXPECT_TRUE(lint_config(parse_all({"/fill ~-1 ~ ~-1 ~1 ~1 ~1 minecraft:air"}), "mine stone", shipped_context()).empty());
}

TEST(Lint, AbsoluteFillOutsideBandFailsR2) {
  EXPECT_TRUE(has_rule(lint_config(parse_all({"/fill 0 400 0 2 401 2 stone"}), "mine stone", shipped_context()), "R2"));
  EXPECT_FALSE(has_rule(lint_config(parse_all({"/fill 0 60 0 2 61 2 stone"}), "mine stone", shipped_context()), "R2"));
}

TEST(Lint, GivingTheTargetFailsR4) {
  auto fs = lint_config(parse_all({"/give @s minecraft:oak_planks 64", "/give @s minecraft:crafting_table"}),
                        "craft a crafting table", shipped_context());
  ASSERT_EQ(fs.size(), 1u);
  EXPECT_EQ(fs[0].rule, "R4");
  EXPECT_EQ(fs[0].command_index, 1u);
  auto eq = lint_config(parse_all({"/replaceitem entity @s armor.head minecraft:iron_helmet"}),
                        "trade for iron helmet with a villager", shipped_context());
  EXPECT_TRUE(has_rule(eq, "R4"));
}

TEST(Lint, InsufficientIngredientWarnsR3) {
  auto fs = lint_config(parse_all({"/give @s minecraft:oak_planks 4"}), "craft a crafting table", shipped_context());
  ASSERT_EQ(fs.size(), 1u);
  EXPECT_EQ(fs[0].rule, "R3");
  EXPECT_FALSE(has_errors(fs));
  EXPECT_TRUE(lint_config(parse_all({"/give @s minecraft:oak_planks 5"}), "craft a crafting table", shipped_context()).empty());
}

TEST(Lint, NonSummonableAndUnknownIds) {
  auto fs = lint_config(parse_all({"/summon minecraft:sugar_cane ~1 ~ ~1", "/give @s minecraft:unobtainium"}), "find sugar cane",
                        shipped_context());
  ASSERT_EQ(fs.size(), 2u);
  EXPECT_EQ(fs[0].rule, "R5");
  EXPECT_EQ(fs[0].severity, Severity::Error);
  EXPECT_EQ(fs[1].rule, "R6");
  EXPECT_EQ(fs[1].severity, Severity::Warn);
}

TEST(Lint, ExemplarConfigsLintClean) {
  auto exemplars = test::exemplar_configs();
  ASSERT_EQ(exemplars.size(), 14u);
  for (const auto& e : exemplars) {
    ASSERT_FALSE(e.draft.commands.empty()) << e.task;
    EXPECT_TRUE(e.draft.command_errors.empty()) << e.task;
    auto fs = lint_config(e.draft.commands, e.task, shipped_context());
    for (const auto& f : fs) ADD_FAILURE() << e.source << " / " << e.task << ": " << f.rule << " " << f.message;
  }
}

TEST(Lint, TaskTargets) {
  EXPECT_EQ(task_targets("craft a crafting table"), (std::vector<std::string>{"crafting table"}));
  EXPECT_EQ(task_targets("mine iron_ore with a stone pickaxe"), (std::vector<std::string>{"iron ore"}));
  EXPECT_EQ(task_targets("trade for iron helmet with a villager"), (std::vector<std::string>{"iron helmet"}));
  EXPECT_EQ(task_targets("obtain 16 cobblestone and craft a furnace"),
            (std::vector<std::string>{"cobblestone", "furnace"}));
  EXPECT_TRUE(task_targets("interact with a potion").empty());
  EXPECT_TRUE(task_targets("find a panda").empty());
}

TEST(Lint, CustomPolicyThresholds) {
  LintContext ctx = shipped_context();
  ctx.policy.max_summon_distance = 8;
  EXPECT_TRUE(lint_config(parse_all({"/summon zombie ~6 ~ ~"}), "combat a zombie", ctx).empty());
}
