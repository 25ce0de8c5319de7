#include "support.hpp"

#include "mcu/harness.hpp"
#include "mcu/report.hpp"
#include "mcu/strings.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

using namespace mcu;
using namespace mcu::harness;
namespace fs = std::filesystem;

namespace {

ReplayClient replay() { return ReplayClient(ReplayClient::load_entries(test::fixture("run_replay.jsonl"))); }

RunContext context(ModelClient& config, ModelClient& judge, const cmd::IdRegistry* env_registry = nullptr) {
  const auto& d = test::shipped();
  RunContext ctx;
  ctx.forge = d.forge_context();
  ctx.sources = d.sources();
  ctx.catalog = &d.catalog;
  ctx.config_client = &config;
  ctx.judge_client = &judge;
  proto::MockEnvOptions o;
  o.registry = env_registry ? env_registry : &d.registry;
  ctx.env = mock_env_factory(o);
  return ctx;
}

RunPlan plan_for(std::vector<std::string> tasks, const std::string& out, int seeds = 3) {
  RunPlan p;
  p.tasks = std::move(tasks);
  p.seeds_per_task = seeds;
  p.out_dir = out;
  p.max_steps = 40;
  p.seed = 5;
  return p;
}

} // namespace

TEST(Plan, Validation) {
  RunPlan p = plan_for({"hunt_sheep"}, "/tmp/x");
  EXPECT_NO_THROW(validate(p));
  auto empty = p;
  empty.tasks.clear();
  EXPECT_THROW(validate(empty), ValidationError);
  auto zero = p;
  zero.seeds_per_task = 0;
  EXPECT_THROW(validate(zero), ValidationError);
  auto ext = p;
  ext.backend = EnvBackend::External;
  EXPECT_THROW(validate(ext), ValidationError);
  EXPECT_EQ(parse_env_backend("mock"), EnvBackend::Mock);
  EXPECT_THROW(parse_env_backend("cloud"), ValidationError);
}

TEST(Plan, ZeroTasksIsAnError) {
  test::TempDir tmp;
  auto client = replay();
  EXPECT_THROW(run_batch(plan_for({}, tmp.str()), context(client, client)), ValidationError);
}

TEST(ResolveTask, CatalogIdsExpressionsAndText) {
  const auto& cat = test::shipped().catalog;
  auto a = resolve_task("hunt_sheep", &cat);
  EXPECT_EQ(a.text, "hunt sheep");
  EXPECT_EQ(a.category, "combat");
  EXPECT_EQ(a.mode, forge::TaskMode::Atomic);
  auto e = resolve_task("[craft_a_crafting_table] and [mine_iron_ore]", &cat);
  EXPECT_EQ(e.text, "[craft a crafting table] and [mine iron ore]");
  EXPECT_EQ(e.mode, forge::TaskMode::Compositional);
  EXPECT_EQ(e.category, "compositional");
  auto same = resolve_task("[hunt_sheep] or [combat_a_zombie]", &cat);
  EXPECT_EQ(same.category, "combat");
  auto free = resolve_task("  dance on a roof ", &cat);
  EXPECT_EQ(free.text, "dance on a roof");
  EXPECT_EQ(free.category, "uncategorized");
}

TEST(RunBatch, TwoTasksThreeSeedsDeterministic) {
  test::TempDir a, b;
  auto c1 = replay(), c2 = replay();
  auto r1 = run_batch(plan_for({"craft_a_crafting_table", "hunt_sheep"}, a.str()), context(c1, c1));
  auto r2 = run_batch(plan_for({"craft_a_crafting_table", "hunt_sheep"}, b.str()), context(c2, c2));
  ASSERT_EQ(r1.cells.size(), 6u);
  EXPECT_EQ(r1.completed, 6u) << (r1.failures.empty() ? "" : r1.failures[0]);
  EXPECT_EQ(r1.failed, 0u);
  for (const auto& c : r1.cells) ASSERT_TRUE(c.score);
  EXPECT_EQ(r1.hash(), r2.hash());
  EXPECT_EQ(r1.cells[0].world_seed, 19961103u);
  EXPECT_EQ(r1.cells[1].world_seed, 20010501u);
  EXPECT_EQ(r1.cells[2].world_seed, 12345u);
  EXPECT_EQ(r1.cells[3].trajectory_id, "hunt_sheep-0");

  // Oracle: the fixture's two rating listings, averaged with equal weight.
  std::array<double, eval::kDimensionCount> golem{0.5, 0.25, 0.25, 0, 0.25, 0.5};
  std::array<double, eval::kDimensionCount> sheep{0.75, 0.5, 0.25, 0, 0.75, 1};
  for (std::size_t i = 0; i < eval::kDimensionCount; ++i) {
    EXPECT_DOUBLE_EQ(r1.cells[0].score->anchors()[i], golem[i]);
    EXPECT_DOUBLE_EQ(r1.cells[5].score->anchors()[i], sheep[i]);
    EXPECT_DOUBLE_EQ(r1.dimension_means[i], (golem[i] + sheep[i]) / 2);
    EXPECT_DOUBLE_EQ(r1.category_means["crafting"][i], golem[i]);
    EXPECT_DOUBLE_EQ(r1.category_means["combat"][i], sheep[i]);
  }
  EXPECT_TRUE(fs::exists(a.str("trajectories/hunt_sheep-2/frames/000039.png")));
}

TEST(RunBatch, ParallelMatchesSerial) {
  test::TempDir a, b;
  auto c1 = replay(), c2 = replay();
  auto serial = plan_for({"craft_a_crafting_table", "hunt_sheep", "combat_a_zombie"}, a.str(), 2);
  auto par = plan_for({"craft_a_crafting_table", "hunt_sheep", "combat_a_zombie"}, b.str(), 2);
  par.parallelism = 4;
  EXPECT_EQ(run_batch(serial, context(c1, c1)).hash(), run_batch(par, context(c2, c2)).hash());
}

TEST(RunBatch, RegenerationAttemptsAreRecorded) {
  test::TempDir tmp;
  auto client = replay();
  auto r = run_batch(plan_for({"combat_a_zombie"}, tmp.str(), 1), context(client, client));
  ASSERT_EQ(r.completed, 1u) << (r.failures.empty() ? "" : r.failures[0]);
  EXPECT_EQ(r.cells[0].attempts, 2);
  EXPECT_EQ(r.cells[0].init_retries, 0);
}

TEST(RunBatch, InitAckFailureTriggersRegenerationWithLog) {
  test::TempDir tmp;
  // The env knows fewer ids than the generator's verifier, so the first
  // config passes verification but fails at init.
  auto env_registry = cmd::IdRegistry::parse("item minecraft:stone_pickaxe\nitem minecraft:iron_ore\n");
  ScriptedClient config, judge;
  config
      .then(PromptKind::Config,
            "Task description: mine\ncustom_init_commands:\n- /give @s minecraft:diamond_pickaxe 1\n"
            "- /fill ~1 ~ ~1 ~2 ~1 ~2 minecraft:iron_ore\n")
      .then(PromptKind::Config,
            "Task description: mine\ncustom_init_commands:\n- /give @s minecraft:stone_pickaxe 1\n"
            "- /fill ~1 ~ ~1 ~2 ~1 ~2 minecraft:iron_ore\n")
      .then(PromptKind::Reflection, "Verdict: yes");
  judge.then(PromptKind::Criteria, str::read_file(test::fixture("dig_criteria.txt")))
      .then(PromptKind::Rating, str::read_file(test::fixture("snow_golem_rating.txt")));
  auto r = run_batch(plan_for({"mine_iron_ore"}, tmp.str(), 1), context(config, judge, &env_registry));
  ASSERT_EQ(r.completed, 1u) << (r.failures.empty() ? "" : r.failures[0]);
  EXPECT_EQ(r.cells[0].init_retries, 1);
  EXPECT_EQ(r.cells[0].attempts, 2);
  auto sent = config.received();
  std::vector<PromptBundle> gens;
  for (const auto& p : sent)
    if (p.kind == PromptKind::Config) gens.push_back(p);
  ASSERT_EQ(gens.size(), 2u);
  EXPECT_EQ(gens[0].user.find("diamond_pickaxe"), std::string::npos);
  EXPECT_NE(gens[1].user.find("diamond_pickaxe"), std::string::npos);
  EXPECT_NE(gens[1].user.find("[ERR] command 1"), std::string::npos);
}

TEST(RunBatch, PersistentInitFailureIsIsolated) {
  test::TempDir tmp;
  auto env_registry = cmd::IdRegistry::parse("item minecraft:iron_sword\nentity minecraft:sheep\n");
  auto client = replay();
  auto r = run_batch(plan_for({"craft_a_crafting_table", "hunt_sheep"}, tmp.str(), 2),
                     context(client, client, &env_registry));
  EXPECT_EQ(r.cells.size(), 4u);
  EXPECT_EQ(r.completed + r.failed, 4u);
  EXPECT_EQ(r.failed, 2u);
  EXPECT_FALSE(r.cells[0].ok);
  EXPECT_NE(r.cells[0].error.find("env init failed"), std::string::npos);
  EXPECT_TRUE(r.cells[2].ok);
  ASSERT_EQ(r.failures.size(), 2u);
  for (std::size_t i = 0; i < eval::kDimensionCount; ++i)
    EXPECT_DOUBLE_EQ(r.dimension_means[i], (std::array<double, 6>{0.75, 0.5, 0.25, 0, 0.75, 1})[i]);
}

TEST(RunBatch, UnknownTaskFailsOnlyItsCells) {
  test::TempDir tmp;
  auto client = replay();
  auto r = run_batch(plan_for({"hunt_sheep", "dance on a roof"}, tmp.str(), 2), context(client, client));
  EXPECT_EQ(r.completed, 2u);
  EXPECT_EQ(r.failed, 2u);
  EXPECT_NE(r.cells[2].error.find("task setup failed"), std::string::npos);
}

TEST(RunBatch, HardModeRecordsDifficulty) {
  test::TempDir tmp;
  auto client = replay();
  auto plan = plan_for({"hunt_sheep"}, tmp.str(), 2);
  plan.difficulty = Difficulty::Hard;
  auto r = run_batch(plan, context(client, client));
  EXPECT_EQ(r.completed, 2u) << (r.failures.empty() ? "" : r.failures[0]);
  EXPECT_EQ(r.difficulty, Difficulty::Hard);
}

TEST(RunBatch, ExternalBackendOverStdio) {
  test::TempDir tmp;
  auto client = replay();
  auto ctx = context(client, client);
  ctx.env = external_env_factory(std::string(MCU_TOOL_PATH) + " mock-env");
  auto r = run_batch(plan_for({"hunt_sheep"}, tmp.str(), 2), ctx);
  EXPECT_EQ(r.completed, 2u) << (r.failures.empty() ? "" : r.failures[0]);
}

TEST(Report, JsonRoundTripKeepsHash) {
  test::TempDir tmp;
  auto client = replay();
  auto r = run_batch(plan_for({"hunt_sheep", "craft_a_crafting_table"}, tmp.str(), 2), context(client, client));
  auto back = run_report_from_json(r.to_json());
  EXPECT_EQ(back.hash(), r.hash());
  EXPECT_EQ(back.completed, r.completed);
  EXPECT_THROW(run_report_from_json("{}"), ParseError);
}

TEST(Report, Formats) {
  test::TempDir a, b;
  auto c1 = replay(), c2 = replay();
  auto r1 = run_batch(plan_for({"craft_a_crafting_table", "hunt_sheep", "mine_iron_ore"}, a.str(), 1),
                      context(c1, c1));
  auto r2 = r1;
  r2.agent = "other";
  r2.cells[0].score->scores[0].anchor = 1.0;  // other wins on crafting

  auto single = emit_report({r1}, ReportFormat::Table);
  EXPECT_NE(single.find("[crafting]"), std::string::npos);
  EXPECT_NE(single.find("[combat]"), std::string::npos);
  EXPECT_NE(single.find("[mining]"), std::string::npos);
  EXPECT_NE(single.find("Avg"), std::string::npos);
  EXPECT_EQ(single.find('*'), std::string::npos);

  auto two = emit_report({r1, r2}, ReportFormat::Table);
  auto crafting = two.substr(two.find("craft_a_crafting_table"));
  crafting = crafting.substr(0, crafting.find('\n'));
  EXPECT_NE(crafting.find("1.00*"), std::string::npos);
  EXPECT_EQ(crafting.find("0.50*"), std::string::npos);
  auto sheep = two.substr(two.find("  hunt_sheep"));
  sheep = sheep.substr(0, sheep.find('\n'));
  EXPECT_EQ(std::count(sheep.begin(), sheep.end(), '*'), 2);

  auto csv = emit_report({r1, r2}, ReportFormat::Csv);
  auto lines = str::split(csv, '\n');
  EXPECT_EQ(lines.size(), 1u + 6u + 1u);  // header, agent x task rows, trailing empty
  EXPECT_EQ(lines[0].rfind("agent,task_id,task,category", 0), 0u);

  auto js = emit_report({r1}, ReportFormat::Json);
  EXPECT_NE(js.find("\"dimension_means\""), std::string::npos);
  EXPECT_THROW(parse_report_format("xml"), ValidationError);
}
