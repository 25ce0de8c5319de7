#include "support.hpp"

#include "../tools/cli.hpp"

#include "mcu/harness.hpp"
#include "mcu/strings.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace mcu;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "mcu");
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string replay() { return test::fixture("run_replay.jsonl"); }

} // namespace

TEST(Cli, RequiresSubcommand) {
  EXPECT_NE(call({}).code, 0);
  EXPECT_NE(call({"lint", "--input", "x", "--difficulty", "medium"}).code, 0);
}

TEST(Cli, ComposeIsSeeded) {
  auto a = call({"compose", "--seed", "7", "--count", "3"});
  auto b = call({"compose", "--seed", "7", "--count", "3"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(str::split(a.out, '\n').size(), 4u);
  EXPECT_NE(a.out.find('['), std::string::npos);
}

TEST(Cli, LintExitCodes) {
  test::TempDir tmp;
  str::write_file(tmp.str("good.txt"), "- /give @s minecraft:oak_planks 8\n");
  str::write_file(tmp.str("bad.txt"), "/summon minecraft:zombie ~6 ~ ~\n");
  auto good = call({"lint", "--input", tmp.str("good.txt"), "--task", "craft a crafting table", "--out", tmp.str("o")});
  EXPECT_EQ(good.code, 0) << good.out << good.err;
  EXPECT_EQ(good.out, "clean\n");
  EXPECT_TRUE(fs::exists(tmp.str("o/lint.txt")));
  auto bad = call({"lint", "--input", tmp.str("bad.txt"), "--task", "combat a zombie"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("R1 error command 1"), std::string::npos) << bad.out;
}

TEST(Cli, LintReportsParseLine) {
  test::TempDir tmp;
  str::write_file(tmp.str("cfg.txt"), "/give @s minecraft:stick 1\n/give @s\n");
  auto r = call({"lint", "--input", tmp.str("cfg.txt")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST(Cli, Simulate) {
  test::TempDir tmp;
  str::write_file(tmp.str("cfg.txt"), "/give @s minecraft:iron_sword 1\n/summon minecraft:sheep ~3 ~ ~\n");
  auto ok = call({"simulate", "--input", tmp.str("cfg.txt"), "--task", "hunt sheep", "--out", tmp.str("o")});
  EXPECT_EQ(ok.code, 0) << ok.out << ok.err;
  EXPECT_TRUE(fs::exists(tmp.str("o/env_init.json")));
  str::write_file(tmp.str("bad.txt"), "/summon minecraft:bamboo_tree ~3 ~ ~\n");
  auto bad = call({"simulate", "--input", tmp.str("bad.txt"), "--task", "find a panda"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("[ERR]"), std::string::npos) << bad.out;
}

TEST(Cli, GenConfigWithReplay) {
  test::TempDir tmp;
  auto r = call({"gen-config", "--task", "combat_a_zombie", "--replay", replay(), "--out", tmp.str()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto cfg = forge::task_config_from_json(str::read_file(tmp.str("config.json")));
  EXPECT_EQ(cfg.provenance.attempts, 2);
  EXPECT_TRUE(fs::exists(tmp.str("env_init.json")));
}

TEST(Cli, GenConfigExhaustedExitCode) {
  auto r = call({"gen-config", "--task", "find a panda", "--replay", test::fixture("forge_replay.jsonl")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("bamboo_tree"), std::string::npos) << r.err;
}

TEST(Cli, RunThenReport) {
  test::TempDir tmp;
  auto run = [&](const std::string& dir) {
    return call({"run", "--tasks", "hunt_sheep", "--tasks", "mine_iron_ore", "--seeds-per-task", "2", "--max-steps",
                 "30", "--replay", replay(), "--seed", "3", "--out", tmp.str(dir)});
  };
  auto a = run("a"), b = run("b");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("completed 4, failed 0"), std::string::npos) << a.out;
  auto hash_of = [](const std::string& s) { return s.substr(s.find("report hash ")); };
  EXPECT_EQ(hash_of(a.out), hash_of(b.out));
  ASSERT_TRUE(fs::exists(tmp.str("a/report.json")));
  EXPECT_TRUE(fs::is_directory(tmp.str("a/trajectories/hunt_sheep-1")));

  auto csv = call({"report", "--reports", tmp.str("a/report.json"), "--format", "csv", "--out", tmp.str("r")});
  ASSERT_EQ(csv.code, 0) << csv.err;
  EXPECT_NE(csv.out.find("mock-agent,hunt_sheep"), std::string::npos) << csv.out;
  EXPECT_TRUE(fs::exists(tmp.str("r/report.csv")));
  auto table = call({"report", "--reports", tmp.str("a/report.json"), "--dimension", "Efficiency"});
  EXPECT_EQ(table.code, 0) << table.err;
  EXPECT_NE(table.out.find("[combat]"), std::string::npos);
}

TEST(Cli, EvalTrajectoryWithReplay) {
  test::TempDir tmp;
  test::write_fake_trajectory(tmp.str("t1"), "t1", "hunt sheep", 45);
  auto r = call({"eval", "--trajectory", tmp.str("t1"), "--replay", replay(), "--out", tmp.str("o")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto score = eval::score_report_from_json(str::read_file(tmp.str("o/score.json")));
  EXPECT_DOUBLE_EQ(score.anchors()[0], 0.75);
  EXPECT_TRUE(fs::exists(tmp.str("o/criteria.txt")));
}

TEST(Cli, ExternalEnvNeedsCommand) {
  auto r = call({"run", "--tasks", "hunt_sheep", "--env", "external", "--replay", replay()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("env-command"), std::string::npos);
}

TEST(Cli, ConfigFileSuppliesReplay) {
  test::TempDir tmp;
  str::write_file(tmp.str("mcu.conf"), "model.replay = " + replay() + "\n");
  auto r = call({"gen-config", "--config", tmp.str("mcu.conf"), "--task", "hunt_sheep"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("iron_sword"), std::string::npos);
}
