#include "support.hpp"

#include "mcu/strings.hpp"
#include "mcu/trajectory.hpp"

#include <atomic>
#include <random>
#include <unistd.h>

namespace mcu::test {

namespace fs = std::filesystem;

std::string fixture(const std::string& name) { return (fs::path(MCU_FIXTURE_DIR) / name).string(); }
std::string data(const std::string& name) { return (fs::path(MCU_SOURCE_DATA_DIR) / name).string(); }

const Data& shipped() {
  static const Data d = [] {
    Data x;
    x.categories = CategoryTable::load(data("categories.tsv"));
    x.catalog = load_catalog(data("catalog.tsv"), x.categories);
    x.catalog.add_subset("mcu-turbo", load_subset_file(data("subsets/mcu-turbo.txt")));
    x.registry = cmd::IdRegistry::load(data("registry.txt"));
    x.recipes = cmd::RecipeBook::load(data("recipes.tsv"));
    x.prompts = PromptLibrary::load(data("prompts"));
    x.spawns = forge::SpawnDb::load(data("spawns.tsv"));
    x.preconditions = forge::PreconditionRules::load(data("preconditions.tsv"));
    x.distractors = forge::DistractorPool::load(data("distractors.tsv"));
    return x;
  }();
  return d;
}

std::vector<Exemplar> exemplar_configs() {
  std::vector<Exemplar> out;
  static constexpr std::string_view marker = "The task I want to complete:";
  for (std::string name : {"config_atomic", "config_compositional"}) {
    const auto& text = shipped().prompts.text(name);
    std::size_t pos = text.find("e.g. ");
    while (pos != std::string::npos) {
      auto next = text.find("e.g. ", pos + 1);
      auto block = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
      // the block ends at the notes section
      if (auto notes = block.find("\nNote"); notes != std::string::npos) block.resize(notes);
      auto m = block.find(marker);
      if (m != std::string::npos) {
        auto eol = block.find('\n', m);
        std::string task(str::trim(block.substr(m + marker.size(), eol - m - marker.size())));
        while (!task.empty() && task.back() == '.') task.pop_back();
        out.push_back({name, task, forge::parse_response(block)});
      }
      pos = next;
    }
  }
  return out;
}

std::vector<std::string> prompt_command_lines() {
  std::vector<std::string> out;
  for (std::string name : {"config_atomic", "config_compositional"})
    for (const auto& raw : str::split(shipped().prompts.text(name), '\n')) {
      auto t = str::trim(raw);
      if (t.starts_with("- ")) t = str::trim(t.substr(2));
      if (t.starts_with("/")) out.emplace_back(t);
    }
  return out;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("mcu-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" + std::to_string(rd()));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_fake_trajectory(const std::string& dir, const std::string& id, const std::string& task, std::size_t n) {
  fs::create_directories(fs::path(dir) / "frames");
  std::vector<eval::ActionRecord> actions(n);
  for (std::size_t i = 0; i < n; ++i) {
    actions[i].pressed = {i % 2 ? "forward" : "attack"};
    actions[i].camera_dx = static_cast<double>(i % 5);
    std::vector<std::uint8_t> rgb(4 * 4 * 3, static_cast<std::uint8_t>(i % 256));
    eval::write_png((fs::path(dir) / "frames" / eval::frame_file_name(i)).string(), 4, 4, rgb);
  }
  eval::TrajectoryMeta meta;
  meta.id = id;
  meta.task = task;
  meta.agent = "fixture";
  eval::write_trajectory_records(dir, meta, actions);
}

} // namespace mcu::test
