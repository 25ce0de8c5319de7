#pragma once

#include "mcu/catalog.hpp"
#include "mcu/config_forge.hpp"
#include "mcu/env_init.hpp"
#include "mcu/prompts.hpp"
#include "mcu/registry.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace mcu::test {

std::string fixture(const std::string& name);
std::string data(const std::string& name);

/// Shared read-only data loaded once per process.
struct Data {
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
const Data& shipped();

/// Worked examples embedded in the config-generation templates.
struct Exemplar {
  std::string source;  // template name
  std::string task;    // as asked
  forge::DraftConfig draft;
};
std::vector<Exemplar> exemplar_configs();
/// Every "/..." line of the config-generation templates, as written.
std::vector<std::string> prompt_command_lines();

class TempDir {
public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& child = {}) const { return (path_ / child).string(); }

private:
  std::filesystem::path path_;
};

/// Writes a fabricated trajectory with n frames.
void write_fake_trajectory(const std::string& dir, const std::string& id, const std::string& task, std::size_t n);

} // namespace mcu::test
