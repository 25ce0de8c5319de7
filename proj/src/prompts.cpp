#include "mcu/prompts.hpp"

#include "mcu/error.hpp"
#include "mcu/strings.hpp"

#include <array>
#include <filesystem>

namespace mcu {

PromptLibrary PromptLibrary::load(const std::string& dir) {
  static constexpr std::array<std::string_view, 8> names = {
      "config_atomic", "config_compositional", "criteria", "video_rating",
      "video_comparison", "reflection", "hard_mode", "regenerate"};
  PromptLibrary lib;
  for (auto name : names) {
    auto path = std::filesystem::path(dir) / (std::string(name) + ".txt");
    lib.set(std::string(name), str::read_file(path.string()));
  }
  return lib;
}

void PromptLibrary::set(std::string name, std::string text) { templates_[std::move(name)] = std::move(text); }

const std::string& PromptLibrary::text(std::string_view name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) throw NotFoundError("no prompt template '" + std::string(name) + "'");
  return it->second;
}

} // namespace mcu
