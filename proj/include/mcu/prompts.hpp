#pragma once

#include <map>
#include <string>
#include <string_view>

namespace mcu {

/// Prompt templates read from a directory of UTF-8 text files
/// (config_atomic, config_compositional, criteria, video_rating,
/// video_comparison, reflection, hard_mode, regenerate).
class PromptLibrary {
public:
  static PromptLibrary load(const std::string& dir);
  void set(std::string name, std::string text);
  /// Throws NotFoundError for unknown names.
  const std::string& text(std::string_view name) const;

private:
  std::map<std::string, std::string, std::less<>> templates_;
};

} // namespace mcu
