#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace mcu {

/// key=value settings; '#' starts a comment. Unknown keys are kept so tools
/// can read their own.
class AppConfig {
public:
  static AppConfig parse(std::string_view text);
  static AppConfig load(const std::string& path);

  void set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }
  std::optional<std::string> get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string fallback) const;
  long get_int(std::string_view key, long fallback) const;
  const std::map<std::string, std::string, std::less<>>& values() const { return values_; }

  /// Fills model.api_key from MCU_API_KEY or OPENAI_API_KEY when unset,
  /// and data_dir from MCU_DATA_DIR, when unset.
  void apply_environment();

private:
  std::map<std::string, std::string, std::less<>> values_;
};

/// MCU_DATA_DIR, else the data directory of the source tree the library was built from.
std::string default_data_dir();

} // namespace mcu
