#include "mcu/app_config.hpp"

#include "mcu/error.hpp"
#include "mcu/strings.hpp"

#include <charconv>
#include <cstdlib>

#ifndef MCU_DEFAULT_DATA_DIR
#define MCU_DEFAULT_DATA_DIR "data"
#endif

namespace mcu {

AppConfig AppConfig::parse(std::string_view text) {
  AppConfig c;
  std::size_t lineno = 0;
  for (const auto& raw : str::split(text, '\n')) {
    ++lineno;
    auto t = str::trim(raw);
    if (t.empty() || t.front() == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value", lineno);
    auto key = str::trim(t.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", lineno);
    c.set(std::string(key), std::string(str::trim(t.substr(eq + 1))));
  }
  return c;
}

AppConfig AppConfig::load(const std::string& path) { return parse(str::read_file(path)); }

std::optional<std::string> AppConfig::get(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string AppConfig::get_or(std::string_view key, std::string fallback) const {
  auto v = get(key);
  return v ? *v : std::move(fallback);
}

long AppConfig::get_int(std::string_view key, long fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  long out = 0;
  auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || p != v->data() + v->size())
    throw ValidationError("config key " + std::string(key) + " is not an integer");
  return out;
}

void AppConfig::apply_environment() {
  if (!get("model.api_key")) {
    for (const char* name : {"MCU_API_KEY", "OPENAI_API_KEY"})
      if (const char* v = std::getenv(name); v && *v) {
        set("model.api_key", v);
        break;
      }
  }
  if (!get("data_dir"))
    if (const char* d = std::getenv("MCU_DATA_DIR"); d && *d) set("data_dir", d);
}

std::string default_data_dir() {
  if (const char* d = std::getenv("MCU_DATA_DIR"); d && *d) return d;
  return MCU_DEFAULT_DATA_DIR;
}

} // namespace mcu
