#include "mcu/registry.hpp"

#include "mcu/error.hpp"
#include "mcu/strings.hpp"

#include <charconv>

namespace mcu::cmd {

std::string canonical_id(std::string_view id) {
  auto t = str::lower(str::trim(id));
  auto cut = t.find_first_of("[{");
  if (cut != std::string::npos) t.resize(cut);
  return t.find(':') == std::string::npos ? "minecraft:" + t : t;
}

IdRegistry IdRegistry::load(const std::string& path) { return parse(str::read_file(path)); }

IdRegistry IdRegistry::parse(std::string_view text) {
  IdRegistry reg;
  std::size_t lineno = 0;
  for (const auto& raw : str::split(text, '\n')) {
    ++lineno;
    auto line = str::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto parts = str::split_ws(line);
    if (parts.size() != 2) throw ParseError("expected '<kind> <namespaced id>'", lineno);
    if (parts[0] == "item")
      reg.add_item(parts[1]);
    else if (parts[0] == "entity")
      reg.add_entity(parts[1]);
    else if (parts[0] == "nonsummonable")
      reg.add_nonsummonable(parts[1]);
    else
      throw ParseError("unknown registry kind '" + parts[0] + "'", lineno);
  }
  return reg;
}

IdRegistry load_id_registry(const std::string& path) { return IdRegistry::load(path); }

void IdRegistry::add_item(std::string_view id) { items_.insert(canonical_id(id)); }
void IdRegistry::add_entity(std::string_view id) { entities_.insert(canonical_id(id)); }
void IdRegistry::add_nonsummonable(std::string_view id) { nonsummonable_.insert(canonical_id(id)); }
bool IdRegistry::is_item(std::string_view id) const { return items_.count(canonical_id(id)) > 0; }
bool IdRegistry::is_entity(std::string_view id) const { return entities_.count(canonical_id(id)) > 0; }
bool IdRegistry::is_nonsummonable(std::string_view id) const { return nonsummonable_.count(canonical_id(id)) > 0; }

RecipeBook RecipeBook::load(const std::string& path) { return parse(str::read_file(path)); }

RecipeBook RecipeBook::parse(std::string_view text) {
  RecipeBook book;
  std::size_t lineno = 0;
  for (const auto& raw : str::split(text, '\n')) {
    ++lineno;
    auto line = str::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto f = str::split_ws(line);
    int count = 0;
    if (f.size() != 3) throw ParseError("expected '<target> <ingredient> <count>'", lineno);
    auto [p, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), count);
    if (ec != std::errc() || p != f[2].data() + f[2].size() || count < 1)
      throw ParseError("bad ingredient count '" + f[2] + "'", lineno);
    book.add(f[0], f[1], count);
  }
  return book;
}

void RecipeBook::add(const std::string& target, const std::string& ingredient, int count) {
  auto strip = [](const std::string& id) {
    auto c = canonical_id(id);
    return c.substr(c.find(':') + 1);
  };
  recipes_[strip(target)].push_back({strip(ingredient), count});
}

const std::vector<RecipeBook::Ingredient>* RecipeBook::find(std::string_view target) const {
  auto it = recipes_.find(target);
  return it == recipes_.end() ? nullptr : &it->second;
}

} // namespace mcu::cmd
