#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mcu::cmd {

/// Known item/entity ids plus the ids that exist but cannot be summoned.
/// Lookups accept ids with or without the "minecraft:" namespace.
class IdRegistry {
public:
  static IdRegistry load(const std::string& path);
  static IdRegistry parse(std::string_view text);

  void add_item(std::string_view id);
  void add_entity(std::string_view id);
  void add_nonsummonable(std::string_view id);

  bool is_item(std::string_view id) const;
  bool is_entity(std::string_view id) const;
  bool is_nonsummonable(std::string_view id) const;
  bool known(std::string_view id) const { return is_item(id) || is_entity(id) || is_nonsummonable(id); }

  const std::set<std::string>& items() const { return items_; }
  const std::set<std::string>& entities() const { return entities_; }

private:
  std::set<std::string> items_, entities_, nonsummonable_;
};

IdRegistry load_id_registry(const std::string& path);
std::string canonical_id(std::string_view id);

/// Ingredient requirements per craftable target, keyed by id path
/// ("crafting_table" -> {{"oak_planks", 4}}).
class RecipeBook {
public:
  struct Ingredient {
    std::string item;
    int count = 1;
  };

  static RecipeBook load(const std::string& path);
  static RecipeBook parse(std::string_view text);
  void add(const std::string& target, const std::string& ingredient, int count);
  const std::vector<Ingredient>* find(std::string_view target) const;

private:
  std::map<std::string, std::vector<Ingredient>, std::less<>> recipes_;
};

} // namespace mcu::cmd
