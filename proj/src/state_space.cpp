#include "mcu/state_space.hpp"

#include "mcu/error.hpp"

#include <cmath>

namespace mcu::sim {

namespace {
void require_positive(double v, const char* name) {
  if (!(v > 0) || !std::isfinite(v)) throw ValidationError(std::string("state-space parameter '") + name + "' must be positive");
}
} // namespace

double log10_block_states(double block_types, double world_volume) {
  require_positive(block_types, "block_types");
  require_positive(world_volume, "world_volume");
  return world_volume * std::log10(block_types);
}

double log10_entity_states(double state_base, double entity_count) {
  require_positive(state_base, "entity_state_base");
  require_positive(entity_count, "entity_count");
  return entity_count * std::log10(state_base);
}

double log10_inventory_states(double slots, double item_types, double max_stack) {
  require_positive(slots, "inventory_slots");
  require_positive(item_types, "item_types");
  require_positive(max_stack, "max_stack");
  return slots * std::log10(item_types * max_stack);
}

StateSpaceEstimate estimate_state_space(const StateSpaceParams& p) {
  StateSpaceEstimate e;
  e.block_log10 = log10_block_states(p.block_types, p.world_volume);
  e.entity_log10 = log10_entity_states(p.entity_state_base, p.entity_count);
  e.inventory_log10 = log10_inventory_states(p.inventory_slots, p.item_types, p.max_stack);
  if (!std::isfinite(p.constraint_log10)) throw ValidationError("constraint_log10 must be finite");
  e.final_log10 = e.block_log10 + e.entity_log10 + e.inventory_log10 + p.constraint_log10;
  return e;
}

StateSpaceParams minecraft_state_space_params() {
  StateSpaceParams p;
  p.block_types = 500;
  p.world_volume = WorldDims{}.volume();
  // 30+ mob types x 20 health + 30+ animal types x 10 health + 13 professions x 5 levels x 100 trades
  p.entity_state_base = 30 * 20 + 30 * 10 + 13 * 5 * 100;
  p.entity_count = 1e7;
  p.inventory_slots = 36;
  p.item_types = 500;
  p.max_stack = 64;
  p.constraint_log10 = -2;
  return p;
}

StateSpaceEstimate minecraft_state_space() {
  auto p = minecraft_state_space_params();
  auto e = estimate_state_space(p);
  e.references = {
      {"world_volume", "3.46e18", p.world_volume},
      {"entity_states_log10", "log10(2.57) + 75e7", e.entity_log10},
      {"final_state_space_log10", "1e20", e.final_log10},
  };
  return e;
}

} // namespace mcu::sim
