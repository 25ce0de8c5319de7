#pragma once

#include <string>
#include <vector>

namespace mcu::sim {

/// Inputs to the back-of-envelope state-space count. Everything is kept in
/// log10 on the way out because the counts overflow any float.
struct StateSpaceParams {
  double block_types = 500;      // B
  double world_volume = 0;       // W, blocks
  double entity_state_base = 0;  // distinct states per entity
  double entity_count = 0;       // N
  double inventory_slots = 36;
  double item_types = 500;
  double max_stack = 64;
  double constraint_log10 = -2;  // fraction of combinations that are reachable
};

/// A published figure kept next to the recomputed one; never reconciled.
struct ReferenceValue {
  std::string name;
  std::string printed;
  double recomputed = 0;
};

struct StateSpaceEstimate {
  double block_log10 = 0;
  double entity_log10 = 0;
  double inventory_log10 = 0;
  double final_log10 = 0;
  std::vector<ReferenceValue> references;
};

struct WorldDims {
  double x = 30e6;
  double z = 30e6;
  double height = 384;
  double volume() const { return x * z * height; }
};

double log10_block_states(double block_types, double world_volume);
double log10_entity_states(double state_base, double entity_count);
double log10_inventory_states(double slots, double item_types, double max_stack);

/// Throws ValidationError when any count is non-positive.
StateSpaceEstimate estimate_state_space(const StateSpaceParams& params);

/// Minecraft column of the state-space comparison table, with its printed
/// figures attached as references.
StateSpaceParams minecraft_state_space_params();
StateSpaceEstimate minecraft_state_space();

} // namespace mcu::sim
