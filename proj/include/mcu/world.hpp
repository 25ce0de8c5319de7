#pragma once

#include "mcu/command.hpp"
#include "mcu/error.hpp"
#include "mcu/registry.hpp"

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mcu::sim {

inline constexpr int kInventorySlots = 36;
inline constexpr int kMaxStack = 64;

struct ItemStack {
  std::string id;   // canonical, "minecraft:emerald"
  std::string nbt;  // stacks only merge when NBT matches
  int count = 1;
  bool operator==(const ItemStack&) const = default;
};

enum class EquipSlot { Head, Chest, Legs, Feet, Mainhand, Offhand };
std::string_view to_string(EquipSlot s);

struct Entity {
  std::string id;
  cmd::Vec3 pos;  // relative to the player when written relative
  std::string nbt;
  bool operator==(const Entity&) const = default;
};

/// Axis-aligned block box, min <= max per axis. Relative boxes are offsets
/// from the player's feet cell.
struct BlockBox {
  std::array<int, 3> min{};
  std::array<int, 3> max{};
  bool absolute = false;
  bool operator==(const BlockBox&) const = default;
};

struct FilledRegion {
  std::string block;
  BlockBox box;
  bool operator==(const FilledRegion&) const = default;
};

enum class Weather { Clear, Rain, Thunder };
std::string_view to_string(Weather w);

struct ActiveEffect {
  std::string id;
  int seconds = 30;
  int amplifier = 0;
  bool operator==(const ActiveEffect&) const = default;
};

/// Desk-scale world: enough state to decide whether a config executes.
struct WorldState {
  std::array<std::optional<ItemStack>, kInventorySlots> inventory{};
  std::map<EquipSlot, ItemStack> equipment;
  std::vector<Entity> entities;
  std::vector<FilledRegion> regions;
  long time_ticks = 1000;
  Weather weather = Weather::Clear;
  std::vector<ActiveEffect> effects;

  int occupied_slots() const;
  int count_item(std::string_view id) const;
  bool is_night() const;
  bool has_effect(std::string_view id) const;
  bool operator==(const WorldState&) const = default;
};

class SimError : public Error {
public:
  using Error::Error;
};

/// Returns the successor state; throws SimError when the command cannot
/// execute (unknown id, inventory overflow, bad slot or coordinates).
/// A null registry skips id checks.
WorldState apply(const WorldState& state, const cmd::Command& command, const cmd::IdRegistry* registry);

struct CommandOutcome {
  std::size_t index = 0;
  std::string command;  // formatted
  bool ok = true;
  std::string message;
};

struct SimReport {
  WorldState final_state;
  std::vector<CommandOutcome> outcomes;

  bool ok() const;
  /// Failure lines in the form fed back to the config generator; empty when ok.
  std::string error_log() const;
  /// One "OK|ERR <command>[ :: message]" line per command, then the error log block if anything failed.
  std::string to_text() const;
};

/// Applies commands in order; a failing command leaves the state unchanged
/// and the run continues.
SimReport run_config(std::span<const cmd::Command> commands, const cmd::IdRegistry* registry,
                     const WorldState& initial = {});

} // namespace mcu::sim
