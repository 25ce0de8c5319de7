#pragma once

#include "mcu/config_forge.hpp"
#include "mcu/random.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mcu::forge {

struct SpawnRecord {
  std::uint64_t world_seed = 0;
  std::string precondition;  // biome or named situation, "default" as fallback
  std::array<long, 3> xyz{};
  bool operator==(const SpawnRecord&) const = default;
};

/// Known spawn locations per (world seed, precondition).
class SpawnDb {
public:
  /// Tab-separated: seed, precondition, x, y, z. '#' starts a comment.
  static SpawnDb parse(std::string_view text);
  static SpawnDb load(const std::string& path);

  /// Throws ValidationError when the coordinate is already listed for the pair.
  void add(SpawnRecord r);
  std::vector<SpawnRecord> find(std::uint64_t seed, std::string_view precondition) const;
  std::size_t size() const { return records_.size(); }

private:
  std::vector<SpawnRecord> records_;
};

/// Keyword -> precondition tag; first keyword (matched on word boundaries) in file order wins.
class PreconditionRules {
public:
  static PreconditionRules parse(std::string_view text);
  static PreconditionRules load(const std::string& path);
  void add(std::string keyword, std::string tag);
  std::string resolve(std::string_view task) const;  // "default" when nothing matches

private:
  std::vector<std::pair<std::string, std::string>> rules_;
};

struct InventoryItem {
  std::string item;  // canonical id
  int count = 1;
  bool operator==(const InventoryItem&) const = default;
};

/// Weighted item table standing in for inventory snapshots of human play.
class DistractorPool {
public:
  /// Tab-separated: item, count, weight.
  static DistractorPool parse(std::string_view text);
  static DistractorPool load(const std::string& path);
  void add(std::string item, int count, double weight);
  /// Up to k distinct items not in `exclude`.
  std::vector<InventoryItem> sample(Rng& rng, std::size_t k, const std::vector<std::string>& exclude) const;
  bool empty() const { return items_.empty(); }

private:
  struct Entry {
    InventoryItem item;
    double weight;
  };
  std::vector<Entry> items_;
};

struct EnvInit {
  std::uint64_t world_seed = 0;
  std::string precondition;
  std::array<long, 3> spawn{};
  std::vector<InventoryItem> inventory_necessary;   // I_n
  std::vector<InventoryItem> inventory_distractor;  // I_r
  std::vector<cmd::Command> commands;
  Difficulty difficulty = Difficulty::Simple;

  /// Config commands followed by one give per distractor item.
  std::vector<cmd::Command> all_commands() const;
  bool operator==(const EnvInit&) const = default;
};

std::string to_json(const EnvInit& init);
EnvInit env_init_from_json(std::string_view text);

struct InitialStateSources {
  const SpawnDb* spawns = nullptr;
  const PreconditionRules* preconditions = nullptr;
  const DistractorPool* distractors = nullptr;
};

/// Deterministic per rng_seed. Throws NotFoundError when neither the task's
/// precondition nor "default" has a record for world_seed.
EnvInit sample_initial_state(const TaskConfig& config, std::uint64_t world_seed, const InitialStateSources& src,
                             std::uint64_t rng_seed);

} // namespace mcu::forge
