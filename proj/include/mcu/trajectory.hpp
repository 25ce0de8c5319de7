#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mcu::eval {

/// Binary action names of the agent action space.
inline constexpr std::array<std::string_view, 20> kActionNames = {
    "forward", "back", "left", "right", "jump", "sneak", "sprint", "attack", "use", "drop",
    "inventory", "hotbar.1", "hotbar.2", "hotbar.3", "hotbar.4", "hotbar.5", "hotbar.6",
    "hotbar.7", "hotbar.8", "hotbar.9"};

bool is_action_name(std::string_view name);

struct ActionRecord {
  std::vector<std::string> pressed;  // subset of kActionNames, in table order
  double camera_dx = 0;
  double camera_dy = 0;
  bool operator==(const ActionRecord&) const = default;
};

/// One JSON object per line: every action name with 0/1, plus "camera": [dx, dy].
std::string format_action(const ActionRecord& a);
ActionRecord parse_action(std::string_view line);

struct TrajectoryMeta {
  std::string id;
  std::string task;
  std::uint64_t world_seed = 0;
  std::string config_hash;
  std::string agent;
  int fps = 20;
  bool operator==(const TrajectoryMeta&) const = default;
};

/// A recorded rollout on disk:
///   <dir>/frames/NNNNNN.png, <dir>/actions.jsonl, <dir>/meta.json
struct Trajectory {
  std::string dir;
  TrajectoryMeta meta;
  std::vector<std::string> frames;  // absolute or dir-relative paths, in order
  std::vector<ActionRecord> actions;

  const std::string& id() const { return meta.id; }
};

std::string frame_file_name(std::size_t index);  // "000042.png"
std::string to_json(const TrajectoryMeta& meta);
TrajectoryMeta trajectory_meta_from_json(std::string_view text);

/// Throws NotFoundError for a missing directory or meta file, ParseError for
/// malformed action lines or frame names.
Trajectory read_trajectory(const std::string& dir);
/// Writes meta.json and actions.jsonl; frames are written separately.
void write_trajectory_records(const std::string& dir, const TrajectoryMeta& meta,
                              const std::vector<ActionRecord>& actions);

/// 8-bit RGB, row-major, width*height*3 bytes.
void write_png(const std::string& path, int width, int height, const std::vector<std::uint8_t>& rgb);
std::vector<std::uint8_t> read_file_bytes(const std::string& path);

} // namespace mcu::eval
