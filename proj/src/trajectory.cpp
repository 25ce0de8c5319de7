#include "mcu/trajectory.hpp"

#include "mcu/error.hpp"
#include "mcu/strings.hpp"

#include <json.hpp>
#include <png.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace mcu::eval {

namespace fs = std::filesystem;
using json = nlohmann::json;

bool is_action_name(std::string_view name) {
  return std::find(kActionNames.begin(), kActionNames.end(), name) != kActionNames.end();
}

std::string format_action(const ActionRecord& a) {
  json j = json::object();
  for (auto name : kActionNames) {
    bool on = std::find(a.pressed.begin(), a.pressed.end(), name) != a.pressed.end();
    j[std::string(name)] = on ? 1 : 0;
  }
  j["camera"] = {a.camera_dx, a.camera_dy};
  return j.dump();
}

ActionRecord parse_action(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw ParseError(std::string("action record: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("action record is not an object");
  ActionRecord a;
  for (auto& [key, value] : j.items()) {
    if (key == "camera") {
      if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number())
        throw ParseError("camera must be [dx, dy]");
      a.camera_dx = value[0].get<double>();
      a.camera_dy = value[1].get<double>();
      continue;
    }
    if (!is_action_name(key)) throw ParseError("unknown action '" + key + "'");
    if (!value.is_number_integer() || (value != 0 && value != 1))
      throw ParseError("action '" + key + "' must be 0 or 1");
  }
  for (auto name : kActionNames) {
    auto it = j.find(std::string(name));
    if (it != j.end() && *it == 1) a.pressed.emplace_back(name);
  }
  return a;
}

std::string frame_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu.png", index);
  return buf;
}

std::string to_json(const TrajectoryMeta& m) {
  json j{{"id", m.id},
         {"task", m.task},
         {"world_seed", m.world_seed},
         {"config_hash", m.config_hash},
         {"agent", m.agent},
         {"fps", m.fps}};
  return j.dump(2);
}

TrajectoryMeta trajectory_meta_from_json(std::string_view text) {
  try {
    auto j = json::parse(text);
    TrajectoryMeta m;
    m.id = j.at("id").get<std::string>();
    m.task = j.at("task").get<std::string>();
    m.world_seed = j.value("world_seed", std::uint64_t{0});
    m.config_hash = j.value("config_hash", "");
    m.agent = j.value("agent", "");
    m.fps = j.value("fps", 20);
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("trajectory meta: ") + e.what());
  }
}

Trajectory read_trajectory(const std::string& dir) {
  fs::path root(dir);
  if (!fs::is_directory(root)) throw NotFoundError("no trajectory directory " + dir);
  Trajectory t;
  t.dir = dir;
  t.meta = trajectory_meta_from_json(str::read_file((root / "meta.json").string()));

  auto frames_dir = root / "frames";
  if (fs::is_directory(frames_dir)) {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(frames_dir)) {
      auto name = e.path().filename().string();
      if (e.path().extension() != ".png") continue;
      names.push_back(name);
    }
    std::sort(names.begin(), names.end());
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] != frame_file_name(i)) throw ParseError("frame sequence broken at " + names[i]);
      t.frames.push_back((frames_dir / names[i]).string());
    }
  }

  auto actions_path = root / "actions.jsonl";
  if (fs::exists(actions_path)) {
    std::size_t lineno = 0;
    for (const auto& line : str::split(str::read_file(actions_path.string()), '\n')) {
      ++lineno;
      if (str::trim(line).empty()) continue;
      try {
        t.actions.push_back(parse_action(line));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), lineno);
      }
    }
  }
  return t;
}

void write_trajectory_records(const std::string& dir, const TrajectoryMeta& meta,
                              const std::vector<ActionRecord>& actions) {
  fs::create_directories(fs::path(dir) / "frames");
  str::write_file((fs::path(dir) / "meta.json").string(), to_json(meta) + "\n");
  std::string lines;
  for (const auto& a : actions) lines += format_action(a) + "\n";
  str::write_file((fs::path(dir) / "actions.jsonl").string(), lines);
}

void write_png(const std::string& path, int width, int height, const std::vector<std::uint8_t>& rgb) {
  if (width <= 0 || height <= 0 || rgb.size() != static_cast<std::size_t>(width) * height * 3)
    throw ValidationError("write_png: pixel buffer does not match dimensions");
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, rgb.data(), 0, nullptr))
    throw Error("write_png: " + std::string(image.message));
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace mcu::eval
