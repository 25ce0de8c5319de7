#include "mcu/mock_env.hpp"

#include "mcu/hash.hpp"
#include "mcu/random.hpp"
#include "mcu/trajectory.hpp"

#include <cmath>
#include <filesystem>

#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

namespace mcu::proto {

namespace fs = std::filesystem;

MockEnv::MockEnv(MockEnvOptions options) : opt_(std::move(options)) {}

namespace {

std::string config_hash(const forge::EnvInit& env) {
  std::string text;
  for (const auto& c : env.all_commands()) text += cmd::format_command(c) + "\n";
  return sha256_hex(text);
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

} // namespace

Message MockEnv::handle(const Message& m) {
  if (const auto* init = std::get_if<Init>(&m)) {
    auto report = sim::run_config(init->env.all_commands(), opt_.registry);
    if (!report.ok()) {
      init_.reset();
      return InitAck{false, report.error_log()};
    }
    init_ = *init;
    state_ = report.final_state;
    return InitAck{true, {}};
  }
  if (const auto* roll = std::get_if<Rollout>(&m)) {
    if (!init_) return TrajectoryDone{false, {}, "rollout before a successful init"};
    try {
      auto dir = (fs::path(roll->out_dir) / roll->trajectory_id).string();
      fs::remove_all(dir);
      eval::TrajectoryMeta meta;
      meta.id = roll->trajectory_id;
      meta.task = init_->task;
      meta.world_seed = init_->env.world_seed;
      meta.config_hash = config_hash(init_->env);
      meta.agent = roll->agent.empty() ? opt_.default_agent : roll->agent;

      Rng rng(fnv1a(roll->trajectory_id, init_->env.world_seed ^ 0x5bd1e995ULL));
      std::vector<eval::ActionRecord> actions;
      actions.reserve(static_cast<std::size_t>(roll->max_steps));
      for (int i = 0; i < roll->max_steps; ++i) {
        eval::ActionRecord a;
        double u = uniform_unit(rng);
        if (u < 0.6) a.pressed.emplace_back("forward");
        if (uniform_unit(rng) < 0.1) a.pressed.emplace_back("jump");
        if (uniform_unit(rng) < 0.3) a.pressed.emplace_back("attack");
        if (uniform_unit(rng) < 0.1) a.pressed.emplace_back("use");
        a.camera_dx = round2((uniform_unit(rng) - 0.5) * 10.0);
        a.camera_dy = round2((uniform_unit(rng) - 0.5) * 4.0);
        actions.push_back(std::move(a));
      }
      eval::write_trajectory_records(dir, meta, actions);

      const int w = opt_.frame_width, h = opt_.frame_height;
      std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h * 3);
      const auto base = static_cast<std::uint8_t>(state_.occupied_slots() * 7 + state_.entities.size() * 31);
      const bool night = state_.is_night();
      for (int i = 0; i < roll->max_steps; ++i) {
        for (int y = 0; y < h; ++y)
          for (int x = 0; x < w; ++x) {
            auto* p = &px[(static_cast<std::size_t>(y) * w + x) * 3];
            p[0] = static_cast<std::uint8_t>(base + x * 8 + i);
            p[1] = static_cast<std::uint8_t>(night ? 20 + y * 2 : 120 + y * 8);
            p[2] = static_cast<std::uint8_t>((x ^ y) * 16 + i * 3);
          }
        eval::write_png((fs::path(dir) / "frames" / eval::frame_file_name(static_cast<std::size_t>(i))).string(), w,
                        h, px);
      }
      return TrajectoryDone{true, dir, {}};
    } catch (const std::exception& e) {
      return TrajectoryDone{false, {}, e.what()};
    }
  }
  if (std::holds_alternative<Shutdown>(m)) return Shutdown{};
  return ErrorMsg{"unexpected " + std::string(type_name(m)) + " from client"};
}

void MockEnv::serve(Stream& s) {
  for (;;) {
    Message msg;
    try {
      auto payload = read_frame(s);
      if (!payload) return;
      msg = decode(*payload);
    } catch (const ProtocolError& e) {
      try {
        send(s, ErrorMsg{e.what()});
      } catch (const ProtocolError&) {
      }
      return;
    }
    if (std::holds_alternative<Shutdown>(msg)) return;
    auto reply = handle(msg);
    try {
      send(s, reply);
    } catch (const ProtocolError&) {
      return;
    }
    if (std::holds_alternative<ErrorMsg>(reply)) return;
  }
}

InProcessEnv::InProcessEnv(MockEnvOptions options) {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) throw ProtocolError("socketpair failed");
  client_ = std::make_unique<FdStream>(fds[0], fds[0]);
  server_ = std::make_unique<FdStream>(fds[1], fds[1]);
  worker_ = std::thread([this, options = std::move(options)] {
    MockEnv env(options);
    env.serve(*server_);
    server_->close();
  });
}

InProcessEnv::~InProcessEnv() {
  try {
    send(*client_, Shutdown{});
  } catch (const ProtocolError&) {
  }
  client_->close();
  if (worker_.joinable()) worker_.join();
}

ChildProcessEnv::ChildProcessEnv(const std::string& command) {
  int to_child[2], from_child[2];
  if (::pipe(to_child) != 0) throw ProtocolError("pipe failed");
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw ProtocolError("pipe failed");
  }
  pid_ = ::fork();
  if (pid_ < 0) throw ProtocolError("fork failed");
  if (pid_ == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  stream_ = std::make_unique<FdStream>(from_child[0], to_child[1]);
}

ChildProcessEnv::~ChildProcessEnv() {
  try {
    send(*stream_, Shutdown{});
  } catch (const ProtocolError&) {
  }
  stream_->close();
  if (pid_ > 0) {
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }
}

} // namespace mcu::proto
