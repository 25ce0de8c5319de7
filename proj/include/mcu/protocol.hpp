#pragma once

#include "mcu/env_init.hpp"
#include "mcu/error.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace mcu::proto {

inline constexpr int kProtocolVersion = 1;
/// Frames above this size are rejected before the payload is read.
inline constexpr std::uint32_t kMaxFrameBytes = 16u << 20;

class ProtocolError : public Error {
public:
  using Error::Error;
};

struct Init {
  std::string task;
  forge::EnvInit env;
  bool operator==(const Init&) const = default;
};
struct InitAck {
  bool ok = false;
  std::string error_log;
  bool operator==(const InitAck&) const = default;
};
struct Rollout {
  int max_steps = 0;
  std::string trajectory_id;
  std::string out_dir;  // runner writes <out_dir>/<trajectory_id>
  std::string agent;
  bool operator==(const Rollout&) const = default;
};
struct TrajectoryDone {
  bool ok = false;
  std::string path;
  std::string error_log;
  bool operator==(const TrajectoryDone&) const = default;
};
struct Shutdown {
  bool operator==(const Shutdown&) const = default;
};
/// Sent instead of a reply when a frame cannot be handled; the sender closes after it.
struct ErrorMsg {
  std::string message;
  bool operator==(const ErrorMsg&) const = default;
};

using Message = std::variant<Init, InitAck, Rollout, TrajectoryDone, Shutdown, ErrorMsg>;

std::string_view type_name(const Message& m);
/// {"v":1,"type":"Init",...}
std::string encode(const Message& m);
/// Throws ProtocolError for malformed JSON, unknown types, version mismatch or missing fields.
Message decode(std::string_view payload);

/// 4-byte big-endian length followed by the UTF-8 payload.
std::string frame(std::string_view payload);

/// Byte stream endpoint. Reads return false on clean EOF before any byte.
class Stream {
public:
  virtual ~Stream() = default;
  virtual bool read_exact(char* buf, std::size_t n) = 0;
  virtual void write_all(const char* buf, std::size_t n) = 0;
  virtual void close() {}
};

/// POSIX file descriptors (socket or pipe pair); owns them when asked.
class FdStream : public Stream {
public:
  FdStream(int read_fd, int write_fd, bool owns = true);
  ~FdStream() override;
  FdStream(const FdStream&) = delete;
  FdStream& operator=(const FdStream&) = delete;
  bool read_exact(char* buf, std::size_t n) override;
  void write_all(const char* buf, std::size_t n) override;
  void close() override;

private:
  int rfd_, wfd_;
  bool owns_;
};

/// nullopt on clean EOF; ProtocolError on a truncated or oversized frame.
std::optional<std::string> read_frame(Stream& s);
void write_frame(Stream& s, std::string_view payload);
void send(Stream& s, const Message& m);
/// One request, one reply. An ErrorMsg reply raises ProtocolError.
Message request(Stream& s, const Message& m);

} // namespace mcu::proto
