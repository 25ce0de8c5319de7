#include "mcu/protocol.hpp"

#include <json.hpp>

#include <cerrno>
#include <csignal>
#include <cstring>
#include <mutex>
#include <unistd.h>

namespace mcu::proto {

using json = nlohmann::json;

namespace {
template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;
} // namespace

std::string_view type_name(const Message& m) {
  return std::visit(overloaded{[](const Init&) { return "Init"; }, [](const InitAck&) { return "InitAck"; },
                               [](const Rollout&) { return "Rollout"; },
                               [](const TrajectoryDone&) { return "TrajectoryDone"; },
                               [](const Shutdown&) { return "Shutdown"; }, [](const ErrorMsg&) { return "Error"; }},
                    m);
}

std::string encode(const Message& m) {
  json j{{"v", kProtocolVersion}, {"type", std::string(type_name(m))}};
  std::visit(overloaded{[&](const Init& x) {
                          j["task"] = x.task;
                          j["env"] = json::parse(forge::to_json(x.env));
                        },
                        [&](const InitAck& x) {
                          j["ok"] = x.ok;
                          j["error_log"] = x.error_log;
                        },
                        [&](const Rollout& x) {
                          j["max_steps"] = x.max_steps;
                          j["trajectory_id"] = x.trajectory_id;
                          j["out_dir"] = x.out_dir;
                          j["agent"] = x.agent;
                        },
                        [&](const TrajectoryDone& x) {
                          j["ok"] = x.ok;
                          j["path"] = x.path;
                          j["error_log"] = x.error_log;
                        },
                        [&](const Shutdown&) {}, [&](const ErrorMsg& x) { j["message"] = x.message; }},
             m);
  // Error text can quote raw peer bytes; keep the output valid UTF-8.
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

Message decode(std::string_view payload) {
  json j;
  try {
    j = json::parse(payload);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed message: ") + e.what());
  }
  if (!j.is_object()) throw ProtocolError("message is not an object");
  try {
    if (j.value("v", -1) != kProtocolVersion) throw ProtocolError("unsupported protocol version");
    auto type = j.at("type").get<std::string>();
    if (type == "Init") {
      Init m;
      m.task = j.at("task").get<std::string>();
      m.env = forge::env_init_from_json(j.at("env").dump());
      return m;
    }
    if (type == "InitAck") return InitAck{j.at("ok").get<bool>(), j.value("error_log", "")};
    if (type == "Rollout") {
      Rollout m;
      m.max_steps = j.at("max_steps").get<int>();
      if (m.max_steps < 1) throw ProtocolError("max_steps must be >= 1");
      m.trajectory_id = j.at("trajectory_id").get<std::string>();
      if (m.trajectory_id.empty() || m.trajectory_id.find('/') != std::string::npos || m.trajectory_id == "." ||
          m.trajectory_id == "..")
        throw ProtocolError("bad trajectory id");
      m.out_dir = j.at("out_dir").get<std::string>();
      m.agent = j.value("agent", "");
      return m;
    }
    if (type == "TrajectoryDone")
      return TrajectoryDone{j.at("ok").get<bool>(), j.value("path", ""), j.value("error_log", "")};
    if (type == "Shutdown") return Shutdown{};
    if (type == "Error") return ErrorMsg{j.value("message", "")};
    throw ProtocolError("unknown message type '" + type + "'");
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("bad message field: ") + e.what());
  } catch (const ParseError& e) {
    throw ProtocolError(std::string("bad message field: ") + e.what());
  } catch (const ValidationError& e) {
    throw ProtocolError(std::string("bad message field: ") + e.what());
  }
}

std::string frame(std::string_view payload) {
  auto n = static_cast<std::uint32_t>(payload.size());
  std::string out;
  out.reserve(4 + payload.size());
  out += static_cast<char>((n >> 24) & 0xff);
  out += static_cast<char>((n >> 16) & 0xff);
  out += static_cast<char>((n >> 8) & 0xff);
  out += static_cast<char>(n & 0xff);
  out += payload;
  return out;
}

FdStream::FdStream(int read_fd, int write_fd, bool owns) : rfd_(read_fd), wfd_(write_fd), owns_(owns) {
  // a peer that hangs up must surface as a write error, not kill the process
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

FdStream::~FdStream() { close(); }

void FdStream::close() {
  if (!owns_) return;
  if (rfd_ >= 0) ::close(rfd_);
  if (wfd_ >= 0 && wfd_ != rfd_) ::close(wfd_);
  rfd_ = wfd_ = -1;
}

bool FdStream::read_exact(char* buf, std::size_t n) {
  std::size_t got = 0;
  while (got < n) {
    auto r = ::read(rfd_, buf + got, n - got);
    if (r == 0) {
      if (got == 0) return false;
      throw ProtocolError("stream closed mid-frame");
    }
    if (r < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(std::string("read: ") + std::strerror(errno));
    }
    got += static_cast<std::size_t>(r);
  }
  return true;
}

void FdStream::write_all(const char* buf, std::size_t n) {
  std::size_t put = 0;
  while (put < n) {
    auto r = ::write(wfd_, buf + put, n - put);
    if (r < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(std::string("write: ") + std::strerror(errno));
    }
    put += static_cast<std::size_t>(r);
  }
}

std::optional<std::string> read_frame(Stream& s) {
  unsigned char hdr[4];
  if (!s.read_exact(reinterpret_cast<char*>(hdr), 4)) return std::nullopt;
  std::uint32_t n = (std::uint32_t{hdr[0]} << 24) | (std::uint32_t{hdr[1]} << 16) | (std::uint32_t{hdr[2]} << 8) | hdr[3];
  if (n > kMaxFrameBytes) throw ProtocolError("frame of " + std::to_string(n) + " bytes exceeds limit");
  std::string payload(n, '\0');
  if (n > 0 && !s.read_exact(payload.data(), n)) throw ProtocolError("stream closed mid-frame");
  return payload;
}

void write_frame(Stream& s, std::string_view payload) {
  auto f = frame(payload);
  s.write_all(f.data(), f.size());
}

void send(Stream& s, const Message& m) { write_frame(s, encode(m)); }

Message request(Stream& s, const Message& m) {
  send(s, m);
  auto reply = read_frame(s);
  if (!reply) throw ProtocolError("env closed the connection");
  auto msg = decode(*reply);
  if (auto* e = std::get_if<ErrorMsg>(&msg)) throw ProtocolError("env error: " + e->message);
  return msg;
}

} // namespace mcu::proto
