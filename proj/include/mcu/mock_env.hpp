#pragma once

#include "mcu/protocol.hpp"
#include "mcu/registry.hpp"
#include "mcu/world.hpp"

#include <memory>
#include <optional>
#include <string>
#include <thread>

namespace mcu::proto {

struct MockEnvOptions {
  const cmd::IdRegistry* registry = nullptr;
  int frame_width = 16;
  int frame_height = 16;
  std::string default_agent = "mock-agent";
};

/// Desk-scale runner: Init applies the commands through world-sim, Rollout
/// writes a deterministic fabricated trajectory.
class MockEnv {
public:
  explicit MockEnv(MockEnvOptions options = {});
  /// Reply for one request; never throws for well-formed messages.
  Message handle(const Message& m);
  /// Serves frames until Shutdown or EOF. Malformed frames get an Error
  /// reply and end the session.
  void serve(Stream& s);

private:
  MockEnvOptions opt_;
  std::optional<Init> init_;
  sim::WorldState state_;
};

/// A MockEnv on a background thread behind a socket pair.
class InProcessEnv {
public:
  explicit InProcessEnv(MockEnvOptions options = {});
  ~InProcessEnv();
  InProcessEnv(const InProcessEnv&) = delete;
  InProcessEnv& operator=(const InProcessEnv&) = delete;
  Stream& stream() { return *client_; }

private:
  std::unique_ptr<FdStream> client_;
  std::unique_ptr<FdStream> server_;
  std::thread worker_;
};

/// A runner process speaking the protocol on its stdin/stdout.
class ChildProcessEnv {
public:
  explicit ChildProcessEnv(const std::string& command);
  ~ChildProcessEnv();
  ChildProcessEnv(const ChildProcessEnv&) = delete;
  ChildProcessEnv& operator=(const ChildProcessEnv&) = delete;
  Stream& stream() { return *stream_; }

private:
  std::unique_ptr<FdStream> stream_;
  int pid_ = -1;
};

} // namespace mcu::proto
