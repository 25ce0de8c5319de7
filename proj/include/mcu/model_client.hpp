#pragma once

#include "mcu/error.hpp"

#include <atomic>
#include <cstddef>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

namespace mcu {

enum class Capability { Text, Vision };

enum class PromptKind { Config, Reflection, Criteria, Rating, Comparison };
std::string_view to_string(PromptKind k);
PromptKind parse_prompt_kind(std::string_view s);

struct ImageRef {
  std::string path;
  std::string caption;  // "frame 30"
};

/// Everything one model call needs. `subject`, `attempt` and `tag` carry no
/// prompt text; they key replay fixtures (task text, retry number, trajectory id).
struct PromptBundle {
  PromptKind kind = PromptKind::Config;
  std::string subject;
  int attempt = 1;
  std::string tag;
  std::string system;
  std::string user;
  std::vector<ImageRef> images;
};

/// Transport-level failure (network, HTTP status, missing fixture entry). Retryable.
class TransportError : public Error {
public:
  using Error::Error;
};

/// Seam for chat models. Implementations must tolerate concurrent send().
class ModelClient {
public:
  virtual ~ModelClient() = default;
  virtual Capability capability() const = 0;
  virtual std::string model_id() const = 0;
  virtual std::string send(const PromptBundle& prompt) = 0;
};

/// Serves recorded responses. Lookup prefers the most specific entry:
/// (kind, subject, attempt, tag) > (kind, subject, tag) > (kind, subject, attempt)
/// > (kind, subject) > (kind, "*"). Stateless, so concurrent use is deterministic.
class ReplayClient : public ModelClient {
public:
  struct Entry {
    PromptKind kind = PromptKind::Config;
    std::string subject = "*";
    int attempt = 0;  // 0: any
    std::string tag;  // empty: any
    std::string response;
  };

  explicit ReplayClient(std::vector<Entry> entries, Capability cap = Capability::Vision,
                        std::string model = "replay");
  /// Line-delimited JSON objects with keys kind, subject, attempt, tag, response.
  static ReplayClient load(const std::string& path, Capability cap = Capability::Vision);
  static std::vector<Entry> load_entries(const std::string& path);

  Capability capability() const override { return cap_; }
  std::string model_id() const override { return model_; }
  std::string send(const PromptBundle& prompt) override;
  std::size_t sends() const { return sends_.load(); }

private:
  std::vector<Entry> entries_;
  Capability cap_;
  std::string model_;
  std::atomic<std::size_t> sends_{0};
};

/// Per-kind response queues for tests and demos. When a queue runs dry the
/// last response repeats; an empty queue raises TransportError.
class ScriptedClient : public ModelClient {
public:
  explicit ScriptedClient(Capability cap = Capability::Vision) : cap_(cap) {}

  ScriptedClient& then(PromptKind kind, std::string response);
  Capability capability() const override { return cap_; }
  std::string model_id() const override { return "scripted"; }
  std::string send(const PromptBundle& prompt) override;

  std::size_t sends(PromptKind kind) const;
  std::size_t total_sends() const;
  /// Every prompt received, in order.
  std::vector<PromptBundle> received() const;

private:
  Capability cap_;
  mutable std::mutex mu_;
  std::map<PromptKind, std::deque<std::string>> queues_;
  std::map<PromptKind, std::string> last_;
  std::map<PromptKind, std::size_t> counts_;
  std::vector<PromptBundle> received_;
};

/// Appends every exchange to a replay fixture file.
class RecordingClient : public ModelClient {
public:
  RecordingClient(ModelClient& inner, std::string path);
  Capability capability() const override { return inner_.capability(); }
  std::string model_id() const override { return inner_.model_id(); }
  std::string send(const PromptBundle& prompt) override;

private:
  ModelClient& inner_;
  std::string path_;
  std::mutex mu_;
};

/// Caps concurrent sends to the wrapped client.
class ThrottledClient : public ModelClient {
public:
  ThrottledClient(ModelClient& inner, std::ptrdiff_t max_in_flight);
  Capability capability() const override { return inner_.capability(); }
  std::string model_id() const override { return inner_.model_id(); }
  std::string send(const PromptBundle& prompt) override;

private:
  ModelClient& inner_;
  std::counting_semaphore<1024> slots_;
};

struct HttpClientSettings {
  std::string endpoint = "https://api.openai.com";  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string api_key;
  std::string model = "gpt-4o";
  Capability capability = Capability::Vision;
  int timeout_seconds = 120;
  double temperature = 0.0;
};

/// OpenAI-compatible chat-completions client; frames go out as data URLs.
std::unique_ptr<ModelClient> make_http_client(const HttpClientSettings& settings);

/// Request body for the chat-completions endpoint (exposed for tests).
std::string build_chat_request(const HttpClientSettings& settings, const PromptBundle& prompt);
/// Extracts choices[0].message.content; throws TransportError otherwise.
std::string parse_chat_response(std::string_view body);

} // namespace mcu
