#include "mcu/model_client.hpp"

#include "mcu/strings.hpp"

#include <httplib.h>
#include <json.hpp>

namespace mcu {

using json = nlohmann::json;

std::string build_chat_request(const HttpClientSettings& s, const PromptBundle& p) {
  json content = json::array();
  content.push_back({{"type", "text"}, {"text", p.user}});
  for (const auto& img : p.images) {
    if (!img.caption.empty()) content.push_back({{"type", "text"}, {"text", img.caption}});
    auto bytes = str::read_file(img.path);
    content.push_back({{"type", "image_url"},
                       {"image_url", {{"url", "data:image/png;base64," + httplib::detail::base64_encode(bytes)}}}});
  }
  json messages = json::array();
  if (!p.system.empty()) messages.push_back({{"role", "system"}, {"content", p.system}});
  messages.push_back({{"role", "user"}, {"content", content}});
  json body = {{"model", s.model}, {"messages", messages}, {"temperature", s.temperature}};
  return body.dump();
}

std::string parse_chat_response(std::string_view body) {
  try {
    auto j = json::parse(body);
    if (j.contains("error")) throw TransportError("model endpoint error: " + j["error"].dump());
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed chat response: ") + e.what());
  }
}

namespace {

class HttpChatClient : public ModelClient {
public:
  explicit HttpChatClient(HttpClientSettings s) : settings_(std::move(s)) {}

  Capability capability() const override { return settings_.capability; }
  std::string model_id() const override { return settings_.model; }

  std::string send(const PromptBundle& prompt) override {
    if (!prompt.images.empty() && settings_.capability != Capability::Vision)
      throw TransportError("model '" + settings_.model + "' is text-only but the prompt carries images");
    // One client per call: httplib clients are not safe to share across threads.
    httplib::Client cli(settings_.endpoint);
    cli.set_read_timeout(settings_.timeout_seconds, 0);
    cli.set_write_timeout(settings_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!settings_.api_key.empty()) headers.emplace("Authorization", "Bearer " + settings_.api_key);
    auto res = cli.Post(settings_.path, headers, build_chat_request(settings_, prompt), "application/json");
    if (!res) throw TransportError("model endpoint unreachable: " + httplib::to_string(res.error()));
    if (res->status != 200)
      throw TransportError("model endpoint returned HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 300));
    return parse_chat_response(res->body);
  }

private:
  HttpClientSettings settings_;
};

} // namespace

std::unique_ptr<ModelClient> make_http_client(const HttpClientSettings& settings) {
  return std::make_unique<HttpChatClient>(settings);
}

} // namespace mcu
