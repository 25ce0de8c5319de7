#include "mcu/model_client.hpp"

#include "mcu/strings.hpp"

#include <json.hpp>

#include <fstream>

namespace mcu {

using json = nlohmann::json;

std::string_view to_string(PromptKind k) {
  switch (k) {
  case PromptKind::Config: return "config";
  case PromptKind::Reflection: return "reflection";
  case PromptKind::Criteria: return "criteria";
  case PromptKind::Rating: return "rating";
  case PromptKind::Comparison: return "comparison";
  }
  return "config";
}

PromptKind parse_prompt_kind(std::string_view s) {
  for (auto k : {PromptKind::Config, PromptKind::Reflection, PromptKind::Criteria, PromptKind::Rating,
                 PromptKind::Comparison})
    if (to_string(k) == s) return k;
  throw ParseError("unknown prompt kind '" + std::string(s) + "'");
}

// ------------------------------------------------------------------- replay

ReplayClient::ReplayClient(std::vector<Entry> entries, Capability cap, std::string model)
    : entries_(std::move(entries)), cap_(cap), model_(std::move(model)) {}

ReplayClient ReplayClient::load(const std::string& path, Capability cap) {
  return ReplayClient(load_entries(path), cap);
}

std::vector<ReplayClient::Entry> ReplayClient::load_entries(const std::string& path) {
  std::vector<Entry> entries;
  std::size_t lineno = 0;
  for (const auto& raw : str::split(str::read_file(path), '\n')) {
    ++lineno;
    if (str::trim(raw).empty()) continue;
    try {
      auto j = json::parse(raw);
      Entry e;
      e.kind = parse_prompt_kind(j.at("kind").get<std::string>());
      e.subject = j.value("subject", std::string("*"));
      e.attempt = j.value("attempt", 0);
      e.tag = j.value("tag", std::string());
      e.response = j.at("response").get<std::string>();
      entries.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw ParseError(std::string("replay fixture: ") + ex.what(), lineno);
    } catch (const ParseError& ex) {
      if (ex.line()) throw;
      throw ParseError(std::string("replay fixture: ") + ex.what(), lineno);
    }
  }
  return entries;
}

std::string ReplayClient::send(const PromptBundle& p) {
  ++sends_;
  const Entry* best = nullptr;
  int best_score = -1;
  for (const auto& e : entries_) {
    if (e.kind != p.kind) continue;
    bool wildcard = e.subject == "*";
    if (!wildcard && e.subject != p.subject) continue;
    if (e.attempt != 0 && e.attempt != p.attempt) continue;
    if (!e.tag.empty() && e.tag != p.tag) continue;
    int score = (wildcard ? 0 : 8) + (e.tag.empty() ? 0 : 4) + (e.attempt != 0 ? 2 : 0);
    if (score > best_score) {
      best = &e;
      best_score = score;
    }
  }
  if (!best)
    throw TransportError("replay: no recorded " + std::string(to_string(p.kind)) + " response for '" +
                         p.subject + "' (attempt " + std::to_string(p.attempt) + ")");
  return best->response;
}

// ----------------------------------------------------------------- scripted

ScriptedClient& ScriptedClient::then(PromptKind kind, std::string response) {
  std::lock_guard lock(mu_);
  queues_[kind].push_back(std::move(response));
  return *this;
}

std::string ScriptedClient::send(const PromptBundle& prompt) {
  std::lock_guard lock(mu_);
  received_.push_back(prompt);
  ++counts_[prompt.kind];
  auto& q = queues_[prompt.kind];
  if (!q.empty()) {
    last_[prompt.kind] = q.front();
    q.pop_front();
    return last_[prompt.kind];
  }
  auto it = last_.find(prompt.kind);
  if (it == last_.end())
    throw TransportError("scripted client has no " + std::string(to_string(prompt.kind)) + " response");
  return it->second;
}

std::size_t ScriptedClient::sends(PromptKind kind) const {
  std::lock_guard lock(mu_);
  auto it = counts_.find(kind);
  return it == counts_.end() ? 0 : it->second;
}

std::size_t ScriptedClient::total_sends() const {
  std::lock_guard lock(mu_);
  return received_.size();
}

std::vector<PromptBundle> ScriptedClient::received() const {
  std::lock_guard lock(mu_);
  return received_;
}

// ---------------------------------------------------------------- recording

RecordingClient::RecordingClient(ModelClient& inner, std::string path) : inner_(inner), path_(std::move(path)) {}

std::string RecordingClient::send(const PromptBundle& prompt) {
  auto response = inner_.send(prompt);
  json j = {{"kind", to_string(prompt.kind)}, {"subject", prompt.subject}, {"attempt", prompt.attempt},
            {"tag", prompt.tag}, {"response", response}};
  std::lock_guard lock(mu_);
  std::ofstream out(path_, std::ios::app);
  out << j.dump() << '\n';
  return response;
}

// ---------------------------------------------------------------- throttled

ThrottledClient::ThrottledClient(ModelClient& inner, std::ptrdiff_t max_in_flight)
    : inner_(inner), slots_(std::max<std::ptrdiff_t>(1, std::min<std::ptrdiff_t>(max_in_flight, 1024))) {}

std::string ThrottledClient::send(const PromptBundle& prompt) {
  slots_.acquire();
  try {
    auto r = inner_.send(prompt);
    slots_.release();
    return r;
  } catch (...) {
    slots_.release();
    throw;
  }
}

} // namespace mcu
