#include "mcu/env_init.hpp"

#include "mcu/strings.hpp"

#include <cctype>
#include <json.hpp>

#include <algorithm>
#include <charconv>

namespace mcu::forge {

using json = nlohmann::json;

namespace {

template <class T> T parse_number(std::string_view s, std::size_t line, const char* what) {
  T v{};
  s = str::trim(s);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ParseError(std::string("bad ") + what, line);
  return v;
}

/// Non-empty, non-comment lines split on tabs, with 1-based line numbers.
template <class F> void for_each_row(std::string_view text, F&& fn) {
  std::size_t lineno = 0;
  for (const auto& raw : str::split(text, '\n')) {
    ++lineno;
    auto t = str::trim(raw);
    if (t.empty() || t.front() == '#') continue;
    fn(str::split(t, '\t'), lineno);
  }
}

} // namespace

SpawnDb SpawnDb::parse(std::string_view text) {
  SpawnDb db;
  for_each_row(text, [&](const std::vector<std::string>& f, std::size_t line) {
    if (f.size() != 5) throw ParseError("expected 5 fields", line);
    SpawnRecord r;
    r.world_seed = parse_number<std::uint64_t>(f[0], line, "seed");
    r.precondition = std::string(str::trim(f[1]));
    for (int i = 0; i < 3; ++i) r.xyz[i] = parse_number<long>(f[2 + i], line, "coordinate");
    try {
      db.add(std::move(r));
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line) + ": " + e.what());
    }
  });
  return db;
}

SpawnDb SpawnDb::load(const std::string& path) { return parse(str::read_file(path)); }

void SpawnDb::add(SpawnRecord r) {
  if (r.precondition.empty()) throw ValidationError("spawn record without precondition");
  for (const auto& e : records_)
    if (e == r) throw ValidationError("duplicate spawn coordinate for seed " + std::to_string(r.world_seed) + " / " +
                                      r.precondition);
  records_.push_back(std::move(r));
}

std::vector<SpawnRecord> SpawnDb::find(std::uint64_t seed, std::string_view precondition) const {
  std::vector<SpawnRecord> out;
  for (const auto& r : records_)
    if (r.world_seed == seed && r.precondition == precondition) out.push_back(r);
  return out;
}

PreconditionRules PreconditionRules::parse(std::string_view text) {
  PreconditionRules rules;
  for_each_row(text, [&](const std::vector<std::string>& f, std::size_t line) {
    if (f.size() != 2) throw ParseError("expected keyword<TAB>tag", line);
    rules.add(std::string(str::trim(f[0])), std::string(str::trim(f[1])));
  });
  return rules;
}

PreconditionRules PreconditionRules::load(const std::string& path) { return parse(str::read_file(path)); }

void PreconditionRules::add(std::string keyword, std::string tag) {
  rules_.emplace_back(str::lower(keyword), std::move(tag));
}

std::string PreconditionRules::resolve(std::string_view task) const {
  auto t = str::lower(task);
  auto word = [&](std::size_t i) { return i < t.size() && std::isalnum(static_cast<unsigned char>(t[i])); };
  for (const auto& [kw, tag] : rules_)
    for (auto at = t.find(kw); at != std::string::npos; at = t.find(kw, at + 1))
      if ((at == 0 || !word(at - 1)) && !word(at + kw.size())) return tag;
  return "default";
}

DistractorPool DistractorPool::parse(std::string_view text) {
  DistractorPool pool;
  for_each_row(text, [&](const std::vector<std::string>& f, std::size_t line) {
    if (f.size() != 3) throw ParseError("expected item<TAB>count<TAB>weight", line);
    auto count = parse_number<int>(f[1], line, "count");
    auto weight = parse_number<double>(f[2], line, "weight");
    if (count < 1 || weight <= 0) throw ParseError("count and weight must be positive", line);
    pool.add(std::string(str::trim(f[0])), count, weight);
  });
  return pool;
}

DistractorPool DistractorPool::load(const std::string& path) { return parse(str::read_file(path)); }

void DistractorPool::add(std::string item, int count, double weight) {
  items_.push_back({{cmd::canonical_id(item), count}, weight});
}

std::vector<InventoryItem> DistractorPool::sample(Rng& rng, std::size_t k,
                                                  const std::vector<std::string>& exclude) const {
  std::vector<Entry> left;
  for (const auto& e : items_)
    if (std::find(exclude.begin(), exclude.end(), e.item.item) == exclude.end()) left.push_back(e);
  std::vector<InventoryItem> out;
  while (out.size() < k && !left.empty()) {
    double total = 0;
    for (const auto& e : left) total += e.weight;
    double x = uniform_unit(rng) * total;
    std::size_t pick = left.size() - 1;
    for (std::size_t i = 0; i < left.size(); ++i) {
      if (x < left[i].weight) {
        pick = i;
        break;
      }
      x -= left[i].weight;
    }
    out.push_back(left[pick].item);
    left.erase(left.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

std::vector<cmd::Command> EnvInit::all_commands() const {
  auto out = commands;
  for (const auto& it : inventory_distractor) {
    cmd::Give g;
    g.target.text = "@s";
    g.item.id = it.item;
    g.count = it.count;
    out.push_back(cmd::Command{g, {}});
  }
  return out;
}

namespace {

json items_json(const std::vector<InventoryItem>& items) {
  auto a = json::array();
  for (const auto& it : items) a.push_back({{"item", it.item}, {"count", it.count}});
  return a;
}

std::vector<InventoryItem> items_from(const json& a) {
  std::vector<InventoryItem> out;
  for (const auto& e : a) out.push_back({e.at("item").get<std::string>(), e.at("count").get<int>()});
  return out;
}

} // namespace

std::string to_json(const EnvInit& init) {
  json j;
  j["world_seed"] = init.world_seed;
  j["precondition"] = init.precondition;
  j["spawn"] = init.spawn;
  j["inventory_necessary"] = items_json(init.inventory_necessary);
  j["inventory_distractor"] = items_json(init.inventory_distractor);
  auto& cmds = j["commands"] = json::array();
  for (const auto& c : init.commands) cmds.push_back(cmd::format_command(c));
  j["difficulty"] = std::string(to_string(init.difficulty));
  return j.dump();
}

EnvInit env_init_from_json(std::string_view text) {
  try {
    auto j = json::parse(text);
    EnvInit e;
    e.world_seed = j.at("world_seed").get<std::uint64_t>();
    e.precondition = j.at("precondition").get<std::string>();
    e.spawn = j.at("spawn").get<std::array<long, 3>>();
    e.inventory_necessary = items_from(j.at("inventory_necessary"));
    e.inventory_distractor = items_from(j.at("inventory_distractor"));
    for (const auto& s : j.at("commands")) e.commands.push_back(cmd::parse_command(s.get<std::string>()));
    e.difficulty = parse_difficulty(j.at("difficulty").get<std::string>());
    return e;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("env init: ") + ex.what());
  }
}

EnvInit sample_initial_state(const TaskConfig& config, std::uint64_t world_seed, const InitialStateSources& src,
                             std::uint64_t rng_seed) {
  if (!src.spawns) throw ValidationError("sample_initial_state: no spawn database");
  Rng rng(rng_seed);
  EnvInit e;
  e.world_seed = world_seed;
  e.difficulty = config.difficulty;
  e.commands = config.commands;
  e.precondition = src.preconditions ? src.preconditions->resolve(config.task) : "default";
  auto records = src.spawns->find(world_seed, e.precondition);
  if (records.empty() && e.precondition != "default") {
    e.precondition = "default";
    records = src.spawns->find(world_seed, e.precondition);
  }
  if (records.empty())
    throw NotFoundError("no spawn record for seed " + std::to_string(world_seed) + " and precondition '" +
                        (src.preconditions ? src.preconditions->resolve(config.task) : "default") + "'");
  e.spawn = records[uniform_index(rng, records.size())].xyz;

  std::vector<std::string> given;
  for (const auto& c : config.commands) {
    const auto* g = c.innermost().as<cmd::Give>();
    if (!g) continue;
    auto id = g->item.canonical_id();
    auto it = std::find_if(e.inventory_necessary.begin(), e.inventory_necessary.end(),
                           [&](const InventoryItem& x) { return x.item == id; });
    if (it != e.inventory_necessary.end()) {
      it->count += g->amount();
    } else {
      e.inventory_necessary.push_back({id, g->amount()});
      given.push_back(id);
    }
  }
  if (config.difficulty == Difficulty::Hard && src.distractors && !src.distractors->empty()) {
    std::size_t k = 1 + uniform_index(rng, 2);
    e.inventory_distractor = src.distractors->sample(rng, k, given);
  }
  return e;
}

} // namespace mcu::forge
