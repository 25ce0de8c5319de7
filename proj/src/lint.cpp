#include "mcu/lint.hpp"

#include "mcu/strings.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace mcu::cmd {

std::string_view to_string(Severity s) { return s == Severity::Error ? "error" : "warn"; }

namespace {

constexpr std::array<LintRule, 6> kRules = {{
    {"R1", Severity::Error, "summon distance exceeds 4 blocks"},
    {"R2", Severity::Error, "fill region inaccessible or suffocates the player"},
    {"R3", Severity::Warn, "item quantity not above the recipe requirement"},
    {"R4", Severity::Error, "final target item given directly"},
    {"R5", Severity::Error, "entity cannot be directly summoned"},
    {"R6", Severity::Warn, "unknown id"},
}};

Severity severity_of(std::string_view rule) {
  for (const auto& r : kRules)
    if (r.id == rule) return r.severity;
  return Severity::Error;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

const std::set<std::string, std::less<>>& air_like() {
  static const std::set<std::string, std::less<>> s = {"air", "cave_air", "void_air", "water", "lava"};
  return s;
}

// Player feet and head cells when the command runs at the player.
bool covers_player(const Fill& f) {
  if (!f.from.all_relative() || !f.to.all_relative()) return false;
  auto span_has = [](const Coord& a, const Coord& b, int cell) {
    auto lo = std::floor(std::min(a.offset(), b.offset()));
    auto hi = std::floor(std::max(a.offset(), b.offset()));
    return lo <= cell && cell <= hi;
  };
  return span_has(f.from.x, f.to.x, 0) && span_has(f.from.z, f.to.z, 0) &&
         (span_has(f.from.y, f.to.y, 0) || span_has(f.from.y, f.to.y, 1));
}

std::string singular(std::string s) {
  if (s.size() > 3 && s.ends_with("es") && (s.ends_with("ches") || s.ends_with("shes") || s.ends_with("xes")))
    return s.substr(0, s.size() - 2);
  if (s.size() > 1 && s.back() == 's' && !s.ends_with("ss")) s.pop_back();
  return s;
}

bool names_match(const std::string& item_path, const std::string& target) {
  std::string item = item_path;
  std::replace(item.begin(), item.end(), '_', ' ');
  return item == target || singular(item) == singular(target);
}

} // namespace

std::span<const LintRule> lint_rules() { return kRules; }

std::vector<std::string> task_targets(std::string_view task) {
  static const std::set<std::string, std::less<>> verbs = {
      "craft", "smelt", "cook", "brew", "obtain", "collect", "get", "mine", "make",
      "harvest", "gather", "acquire"};
  static const std::set<std::string, std::less<>> stops = {
      "with", "and", "or", "from", "using", "by", "in", "on", "at", "then", "into", "for", "near", "without"};
  static const std::set<std::string, std::less<>> skip = {
      "a", "an", "the", "some", "one", "two", "three", "four", "five", "to", "up"};

  std::vector<std::string> words;
  std::string cur;
  for (char c : task) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      cur += static_cast<char>(std::tolower(u));
    } else if (c == '_') {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));

  std::vector<std::string> targets;
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::size_t start;
    if (words[i] == "trade" && i + 1 < words.size() && words[i + 1] == "for") {
      start = i + 2;
    } else if (verbs.count(words[i])) {
      start = i + 1;
    } else {
      continue;
    }
    std::vector<std::string> phrase;
    std::size_t j = start;
    for (; j < words.size() && !stops.count(words[j]); ++j) {
      if (phrase.empty() && (skip.count(words[j]) ||
                             std::all_of(words[j].begin(), words[j].end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })))
        continue;
      phrase.push_back(words[j]);
    }
    if (!phrase.empty()) targets.push_back(str::join(phrase, " "));
    i = j > i ? j - 1 : i;
  }
  return targets;
}

std::vector<LintFinding> lint_config(std::span<const Command> commands, std::string_view task,
                                     const LintContext& ctx) {
  std::vector<LintFinding> out;
  const auto targets = task_targets(task);
  const auto& policy = ctx.policy;

  auto add = [&](std::string_view rule, std::string msg, std::size_t index) {
    out.push_back({std::string(rule), severity_of(rule), std::move(msg), index});
  };

  auto check_item_id = [&](const ItemRef& item, std::size_t index) {
    if (ctx.registry && !ctx.registry->is_item(item.id))
      add("R6", "unknown item id '" + item.canonical_id() + "'", index);
  };

  auto check_given = [&](const ItemRef& item, int amount, std::size_t index) {
    check_item_id(item, index);
    for (const auto& target : targets) {
      if (names_match(item.path(), target))
        add("R4", "gives the task target '" + item.canonical_id() + "' directly", index);
      if (!ctx.recipes) continue;
      auto slug = target;
      std::replace(slug.begin(), slug.end(), ' ', '_');
      const auto* recipe = ctx.recipes->find(slug);
      if (!recipe) recipe = ctx.recipes->find(singular(slug));
      if (!recipe) continue;
      for (const auto& ing : *recipe)
        if (ing.item == item.path() && amount <= ing.count)
          add("R3", "gives " + std::to_string(amount) + " " + ing.item + " but '" + target + "' needs " +
                        std::to_string(ing.count) + "; provide more than required",
              index);
    }
  };

  for (std::size_t i = 0; i < commands.size(); ++i) {
    const auto& c = commands[i].innermost();
    if (const auto* g = c.as<Give>()) {
      check_given(g->item, g->amount(), i);
    } else if (const auto* r = c.as<ReplaceItem>()) {
      check_given(r->item, r->count.value_or(1), i);
    } else if (const auto* s = c.as<Summon>()) {
      if (ctx.registry) {
        if (ctx.registry->is_nonsummonable(s->entity.id))
          add("R5", "'" + s->entity.canonical_id() + "' cannot be directly summoned; use /execute or /give", i);
        else if (!ctx.registry->is_entity(s->entity.id))
          add("R6", "unknown entity id '" + s->entity.canonical_id() + "'", i);
      }
      if (s->pos && s->pos->all_relative()) {
        auto d = std::max({std::abs(s->pos->x.offset()), std::abs(s->pos->y.offset()), std::abs(s->pos->z.offset())});
        if (d > policy.max_summon_distance)
          add("R1", "summon at distance " + fmt(d) + " exceeds " + fmt(policy.max_summon_distance) + " blocks", i);
      }
    } else if (const auto* f = c.as<Fill>()) {
      if (ctx.registry && !air_like().count(f->block.path()) && !ctx.registry->is_item(f->block.id))
        add("R6", "unknown block id '" + f->block.canonical_id() + "'", i);
      bool rel_y = f->from.y.mode != Coord::Mode::Absolute && f->to.y.mode != Coord::Mode::Absolute;
      auto floor_y = std::min(f->from.y.offset(), f->to.y.offset());
      if (rel_y && floor_y > policy.max_fill_floor_offset) {
        add("R2", "fill region floats " + fmt(floor_y) + " blocks above the player (inaccessible)", i);
      } else if (f->from.y.mode == Coord::Mode::Absolute && f->to.y.mode == Coord::Mode::Absolute &&
                 (floor_y > policy.max_absolute_fill_y || floor_y < policy.min_absolute_fill_y)) {
        add("R2", "fill region at absolute y " + fmt(floor_y) + " is outside the spawn band", i);
      }
      if (!air_like().count(f->block.path()) && covers_player(*f))
        add("R2", "fill region covers the player's cell and would suffocate the agent", i);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const LintFinding& a, const LintFinding& b) {
    return a.command_index != b.command_index ? a.command_index < b.command_index : a.rule < b.rule;
  });
  return out;
}

bool has_errors(std::span<const LintFinding> findings) {
  return std::any_of(findings.begin(), findings.end(),
                     [](const LintFinding& f) { return f.severity == Severity::Error; });
}

} // namespace mcu::cmd
