#include "mcu/world.hpp"

#include "mcu/strings.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>

namespace mcu::sim {

std::string_view to_string(EquipSlot s) {
  switch (s) {
  case EquipSlot::Head: return "armor.head";
  case EquipSlot::Chest: return "armor.chest";
  case EquipSlot::Legs: return "armor.legs";
  case EquipSlot::Feet: return "armor.feet";
  case EquipSlot::Mainhand: return "weapon.mainhand";
  case EquipSlot::Offhand: return "weapon.offhand";
  }
  return "weapon.mainhand";
}

std::string_view to_string(Weather w) {
  switch (w) {
  case Weather::Clear: return "clear";
  case Weather::Rain: return "rain";
  case Weather::Thunder: return "thunder";
  }
  return "clear";
}

int WorldState::occupied_slots() const {
  return static_cast<int>(std::count_if(inventory.begin(), inventory.end(), [](const auto& s) { return s.has_value(); }));
}

int WorldState::count_item(std::string_view id) const {
  auto want = cmd::canonical_id(id);
  int n = 0;
  for (const auto& s : inventory)
    if (s && s->id == want) n += s->count;
  return n;
}

bool WorldState::is_night() const {
  auto t = ((time_ticks % 24000) + 24000) % 24000;
  return t >= 13000 && t < 23000;
}

bool WorldState::has_effect(std::string_view id) const {
  auto want = cmd::canonical_id(id);
  return std::any_of(effects.begin(), effects.end(), [&](const ActiveEffect& e) { return e.id == want; });
}

namespace {

void require_item(const cmd::ItemRef& item, const cmd::IdRegistry* reg) {
  if (reg && !reg->is_item(item.id)) throw SimError("unknown item id '" + item.canonical_id() + "'");
}

void give(WorldState& s, const cmd::ItemRef& item, int count) {
  const auto id = item.canonical_id();
  int remaining = count;
  for (auto& slot : s.inventory) {
    if (remaining == 0) break;
    if (slot && slot->id == id && slot->nbt == item.nbt && slot->count < kMaxStack) {
      int take = std::min(remaining, kMaxStack - slot->count);
      slot->count += take;
      remaining -= take;
    }
  }
  for (auto& slot : s.inventory) {
    if (remaining == 0) break;
    if (!slot) {
      int take = std::min(remaining, kMaxStack);
      slot = ItemStack{id, item.nbt, take};
      remaining -= take;
    }
  }
  if (remaining > 0)
    throw SimError("inventory full: no free slot for " + std::to_string(remaining) + " of " +
                   std::to_string(count) + " x " + id);
}

int block_coord(const cmd::Coord& c) { return static_cast<int>(std::floor(c.offset())); }

BlockBox make_box(const cmd::Vec3& a, const cmd::Vec3& b) {
  bool abs_a = a.x.mode == cmd::Coord::Mode::Absolute && a.y.mode == cmd::Coord::Mode::Absolute &&
               a.z.mode == cmd::Coord::Mode::Absolute;
  bool abs_b = b.x.mode == cmd::Coord::Mode::Absolute && b.y.mode == cmd::Coord::Mode::Absolute &&
               b.z.mode == cmd::Coord::Mode::Absolute;
  if (abs_a != abs_b || (!abs_a && !(a.all_relative() && b.all_relative())))
    throw SimError("fill corners mix absolute and relative coordinates");
  BlockBox box;
  box.absolute = abs_a;
  const std::array<const cmd::Coord*, 3> pa{&a.x, &a.y, &a.z}, pb{&b.x, &b.y, &b.z};
  for (int i = 0; i < 3; ++i) {
    int u = block_coord(*pa[i]), v = block_coord(*pb[i]);
    box.min[i] = std::min(u, v);
    box.max[i] = std::max(u, v);
  }
  return box;
}

std::optional<EquipSlot> equip_slot(std::string_view slot) {
  if (slot == "armor.head") return EquipSlot::Head;
  if (slot == "armor.chest") return EquipSlot::Chest;
  if (slot == "armor.legs") return EquipSlot::Legs;
  if (slot == "armor.feet") return EquipSlot::Feet;
  if (slot == "weapon.mainhand" || slot == "weapon") return EquipSlot::Mainhand;
  if (slot == "weapon.offhand") return EquipSlot::Offhand;
  return std::nullopt;
}

std::optional<int> inventory_slot(std::string_view slot) {
  auto parse_index = [](std::string_view s, int lo, int hi) -> std::optional<int> {
    int v = -1;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || v < lo || v > hi) return std::nullopt;
    return v;
  };
  if (slot.starts_with("hotbar.")) return parse_index(slot.substr(7), 0, 8);
  if (slot.starts_with("inventory.")) {
    auto v = parse_index(slot.substr(10), 0, 26);
    if (v) return *v + 9;
  }
  return std::nullopt;
}

long parse_ticks(std::string_view value) {
  if (value == "day") return 1000;
  if (value == "noon") return 6000;
  if (value == "night") return 13000;
  if (value == "midnight") return 18000;
  long mult = 1;
  if (!value.empty() && (value.back() == 'd' || value.back() == 's' || value.back() == 't')) {
    mult = value.back() == 'd' ? 24000 : value.back() == 's' ? 20 : 1;
    value.remove_suffix(1);
  }
  long v = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || p != value.data() + value.size()) throw SimError("bad time value");
  return v * mult;
}

void apply_in_place(WorldState& s, const cmd::Command& c, const cmd::IdRegistry* reg) {
  using namespace cmd;
  if (const auto* e = c.as<Execute>()) {
    apply_in_place(s, e->inner.get(), reg);
  } else if (const auto* g = c.as<Give>()) {
    require_item(g->item, reg);
    give(s, g->item, g->amount());
  } else if (const auto* sm = c.as<Summon>()) {
    if (reg && !reg->is_entity(sm->entity.id)) {
      if (reg->is_nonsummonable(sm->entity.id))
        throw SimError("'" + sm->entity.canonical_id() + "' cannot be summoned");
      throw SimError("unknown entity id '" + sm->entity.canonical_id() + "'");
    }
    Vec3 pos = sm->pos.value_or(Vec3{});
    s.entities.push_back({sm->entity.canonical_id(), pos, sm->entity.nbt});
  } else if (const auto* f = c.as<Fill>()) {
    const auto path = f->block.path();
    bool air = path == "air" || path == "cave_air" || path == "void_air";
    if (reg && !air && !reg->is_item(f->block.id)) throw SimError("unknown block id '" + f->block.canonical_id() + "'");
    auto box = make_box(f->from, f->to);
    s.regions.push_back({f->block.canonical_id(), box});
  } else if (const auto* r = c.as<ReplaceItem>()) {
    require_item(r->item, reg);
    ItemStack stack{r->item.canonical_id(), r->item.nbt, r->count.value_or(1)};
    if (stack.count > kMaxStack) throw SimError("stack of " + std::to_string(stack.count) + " exceeds 64");
    if (auto eq = equip_slot(r->slot)) {
      s.equipment[*eq] = stack;
    } else if (auto inv = inventory_slot(r->slot)) {
      s.inventory[static_cast<std::size_t>(*inv)] = stack;
    } else {
      throw SimError("unknown slot '" + r->slot + "'");
    }
  } else if (const auto* ef = c.as<Effect>()) {
    if (ef->action == Effect::Action::Clear) {
      if (ef->effect.empty()) {
        s.effects.clear();
      } else {
        auto id = canonical_id(ef->effect);
        std::erase_if(s.effects, [&](const ActiveEffect& a) { return a.id == id; });
      }
      return;
    }
    ActiveEffect a{canonical_id(ef->effect), ef->seconds.value_or(30), ef->amplifier.value_or(0)};
    if (a.seconds < 0 || a.amplifier < 0 || a.amplifier > 255) throw SimError("effect duration/amplifier out of range");
    std::erase_if(s.effects, [&](const ActiveEffect& x) { return x.id == a.id; });
    s.effects.push_back(a);
  } else if (const auto* t = c.as<Time>()) {
    auto ticks = parse_ticks(t->value);
    s.time_ticks = t->action == "set" ? ticks : (s.time_ticks + ticks) % 24000;
  } else if (const auto* w = c.as<cmd::Weather>()) {
    s.weather = w->kind == "rain" ? Weather::Rain : w->kind == "thunder" ? Weather::Thunder : Weather::Clear;
  }
  // Other: pass-through, no simulated effect.
}

} // namespace

WorldState apply(const WorldState& state, const cmd::Command& command, const cmd::IdRegistry* registry) {
  WorldState next = state;
  apply_in_place(next, command, registry);
  return next;
}

bool SimReport::ok() const {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const CommandOutcome& o) { return o.ok; });
}

std::string SimReport::error_log() const {
  std::string out;
  for (const auto& o : outcomes)
    if (!o.ok) out += "[ERR] command " + std::to_string(o.index + 1) + " `" + o.command + "`: " + o.message + "\n";
  return out;
}

std::string SimReport::to_text() const {
  std::string out;
  for (const auto& o : outcomes) {
    out += (o.ok ? "OK  " : "ERR ") + o.command;
    if (!o.ok) out += " :: " + o.message;
    out += '\n';
  }
  if (!ok()) out += "--- error log ---\n" + error_log();
  return out;
}

SimReport run_config(std::span<const cmd::Command> commands, const cmd::IdRegistry* registry,
                     const WorldState& initial) {
  SimReport report;
  report.final_state = initial;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CommandOutcome o{i, cmd::format_command(commands[i]), true, {}};
    try {
      report.final_state = apply(report.final_state, commands[i], registry);
    } catch (const SimError& e) {
      o.ok = false;
      o.message = e.what();
    }
    report.outcomes.push_back(std::move(o));
  }
  return report;
}

} // namespace mcu::sim
