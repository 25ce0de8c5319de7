#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mcu::cmd {

/// One coordinate as written: "10", "~", "~-2", "^1".
struct Coord {
  enum class Mode { Absolute, Relative, Local };
  Mode mode = Mode::Relative;
  std::optional<double> value;  // required for Absolute

  double offset() const { return value.value_or(0.0); }
  bool operator==(const Coord&) const = default;
};

struct Vec3 {
  Coord x, y, z;
  bool all_relative() const;
  bool operator==(const Vec3&) const = default;
};

/// Target selector ("@s", "@p[distance=..5]") or a player name.
struct Selector {
  std::string text;
  bool operator==(const Selector&) const = default;
};

/// Namespaced id with optional block state and an opaque NBT blob, as written.
struct ItemRef {
  std::string id;     // "minecraft:emerald" or "villager"
  std::string state;  // "[facing=north]" or empty
  std::string nbt;    // "{Enchantments:[...]}" or empty

  /// Lowercased, "minecraft:" added when no namespace is present.
  std::string canonical_id() const;
  /// Id without namespace: "minecraft:oak_planks" -> "oak_planks".
  std::string path() const;
  bool operator==(const ItemRef&) const = default;
};

struct Command;

/// Deep-copying owner for the recursive execute wrapper.
class Boxed {
public:
  Boxed();
  explicit Boxed(Command c);
  Boxed(const Boxed& other);
  Boxed& operator=(const Boxed& other);
  Boxed(Boxed&&) noexcept = default;
  Boxed& operator=(Boxed&&) noexcept = default;
  ~Boxed();

  const Command& get() const { return *ptr_; }
  const Command* operator->() const { return ptr_.get(); }
  const Command& operator*() const { return *ptr_; }
  bool operator==(const Boxed& other) const;

private:
  std::unique_ptr<Command> ptr_;
};

struct Give {
  Selector target;
  ItemRef item;
  std::optional<int> count;  // absent means 1
  int amount() const { return count.value_or(1); }
  bool operator==(const Give&) const = default;
};

struct Summon {
  ItemRef entity;
  std::optional<Vec3> pos;  // absent means the executor's position
  bool operator==(const Summon&) const = default;
};

struct Fill {
  Vec3 from, to;
  ItemRef block;
  std::vector<std::string> mode;  // e.g. {"replace", "air"}; empty when omitted
  bool operator==(const Fill&) const = default;
};

struct Execute {
  std::vector<std::string> modifiers;  // tokens between "execute" and "run"
  Boxed inner;
  bool operator==(const Execute&) const = default;
};

struct ReplaceItem {
  Selector target;
  std::string slot;  // "armor.head", "weapon.mainhand", ...
  ItemRef item;
  std::optional<int> count;
  bool operator==(const ReplaceItem&) const = default;
};

struct Effect {
  enum class Action { Give, Clear };
  Action action = Action::Give;
  Selector target;
  std::string effect;  // empty only for "clear" without an effect
  std::optional<int> seconds;
  std::optional<int> amplifier;
  std::optional<bool> hide_particles;
  bool operator==(const Effect&) const = default;
};

struct Time {
  std::string action;  // "set" | "add"
  std::string value;   // "night", "day", "1000", ...
  bool operator==(const Time&) const = default;
};

struct Weather {
  std::string kind;  // "clear" | "rain" | "thunder"
  std::optional<int> duration;
  bool operator==(const Weather&) const = default;
};

/// Anything outside the supported vocabulary, kept verbatim.
struct Other {
  std::string text;  // normalized line without the leading '/'
  bool operator==(const Other&) const = default;
};

using Body = std::variant<Give, Summon, Fill, Execute, ReplaceItem, Effect, Time, Weather, Other>;

struct Command {
  Body body;
  std::string raw;  // original line as given to the parser

  template <class T> const T* as() const { return std::get_if<T>(&body); }
  /// Strips execute wrappers.
  const Command& innermost() const;
  std::string_view kind_name() const;

  /// Equality ignores `raw`.
  bool operator==(const Command& other) const { return body == other.body; }
};

/// Parses one "/..." line. Throws ParseError on malformed selectors, counts,
/// ids or coordinates.
Command parse_command(std::string_view line);
/// Canonical single-line form with a leading '/'.
std::string format_command(const Command& c);
/// Whitespace normalization used by the round-trip contract: tokens (with
/// NBT/state blobs kept intact) joined by single spaces.
std::string normalize_command(std::string_view line);

} // namespace mcu::cmd
