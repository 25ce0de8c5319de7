#include "support.hpp"

#include "mcu/command.hpp"
#include "mcu/error.hpp"
#include "mcu/random.hpp"

#include <gtest/gtest.h>

using namespace mcu;
using namespace mcu::cmd;

TEST(Command, PromptCorpusRoundTripsExactly) {
  auto lines = test::prompt_command_lines();
  ASSERT_FALSE(lines.empty());
  for (const auto& line : lines) {
    auto c = parse_command(line);
    EXPECT_EQ(format_command(c), normalize_command(line)) << line;
    EXPECT_EQ(parse_command(format_command(c)), c) << line;
  }
}

TEST(Command, PromptCorpusHasNoOpaqueCommands) {
  for (const auto& line : test::prompt_command_lines())
    EXPECT_EQ(parse_command(line).as<Other>(), nullptr) << line;
}

TEST(Command, GiveWithNbtAndCount) {
  auto c = parse_command("/give @p minecraft:trident{Enchantments:[{id:\"minecraft:riptide\",lvl:1}]} 3");
  const auto* g = c.as<Give>();
  ASSERT_NE(g, nullptr);
  EXPECT_EQ(g->target.text, "@p");
  EXPECT_EQ(g->item.id, "minecraft:trident");
  EXPECT_EQ(g->item.nbt, "{Enchantments:[{id:\"minecraft:riptide\",lvl:1}]}");
  EXPECT_EQ(g->amount(), 3);
  EXPECT_EQ(parse_command("/give @s minecraft:stone_pickaxe").as<Give>()->amount(), 1);
}

TEST(Command, SummonCoordinatesAndNbt) {
  auto c = parse_command(
      "/summon villager ~2 ~ ~-2 {Profession:\"minecraft:armorer\",VillagerData:{profession:\"minecraft:armorer\"}}");
  const auto* s = c.as<Summon>();
  ASSERT_NE(s, nullptr);
  EXPECT_EQ(s->entity.canonical_id(), "minecraft:villager");
  ASSERT_TRUE(s->pos);
  EXPECT_EQ(s->pos->x.offset(), 2);
  EXPECT_EQ(s->pos->z.offset(), -2);
  EXPECT_EQ(s->pos->y.mode, Coord::Mode::Relative);
  EXPECT_FALSE(s->entity.nbt.empty());
  EXPECT_FALSE(parse_command("/summon minecraft:sheep").as<Summon>()->pos);
}

TEST(Command, ExecuteWrapsFill) {
  auto c = parse_command("/execute as @p at @s run fill ~-5 ~-2 ~-1 ~ ~ ~-3 iron_ore");
  const auto* e = c.as<Execute>();
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->modifiers, (std::vector<std::string>{"as", "@p", "at", "@s"}));
  const auto* f = c.innermost().as<Fill>();
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->block.path(), "iron_ore");
  EXPECT_EQ(f->from.y.offset(), -2);
  EXPECT_EQ(c.kind_name(), "execute");
}

TEST(Command, EffectTimeWeatherReplaceitem) {
  auto e = parse_command("/effect give @a night_vision 99999 250 true").as<Effect>();
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(*e->seconds, 99999);
  EXPECT_EQ(*e->amplifier, 250);
  EXPECT_TRUE(*e->hide_particles);
  EXPECT_EQ(parse_command("/time set night").as<Time>()->value, "night");
  EXPECT_EQ(parse_command("/weather rain").as<cmd::Weather>()->kind, "rain");
  auto r = parse_command("/replaceitem entity @s armor.head minecraft:diamond_helmet").as<ReplaceItem>();
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->slot, "armor.head");
}

TEST(Command, UnknownCommandsArePreservedVerbatim) {
  auto c = parse_command("/tp @s   100 64  -20");
  ASSERT_NE(c.as<Other>(), nullptr);
  EXPECT_EQ(format_command(c), "/tp @s 100 64 -20");
}

TEST(Command, MalformedLinesThrow) {
  for (auto bad : {"give @s dirt", "/", "/give", "/give @s", "/give @s dirt zero", "/give @s dirt 0", "/give @s dirt{", "/summon",
                   "/summon zombie ~ ~", "/summon zombie ~a ~ ~", "/fill ~ ~ ~ ~ ~", "/execute as @p", "/give @s dirt 1 extra",
                   "/effect give @s speed 1 1 maybe", "/give bad!selector dirt", "/give @s \"dirt"})
    EXPECT_THROW(parse_command(bad), ParseError) << bad;
}

TEST(Command, NormalizeCollapsesWhitespaceButKeepsBlobs) {
  EXPECT_EQ(normalize_command("  /give   @s  minecraft:dirt{a: 1}   2 "), "/give @s minecraft:dirt{a: 1} 2");
}

TEST(Command, RandomAstsRoundTrip) {
  Rng rng(77);
  const std::vector<std::string> items = {"minecraft:dirt", "oak_planks", "minecraft:diamond_sword", "tnt"};
  const std::vector<std::string> mobs = {"zombie", "minecraft:sheep", "villager"};
  auto coord = [&] {
    Coord c;
    auto m = uniform_index(rng, 3);
    c.mode = m == 0 ? Coord::Mode::Absolute : m == 1 ? Coord::Mode::Relative : Coord::Mode::Local;
    if (c.mode == Coord::Mode::Absolute || uniform_index(rng, 2)) c.value = static_cast<double>(uniform_index(rng, 21)) - 10;
    return c;
  };
  auto vec = [&] { return Vec3{coord(), coord(), coord()}; };
  for (int i = 0; i < 2000; ++i) {
    Command c;
    switch (uniform_index(rng, 6)) {
    case 0: {
      Give g{{"@s"}, {items[uniform_index(rng, items.size())], "", ""}, std::nullopt};
      if (uniform_index(rng, 2)) g.count = 1 + static_cast<int>(uniform_index(rng, 64));
      c.body = g;
      break;
    }
    case 1: {
      Summon s{{mobs[uniform_index(rng, mobs.size())], "", ""}, std::nullopt};
      if (uniform_index(rng, 2)) s.pos = vec();
      c.body = s;
      break;
    }
    case 2: c.body = Fill{vec(), vec(), {items[uniform_index(rng, items.size())], "", ""}, {}}; break;
    case 3: {
      Command inner;
      inner.body = Fill{vec(), vec(), {"minecraft:stone", "", ""}, {"replace"}};
      c.body = Execute{{"as", "@p", "at", "@s"}, Boxed(inner)};
      break;
    }
    case 4: c.body = Time{"set", uniform_index(rng, 2) ? "night" : "1000"}; break;
    default: c.body = ReplaceItem{{"@s"}, "armor.head", {"minecraft:iron_helmet", "", ""}, std::nullopt};
    }
    auto text = format_command(c);
    ASSERT_EQ(parse_command(text), c) << text;
    ASSERT_EQ(format_command(parse_command(text)), text);
  }
}
