#!/usr/bin/env python3
"""Writes data/catalog.tsv and data/subsets/mcu-turbo.txt.

The task list is synthesized from item, mob, biome and structure vocabularies
and truncated round-robin across subcategories to a fixed size, so every
subcategory stays represented. Output is deterministic.
"""
import argparse
import random
import re
from collections import OrderedDict
from pathlib import Path

TARGET = 3452

WOODS = ["oak", "spruce", "birch", "jungle", "acacia", "dark oak", "mangrove", "cherry"]
STEMS = ["crimson", "warped"]
ORES = ["coal ore", "iron ore", "gold ore", "diamond ore", "emerald ore", "lapis ore", "redstone ore",
        "copper ore", "deepslate coal ore", "deepslate iron ore", "deepslate gold ore", "deepslate diamond ore",
        "deepslate emerald ore", "deepslate lapis ore", "deepslate redstone ore", "deepslate copper ore",
        "nether quartz ore", "nether gold ore", "ancient debris"]
STONES = ["stone", "cobblestone", "granite", "diorite", "andesite", "deepslate", "tuff", "calcite", "sandstone",
          "red sandstone", "netherrack", "basalt", "blackstone", "end stone", "obsidian", "dripstone block",
          "mossy cobblestone", "smooth stone", "stone bricks", "prismarine", "terracotta", "magma block",
          "glowstone", "amethyst block", "ice", "packed ice", "snow block"]
SOILS = ["dirt", "grass block", "sand", "red sand", "gravel", "clay", "mud", "podzol", "mycelium", "soul sand",
         "soul soil", "coarse dirt", "rooted dirt", "snow", "moss block", "farmland"]
MATS = ["wooden", "stone", "iron", "golden", "diamond", "netherite"]
PICKS = [m + " pickaxe" for m in MATS]
AXES = [m + " axe" for m in MATS]
SHOVELS = [m + " shovel" for m in MATS]
COLORS = ["white", "orange", "magenta", "light blue", "yellow", "lime", "pink", "gray", "light gray", "cyan",
          "purple", "blue", "brown", "green", "red", "black"]
HOSTILE = ["zombie", "skeleton", "creeper", "spider", "cave spider", "witch", "slime", "magma cube", "blaze",
           "ghast", "husk", "stray", "drowned", "phantom", "pillager", "vindicator", "evoker", "ravager", "vex",
           "guardian", "elder guardian", "shulker", "silverfish", "endermite", "zombie villager", "piglin brute",
           "hoglin", "zoglin", "wither skeleton"]
NEUTRAL = ["wolf", "iron golem", "polar bear", "bee", "llama", "panda", "dolphin", "zombified piglin", "piglin",
           "goat", "enderman"]
PASSIVE = ["sheep", "cow", "pig", "chicken", "rabbit", "horse", "mooshroom", "fox", "turtle", "cod"]
BOSSES = ["ender dragon", "wither"]
WEAPONS = [m + " sword" for m in MATS] + ["bow", "crossbow", "trident", "iron axe", "diamond axe"]
BIOMES = ["plains", "sunflower plains", "forest", "flower forest", "birch forest", "dark forest", "taiga",
          "snowy taiga", "old growth pine taiga", "jungle", "bamboo jungle", "sparse jungle", "savanna",
          "savanna plateau", "windswept hills", "desert", "badlands", "eroded badlands", "wooded badlands",
          "swamp", "mangrove swamp", "mushroom fields", "beach", "snowy beach", "stony shore", "river",
          "frozen river", "ocean", "warm ocean", "lukewarm ocean", "cold ocean", "frozen ocean", "deep ocean",
          "snowy plains", "ice spikes", "meadow", "grove", "snowy slopes", "jagged peaks", "frozen peaks",
          "stony peaks", "cherry grove", "dripstone caves", "lush caves", "deep dark", "nether wastes",
          "soul sand valley", "crimson forest", "warped forest", "basalt deltas", "the end"]
STRUCTURES = ["village", "desert temple", "jungle temple", "ocean monument", "woodland mansion", "stronghold",
              "nether fortress", "bastion remnant", "end city", "shipwreck", "buried treasure", "ruined portal",
              "pillager outpost", "mineshaft", "igloo", "witch hut", "ancient city", "trail ruins", "ocean ruins",
              "dungeon"]
FOODS = ["bread", "apple", "golden apple", "carrot", "golden carrot", "potato", "baked potato", "beetroot",
         "melon slice", "sweet berries", "glow berries", "cookie", "pumpkin pie", "cake", "cooked beef",
         "cooked porkchop", "cooked chicken", "cooked mutton", "cooked rabbit", "cooked cod", "cooked salmon",
         "raw beef", "raw porkchop", "raw chicken", "rotten flesh", "spider eye", "dried kelp", "honey bottle",
         "mushroom stew", "rabbit stew", "beetroot soup", "suspicious stew", "chorus fruit", "pufferfish",
         "tropical fish"]
USABLE = ["shield", "bow", "crossbow", "spyglass", "bucket", "water bucket", "lava bucket", "flint and steel",
          "ender pearl", "firework rocket", "fishing rod", "lead", "name tag", "bone meal", "snowball", "egg",
          "trident", "shears", "compass", "map", "book and quill", "goat horn", "brush", "potion", "ender eye",
          "saddle", "elytra", "totem of undying", "fire charge", "honeycomb"]
INTERACT = ["crafting table", "furnace", "blast furnace", "smoker", "chest", "barrel", "anvil", "grindstone",
            "stonecutter", "loom", "cartography table", "smithing table", "enchanting table", "brewing stand",
            "lectern", "jukebox", "note block", "lever", "button", "door", "trapdoor", "fence gate", "bell",
            "composter", "cauldron", "beacon", "respawn anchor", "lodestone", "ender chest", "shulker box",
            "villager", "wandering trader", "minecart", "boat", "campfire", "decorated pot", "bookshelf",
            "chiseled bookshelf", "hopper", "dispenser"]
PLANTABLE = ["wheat seeds", "beetroot seeds", "melon seeds", "pumpkin seeds", "carrot", "potato", "sugar cane",
             "cactus", "bamboo", "cocoa beans", "sweet berries", "nether wart", "kelp", "sea pickle", "torchflower seeds",
             "pitcher pod", "poppy", "dandelion", "blue orchid", "allium", "azure bluet", "red tulip",
             "oxeye daisy", "cornflower", "lily of the valley", "brown mushroom", "red mushroom"] + \
            [w + " sapling" for w in WOODS if w not in ("mangrove",)] + ["mangrove propagule"]
BREEDABLE = ["cows", "sheep", "pigs", "chickens", "rabbits", "horses", "donkeys", "llamas", "wolves", "cats",
             "foxes", "bees", "turtles", "pandas", "goats", "axolotls", "frogs", "camels", "sniffers", "striders",
             "mooshrooms", "hoglins"]
FEED = [("cow", "wheat"), ("sheep", "wheat"), ("pig", "carrot"), ("pig", "potato"), ("pig", "beetroot"),
        ("chicken", "wheat seeds"), ("chicken", "melon seeds"), ("chicken", "pumpkin seeds"), ("rabbit", "carrot"),
        ("rabbit", "dandelion"), ("horse", "golden apple"), ("horse", "hay bale"), ("horse", "sugar"),
        ("horse", "apple"), ("llama", "hay bale"), ("wolf", "bone"), ("wolf", "cooked beef"), ("cat", "raw cod"),
        ("cat", "raw salmon"), ("fox", "sweet berries"), ("bee", "poppy"), ("turtle", "seagrass"),
        ("panda", "bamboo"), ("goat", "wheat"), ("axolotl", "bucket of tropical fish"), ("frog", "slimeball"),
        ("camel", "cactus"), ("sniffer", "torchflower seeds"), ("strider", "warped fungus"),
        ("mooshroom", "wheat"), ("parrot", "wheat seeds"), ("donkey", "golden carrot"), ("mule", "apple"),
        ("ocelot", "raw cod"), ("hoglin", "crimson fungus")]
CROPS = ["wheat", "carrots", "potatoes", "beetroots", "melon", "pumpkin", "sugar cane", "cocoa beans",
         "sweet berries", "nether wart", "bamboo", "kelp", "cactus", "glow berries", "chorus fruit"]
BUILD_MATS = ["dirt", "cobblestone", "stone", "oak planks", "spruce planks", "birch planks", "sandstone", "glass",
              "stone bricks", "bricks", "snow", "wool", "quartz", "deepslate bricks", "blackstone", "prismarine",
              "terracotta", "mud bricks", "obsidian", "iron block"]
HOUSE = ["house", "hut", "cabin", "shelter", "fort"]
TOWER = ["tower", "pillar", "pyramid", "wall", "staircase", "statue"]
BRIDGE = ["bridge", "path", "platform", "dock"]
DECO = ["flowers", "torches", "lanterns", "paintings", "item frames", "carpets", "banners", "candles",
        "flower pots", "armor stands", "bookshelves", "potted plants", "glass panes", "colored wool", "beds",
        "signs", "lights", "fences", "leaves", "vines", "sea lanterns", "end rods", "glowstone", "red dye",
        "poppies", "ribbons of wool", "pumpkins", "jack o'lanterns", "chains", "skulls"]
DROPS = ["string", "bone", "gunpowder", "rotten flesh", "ender pearl", "slimeball", "blaze rod", "feather",
         "leather", "wool", "ink sac", "glow ink sac", "spider eye", "arrows", "eggs", "honeycomb", "phantom membrane",
         "ghast tear", "magma cream", "prismarine shard", "prismarine crystals", "rabbit hide", "rabbit foot",
         "scute", "nautilus shell", "shulker shell", "wither skeleton skull", "nether star", "totem of undying",
         "emerald", "diamond", "flint", "clay ball", "snowball", "sticks"]
CONTAINERS = ["village chest", "shipwreck chest", "desert temple chest", "jungle temple chest", "dungeon chest",
              "mineshaft chest minecart", "stronghold chest", "nether fortress chest", "bastion chest",
              "end city chest", "buried treasure chest", "ruined portal chest", "pillager outpost chest",
              "igloo chest", "ancient city chest", "woodland mansion chest", "suspicious sand", "suspicious gravel"]
FISH = ["cod", "salmon", "pufferfish", "tropical fish", "name tag", "saddle", "nautilus shell", "enchanted book",
        "lily pad", "bow", "fishing rod", "bowl", "leather boots", "tripwire hook", "ink sac"]
CIRCUITS = ["redstone clock", "piston door", "t flip flop", "item elevator", "automatic farm", "redstone lamp circuit",
            "hidden staircase", "combination lock", "item sorter", "auto smelter", "mob farm", "cobblestone generator",
            "flying machine", "trapdoor trap", "tnt cannon", "minecart track", "powered rail line", "daylight lamp",
            "note block song", "observer pulse"]
DEVICES = ["lever", "stone button", "pressure plate", "piston", "sticky piston", "dispenser", "dropper", "observer",
           "hopper", "redstone lamp", "tnt", "tripwire", "daylight detector", "target block", "comparator",
           "repeater", "powered rail", "bell", "note block", "sculk sensor"]
JUMP = ["a block", "a fence", "a slime block", "a honey block", "a bed", "a haybale", "a cactus", "a gap",
        "parkour blocks", "a ladder", "a trapdoor", "a pillar", "a wall", "a moving minecart", "a boat"]
SWIM = ["a river", "a lake", "the ocean", "a lava lake with fire resistance", "an underwater cave",
        "a waterfall", "a flooded ravine", "a coral reef", "a swamp", "a frozen ocean"]
CLIMB = ["the mountain", "a ladder", "vines", "a tree", "scaffolding", "a cliff", "a tower", "a twisting vine",
         "a weeping vine", "a pillar of dirt", "stairs", "a hill"]
POTIONS = ["swiftness", "slowness", "strength", "healing", "harming", "leaping", "regeneration",
           "fire resistance", "water breathing", "invisibility", "night vision", "weakness", "poison",
           "slow falling", "turtle master", "infestation"]
ENCHANTS = [("sword", ["sharpness", "smite", "knockback", "fire aspect", "looting", "sweeping edge"]),
            ("pickaxe", ["efficiency", "fortune", "silk touch", "unbreaking"]),
            ("bow", ["power", "punch", "flame", "infinity"]),
            ("helmet", ["protection", "respiration", "aqua affinity"]),
            ("boots", ["feather falling", "depth strider", "frost walker"]),
            ("fishing rod", ["luck of the sea", "lure"]),
            ("axe", ["efficiency", "sharpness"]),
            ("crossbow", ["quick charge", "multishot", "piercing"]),
            ("trident", ["loyalty", "riptide", "channeling", "impaling"])]
SMELT = ["iron ingot", "gold ingot", "copper ingot", "glass", "stone", "smooth stone", "charcoal", "brick",
         "nether brick", "cooked beef", "cooked porkchop", "cooked chicken", "cooked mutton", "cooked rabbit",
         "cooked cod", "cooked salmon", "baked potato", "dried kelp", "green dye", "lime dye", "terracotta",
         "sponge", "popped chorus fruit", "smooth quartz", "cracked stone bricks", "glazed terracotta"]
TOOLS_EXTRA = ["shears", "flint and steel", "fishing rod", "bucket", "compass", "clock", "spyglass", "lead",
               "brush", "carrot on a stick", "recovery compass", "map"]
BLOCKS = ["crafting table", "furnace", "chest", "barrel", "smoker", "blast furnace", "bookshelf", "lectern", "loom",
          "cartography table", "fletching table", "smithing table", "grindstone", "stonecutter", "anvil",
          "enchanting table", "brewing stand", "jukebox", "note block", "ladder", "torch", "lantern", "campfire",
          "scaffolding", "beacon", "hopper", "dispenser", "dropper", "observer", "piston", "tnt", "rail",
          "redstone lamp", "item frame", "painting", "armor stand", "flower pot", "composter", "cauldron",
          "lodestone", "respawn anchor", "ender chest", "shulker box", "bricks", "stone bricks", "iron block",
          "gold block", "diamond block", "hay bale", "glass pane", "iron bars", "chain", "candle"]
WOOD_ITEMS = ["planks", "stairs", "slab", "fence", "fence gate", "door", "trapdoor", "sign", "boat", "button",
              "pressure plate"]
COLORED = ["bed", "banner", "carpet", "stained glass", "concrete powder", "candle", "wool", "terracotta"]

HANDPICKED = [
    ("craft a crafting table", "crafting", "block"),
    ("craft to cake", "crafting", "food"),
    ("mine iron ore", "mining", "ore"),
    ("combat a zombie", "combat", "hostile"),
    ("combat skeletons", "combat", "hostile"),
    ("hunt sheep", "combat", "neutral"),
    ("trade for iron helmet with a villager", "tool_use", "interact"),
    ("climb the mountain", "motion", "climb"),
    ("build a house", "building", "house"),
    ("build a snow golem", "building", "tower"),
    ("build a dirt pillar", "building", "tower"),
    ("build a nether portal", "building", "portal"),
    ("build an end portal frame", "building", "portal"),
    ("light a nether portal", "building", "portal"),
    ("dig three holes and fill one", "building", "house"),
    ("decorate the tree", "decoration", "tree"),
    ("find melon", "navigation", "block"),
    ("mine lodestone", "mining", "stone"),
    ("interact with potion", "tool_use", "use_item"),
    ("feed a sheep", "farming", "feed"),
    ("light tnt", "redstone", "device"),
    ("enchant a book", "crafting", "enchanting"),
    ("craft to diamond pickaxe", "crafting", "tool"),
    ("craft to baked potato", "crafting", "smelting"),
    ("craft to awkward potion", "crafting", "brewing"),
    ("find a zombie", "navigation", "mob"),
    ("find blackstone", "navigation", "block"),
    ("find forest", "navigation", "biome"),
    ("find village", "navigation", "structure"),
    ("mine dirt", "mining", "soil"),
    ("mine grass", "mining", "soil"),
    ("mine diamond ore", "mining", "ore"),
    ("mine dragon egg", "mining", "stone"),
    ("eat bread", "tool_use", "eat"),
    ("breed a cow", "farming", "breed"),
    ("interact with crafting table", "tool_use", "interact"),
    ("build a tower", "building", "tower"),
    ("build a fence", "building", "bridge"),
    ("build a castle", "building", "house"),
    ("build a waterfall", "building", "bridge"),
    ("sleep in a bed", "tool_use", "interact"),
    ("make a fire", "tool_use", "use_item"),
    ("drink a potion", "tool_use", "eat"),
    ("shear a sheep", "farming", "harvest"),
    ("milk a cow", "farming", "harvest"),
    ("tame a wolf", "farming", "feed"),
    ("ride a horse", "motion", "jump"),
    ("collect wood", "collecting", "drop"),
    ("mine obsidian", "mining", "stone"),
    ("clean the weeds", "decoration", "outdoor"),
    ("plant a tree", "tool_use", "plant"),
    ("make a snowball fight", "combat", "neutral"),
    ("kill the ender dragon", "combat", "boss"),
]


def article(noun):
    if noun.endswith("s") and not noun.endswith("ss"):
        return noun
    return ("an " if noun[0] in "aeiou" else "a ") + noun


def slug(text):
    return "_".join(re.findall(r"[a-z0-9]+", text.lower()))


def build():
    tasks = OrderedDict()  # (category, subcategory) -> list of (description, source, modes)

    def add(cat, sub, desc, source, modes="simple,hard"):
        tasks.setdefault((cat, sub), []).append((desc, source, modes))

    for desc, cat, sub in HANDPICKED:
        add(cat, sub, desc, "brainstorm")

    for group, sub, tools in ((ORES, "ore", PICKS), (STONES, "stone", PICKS), (SOILS, "soil", SHOVELS)):
        for b in group:
            add("mining", sub, "mine " + b, "in-game-synthesis")
        for b in group:
            for t in tools:
                add("mining", sub, "mine %s with %s" % (b, article(t)), "in-game-synthesis")
        for n in (4, 16, 64):
            for b in group:
                add("mining", sub, "obtain %d %s" % (n, b), "benchmark")
    woods = [w + " " + p for w in WOODS for p in ("log", "planks", "leaves", "wood")] + \
            [s + " " + p for s in STEMS for p in ("stem", "planks", "nylium")]
    for b in woods:
        add("mining", "wood", "mine " + b, "in-game-synthesis")
    for b in woods:
        for t in AXES:
            add("mining", "wood", "mine %s with %s" % (b, article(t)), "in-game-synthesis")

    for m in MATS:
        for t in ("pickaxe", "axe", "shovel", "hoe"):
            add("crafting", "tool", "craft %s" % article(m + " " + t), "in-game-synthesis")
    for t in TOOLS_EXTRA:
        add("crafting", "tool", "craft " + article(t), "in-game-synthesis")
    for w in WEAPONS + ["arrow", "spectral arrow", "tipped arrow", "shield", "mace"]:
        if w in ("trident", "iron axe", "diamond axe"):
            continue
        add("crafting", "weapon", "craft " + article(w), "in-game-synthesis")
    for m in ("leather", "iron", "golden", "diamond", "netherite"):
        for piece in ("helmet", "chestplate", "leggings", "boots"):
            add("crafting", "armor", "craft " + article(m + " " + piece), "in-game-synthesis")
    add("crafting", "armor", "craft a turtle helmet", "in-game-synthesis")
    for f in ("bread", "cookie", "pumpkin pie", "golden apple", "golden carrot", "mushroom stew", "rabbit stew",
              "beetroot soup", "suspicious stew", "honey bottle", "dried kelp block", "sugar", "glistering melon slice"):
        add("crafting", "food", "craft " + article(f) if f not in ("bread", "sugar") else "craft " + f,
            "in-game-synthesis")
    for b in BLOCKS:
        add("crafting", "block", "craft " + article(b), "in-game-synthesis")
    for w in WOODS + STEMS:
        for item in WOOD_ITEMS:
            if w in STEMS and item == "boat":
                continue
            add("crafting", "block", "craft %s %s" % (w, item), "in-game-synthesis")
    for c in COLORED:
        for color in COLORS:
            add("crafting", "block", "craft %s %s" % (color, c), "in-game-synthesis")
    for s in SMELT:
        add("crafting", "smelting", "smelt " + s, "in-game-synthesis")
    for s in SMELT:
        add("crafting", "smelting", "smelt %s with a furnace" % s, "in-game-synthesis")
    for p in POTIONS:
        for form in ("potion", "splash potion", "lingering potion"):
            add("crafting", "brewing", "brew a %s of %s" % (form, p), "in-game-synthesis")
    for p in ("awkward potion", "thick potion", "mundane potion"):
        add("crafting", "brewing", "brew " + article(p), "in-game-synthesis")
    for item, ench in ENCHANTS:
        for m in ("iron", "diamond") if item in ("sword", "pickaxe", "helmet", "boots", "axe") else ("",):
            for e in ench:
                name = (m + " " + item).strip()
                add("crafting", "enchanting", "enchant %s with %s" % (article(name), e), "wiki")

    for mob in HOSTILE:
        add("combat", "hostile", "combat " + article(mob), "benchmark")
        for w in WEAPONS:
            add("combat", "hostile", "kill %s with %s" % (article(mob), article(w)), "benchmark")
        for n in (2, 3):
            add("combat", "hostile", "combat %d %ss" % (n, mob), "benchmark")
    for mob in NEUTRAL:
        add("combat", "neutral", "combat " + article(mob), "benchmark")
        for w in WEAPONS:
            add("combat", "neutral", "kill %s with %s" % (article(mob), article(w)), "benchmark")
    for mob in PASSIVE:
        add("combat", "neutral", "hunt " + mob, "benchmark")
        for w in WEAPONS:
            add("combat", "neutral", "hunt %s with %s" % (mob, article(w)), "benchmark")
    for mob in BOSSES:
        add("combat", "boss", "defeat the " + mob, "wiki", "hard")
        for w in WEAPONS:
            add("combat", "boss", "defeat the %s with %s" % (mob, article(w)), "wiki", "hard")

    for b in BIOMES:
        add("navigation", "biome", "find " + article(b + " biome"), "benchmark")
        add("navigation", "biome", "explore the " + b, "benchmark")
    for s in STRUCTURES:
        add("navigation", "structure", "find " + article(s), "wiki")
        add("navigation", "structure", "enter " + article(s), "wiki")
    for mob in HOSTILE + NEUTRAL + PASSIVE + ["villager", "wandering trader", "axolotl", "frog", "allay", "sniffer"]:
        add("navigation", "mob", "find " + article(mob), "benchmark")
    for b in ORES + STONES + ["melon", "pumpkin", "sugar cane", "cactus", "bamboo", "lava", "water", "bee nest",
                              "spawner", "end portal", "amethyst geode", "coral", "sponge", "mushroom"]:
        add("navigation", "block", "find " + b, "benchmark")

    for f in FOODS:
        add("tool_use", "eat", "eat " + (f if f.endswith(("s", "stew", "soup", "bread", "cake")) else article(f)),
            "in-game-synthesis")
    for u in USABLE:
        add("tool_use", "use_item", "use " + article(u), "in-game-synthesis")
    for i in INTERACT:
        add("tool_use", "interact", "interact with " + article(i), "in-game-synthesis")
    for c in COLORS:
        add("tool_use", "interact", "sleep in %s bed" % article(c), "in-game-synthesis")
    for p in PLANTABLE:
        add("tool_use", "plant", "plant " + p, "in-game-synthesis")

    for a in BREEDABLE:
        add("farming", "breed", "breed " + a, "benchmark")
    for a, f in FEED:
        add("farming", "feed", "feed %s with %s" % (article(a), f), "benchmark")
    for c in CROPS:
        add("farming", "harvest", "harvest " + c, "benchmark")
        add("farming", "harvest", "grow and harvest " + c, "brainstorm")

    for m in BUILD_MATS:
        for s in HOUSE:
            add("building", "house", "build %s %s" % (article(m), s), "brainstorm")
        for s in TOWER:
            add("building", "tower", "build %s %s" % (article(m), s), "brainstorm")
        for s in BRIDGE:
            add("building", "bridge", "build %s %s" % (article(m), s), "brainstorm")
    for p in ("nether portal with obsidian", "nether portal frame", "portal room", "end gateway platform",
              "ruined portal repair", "nether portal in the overworld", "nether portal in the nether",
              "portal with crying obsidian"):
        add("building", "portal", "build " + article(p), "wiki")

    for d in DECO:
        add("decoration", "indoor", "decorate the room with " + d, "brainstorm")
        add("decoration", "indoor", "decorate the house with " + d, "brainstorm")
        add("decoration", "outdoor", "decorate the garden with " + d, "brainstorm")
        add("decoration", "outdoor", "decorate the path with " + d, "brainstorm")
        add("decoration", "tree", "decorate a tree with " + d, "brainstorm")

    for d in DROPS:
        add("collecting", "drop", "collect " + d, "benchmark")
        for n in (5, 10, 20):
            add("collecting", "drop", "collect %d %s" % (n, d), "benchmark")
    for c in CONTAINERS:
        add("collecting", "loot", "loot " + article(c), "wiki")
        add("collecting", "loot", "find treasure in " + article(c), "wiki")
    for f in FISH:
        add("collecting", "fishing", "fish " + article(f) if not f.endswith("s") else "fish " + f, "benchmark")
        add("collecting", "fishing", "catch %s with a fishing rod" % article(f), "benchmark")

    for c in CIRCUITS:
        add("redstone", "circuit", "build " + article(c), "brainstorm")
        add("redstone", "circuit", "power " + article(c), "brainstorm")
    for d in DEVICES:
        add("redstone", "device", "activate " + article(d), "in-game-synthesis")
        add("redstone", "device", "place " + article(d), "in-game-synthesis")
        add("redstone", "device", "power %s with a redstone torch" % article(d), "in-game-synthesis")

    for j in JUMP:
        add("motion", "jump", "jump on " + j, "brainstorm")
        add("motion", "jump", "jump over " + j, "brainstorm")
    for s in SWIM:
        add("motion", "swim", "swim across " + s, "brainstorm")
        add("motion", "swim", "dive into " + s, "brainstorm")
    for c in CLIMB:
        if c != "the mountain":
            add("motion", "climb", "climb " + c, "brainstorm")
        add("motion", "climb", "descend " + c, "brainstorm")

    # dedupe ids, keeping the first occurrence
    seen = set()
    for key in tasks:
        uniq = []
        for t in tasks[key]:
            i = slug(t[0])
            if i not in seen:
                seen.add(i)
                uniq.append(t)
        tasks[key] = uniq

    total = sum(len(v) for v in tasks.values())
    if total < TARGET:
        raise SystemExit("vocabulary yields only %d tasks" % total)
    # round-robin across subcategories until the target is reached
    chosen = OrderedDict((k, []) for k in tasks)
    pos = {k: 0 for k in tasks}
    count = 0
    while count < TARGET:
        for k in tasks:
            if count >= TARGET:
                break
            if pos[k] < len(tasks[k]):
                chosen[k].append(tasks[k][pos[k]])
                pos[k] += 1
                count += 1
    return chosen


def turbo(chosen, rng):
    by_cat = OrderedDict()
    for (cat, sub), items in chosen.items():
        by_cat.setdefault(cat, []).extend(slug(d) for d, _, _ in items)
    cats = [c for c in by_cat if c != "redstone"][:10]
    atomic = []
    for c in cats:
        pool = by_cat[c]
        picks = pool[:2] + rng.sample(pool[2:], 6)
        atomic.extend(picks)
    comps = []
    formats = ["three", "two", "single"]
    for i in range(20):
        f = formats[i % 3]
        ids = rng.sample(atomic, 3)
        if f == "three":
            ops = [rng.choice(["and", "or"]), rng.choice(["and", "or"])]
            comps.append("[%s] %s [%s] %s [%s]" % (ids[0], ops[0], ids[1], ops[1], ids[2]))
        elif f == "two":
            comps.append("[%s] %s [%s]" % (ids[0], rng.choice(["and", "or"]), ids[1]))
        else:
            comps.append("[%s] {from scratch}" % ids[0])
    return atomic + comps


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    ap.add_argument("--seed", type=int, default=20250101)
    args = ap.parse_args()
    out = Path(args.out)
    chosen = build()
    lines = []
    for (cat, sub), items in chosen.items():
        for desc, source, modes in items:
            lines.append("\t".join([slug(desc), cat, sub, source, modes, desc]))
    (out / "catalog.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    (out / "subsets").mkdir(parents=True, exist_ok=True)
    entries = turbo(chosen, random.Random(args.seed))
    (out / "subsets" / "mcu-turbo.txt").write_text("\n".join(entries) + "\n", encoding="utf-8")
    print("%d tasks, %d subset entries" % (len(lines), len(entries)))


if __name__ == "__main__":
    main()
