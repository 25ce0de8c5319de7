#include "mcu/catalog.hpp"

#include "mcu/error.hpp"
#include "mcu/random.hpp"
#include "mcu/strings.hpp"
#include "mcu/task_expr.hpp"

#include <algorithm>
#include <numeric>

namespace mcu {

std::string_view to_string(Difficulty d) { return d == Difficulty::Simple ? "simple" : "hard"; }

std::string_view to_string(TaskSource s) {
  switch (s) {
  case TaskSource::Benchmark: return "benchmark";
  case TaskSource::Wiki: return "wiki";
  case TaskSource::InGameSynthesis: return "in-game-synthesis";
  case TaskSource::Brainstorm: return "brainstorm";
  }
  return "benchmark";
}

Difficulty parse_difficulty(std::string_view s) {
  auto t = str::lower(str::trim(s));
  if (t == "simple") return Difficulty::Simple;
  if (t == "hard") return Difficulty::Hard;
  throw ParseError("unknown difficulty '" + std::string(s) + "'");
}

TaskSource parse_source(std::string_view s) {
  auto t = str::lower(str::trim(s));
  if (t == "benchmark") return TaskSource::Benchmark;
  if (t == "wiki") return TaskSource::Wiki;
  if (t == "in-game-synthesis") return TaskSource::InGameSynthesis;
  if (t == "brainstorm") return TaskSource::Brainstorm;
  throw ParseError("unknown task source '" + std::string(s) + "'");
}

// ---------------------------------------------------------------- categories

CategoryTable CategoryTable::load(const std::string& path) { return parse(str::read_file(path)); }

CategoryTable CategoryTable::parse(std::string_view text) {
  CategoryTable table;
  std::size_t lineno = 0;
  for (const auto& raw : str::split(text, '\n')) {
    ++lineno;
    auto line = str::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fields = str::split(line, '\t');
    if (fields.size() != 2) throw ParseError("expected 'category<TAB>subcategory'", lineno);
    table.add(std::string(str::trim(fields[0])), std::string(str::trim(fields[1])));
  }
  return table;
}

void CategoryTable::add(const std::string& category, const std::string& subcategory) {
  table_[category].insert(subcategory);
}

bool CategoryTable::has_category(std::string_view category) const {
  return table_.find(category) != table_.end();
}

bool CategoryTable::contains(std::string_view category, std::string_view subcategory) const {
  auto it = table_.find(category);
  return it != table_.end() && it->second.count(std::string(subcategory)) > 0;
}

std::vector<std::string> CategoryTable::categories() const {
  std::vector<std::string> out;
  for (const auto& [name, subs] : table_) out.push_back(name);
  return out;
}

std::size_t CategoryTable::subcategory_count() const {
  std::size_t n = 0;
  for (const auto& [name, subs] : table_) n += subs.size();
  return n;
}

// ------------------------------------------------------------------- catalog

Catalog::Catalog(std::vector<AtomicTask> tasks, CategoryTable categories)
    : tasks_(std::move(tasks)), categories_(std::move(categories)) {
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    const auto& t = tasks_[i];
    if (t.id.empty()) throw ValidationError("task with empty id");
    if (t.description.empty()) throw ValidationError("task '" + t.id + "' has an empty description");
    if (!categories_.contains(t.category, t.subcategory))
      throw ValidationError("task '" + t.id + "': unknown category '" + t.category + "/" +
                            t.subcategory + "'");
    if (!index_.emplace(t.id, i).second) throw ValidationError("duplicate task id '" + t.id + "'");
  }
}

const AtomicTask* Catalog::find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &tasks_[it->second];
}

void Catalog::add_subset(const std::string& name, std::vector<std::string> entries) {
  std::size_t compositional = 0;
  for (const auto& entry : entries) {
    if (entry.find('[') != std::string::npos) {
      ++compositional;
      auto expr = parse_task_expr(entry);
      for (const auto& atom : atoms(expr))
        if (!find(atom))
          throw ValidationError("subset '" + name + "': unresolved atom '" + atom + "'");
    } else if (!find(entry)) {
      throw ValidationError("subset '" + name + "': unknown task id '" + entry + "'");
    }
  }
  if (name == "mcu-turbo" && (entries.size() != 100 || compositional != 20))
    throw ValidationError("subset 'mcu-turbo' must hold 80 atomic and 20 compositional entries, got " +
                          std::to_string(entries.size() - compositional) + " and " +
                          std::to_string(compositional));
  subsets_[name] = std::move(entries);
}

const std::vector<std::string>& Catalog::subset(std::string_view name) const {
  auto it = subsets_.find(name);
  if (it == subsets_.end()) throw NotFoundError("no subset named '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> Catalog::subset_names() const {
  std::vector<std::string> out;
  for (const auto& [name, ids] : subsets_) out.push_back(name);
  return out;
}

Catalog parse_catalog(std::string_view text, const CategoryTable& categories) {
  std::vector<AtomicTask> tasks;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::size_t lineno = 0;
  for (const auto& raw : str::split(text, '\n')) {
    ++lineno;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (str::trim(line).empty() || line.front() == '#') continue;
    auto f = str::split(line, '\t');
    if (f.size() != 6) throw ParseError("expected 6 tab-separated fields, got " + std::to_string(f.size()), lineno);
    AtomicTask t;
    t.id = std::string(str::trim(f[0]));
    t.category = std::string(str::trim(f[1]));
    t.subcategory = std::string(str::trim(f[2]));
    try {
      t.source = parse_source(f[3]);
      for (const auto& mode : str::split(f[4], ','))
        if (!str::trim(mode).empty()) t.difficulty_modes.insert(parse_difficulty(mode));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
    t.description = std::string(str::trim(f[5]));
    if (t.id.empty()) throw ParseError("empty id", lineno);
    if (t.description.empty()) throw ParseError("empty description", lineno);
    if (!categories.has_category(t.category))
      throw ValidationError("line " + std::to_string(lineno) + ": unknown category '" + t.category + "'");
    if (!categories.contains(t.category, t.subcategory))
      throw ValidationError("line " + std::to_string(lineno) + ": unknown subcategory '" +
                            t.subcategory + "' in category '" + t.category + "'");
    if (auto [it, inserted] = seen.emplace(t.id, lineno); !inserted)
      throw ValidationError("line " + std::to_string(lineno) + ": duplicate task id '" + t.id +
                            "' (first at line " + std::to_string(it->second) + ")");
    tasks.push_back(std::move(t));
  }
  return Catalog(std::move(tasks), categories);
}

Catalog load_catalog(const std::string& path, const CategoryTable& categories) {
  return parse_catalog(str::read_file(path), categories);
}

std::string format_catalog(const Catalog& catalog) {
  std::string out;
  for (const auto& t : catalog.tasks()) {
    std::vector<std::string> modes;
    for (auto d : t.difficulty_modes) modes.emplace_back(to_string(d));
    out += t.id + '\t' + t.category + '\t' + t.subcategory + '\t' + std::string(to_string(t.source)) +
           '\t' + str::join(modes, ",") + '\t' + t.description + '\n';
  }
  return out;
}

std::vector<std::string> load_subset_file(const std::string& path) {
  std::vector<std::string> out;
  for (const auto& raw : str::split(str::read_file(path), '\n')) {
    auto line = str::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    out.emplace_back(line);
  }
  return out;
}

std::vector<AtomicTask> filter(const Catalog& catalog, const TaskFilter& f) {
  if (f.category && !catalog.categories().has_category(*f.category))
    throw ValidationError("unknown category '" + *f.category + "'");
  std::vector<AtomicTask> out;
  for (const auto& t : catalog.tasks()) {
    if (f.category && t.category != *f.category) continue;
    if (f.subcategory && t.subcategory != *f.subcategory) continue;
    if (f.difficulty && !t.difficulty_modes.count(*f.difficulty)) continue;
    out.push_back(t);
  }
  return out;
}

std::vector<AtomicTask> sample(const Catalog& catalog, std::size_t n, std::uint64_t seed) {
  if (n > catalog.size())
    throw ValidationError("cannot sample " + std::to_string(n) + " tasks from a catalog of " +
                          std::to_string(catalog.size()));
  std::vector<std::size_t> order(catalog.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  // Partial Fisher-Yates: only the first n positions are needed.
  for (std::size_t i = 0; i < n; ++i) {
    auto j = i + uniform_index(rng, order.size() - i);
    std::swap(order[i], order[j]);
  }
  std::vector<AtomicTask> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(catalog.tasks()[order[i]]);
  return out;
}

} // namespace mcu
