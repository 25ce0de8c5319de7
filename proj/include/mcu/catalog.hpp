#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mcu {

enum class Difficulty { Simple, Hard };
enum class TaskSource { Benchmark, Wiki, InGameSynthesis, Brainstorm };

std::string_view to_string(Difficulty d);
std::string_view to_string(TaskSource s);
Difficulty parse_difficulty(std::string_view s);
TaskSource parse_source(std::string_view s);

/// A goal-only task. Categories are validated against a CategoryTable on load.
struct AtomicTask {
  std::string id;
  std::string category;
  std::string subcategory;
  TaskSource source = TaskSource::Benchmark;
  std::set<Difficulty> difficulty_modes;
  std::string description;

  bool operator==(const AtomicTask&) const = default;
};

/// Category -> subcategories, loaded from data so the table can grow without a release.
class CategoryTable {
public:
  static CategoryTable load(const std::string& path);
  static CategoryTable parse(std::string_view text);

  void add(const std::string& category, const std::string& subcategory);
  bool has_category(std::string_view category) const;
  bool contains(std::string_view category, std::string_view subcategory) const;
  std::vector<std::string> categories() const;
  std::size_t subcategory_count() const;

private:
  std::map<std::string, std::set<std::string>, std::less<>> table_;
};

/// Immutable after load; safe to share across readers.
class Catalog {
public:
  Catalog() = default;
  Catalog(std::vector<AtomicTask> tasks, CategoryTable categories);

  const std::vector<AtomicTask>& tasks() const { return tasks_; }
  std::size_t size() const { return tasks_.size(); }
  const AtomicTask* find(std::string_view id) const;
  const CategoryTable& categories() const { return categories_; }

  /// Subset entries are task ids or task expressions whose atoms are ids.
  void add_subset(const std::string& name, std::vector<std::string> entries);
  const std::vector<std::string>& subset(std::string_view name) const;
  std::vector<std::string> subset_names() const;

  bool operator==(const Catalog& other) const { return tasks_ == other.tasks_ && subsets_ == other.subsets_; }

private:
  std::vector<AtomicTask> tasks_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::map<std::string, std::vector<std::string>, std::less<>> subsets_;
  CategoryTable categories_;
};

Catalog parse_catalog(std::string_view text, const CategoryTable& categories);
Catalog load_catalog(const std::string& path, const CategoryTable& categories);
/// Inverse of parse_catalog (tasks only; subsets live in their own files).
std::string format_catalog(const Catalog& catalog);
std::vector<std::string> load_subset_file(const std::string& path);

struct TaskFilter {
  std::optional<std::string> category;
  std::optional<std::string> subcategory;
  std::optional<Difficulty> difficulty;
};

std::vector<AtomicTask> filter(const Catalog& catalog, const TaskFilter& f);
/// n distinct tasks, a pure function of (catalog, n, seed).
std::vector<AtomicTask> sample(const Catalog& catalog, std::size_t n, std::uint64_t seed);

} // namespace mcu
