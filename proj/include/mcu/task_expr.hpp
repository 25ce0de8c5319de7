#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace mcu {

class Catalog;

/// Immutable compositional task tree. Children are shared, so copies are cheap.
///
/// DSL (AND binds tighter than OR, chains associate left, braces bind tightest):
///   expr := or
///   or   := and ("or" and)*
///   and  := unit ("and" unit)*
///   unit := ("{" text "}")* ( "[" text "]" | "(" expr ")" ) ("{" text "}")*
/// Parentheses only appear when a tree cannot be written without them.
class TaskExpr {
public:
  enum class Kind { Atom, And, Or, Constrained };

  static TaskExpr atom(std::string text);
  static TaskExpr all_of(TaskExpr left, TaskExpr right);
  static TaskExpr any_of(TaskExpr left, TaskExpr right);
  static TaskExpr constrained(TaskExpr inner, std::string constraint);

  Kind kind() const { return kind_; }
  /// Atom text, or the constraint text of a Constrained node.
  const std::string& text() const { return text_; }
  /// And/Or left operand, or the inner node of a Constrained node.
  const TaskExpr& left() const { return *left_; }
  const TaskExpr& right() const { return *right_; }
  const TaskExpr& inner() const { return *left_; }

  bool operator==(const TaskExpr& other) const;

private:
  TaskExpr() = default;
  Kind kind_ = Kind::Atom;
  std::string text_;
  std::shared_ptr<const TaskExpr> left_;
  std::shared_ptr<const TaskExpr> right_;
};

TaskExpr parse_task_expr(std::string_view text);
std::string render(const TaskExpr& expr);
/// Leaf texts in left-to-right order.
std::vector<std::string> atoms(const TaskExpr& expr);
std::size_t node_count(const TaskExpr& expr);

enum class CompositionFormat { ThreeMixed, Two, SingleFromScratch };
enum class Connective { And, Or };

CompositionFormat parse_composition_format(std::string_view s);
std::string_view to_string(CompositionFormat f);

/// Builds a composition from already-chosen atom texts. `connectives` must hold
/// arity-1 entries (none for single-from-scratch).
TaskExpr compose(const std::vector<std::string>& atom_texts, CompositionFormat format,
                 const std::vector<Connective>& connectives);
/// Draws distinct catalog tasks and connectives; deterministic per seed.
TaskExpr compose_random(const Catalog& catalog, CompositionFormat format, std::uint64_t seed);

/// AND = arithmetic mean, OR = max, constraints pass their inner score through.
double combined_score(const TaskExpr& expr, const std::map<std::string, double, std::less<>>& leaf_scores);

} // namespace mcu
