#include "mcu/task_expr.hpp"

#include "mcu/catalog.hpp"
#include "mcu/error.hpp"
#include "mcu/random.hpp"
#include "mcu/strings.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace mcu {

TaskExpr TaskExpr::atom(std::string text) {
  auto t = str::collapse_ws(text);
  if (t.empty()) throw ValidationError("empty atom");
  TaskExpr e;
  e.kind_ = Kind::Atom;
  e.text_ = std::move(t);
  return e;
}

TaskExpr TaskExpr::all_of(TaskExpr left, TaskExpr right) {
  TaskExpr e;
  e.kind_ = Kind::And;
  e.left_ = std::make_shared<const TaskExpr>(std::move(left));
  e.right_ = std::make_shared<const TaskExpr>(std::move(right));
  return e;
}

TaskExpr TaskExpr::any_of(TaskExpr left, TaskExpr right) {
  TaskExpr e;
  e.kind_ = Kind::Or;
  e.left_ = std::make_shared<const TaskExpr>(std::move(left));
  e.right_ = std::make_shared<const TaskExpr>(std::move(right));
  return e;
}

TaskExpr TaskExpr::constrained(TaskExpr inner, std::string constraint) {
  auto t = str::collapse_ws(constraint);
  if (t.empty()) throw ValidationError("empty constraint");
  TaskExpr e;
  e.kind_ = Kind::Constrained;
  e.text_ = std::move(t);
  e.left_ = std::make_shared<const TaskExpr>(std::move(inner));
  return e;
}

bool TaskExpr::operator==(const TaskExpr& other) const {
  if (kind_ != other.kind_ || text_ != other.text_) return false;
  switch (kind_) {
  case Kind::Atom: return true;
  case Kind::Constrained: return *left_ == *other.left_;
  case Kind::And:
  case Kind::Or: return *left_ == *other.left_ && *right_ == *other.right_;
  }
  return false;
}

// -------------------------------------------------------------------- parser

namespace {

class ExprParser {
public:
  explicit ExprParser(std::string_view src) : src_(src) {}

  TaskExpr parse() {
    skip_ws();
    if (at_end()) throw ParseError("empty task expression");
    auto e = parse_or();
    skip_ws();
    if (!at_end()) {
      if (src_[pos_] == ')') throw ParseError("unbalanced ')' at offset " + std::to_string(pos_));
      if (src_[pos_] == ']') throw ParseError("unbalanced ']' at offset " + std::to_string(pos_));
      throw ParseError("expected 'and' or 'or' at offset " + std::to_string(pos_));
    }
    return e;
  }

private:
  TaskExpr parse_or() {
    auto e = parse_and();
    while (accept_keyword("or")) e = TaskExpr::any_of(std::move(e), parse_and());
    return e;
  }

  TaskExpr parse_and() {
    auto e = parse_unit();
    while (accept_keyword("and")) e = TaskExpr::all_of(std::move(e), parse_unit());
    return e;
  }

  TaskExpr parse_unit() {
    skip_ws();
    std::vector<std::string> prefix;
    while (peek() == '{') prefix.push_back(read_delimited('{', '}', "constraint"));
    skip_ws();
    std::optional<TaskExpr> e;
    if (peek() == '[') {
      auto text = read_delimited('[', ']', "atom");
      e = TaskExpr::atom(std::move(text));
    } else if (peek() == '(') {
      ++pos_;
      e = parse_or();
      skip_ws();
      if (peek() != ')') throw ParseError("unbalanced '(': missing ')'");
      ++pos_;
    } else if (at_end()) {
      throw ParseError("dangling operator: expression ends where a task was expected");
    } else if (keyword_ahead("and") || keyword_ahead("or")) {
      throw ParseError("dangling operator at offset " + std::to_string(pos_));
    } else if (peek() == ']' || peek() == '}' || peek() == ')') {
      throw ParseError(std::string("unbalanced '") + peek() + "' at offset " + std::to_string(pos_));
    } else {
      throw ParseError("expected '[' at offset " + std::to_string(pos_));
    }
    skip_ws();
    while (peek() == '{') {
      e = TaskExpr::constrained(std::move(*e), read_delimited('{', '}', "constraint"));
      skip_ws();
    }
    // A leading "{then}" after an operator annotates the unit that follows it.
    for (auto& c : prefix) e = TaskExpr::constrained(std::move(*e), std::move(c));
    return std::move(*e);
  }

  std::string read_delimited(char open, char close, const char* what) {
    auto start = pos_;
    ++pos_;
    auto end = src_.find_first_of(std::string{close, open, '[', ']', '{', '}'}, pos_);
    if (end == std::string_view::npos || src_[end] != close)
      throw ParseError(std::string("unbalanced '") + open + "' at offset " + std::to_string(start));
    auto text = str::collapse_ws(src_.substr(pos_, end - pos_));
    if (text.empty()) throw ParseError(std::string("empty ") + what + " at offset " + std::to_string(start));
    pos_ = end + 1;
    return text;
  }

  bool keyword_ahead(std::string_view kw) const {
    if (!str::starts_with_ci(src_.substr(pos_), kw)) return false;
    auto after = pos_ + kw.size();
    return after >= src_.size() || !std::isalnum(static_cast<unsigned char>(src_[after]));
  }

  bool accept_keyword(std::string_view kw) {
    skip_ws();
    if (!keyword_ahead(kw)) return false;
    pos_ += kw.size();
    return true;
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return at_end() ? '\0' : src_[pos_]; }

  std::string_view src_;
  std::size_t pos_ = 0;
};

enum class Level { Or = 0, And = 1, Unit = 2 };

Level level_of(const TaskExpr& e) {
  switch (e.kind()) {
  case TaskExpr::Kind::Or: return Level::Or;
  case TaskExpr::Kind::And: return Level::And;
  default: return Level::Unit;
  }
}

void render_into(const TaskExpr& e, std::string& out);

// Left operands may sit at their own level (left association); right operands
// and constrained inners must bind strictly tighter or get parentheses.
void render_operand(const TaskExpr& e, Level min_level, std::string& out) {
  if (level_of(e) < min_level) {
    out += '(';
    render_into(e, out);
    out += ')';
  } else {
    render_into(e, out);
  }
}

void render_into(const TaskExpr& e, std::string& out) {
  switch (e.kind()) {
  case TaskExpr::Kind::Atom:
    out += '[' + e.text() + ']';
    break;
  case TaskExpr::Kind::Constrained:
    render_operand(e.inner(), Level::Unit, out);
    out += " {" + e.text() + '}';
    break;
  case TaskExpr::Kind::And:
    render_operand(e.left(), Level::And, out);
    out += " and ";
    render_operand(e.right(), Level::Unit, out);
    break;
  case TaskExpr::Kind::Or:
    render_operand(e.left(), Level::Or, out);
    out += " or ";
    render_operand(e.right(), Level::And, out);
    break;
  }
}

void collect_atoms(const TaskExpr& e, std::vector<std::string>& out) {
  switch (e.kind()) {
  case TaskExpr::Kind::Atom: out.push_back(e.text()); break;
  case TaskExpr::Kind::Constrained: collect_atoms(e.inner(), out); break;
  default:
    collect_atoms(e.left(), out);
    collect_atoms(e.right(), out);
  }
}

} // namespace

TaskExpr parse_task_expr(std::string_view text) { return ExprParser(text).parse(); }

std::string render(const TaskExpr& expr) {
  std::string out;
  render_into(expr, out);
  return out;
}

std::vector<std::string> atoms(const TaskExpr& expr) {
  std::vector<std::string> out;
  collect_atoms(expr, out);
  return out;
}

std::size_t node_count(const TaskExpr& e) {
  switch (e.kind()) {
  case TaskExpr::Kind::Atom: return 1;
  case TaskExpr::Kind::Constrained: return 1 + node_count(e.inner());
  default: return 1 + node_count(e.left()) + node_count(e.right());
  }
}

// --------------------------------------------------------------- composition

CompositionFormat parse_composition_format(std::string_view s) {
  auto t = str::lower(str::trim(s));
  if (t == "three-mixed") return CompositionFormat::ThreeMixed;
  if (t == "two") return CompositionFormat::Two;
  if (t == "single-from-scratch") return CompositionFormat::SingleFromScratch;
  throw ParseError("unknown composition format '" + std::string(s) + "'");
}

std::string_view to_string(CompositionFormat f) {
  switch (f) {
  case CompositionFormat::ThreeMixed: return "three-mixed";
  case CompositionFormat::Two: return "two";
  case CompositionFormat::SingleFromScratch: return "single-from-scratch";
  }
  return "two";
}

namespace {
std::size_t arity(CompositionFormat f) {
  switch (f) {
  case CompositionFormat::ThreeMixed: return 3;
  case CompositionFormat::Two: return 2;
  case CompositionFormat::SingleFromScratch: return 1;
  }
  return 1;
}

TaskExpr join(TaskExpr l, Connective c, TaskExpr r) {
  return c == Connective::And ? TaskExpr::all_of(std::move(l), std::move(r))
                              : TaskExpr::any_of(std::move(l), std::move(r));
}
} // namespace

TaskExpr compose(const std::vector<std::string>& atom_texts, CompositionFormat format,
                 const std::vector<Connective>& connectives) {
  auto n = arity(format);
  if (atom_texts.size() != n) throw ValidationError("composition needs " + std::to_string(n) + " atoms");
  if (connectives.size() != n - 1)
    throw ValidationError("composition needs " + std::to_string(n - 1) + " connectives");
  switch (format) {
  case CompositionFormat::SingleFromScratch:
    return TaskExpr::constrained(TaskExpr::atom(atom_texts[0]), "from scratch");
  case CompositionFormat::Two:
    return join(TaskExpr::atom(atom_texts[0]), connectives[0], TaskExpr::atom(atom_texts[1]));
  case CompositionFormat::ThreeMixed: {
    auto a = TaskExpr::atom(atom_texts[0]);
    auto b = TaskExpr::atom(atom_texts[1]);
    auto c = TaskExpr::atom(atom_texts[2]);
    // Same tree the parser builds for "a op1 b op2 c".
    if (connectives[0] == Connective::Or && connectives[1] == Connective::And)
      return TaskExpr::any_of(std::move(a), TaskExpr::all_of(std::move(b), std::move(c)));
    return join(join(std::move(a), connectives[0], std::move(b)), connectives[1], std::move(c));
  }
  }
  throw ValidationError("unknown composition format");
}

TaskExpr compose_random(const Catalog& catalog, CompositionFormat format, std::uint64_t seed) {
  auto n = arity(format);
  if (catalog.size() < n)
    throw ValidationError("catalog too small for " + std::string(to_string(format)) + " composition");
  auto picked = sample(catalog, n, seed);
  std::vector<std::string> texts;
  for (const auto& t : picked) texts.push_back(t.description);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Connective> ops;
  for (std::size_t i = 0; i + 1 < n; ++i)
    ops.push_back(uniform_index(rng, 2) == 0 ? Connective::And : Connective::Or);
  return compose(texts, format, ops);
}

double combined_score(const TaskExpr& e, const std::map<std::string, double, std::less<>>& leaf_scores) {
  switch (e.kind()) {
  case TaskExpr::Kind::Atom: {
    auto it = leaf_scores.find(e.text());
    if (it == leaf_scores.end()) throw ValidationError("missing leaf score for '" + e.text() + "'");
    return it->second;
  }
  case TaskExpr::Kind::Constrained: return combined_score(e.inner(), leaf_scores);
  case TaskExpr::Kind::And:
    return (combined_score(e.left(), leaf_scores) + combined_score(e.right(), leaf_scores)) / 2.0;
  case TaskExpr::Kind::Or:
    return std::max(combined_score(e.left(), leaf_scores), combined_score(e.right(), leaf_scores));
  }
  return 0.0;
}

} // namespace mcu
