#include "mcu/command.hpp"

#include "mcu/error.hpp"
#include "mcu/strings.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

namespace mcu::cmd {

bool Vec3::all_relative() const {
  auto rel = [](const Coord& c) { return c.mode != Coord::Mode::Absolute; };
  return rel(x) && rel(y) && rel(z);
}

std::string ItemRef::canonical_id() const {
  auto t = str::lower(id);
  return t.find(':') == std::string::npos ? "minecraft:" + t : t;
}

std::string ItemRef::path() const {
  auto t = str::lower(id);
  auto pos = t.find(':');
  return pos == std::string::npos ? t : t.substr(pos + 1);
}

Boxed::Boxed() : ptr_(std::make_unique<Command>()) {}
Boxed::Boxed(Command c) : ptr_(std::make_unique<Command>(std::move(c))) {}
Boxed::Boxed(const Boxed& other) : ptr_(std::make_unique<Command>(*other.ptr_)) {}
Boxed& Boxed::operator=(const Boxed& other) {
  if (this != &other) ptr_ = std::make_unique<Command>(*other.ptr_);
  return *this;
}
Boxed::~Boxed() = default;
bool Boxed::operator==(const Boxed& other) const { return *ptr_ == *other.ptr_; }

const Command& Command::innermost() const {
  const Command* c = this;
  while (auto* e = c->as<Execute>()) c = &e->inner.get();
  return *c;
}

std::string_view Command::kind_name() const {
  static constexpr std::array<std::string_view, 9> names = {
      "give", "summon", "fill", "execute", "replaceitem", "effect", "time", "weather", "other"};
  return names[body.index()];
}

namespace {

// Splits on whitespace outside quotes and {}/[] nesting, so NBT and selector
// arguments stay in one token.
std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  char quote = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (quote) {
      cur += c;
      if (c == '\\' && i + 1 < s.size()) {
        cur += s[++i];
      } else if (c == quote) {
        quote = 0;
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      quote = c;
      cur += c;
    } else if (c == '{' || c == '[') {
      ++depth;
      cur += c;
    } else if (c == '}' || c == ']') {
      if (--depth < 0) throw ParseError(std::string("unbalanced '") + c + "'");
      cur += c;
    } else if (std::isspace(static_cast<unsigned char>(c)) && depth == 0) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quote) throw ParseError("unterminated string");
  if (depth != 0) throw ParseError("unbalanced brackets");
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool is_id_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '-' || c == '.' || c == ':' || c == '/';
}

ItemRef parse_item(const std::string& tok, const char* what) {
  ItemRef ref;
  std::size_t i = 0;
  while (i < tok.size() && is_id_char(tok[i])) ++i;
  ref.id = tok.substr(0, i);
  if (ref.id.empty() || ref.id.front() == ':' || ref.id.back() == ':' ||
      ref.id.find(':') != ref.id.rfind(':'))
    throw ParseError(std::string("malformed ") + what + " id '" + tok + "'");
  auto rest = std::string_view(tok).substr(i);
  if (!rest.empty() && rest.front() == '[') {
    auto close = rest.find(']');
    ref.state = std::string(rest.substr(0, close + 1));
    rest.remove_prefix(close + 1);
  }
  if (!rest.empty()) {
    if (rest.front() != '{' || rest.back() != '}')
      throw ParseError(std::string("malformed ") + what + " '" + tok + "'");
    ref.nbt = std::string(rest);
  }
  return ref;
}

Selector parse_selector(const std::string& tok) {
  if (tok.empty()) throw ParseError("malformed selector ''");
  if (tok.front() == '@') {
    if (tok.size() < 2 || std::string_view("spaer").find(tok[1]) == std::string_view::npos)
      throw ParseError("malformed selector '" + tok + "'");
    if (tok.size() > 2 && (tok[2] != '[' || tok.back() != ']'))
      throw ParseError("malformed selector '" + tok + "'");
    return {tok};
  }
  if (tok.size() > 16) throw ParseError("malformed selector '" + tok + "'");
  for (char c : tok)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      throw ParseError("malformed selector '" + tok + "'");
  return {tok};
}

bool parse_number(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size() && std::isfinite(out);
}

bool looks_like_coord(std::string_view s) {
  if (s.empty()) return false;
  if (s.front() == '~' || s.front() == '^') return true;
  double d;
  return parse_number(s, d);
}

Coord parse_coord(const std::string& tok) {
  Coord c;
  std::string_view rest = tok;
  if (!rest.empty() && (rest.front() == '~' || rest.front() == '^')) {
    c.mode = rest.front() == '~' ? Coord::Mode::Relative : Coord::Mode::Local;
    rest.remove_prefix(1);
    if (rest.empty()) return c;
  } else {
    c.mode = Coord::Mode::Absolute;
  }
  double v;
  if (!parse_number(rest, v)) throw ParseError("malformed coordinate '" + tok + "'");
  c.value = v;
  return c;
}

Vec3 parse_vec(const std::vector<std::string>& t, std::size_t at, const char* cmd) {
  if (at + 3 > t.size()) throw ParseError(std::string(cmd) + ": missing coordinates");
  for (std::size_t i = at; i < at + 3; ++i)
    if (!looks_like_coord(t[i])) throw ParseError(std::string(cmd) + ": missing coordinates near '" + t[i] + "'");
  return {parse_coord(t[at]), parse_coord(t[at + 1]), parse_coord(t[at + 2])};
}

int parse_int(const std::string& tok, const char* what) {
  int v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError(std::string("non-numeric ") + what + " '" + tok + "'");
  return v;
}

int parse_count(const std::string& tok) {
  int v = parse_int(tok, "count");
  if (v < 1) throw ParseError("count must be >= 1, got " + tok);
  return v;
}

void expect_max(const std::vector<std::string>& t, std::size_t n, const char* cmd) {
  if (t.size() > n) throw ParseError(std::string(cmd) + ": unexpected argument '" + t[n] + "'");
}

Body parse_body(const std::vector<std::string>& t);

Body parse_give(const std::vector<std::string>& t) {
  if (t.size() < 3) throw ParseError("give: expected '<target> <item> [count]'");
  expect_max(t, 4, "give");
  Give g{parse_selector(t[1]), parse_item(t[2], "item"), std::nullopt};
  if (t.size() == 4) g.count = parse_count(t[3]);
  return g;
}

Body parse_summon(const std::vector<std::string>& t) {
  if (t.size() < 2) throw ParseError("summon: expected an entity id");
  Summon s{parse_item(t[1], "entity"), std::nullopt};
  if (!s.entity.nbt.empty() || !s.entity.state.empty()) throw ParseError("summon: malformed entity id '" + t[1] + "'");
  if (t.size() == 2) return s;
  if (t.size() < 5) throw ParseError("summon: incomplete coordinates");
  s.pos = parse_vec(t, 2, "summon");
  if (t.size() >= 6) {
    if (t[5].front() != '{' || t[5].back() != '}') throw ParseError("summon: malformed NBT '" + t[5] + "'");
    s.entity.nbt = t[5];
  }
  expect_max(t, 6, "summon");
  return s;
}

Body parse_fill(const std::vector<std::string>& t) {
  Fill f;
  f.from = parse_vec(t, 1, "fill");
  f.to = parse_vec(t, 4, "fill");
  if (t.size() < 8) throw ParseError("fill: missing block");
  f.block = parse_item(t[7], "block");
  f.mode.assign(t.begin() + 8, t.end());
  return f;
}

Body parse_execute(const std::vector<std::string>& t) {
  std::size_t run = 1;
  while (run < t.size() && t[run] != "run") ++run;
  if (run >= t.size()) {
    // Without "run" only a condition check is a complete command.
    for (std::size_t i = 1; i < t.size(); ++i)
      if (t[i] == "if" || t[i] == "unless") return Other{str::join(t, " ")};
    throw ParseError("execute: needs 'run' or a condition");
  }
  if (run + 1 >= t.size()) throw ParseError("execute: 'run' without a command");
  Execute e;
  e.modifiers.assign(t.begin() + 1, t.begin() + static_cast<std::ptrdiff_t>(run));
  std::vector<std::string> inner(t.begin() + static_cast<std::ptrdiff_t>(run) + 1, t.end());
  Command c;
  c.body = parse_body(inner);
  c.raw = str::join(inner, " ");
  e.inner = Boxed(std::move(c));
  return e;
}

Body parse_replaceitem(const std::vector<std::string>& t) {
  if (t.size() < 2 || t[1] != "entity") return Other{str::join(t, " ")};
  if (t.size() < 5) throw ParseError("replaceitem: expected 'entity <target> <slot> <item> [count]'");
  expect_max(t, 6, "replaceitem");
  ReplaceItem r{parse_selector(t[2]), t[3], parse_item(t[4], "item"), std::nullopt};
  if (t.size() == 6) r.count = parse_count(t[5]);
  return r;
}

Body parse_effect(const std::vector<std::string>& t) {
  if (t.size() < 3 || (t[1] != "give" && t[1] != "clear")) return Other{str::join(t, " ")};
  Effect e;
  e.target = parse_selector(t[2]);
  if (t[1] == "clear") {
    e.action = Effect::Action::Clear;
    if (t.size() >= 4) e.effect = t[3];
    expect_max(t, 4, "effect");
    return e;
  }
  if (t.size() < 4) throw ParseError("effect give: missing effect id");
  expect_max(t, 7, "effect");
  e.effect = parse_item(t[3], "effect").id;
  if (t.size() >= 5) e.seconds = parse_int(t[4], "duration");
  if (t.size() >= 6) e.amplifier = parse_int(t[5], "amplifier");
  if (t.size() >= 7) {
    if (t[6] != "true" && t[6] != "false") throw ParseError("effect: expected true/false, got '" + t[6] + "'");
    e.hide_particles = t[6] == "true";
  }
  return e;
}

Body parse_time(const std::vector<std::string>& t) {
  if (t.size() != 3 || (t[1] != "set" && t[1] != "add")) return Other{str::join(t, " ")};
  static constexpr std::array<std::string_view, 4> named = {"day", "night", "noon", "midnight"};
  bool ok = t[1] == "set" && std::find(named.begin(), named.end(), t[2]) != named.end();
  if (!ok) {
    auto tok = t[2];
    if (!tok.empty() && (tok.back() == 't' || tok.back() == 's' || tok.back() == 'd')) tok.pop_back();
    parse_int(tok, "time value");
  }
  return Time{t[1], t[2]};
}

Body parse_weather(const std::vector<std::string>& t) {
  if (t.size() < 2 || (t[1] != "clear" && t[1] != "rain" && t[1] != "thunder")) return Other{str::join(t, " ")};
  expect_max(t, 3, "weather");
  Weather w{t[1], std::nullopt};
  if (t.size() == 3) w.duration = parse_int(t[2], "duration");
  return w;
}

Body parse_body(const std::vector<std::string>& t) {
  if (t.empty()) throw ParseError("empty command");
  const auto& name = t[0];
  if (name == "give") return parse_give(t);
  if (name == "summon") return parse_summon(t);
  if (name == "fill") return parse_fill(t);
  if (name == "execute") return parse_execute(t);
  if (name == "replaceitem") return parse_replaceitem(t);
  if (name == "effect") return parse_effect(t);
  if (name == "time") return parse_time(t);
  if (name == "weather") return parse_weather(t);
  return Other{str::join(t, " ")};
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), p);
}

std::string format_coord(const Coord& c) {
  std::string out;
  if (c.mode == Coord::Mode::Relative) out = "~";
  if (c.mode == Coord::Mode::Local) out = "^";
  if (c.value) out += format_number(*c.value);
  return out;
}

std::string format_vec(const Vec3& v) {
  return format_coord(v.x) + ' ' + format_coord(v.y) + ' ' + format_coord(v.z);
}

std::string format_item(const ItemRef& r) { return r.id + r.state + r.nbt; }

struct BodyFormatter {
  std::string operator()(const Give& g) const {
    auto s = "give " + g.target.text + ' ' + format_item(g.item);
    if (g.count) s += ' ' + std::to_string(*g.count);
    return s;
  }
  std::string operator()(const Summon& s) const {
    auto out = "summon " + s.entity.id;
    if (s.pos) out += ' ' + format_vec(*s.pos);
    if (!s.entity.nbt.empty()) out += ' ' + s.entity.nbt;
    return out;
  }
  std::string operator()(const Fill& f) const {
    auto s = "fill " + format_vec(f.from) + ' ' + format_vec(f.to) + ' ' + format_item(f.block);
    for (const auto& m : f.mode) s += ' ' + m;
    return s;
  }
  std::string operator()(const Execute& e) const {
    std::string s = "execute";
    for (const auto& m : e.modifiers) s += ' ' + m;
    return s + " run " + std::visit(*this, e.inner->body);
  }
  std::string operator()(const ReplaceItem& r) const {
    auto s = "replaceitem entity " + r.target.text + ' ' + r.slot + ' ' + format_item(r.item);
    if (r.count) s += ' ' + std::to_string(*r.count);
    return s;
  }
  std::string operator()(const Effect& e) const {
    if (e.action == Effect::Action::Clear)
      return "effect clear " + e.target.text + (e.effect.empty() ? "" : ' ' + e.effect);
    auto s = "effect give " + e.target.text + ' ' + e.effect;
    if (e.seconds) s += ' ' + std::to_string(*e.seconds);
    if (e.amplifier) s += ' ' + std::to_string(*e.amplifier);
    if (e.hide_particles) s += *e.hide_particles ? " true" : " false";
    return s;
  }
  std::string operator()(const Time& t) const { return "time " + t.action + ' ' + t.value; }
  std::string operator()(const Weather& w) const {
    return "weather " + w.kind + (w.duration ? ' ' + std::to_string(*w.duration) : "");
  }
  std::string operator()(const Other& o) const { return o.text; }
};

std::string_view strip_slash(std::string_view line) {
  auto t = str::trim(line);
  if (t.empty() || t.front() != '/') throw ParseError("command must start with '/'");
  return t.substr(1);
}

} // namespace

Command parse_command(std::string_view line) {
  auto body = strip_slash(line);
  Command c;
  c.body = parse_body(tokenize(body));
  c.raw = std::string(line);
  return c;
}

std::string format_command(const Command& c) { return '/' + std::visit(BodyFormatter{}, c.body); }

std::string normalize_command(std::string_view line) {
  auto body = strip_slash(line);
  return '/' + str::join(tokenize(body), " ");
}

} // namespace mcu::cmd
