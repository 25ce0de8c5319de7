#include "mcu/autoeval.hpp"

#include "mcu/error.hpp"
#include "mcu/hash.hpp"
#include "mcu/strings.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

namespace mcu::eval {

using json = nlohmann::json;

namespace {

constexpr std::array<std::string_view, kDimensionCount> kKeys = {
    "TaskProgress", "ActionControl", "ErrorRecognition", "CreativeAttempts", "TaskEfficiency", "MaterialUsage"};
constexpr std::array<std::string_view, kDimensionCount> kDisplay = {
    "Task Progress",     "Action Control",             "Error Recognition and Correction",
    "Creative Attempts", "Task Completion Efficiency", "Material Selection and Usage"};

std::size_t idx(Dimension d) { return static_cast<std::size_t>(d); }

/// Lowercase letters and single spaces only; leading numbering dropped.
std::string normalize_header(std::string_view s) {
  std::string out;
  bool space = false;
  for (unsigned char c : s) {
    if (std::isalpha(c)) {
      if (space && !out.empty()) out += ' ';
      out += static_cast<char>(std::tolower(c));
      space = false;
    } else if (std::isspace(c) || c == '_' || c == '-') {
      space = true;
    }
  }
  return out;
}

std::string_view strip_bullet(std::string_view t) {
  t = str::trim(t);
  while (!t.empty() && (t[0] == '-' || t[0] == '*' || t[0] == '+') &&
         (t.size() == 1 || t[1] == ' ' || t[1] == '\t'))
    t = str::trim(t.substr(1));
  return t;
}

std::string strip_bold(std::string_view t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == '*' && i + 1 < t.size() && t[i + 1] == '*') {
      ++i;
      continue;
    }
    out += t[i];
  }
  return out;
}

bool is_bullet(std::string_view t) {
  t = str::trim(t);
  return t.size() >= 2 && (t[0] == '-' || t[0] == '*' || t[0] == '+') && (t[1] == ' ' || t[1] == '\t');
}

} // namespace

std::string_view to_string(Dimension d) { return kKeys[idx(d)]; }
std::string_view display_name(Dimension d) { return kDisplay[idx(d)]; }

Dimension parse_dimension(std::string_view s) {
  for (auto d : kDimensions)
    if (s == kKeys[idx(d)]) return d;
  if (auto d = match_dimension_header(s)) return *d;
  throw ParseError("unknown dimension '" + std::string(s) + "'");
}

std::optional<Dimension> match_dimension_header(std::string_view header) {
  auto colon = header.find(':');
  auto name = normalize_header(header.substr(0, colon));
  auto squashed = name;
  std::erase(squashed, ' ');
  static const std::vector<std::pair<std::string_view, Dimension>> prefixes = {
      {"task progress", Dimension::TaskProgress},
      {"action control", Dimension::ActionControl},
      {"error recognition", Dimension::ErrorRecognition},
      {"creative attempt", Dimension::CreativeAttempts},
      {"task completion efficiency", Dimension::TaskEfficiency},
      {"task efficiency", Dimension::TaskEfficiency},
      {"efficiency", Dimension::TaskEfficiency},
      {"material", Dimension::MaterialUsage},
  };
  for (const auto& [p, d] : prefixes) {
    if (name.starts_with(p)) return d;
    std::string sp(p);
    std::erase(sp, ' ');
    if (squashed.starts_with(sp) && squashed.size() >= sp.size()) return d;
  }
  return std::nullopt;
}

std::string CriteriaSet::render() const {
  std::string out;
  for (auto d : kDimensions) {
    out += "**" + std::string(display_name(d)) + "**\n";
    for (const auto& r : rules[idx(d)]) out += " - " + r + "\n";
    out += "\n";
  }
  return out;
}

std::string CriteriaSet::hash() const { return sha256_hex(render()); }

CriteriaSet parse_criteria(std::string_view text, std::string task) {
  CriteriaSet c;
  c.task = std::move(task);
  std::array<bool, kDimensionCount> seen{};
  std::array<std::string, kDimensionCount> descriptions;
  std::optional<Dimension> current;
  std::size_t lineno = 0;
  for (const auto& raw : str::split(text, '\n')) {
    ++lineno;
    auto t = str::trim(raw);
    if (t.empty()) continue;
    if (t.starts_with("**")) {
      auto close = t.find("**", 2);
      auto inner = str::trim(t.substr(2, close == std::string_view::npos ? std::string_view::npos : close - 2));
      current = match_dimension_header(inner);
      if (!current) continue;
      if (seen[idx(*current)])
        throw ParseError("duplicated dimension " + std::string(display_name(*current)), lineno);
      seen[idx(*current)] = true;
      auto colon = inner.find(':');
      if (colon != std::string_view::npos) descriptions[idx(*current)] = std::string(str::trim(inner.substr(colon + 1)));
      continue;
    }
    if (current && is_bullet(t)) {
      auto rule = str::trim(strip_bullet(t));
      if (!rule.empty()) c.rules[idx(*current)].emplace_back(rule);
      continue;
    }
    current.reset();
  }
  for (auto d : kDimensions) {
    if (!seen[idx(d)]) throw ParseError("missing dimension " + std::string(display_name(d)));
    auto& rules = c.rules[idx(d)];
    if (rules.empty() && !descriptions[idx(d)].empty()) rules.push_back(descriptions[idx(d)]);
    if (rules.empty()) throw ParseError("dimension " + std::string(display_name(d)) + " has no rules");
  }
  return c;
}

CriteriaSet generate_criteria(const std::string& task, ModelClient& client, const PromptLibrary& prompts) {
  PromptBundle b;
  b.kind = PromptKind::Criteria;
  b.subject = task;
  b.system = prompts.text("criteria");
  b.user = "The task name is \"" + task + "\", please generate the score points for it.";
  for (int attempt = 1;; ++attempt) {
    b.attempt = attempt;
    auto reply = client.send(b);
    try {
      return parse_criteria(reply, task);
    } catch (const ParseError& e) {
      if (attempt >= 2) throw ParseError(std::string("criteria for '") + task + "': " + e.what());
    }
  }
}

std::vector<std::size_t> sample_frame_indices(std::size_t n, std::size_t stride) {
  if (stride == 0) throw ValidationError("stride must be >= 1");
  if (n == 0) throw ValidationError("empty trajectory");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; i += stride) out.push_back(i);
  return out;
}

std::vector<ImageRef> sample_frames(const Trajectory& traj, std::size_t stride, std::string_view caption_prefix) {
  std::vector<ImageRef> out;
  for (auto i : sample_frame_indices(traj.frames.size(), stride))
    out.push_back({traj.frames[i], std::string(caption_prefix) + "frame " + std::to_string(i)});
  return out;
}

double quantize_score(double raw) {
  if (!(raw >= 0.0 && raw <= 1.0)) throw ValidationError("score out of range [0, 1]");
  if (raw == 0.0) return 0.0;
  if (raw <= 0.3) return 0.25;
  if (raw <= 0.6) return 0.5;
  if (raw <= 0.9) return 0.75;
  return 1.0;
}

double quantize_label(std::string_view label) {
  static const std::map<std::string, double, std::less<>> labels = {
      {"none", 0.0},      {"very poor", 0.0}, {"barely", 0.25}, {"poor", 0.25},
      {"partially", 0.5}, {"fair", 0.5},      {"mostly", 0.75}, {"good", 0.75},
      {"completely", 1.0}, {"excellent", 1.0}};
  auto key = str::lower(str::collapse_ws(label));
  auto it = labels.find(key);
  if (it == labels.end()) throw ValidationError("unknown score label '" + std::string(label) + "'");
  return it->second;
}

double quantize_text(std::string_view raw) {
  std::string t;
  for (char ch : raw)
    if (ch != '*' && ch != '"' && ch != '`') t += ch;
  auto s = std::string(str::trim(t));
  while (!s.empty() && (s.back() == '.' || s.back() == ',')) s.pop_back();
  if (s.empty()) throw ParseError("empty score");
  auto words = str::split_ws(s);
  double v = 0;
  const auto& w0 = words.front();
  auto [p, ec] = std::from_chars(w0.data(), w0.data() + w0.size(), v);
  if (ec == std::errc() && p == w0.data() + w0.size()) {
    try {
      return quantize_score(v);
    } catch (const ValidationError& e) {
      throw ParseError(e.what());
    }
  }
  try {
    return quantize_label(s);
  } catch (const ValidationError&) {
  }
  std::string first = w0;
  while (!first.empty() && !std::isalpha(static_cast<unsigned char>(first.back()))) first.pop_back();
  try {
    return quantize_label(first);
  } catch (const ValidationError&) {
    throw ParseError("unrecognized score '" + std::string(raw) + "'");
  }
}

std::array<double, kDimensionCount> ScoreReport::anchors() const {
  std::array<double, kDimensionCount> out{};
  for (std::size_t i = 0; i < kDimensionCount; ++i) out[i] = scores[i].anchor;
  return out;
}

std::string to_json(const ScoreReport& r) {
  json scores = json::object();
  for (auto d : kDimensions) {
    const auto& s = r[d];
    scores[std::string(to_string(d))] = {{"anchor", s.anchor}, {"raw", s.raw}, {"evidence", s.evidence}};
  }
  json j{{"trajectory", r.trajectory_id}, {"judge_model", r.judge_model}, {"criteria_hash", r.criteria_hash},
         {"notes", r.notes},              {"scores", scores}};
  return j.dump();
}

ScoreReport score_report_from_json(std::string_view text) {
  try {
    auto j = json::parse(text);
    ScoreReport r;
    r.trajectory_id = j.at("trajectory").get<std::string>();
    r.judge_model = j.value("judge_model", "");
    r.criteria_hash = j.value("criteria_hash", "");
    r.notes = j.value("notes", "");
    for (auto d : kDimensions) {
      const auto& s = j.at("scores").at(std::string(to_string(d)));
      auto& out = r.scores[idx(d)];
      out.anchor = quantize_score(s.at("anchor").get<double>());
      out.raw = s.value("raw", "");
      out.evidence = s.value("evidence", std::vector<std::string>{});
    }
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("score report: ") + e.what());
  }
}

namespace {

struct Sections {
  std::array<std::optional<std::string>, kDimensionCount> overall, section;
  std::array<std::vector<std::string>, kDimensionCount> evidence;
};

/// Shared reader for rating and comparison replies. `value_key` is "score"
/// or "result"; `overall_key` introduces the summary block.
Sections read_sections(std::string_view text, std::string_view value_key, std::string_view overall_key,
                       bool video_lines_are_evidence) {
  Sections s;
  bool in_overall = false;
  std::optional<Dimension> current;
  for (const auto& raw : str::split(text, '\n')) {
    auto plain = strip_bold(strip_bullet(raw));
    auto t = str::trim(plain);
    if (t.empty() || t == "---") continue;
    if (str::starts_with_ci(t, overall_key)) {
      in_overall = true;
      current.reset();
      continue;
    }
    auto colon = t.find(':');
    std::string_view name = colon == std::string_view::npos ? t : t.substr(0, colon);
    std::string_view value = colon == std::string_view::npos ? std::string_view{} : str::trim(t.substr(colon + 1));
    if (colon != std::string_view::npos) {
      if (auto d = match_dimension_header(name)) {
        if (in_overall) {
          if (!value.empty()) s.overall[idx(*d)] = std::string(value);
        } else {
          current = d;
          if (!value.empty()) s.section[idx(*d)] = std::string(value);
        }
        continue;
      }
    }
    if (in_overall || !current) continue;
    auto i = idx(*current);
    if (str::starts_with_ci(name, value_key) && colon != std::string_view::npos) {
      s.section[i] = std::string(value);
    } else if (str::starts_with_ci(t, "evidence")) {
      auto ev = str::trim(t.substr(8));
      if (!ev.empty() && ev.front() == ':') ev = str::trim(ev.substr(1));
      if (!ev.empty() && ev != "xxx") s.evidence[i].emplace_back(ev);
    } else if (video_lines_are_evidence && (str::starts_with_ci(t, "video a") || str::starts_with_ci(t, "video b"))) {
      s.evidence[i].emplace_back(t);
    }
  }
  return s;
}

} // namespace

ScoreReport parse_rating(std::string_view text) {
  auto s = read_sections(text, "score", "overall score", false);
  ScoreReport r;
  for (auto d : kDimensions) {
    auto i = idx(d);
    const auto& raw = s.overall[i] ? s.overall[i] : s.section[i];
    if (!raw) throw ParseError("no score for " + std::string(display_name(d)));
    auto& out = r.scores[i];
    out.raw = *raw;
    out.anchor = quantize_text(*raw);
    out.evidence = s.evidence[i];
    if (out.anchor > 0 && out.evidence.empty())
      throw ParseError("score for " + std::string(display_name(d)) + " has no evidence");
  }
  return r;
}

ScoreReport score_trajectory(const Trajectory& traj, const CriteriaSet& criteria, ModelClient& client,
                             const PromptLibrary& prompts, std::size_t stride) {
  if (client.capability() != Capability::Vision) throw ValidationError("scoring needs a vision-capable client");
  PromptBundle b;
  b.kind = PromptKind::Rating;
  b.subject = criteria.task.empty() ? traj.meta.task : criteria.task;
  b.tag = traj.id();
  b.system = prompts.text("video_rating");
  b.user = "Task: " + b.subject + "\n\nGrading criteria:\n" + criteria.render();
  b.images = sample_frames(traj, stride);
  for (int attempt = 1;; ++attempt) {
    b.attempt = attempt;
    auto reply = client.send(b);
    try {
      auto r = parse_rating(reply);
      r.trajectory_id = traj.id();
      r.judge_model = client.model_id();
      r.criteria_hash = criteria.hash();
      return r;
    } catch (const ParseError& e) {
      if (attempt >= 2) throw ParseError("rating for " + traj.id() + ": " + e.what());
    }
  }
}

std::string_view to_string(Verdict v) {
  switch (v) {
  case Verdict::ABetter: return "A-better";
  case Verdict::BBetter: return "B-better";
  case Verdict::Tie: return "tie";
  case Verdict::BothBad: return "both-bad";
  }
  return "?";
}

Verdict parse_verdict(std::string_view s) {
  std::string t;
  for (char ch : str::lower(s))
    if (ch != '*' && ch != '"' && ch != '\'' && ch != '.' && ch != '`') t += ch;
  t = str::collapse_ws(t);
  if (t == "a-better" || t.starts_with("a is better") || t == "a better" || t == "a") return Verdict::ABetter;
  if (t == "b-better" || t.starts_with("b is better") || t == "b better" || t == "b") return Verdict::BBetter;
  if (t == "both-bad" || t.starts_with("both are bad") || t == "both bad") return Verdict::BothBad;
  if (t == "tie" || t.starts_with("tie")) return Verdict::Tie;
  throw ParseError("unrecognized verdict '" + std::string(s) + "'");
}

Verdict mirror(Verdict v) {
  if (v == Verdict::ABetter) return Verdict::BBetter;
  if (v == Verdict::BBetter) return Verdict::ABetter;
  return v;
}

std::string_view to_string(CompareMode m) { return m == CompareMode::ScoreDiff ? "score-diff" : "direct"; }

std::string to_json(const ComparisonResult& r, std::string_view a_id, std::string_view b_id) {
  json verdicts = json::object();
  json evidence = json::object();
  for (auto d : kDimensions) {
    verdicts[std::string(to_string(d))] = std::string(to_string(r[d]));
    evidence[std::string(to_string(d))] = r.evidence[idx(d)];
  }
  json j{{"a", a_id}, {"b", b_id}, {"mode", std::string(to_string(r.mode))}, {"verdicts", verdicts},
         {"evidence", evidence}};
  return j.dump();
}

ComparisonResult compare_scores(const ScoreReport& a, const ScoreReport& b) {
  ComparisonResult r;
  r.mode = CompareMode::ScoreDiff;
  for (auto d : kDimensions) {
    double x = a[d].anchor, y = b[d].anchor;
    Verdict v;
    if (x == y) v = std::max(x, y) <= 0.25 ? Verdict::BothBad : Verdict::Tie;
    else v = x > y ? Verdict::ABetter : Verdict::BBetter;
    r.verdicts[idx(d)] = v;
  }
  return r;
}

ComparisonResult parse_comparison(std::string_view text) {
  auto s = read_sections(text, "result", "overall result", true);
  ComparisonResult r;
  r.mode = CompareMode::Direct;
  for (auto d : kDimensions) {
    auto i = idx(d);
    const auto& raw = s.overall[i] ? s.overall[i] : s.section[i];
    if (!raw) throw ParseError("no verdict for " + std::string(display_name(d)));
    r.verdicts[i] = parse_verdict(*raw);
    r.evidence[i] = s.evidence[i];
  }
  return r;
}

ComparisonResult compare_direct(const Trajectory& a, const Trajectory& b, const CriteriaSet& criteria,
                                ModelClient& client, const PromptLibrary& prompts, std::size_t stride) {
  if (client.capability() != Capability::Vision) throw ValidationError("comparison needs a vision-capable client");
  PromptBundle p;
  p.kind = PromptKind::Comparison;
  p.subject = criteria.task.empty() ? a.meta.task : criteria.task;
  p.tag = a.id() + "|" + b.id();
  p.system = prompts.text("video_comparison");
  p.user = "Task: " + p.subject + "\n\nGrading criteria:\n" + criteria.render();
  p.images = sample_frames(a, stride, "Video A ");
  for (auto& img : sample_frames(b, stride, "Video B ")) p.images.push_back(std::move(img));
  for (int attempt = 1;; ++attempt) {
    p.attempt = attempt;
    auto reply = client.send(p);
    try {
      return parse_comparison(reply);
    } catch (const ParseError& e) {
      if (attempt >= 2) throw ParseError("comparison " + p.tag + ": " + e.what());
    }
  }
}

} // namespace mcu::eval
