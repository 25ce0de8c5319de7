#include "mcu/alignment.hpp"

#include "mcu/error.hpp"
#include "mcu/strings.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

namespace mcu::align {

using json = nlohmann::json;

namespace {
std::size_t idx(Dimension d) { return static_cast<std::size_t>(d); }
} // namespace

std::string_view to_string(RecordKind k) { return k == RecordKind::Comparison ? "comparison" : "rating"; }

void validate(const AnnotationRecord& r) {
  if (str::trim(r.rater).empty()) throw ValidationError("rater id is required");
  if (str::trim(r.task).empty()) throw ValidationError("task is required");
  std::size_t want = r.kind == RecordKind::Comparison ? 2 : 1;
  if (r.trajectories.size() != want)
    throw ValidationError(std::string(to_string(r.kind)) + " needs " + std::to_string(want) + " trajectory id(s)");
  for (const auto& t : r.trajectories)
    if (str::trim(t).empty()) throw ValidationError("empty trajectory id");
  if (r.kind == RecordKind::Comparison && r.trajectories[0] == r.trajectories[1])
    throw ValidationError("comparison of a trajectory with itself");
  if (r.kind == RecordKind::Rating)
    for (double a : r.anchors)
      if (std::find(eval::kAnchors.begin(), eval::kAnchors.end(), a) == eval::kAnchors.end())
        throw ValidationError("anchor must be one of 0, 0.25, 0.5, 0.75, 1");
}

std::string to_json(const AnnotationRecord& r) {
  json j;
  j["kind"] = std::string(to_string(r.kind));
  j["task"] = r.task;
  j["trajectories"] = r.trajectories;
  j["rater"] = r.rater;
  json dims = json::object();
  for (auto d : eval::kDimensions) {
    if (r.kind == RecordKind::Comparison) dims[std::string(eval::to_string(d))] = std::string(eval::to_string(r.verdicts[idx(d)]));
    else dims[std::string(eval::to_string(d))] = r.anchors[idx(d)];
  }
  j[r.kind == RecordKind::Comparison ? "verdicts" : "anchors"] = dims;
  j["timestamp"] = r.timestamp;
  return j.dump();
}

AnnotationRecord annotation_from_json(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("annotation is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("annotation must be an object");
  auto get_string = [&](const char* key) -> std::string {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) throw ValidationError(std::string("missing string field '") + key + "'");
    return it->get<std::string>();
  };
  AnnotationRecord r;
  auto kind = get_string("kind");
  if (kind == "comparison") r.kind = RecordKind::Comparison;
  else if (kind == "rating") r.kind = RecordKind::Rating;
  else throw ValidationError("unknown annotation kind '" + kind + "'");
  r.task = get_string("task");
  r.rater = j.contains("rater") && j["rater"].is_string() ? j["rater"].get<std::string>() : "";
  auto tr = j.find("trajectories");
  if (tr == j.end() || !tr->is_array()) throw ValidationError("missing 'trajectories' array");
  for (const auto& t : *tr) {
    if (!t.is_string()) throw ValidationError("trajectory ids must be strings");
    r.trajectories.push_back(t.get<std::string>());
  }
  const char* dims_key = r.kind == RecordKind::Comparison ? "verdicts" : "anchors";
  auto dims = j.find(dims_key);
  if (dims == j.end() || !dims->is_object()) throw ValidationError(std::string("missing '") + dims_key + "' object");
  for (auto d : eval::kDimensions) {
    auto it = dims->find(std::string(eval::to_string(d)));
    if (it == dims->end()) throw ValidationError("missing dimension " + std::string(eval::to_string(d)));
    if (r.kind == RecordKind::Comparison) {
      if (!it->is_string()) throw ValidationError("verdicts must be strings");
      try {
        r.verdicts[idx(d)] = eval::parse_verdict(it->get<std::string>());
      } catch (const ParseError& e) {
        throw ValidationError(e.what());
      }
    } else {
      if (!it->is_number()) throw ValidationError("anchors must be numbers");
      r.anchors[idx(d)] = it->get<double>();
    }
  }
  if (dims->size() != kDimensionCount) throw ValidationError("unexpected dimension keys");
  if (auto ts = j.find("timestamp"); ts != j.end()) {
    if (!ts->is_number_integer()) throw ValidationError("timestamp must be an integer");
    r.timestamp = ts->get<std::int64_t>();
  }
  validate(r);
  return r;
}

std::vector<AnnotationRecord> parse_annotations(std::string_view jsonl) {
  std::vector<AnnotationRecord> out;
  std::size_t lineno = 0;
  for (const auto& line : str::split(jsonl, '\n')) {
    ++lineno;
    if (str::trim(line).empty()) continue;
    try {
      out.push_back(annotation_from_json(line));
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return out;
}

std::vector<AnnotationRecord> load_annotations(const std::string& path) { return parse_annotations(str::read_file(path)); }

std::pair<PairKey, bool> canonical_pair(std::string_view task, std::string_view a, std::string_view b) {
  if (b < a) return {PairKey{std::string(task), std::string(b), std::string(a)}, true};
  return {PairKey{std::string(task), std::string(a), std::string(b)}, false};
}

std::vector<DecidedPair> filter_decided_pairs(const std::vector<AnnotationRecord>& annotations, Dimension dim) {
  std::map<PairKey, std::array<int, 4>> votes;
  for (const auto& r : annotations) {
    if (r.kind != RecordKind::Comparison || r.trajectories.size() != 2) continue;
    auto [key, swapped] = canonical_pair(r.task, r.trajectories[0], r.trajectories[1]);
    auto v = r.verdicts[idx(dim)];
    if (swapped) v = eval::mirror(v);
    votes[key][static_cast<std::size_t>(v)]++;
  }
  std::vector<DecidedPair> out;
  for (const auto& [key, count] : votes) {
    auto best = std::max_element(count.begin(), count.end());
    if (std::count(count.begin(), count.end(), *best) != 1) continue;
    auto v = static_cast<Verdict>(best - count.begin());
    if (v != Verdict::ABetter && v != Verdict::BBetter) continue;
    out.push_back({key, v, *best});
  }
  return out;
}

F1Result comparative_f1(const std::vector<Verdict>& predictions, const std::vector<Verdict>& labels) {
  if (predictions.size() != labels.size()) throw ValidationError("predictions and labels differ in length");
  F1Result r;
  r.n = labels.size();
  std::array<std::size_t, 2> tp{}, fp{}, fn{}, support{};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != Verdict::ABetter && labels[i] != Verdict::BBetter)
      throw ValidationError("labels must be A-better or B-better");
    std::size_t l = labels[i] == Verdict::ABetter ? 0 : 1;
    support[l]++;
    if (predictions[i] == labels[i]) {
      tp[l]++;
    } else {
      fn[l]++;
      if (predictions[i] == Verdict::ABetter) fp[0]++;
      else if (predictions[i] == Verdict::BBetter) fp[1]++;
    }
  }
  std::array<double, 2> f1{};
  for (int c = 0; c < 2; ++c) {
    double denom = 2.0 * tp[c] + fp[c] + fn[c];
    f1[c] = denom > 0 ? 2.0 * tp[c] / denom : 0.0;
  }
  r.f1_a = f1[0];
  r.f1_b = f1[1];
  int classes = (support[0] > 0) + (support[1] > 0);
  if (classes > 0) r.macro = ((support[0] ? f1[0] : 0.0) + (support[1] ? f1[1] : 0.0)) / classes;
  return r;
}

Correlation pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw ValidationError("pearson: length mismatch");
  const std::size_t n = xs.size();
  if (n < 3) throw ValidationError("pearson: need at least 3 observations");
  double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw ValidationError("pearson: zero variance");
  Correlation c;
  c.n = n;
  c.coefficient = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  double df = static_cast<double>(n - 2);
  double denom = 1.0 - c.coefficient * c.coefficient;
  if (denom <= 0) {
    c.p_value = 0;
  } else {
    double t = c.coefficient * std::sqrt(df / denom);
    boost::math::students_t dist(df);
    c.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
  }
  return c;
}

namespace {

/// Sum over tie groups of a sorted sequence: (t(t-1)/2, t(t-1)(2t+5), t(t-1), t(t-1)(t-2)).
struct TieSums {
  double pairs = 0, v = 0, v1 = 0, v2 = 0;
};

template <class Eq> TieSums tie_sums(std::size_t n, Eq&& same) {
  TieSums s;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && same(j - 1, j)) ++j;
    double t = static_cast<double>(j - i);
    s.pairs += t * (t - 1) / 2;
    s.v += t * (t - 1) * (2 * t + 5);
    s.v1 += t * (t - 1);
    s.v2 += t * (t - 1) * (t - 2);
    i = j;
  }
  return s;
}

/// Merge sort counting inversions (strictly greater left elements).
std::uint64_t count_swaps(std::vector<double>& v, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = count_swaps(v, buf, lo, mid) + count_swaps(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
  return swaps;
}

} // namespace

Correlation kendall_tau(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw ValidationError("kendall_tau: length mismatch");
  const std::size_t n = xs.size();
  if (n < 2) throw ValidationError("kendall_tau: need at least 2 observations");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return xs[a] != xs[b] ? xs[a] < xs[b] : ys[a] < ys[b];
  });
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = xs[order[i]];
    y[i] = ys[order[i]];
  }
  auto tx = tie_sums(n, [&](std::size_t a, std::size_t b) { return x[a] == x[b]; });
  auto txy = tie_sums(n, [&](std::size_t a, std::size_t b) { return x[a] == x[b] && y[a] == y[b]; });
  std::vector<double> buf(n);
  double swaps = static_cast<double>(count_swaps(y, buf, 0, n));
  auto ty = tie_sums(n, [&](std::size_t a, std::size_t b) { return y[a] == y[b]; });

  double nd = static_cast<double>(n);
  double n0 = nd * (nd - 1) / 2;
  double s = n0 - tx.pairs - ty.pairs + txy.pairs - 2 * swaps;
  double denom = (n0 - tx.pairs) * (n0 - ty.pairs);
  if (denom <= 0) throw ValidationError("kendall_tau: all values tied");
  Correlation c;
  c.n = n;
  c.coefficient = std::clamp(s / std::sqrt(denom), -1.0, 1.0);

  double var = (nd * (nd - 1) * (2 * nd + 5) - tx.v - ty.v) / 18.0 + tx.v1 * ty.v1 / (2 * nd * (nd - 1));
  if (n > 2) var += tx.v2 * ty.v2 / (9 * nd * (nd - 1) * (nd - 2));
  c.p_value = var > 0 ? std::erfc(std::fabs(s) / std::sqrt(var) / std::sqrt(2.0)) : 1.0;
  return c;
}

namespace {

/// trajectory -> rater -> anchors (latest timestamp wins).
using RatingTable = std::map<std::string, std::map<std::string, std::pair<std::int64_t, std::array<double, kDimensionCount>>>>;

RatingTable rating_table(const std::vector<AnnotationRecord>& records) {
  RatingTable t;
  for (const auto& r : records) {
    if (r.kind != RecordKind::Rating || r.trajectories.size() != 1) continue;
    auto& slot = t[r.trajectories[0]][r.rater];
    if (slot.first <= r.timestamp) slot = {r.timestamp, r.anchors};
  }
  return t;
}

std::optional<double> mean_pairwise(const RatingTable& table, Dimension d) {
  std::set<std::string> raters;
  for (const auto& [traj, by_rater] : table)
    for (const auto& [rater, _] : by_rater) raters.insert(rater);
  std::vector<std::string> rs(raters.begin(), raters.end());
  double sum = 0;
  int pairs = 0;
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      std::vector<double> a, b;
      for (const auto& [traj, by_rater] : table) {
        auto ia = by_rater.find(rs[i]), ib = by_rater.find(rs[j]);
        if (ia == by_rater.end() || ib == by_rater.end()) continue;
        a.push_back(ia->second.second[idx(d)]);
        b.push_back(ib->second.second[idx(d)]);
      }
      if (a.size() < 3) continue;
      try {
        sum += pearson(a, b).coefficient;
        ++pairs;
      } catch (const ValidationError&) {
      }
    }
  if (pairs == 0) return std::nullopt;
  return sum / pairs;
}

} // namespace

std::array<double, kDimensionCount> inter_rater(const std::vector<AnnotationRecord>& ratings) {
  auto table = rating_table(ratings);
  std::array<double, kDimensionCount> out{};
  for (auto d : eval::kDimensions) {
    auto v = mean_pairwise(table, d);
    if (!v) throw ValidationError("inter_rater: insufficient overlap on " + std::string(eval::display_name(d)));
    out[idx(d)] = *v;
  }
  return out;
}

AlignmentReport alignment_report(const std::vector<AnnotationRecord>& annotations,
                                 const std::vector<AutoComparison>& comparisons,
                                 const std::vector<eval::ScoreReport>& scores,
                                 const std::map<std::string, std::string>& categories) {
  AlignmentReport rep;

  std::map<PairKey, eval::ComparisonResult> autos;
  for (const auto& c : comparisons) {
    auto [key, swapped] = canonical_pair(c.task, c.a, c.b);
    auto res = c.result;
    if (swapped)
      for (auto& v : res.verdicts) v = eval::mirror(v);
    autos[key] = res;
  }
  auto category_of = [&](const std::string& task) {
    auto it = categories.find(task);
    return it == categories.end() ? std::string("uncategorized") : it->second;
  };

  std::set<std::string> failed_pairs;
  for (auto d : eval::kDimensions) {
    std::vector<Verdict> preds, labels;
    std::map<std::string, std::pair<std::vector<Verdict>, std::vector<Verdict>>> by_cat;
    for (const auto& p : filter_decided_pairs(annotations, d)) {
      auto it = autos.find(p.key);
      if (it == autos.end()) {
        auto id = p.key.task + ":" + p.key.a + "|" + p.key.b;
        if (failed_pairs.insert(id).second) rep.join_failures.push_back("pair " + id + ": no automatic comparison");
        continue;
      }
      preds.push_back(it->second[d]);
      labels.push_back(p.label);
      if (d == Dimension::TaskProgress) {
        auto& slot = by_cat[category_of(p.key.task)];
        slot.first.push_back(it->second[d]);
        slot.second.push_back(p.label);
      }
    }
    rep.decided_pairs[idx(d)] = labels.size();
    rep.per_dimension[idx(d)] = comparative_f1(preds, labels);
    for (const auto& [cat, pl] : by_cat) rep.per_category[cat] = comparative_f1(pl.first, pl.second);
  }

  auto table = rating_table(annotations);
  std::map<std::string, const eval::ScoreReport*> auto_scores;
  for (const auto& s : scores) auto_scores[s.trajectory_id] = &s;
  std::array<std::vector<double>, kDimensionCount> human, machine;
  for (const auto& [traj, by_rater] : table) {
    auto it = auto_scores.find(traj);
    if (it == auto_scores.end()) {
      rep.join_failures.push_back("trajectory " + traj + ": no automatic score");
      continue;
    }
    ++rep.joined_ratings;
    for (auto d : eval::kDimensions) {
      double sum = 0;
      for (const auto& [rater, entry] : by_rater) sum += entry.second[idx(d)];
      human[idx(d)].push_back(sum / by_rater.size());
      machine[idx(d)].push_back((*it->second)[d].anchor);
    }
  }
  for (auto d : eval::kDimensions) {
    auto i = idx(d);
    try {
      rep.pearson[i] = pearson(machine[i], human[i]);
    } catch (const ValidationError&) {
    }
    try {
      rep.kendall[i] = kendall_tau(machine[i], human[i]);
    } catch (const ValidationError&) {
    }
    rep.inter_rater[i] = mean_pairwise(table, d);
  }
  return rep;
}

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? fmt("%.3f", *v) : "-"; }

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

} // namespace

std::string AlignmentReport::to_text() const {
  std::string out = "Comparative F1 by category (Task Progress)\n";
  out += pad("category", 28) + pad("pairs", 8) + pad("F1(A)", 8) + pad("F1(B)", 8) + "macro\n";
  for (const auto& [cat, f] : per_category)
    out += pad(cat, 28) + pad(std::to_string(f.n), 8) + pad(fmt("%.3f", f.f1_a), 8) + pad(fmt("%.3f", f.f1_b), 8) +
           fmt("%.3f", f.macro) + "\n";
  out += "\nPer dimension\n";
  out += pad("dimension", 34) + pad("pairs", 7) + pad("F1", 8) + pad("pearson", 9) + pad("p", 9) + pad("kendall", 9) +
         pad("p", 9) + "inter-rater\n";
  for (auto d : eval::kDimensions) {
    auto i = idx(d);
    auto c = [](const std::optional<Correlation>& x, bool p) {
      return x ? fmt(p ? "%.2g" : "%.3f", p ? x->p_value : x->coefficient) : std::string("-");
    };
    out += pad(std::string(eval::display_name(d)), 34) + pad(std::to_string(decided_pairs[i]), 7) +
           pad(fmt("%.3f", per_dimension[i].macro), 8) + pad(c(pearson[i], false), 9) + pad(c(pearson[i], true), 9) +
           pad(c(kendall[i], false), 9) + pad(c(kendall[i], true), 9) + opt(inter_rater[i]) + "\n";
  }
  out += "\njoined ratings: " + std::to_string(joined_ratings) + "\n";
  if (!join_failures.empty()) {
    out += "join failures (" + std::to_string(join_failures.size()) + "):\n";
    for (const auto& f : join_failures) out += "  " + f + "\n";
  }
  return out;
}

std::string AlignmentReport::to_json() const {
  auto f1 = [](const F1Result& f) { return json{{"f1_a", f.f1_a}, {"f1_b", f.f1_b}, {"macro", f.macro}, {"n", f.n}}; };
  auto corr = [](const std::optional<Correlation>& c) -> json {
    if (!c) return nullptr;
    return json{{"coefficient", c->coefficient}, {"p_value", c->p_value}, {"n", c->n}};
  };
  json j;
  j["per_category"] = json::object();
  for (const auto& [cat, f] : per_category) j["per_category"][cat] = f1(f);
  j["per_dimension"] = json::object();
  for (auto d : eval::kDimensions) {
    auto i = idx(d);
    j["per_dimension"][std::string(eval::to_string(d))] = {
        {"decided_pairs", decided_pairs[i]}, {"f1", f1(per_dimension[i])}, {"pearson", corr(pearson[i])},
        {"kendall", corr(kendall[i])},
        {"inter_rater", inter_rater[i] ? json(*inter_rater[i]) : json(nullptr)}};
  }
  j["joined_ratings"] = joined_ratings;
  j["join_failures"] = join_failures;
  return j.dump(2);
}

std::string to_json(const AutoComparison& c) {
  auto j = json::parse(eval::to_json(c.result, c.a, c.b));
  j["task"] = c.task;
  return j.dump();
}

AutoComparison auto_comparison_from_json(std::string_view line) {
  AutoComparison c;
  try {
    auto j = json::parse(line);
    c.task = j.at("task").get<std::string>();
    c.a = j.at("a").get<std::string>();
    c.b = j.at("b").get<std::string>();
    c.result.mode = j.value("mode", "score-diff") == "direct" ? eval::CompareMode::Direct : eval::CompareMode::ScoreDiff;
    const auto& v = j.at("verdicts");
    for (auto d : eval::kDimensions) {
      auto key = std::string(eval::to_string(d));
      c.result.verdicts[idx(d)] = eval::parse_verdict(v.at(key).get<std::string>());
      if (j.contains("evidence") && j["evidence"].contains(key))
        c.result.evidence[idx(d)] = j["evidence"][key].get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("comparison record: ") + e.what());
  }
  if (c.a == c.b) throw ValidationError("comparison of a trajectory with itself");
  return c;
}

std::vector<AutoComparison> load_auto_comparisons(const std::string& path) {
  std::vector<AutoComparison> out;
  for (const auto& raw : str::split(str::read_file(path), '\n')) {
    auto line = str::trim(raw);
    if (!line.empty()) out.push_back(auto_comparison_from_json(line));
  }
  return out;
}

} // namespace mcu::align
