#include "mcu/report.hpp"

#include "mcu/error.hpp"

#include <json.hpp>

#include <cstdio>
#include <map>
#include <set>

namespace mcu::harness {

using json = nlohmann::json;

ReportFormat parse_report_format(std::string_view s) {
  if (s == "table") return ReportFormat::Table;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json" || s == "structured") return ReportFormat::Json;
  throw ValidationError("unknown report format '" + std::string(s) + "'");
}

namespace {

struct TaskRow {
  std::string category;
  std::string task;
  std::size_t cells = 0;
  std::size_t completed = 0;
  std::array<double, eval::kDimensionCount> means{};
};

/// agent -> (task id -> row), task order of first appearance.
struct Grid {
  std::vector<std::string> agents;
  std::vector<std::string> task_order;
  std::map<std::string, std::map<std::string, TaskRow>> rows;
};

Grid build_grid(const std::vector<RunReport>& reports) {
  Grid g;
  std::set<std::string> seen;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& r = reports[k];
    auto agent = r.agent.empty() ? "agent" + std::to_string(k + 1) : r.agent;
    if (g.rows.count(agent)) agent += "#" + std::to_string(k + 1);
    g.agents.push_back(agent);
    auto& by_task = g.rows[agent];
    for (const auto& c : r.cells) {
      if (seen.insert(c.task_id).second) g.task_order.push_back(c.task_id);
      auto& row = by_task[c.task_id];
      row.category = c.category;
      row.task = c.task;
      ++row.cells;
      if (!c.ok || !c.score) continue;
      ++row.completed;
      auto a = c.score->anchors();
      for (std::size_t i = 0; i < eval::kDimensionCount; ++i) row.means[i] += a[i];
    }
    for (auto& [id, row] : by_task)
      if (row.completed)
        for (auto& m : row.means) m /= static_cast<double>(row.completed);
  }
  return g;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

} // namespace

std::string emit_report(const std::vector<RunReport>& reports, ReportFormat format, eval::Dimension dim) {
  const auto di = static_cast<std::size_t>(dim);
  if (format == ReportFormat::Json) {
    json j = json::array();
    for (const auto& r : reports) j.push_back(json::parse(r.to_json()));
    return j.dump(2) + "\n";
  }
  auto g = build_grid(reports);

  if (format == ReportFormat::Csv) {
    std::string out = "agent,task_id,task,category,cells,completed";
    for (auto d : eval::kDimensions) out += "," + std::string(eval::to_string(d));
    out += "\n";
    for (const auto& agent : g.agents)
      for (const auto& id : g.task_order) {
        auto it = g.rows[agent].find(id);
        if (it == g.rows[agent].end()) continue;
        const auto& row = it->second;
        out += csv_field(agent) + "," + csv_field(id) + "," + csv_field(row.task) + "," + csv_field(row.category) +
               "," + std::to_string(row.cells) + "," + std::to_string(row.completed);
        for (double m : row.means) out += "," + num(m);
        out += "\n";
      }
    return out;
  }

  // group tasks by category, keeping first-appearance order
  std::vector<std::string> cats;
  std::map<std::string, std::vector<std::string>> by_cat;
  for (const auto& id : g.task_order) {
    std::string cat;
    for (const auto& agent : g.agents)
      if (auto it = g.rows[agent].find(id); it != g.rows[agent].end()) {
        cat = it->second.category;
        break;
      }
    if (!by_cat.count(cat)) cats.push_back(cat);
    by_cat[cat].push_back(id);
  }

  const std::size_t w_task = 40, w_col = 14;
  std::string out = std::string(eval::display_name(dim)) + "\n";
  out += pad("task", w_task);
  for (const auto& a : g.agents) out += pad(a, w_col);
  out += "\n";
  const bool mark = g.agents.size() >= 2;
  for (const auto& cat : cats) {
    out += "[" + cat + "]\n";
    std::vector<double> sum(g.agents.size(), 0.0);
    std::vector<std::size_t> count(g.agents.size(), 0);
    for (const auto& id : by_cat[cat]) {
      std::vector<std::optional<double>> vals;
      for (const auto& agent : g.agents) {
        auto it = g.rows[agent].find(id);
        if (it == g.rows[agent].end() || it->second.completed == 0) vals.emplace_back();
        else vals.emplace_back(it->second.means[di]);
      }
      std::optional<double> best;
      for (const auto& v : vals)
        if (v && (!best || *v > *best)) best = v;
      out += pad("  " + id, w_task);
      for (std::size_t k = 0; k < vals.size(); ++k) {
        if (!vals[k]) {
          out += pad("-", w_col);
          continue;
        }
        sum[k] += *vals[k];
        ++count[k];
        out += pad(num(*vals[k]) + (mark && *vals[k] == *best ? "*" : ""), w_col);
      }
      out += "\n";
    }
    out += pad("  Avg", w_task);
    for (std::size_t k = 0; k < g.agents.size(); ++k)
      out += pad(count[k] ? num(sum[k] / static_cast<double>(count[k])) : "-", w_col);
    out += "\n";
  }
  return out;
}

} // namespace mcu::harness
