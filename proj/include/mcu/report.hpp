#pragma once

#include "mcu/harness.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace mcu::harness {

enum class ReportFormat { Table, Csv, Json };
ReportFormat parse_report_format(std::string_view s);

/// Per-task mean of one dimension for every agent, grouped by category with
/// an Avg row per category. With two or more agents the best value of each
/// task is marked with '*'.
std::string emit_report(const std::vector<RunReport>& reports, ReportFormat format,
                        eval::Dimension dim = eval::Dimension::TaskProgress);

} // namespace mcu::harness
