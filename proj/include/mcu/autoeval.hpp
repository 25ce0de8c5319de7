#pragma once

#include "mcu/model_client.hpp"
#include "mcu/prompts.hpp"
#include "mcu/trajectory.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcu::eval {

enum class Dimension { TaskProgress, ActionControl, ErrorRecognition, CreativeAttempts, TaskEfficiency, MaterialUsage };
inline constexpr std::size_t kDimensionCount = 6;
inline constexpr std::array<Dimension, kDimensionCount> kDimensions = {
    Dimension::TaskProgress,     Dimension::ActionControl,  Dimension::ErrorRecognition,
    Dimension::CreativeAttempts, Dimension::TaskEfficiency, Dimension::MaterialUsage};

std::string_view to_string(Dimension d);     // "TaskProgress"
std::string_view display_name(Dimension d);  // "Task Progress"
Dimension parse_dimension(std::string_view s);  // either form; throws ParseError
/// Prefix match of a free-text header ("Material Selection and Usage: ...").
std::optional<Dimension> match_dimension_header(std::string_view header);

struct CriteriaSet {
  std::string task;
  std::array<std::vector<std::string>, kDimensionCount> rules;

  const std::vector<std::string>& operator[](Dimension d) const { return rules[static_cast<std::size_t>(d)]; }
  /// "**Task Progress**\n - rule\n..." in canonical order.
  std::string render() const;
  std::string hash() const;  // sha256 of render()
  bool operator==(const CriteriaSet&) const = default;
};

/// Splits on **...** headers. A header with no "- " lines contributes its
/// own description (text after the colon) as its single rule.
/// Throws ParseError on a missing, duplicated or empty dimension.
CriteriaSet parse_criteria(std::string_view text, std::string task = {});
CriteriaSet generate_criteria(const std::string& task, ModelClient& client, const PromptLibrary& prompts);

/// Indices 0, stride, 2*stride, ... below n. Throws ValidationError for n == 0 or stride == 0.
std::vector<std::size_t> sample_frame_indices(std::size_t n, std::size_t stride = 30);
std::vector<ImageRef> sample_frames(const Trajectory& traj, std::size_t stride = 30,
                                    std::string_view caption_prefix = {});

inline constexpr std::array<double, 5> kAnchors = {0.0, 0.25, 0.5, 0.75, 1.0};
/// Band map onto the anchors. Throws ValidationError outside [0, 1].
double quantize_score(double raw);
/// None/very poor, Barely/poor, Partially/fair, Mostly/good, Completely/excellent.
double quantize_label(std::string_view label);
/// Number or label; throws ParseError when neither.
double quantize_text(std::string_view raw);

struct DimensionScore {
  double anchor = 0;
  std::string raw;
  std::vector<std::string> evidence;
  bool operator==(const DimensionScore&) const = default;
};

struct ScoreReport {
  std::string trajectory_id;
  std::array<DimensionScore, kDimensionCount> scores;
  std::string notes;
  std::string judge_model;
  std::string criteria_hash;

  const DimensionScore& operator[](Dimension d) const { return scores[static_cast<std::size_t>(d)]; }
  std::array<double, kDimensionCount> anchors() const;
  bool operator==(const ScoreReport&) const = default;
};

std::string to_json(const ScoreReport& r);
ScoreReport score_report_from_json(std::string_view text);

/// Reads the "Overall Scores:" block, falling back to per-section "Score:"
/// lines, and the evidence lines of each section.
ScoreReport parse_rating(std::string_view text);
/// One retry on unparseable output, then ParseError.
ScoreReport score_trajectory(const Trajectory& traj, const CriteriaSet& criteria, ModelClient& client,
                             const PromptLibrary& prompts, std::size_t stride = 30);

enum class Verdict { ABetter, BBetter, Tie, BothBad };
std::string_view to_string(Verdict v);  // "A-better", ...
Verdict parse_verdict(std::string_view s);  // also accepts "A is better", "both are bad"
Verdict mirror(Verdict v);

enum class CompareMode { ScoreDiff, Direct };
std::string_view to_string(CompareMode m);

struct ComparisonResult {
  std::array<Verdict, kDimensionCount> verdicts{};
  CompareMode mode = CompareMode::ScoreDiff;
  std::array<std::vector<std::string>, kDimensionCount> evidence;

  Verdict operator[](Dimension d) const { return verdicts[static_cast<std::size_t>(d)]; }
  bool operator==(const ComparisonResult&) const = default;
};

std::string to_json(const ComparisonResult& r, std::string_view a_id = {}, std::string_view b_id = {});

ComparisonResult compare_scores(const ScoreReport& a, const ScoreReport& b);
/// Reads the "Overall results:" block, falling back to per-section "result:" lines.
ComparisonResult parse_comparison(std::string_view text);
ComparisonResult compare_direct(const Trajectory& a, const Trajectory& b, const CriteriaSet& criteria,
                                ModelClient& client, const PromptLibrary& prompts, std::size_t stride = 30);

} // namespace mcu::eval
