#pragma once

#include "mcu/autoeval.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcu::align {

using eval::Dimension;
using eval::kDimensionCount;
using eval::Verdict;

enum class RecordKind { Comparison, Rating };
std::string_view to_string(RecordKind k);

/// One human judgment. Comparisons carry two trajectory ids and six
/// verdicts; ratings carry one id and six anchors.
struct AnnotationRecord {
  RecordKind kind = RecordKind::Comparison;
  std::string task;
  std::vector<std::string> trajectories;
  std::string rater;
  std::array<Verdict, kDimensionCount> verdicts{};
  std::array<double, kDimensionCount> anchors{};
  std::int64_t timestamp = 0;

  bool operator==(const AnnotationRecord&) const = default;
};

/// Throws ValidationError when the record breaks the schema.
void validate(const AnnotationRecord& r);
std::string to_json(const AnnotationRecord& r);
/// Parses and validates one line.
AnnotationRecord annotation_from_json(std::string_view line);
std::vector<AnnotationRecord> parse_annotations(std::string_view jsonl);
std::vector<AnnotationRecord> load_annotations(const std::string& path);

/// Pair key independent of presentation order: (task, min id, max id).
struct PairKey {
  std::string task, a, b;
  auto operator<=>(const PairKey&) const = default;
};
/// Canonical key plus whether the record's order was swapped to reach it.
std::pair<PairKey, bool> canonical_pair(std::string_view task, std::string_view a, std::string_view b);

struct DecidedPair {
  PairKey key;
  Verdict label = Verdict::ABetter;  // in canonical orientation
  int votes = 0;
  bool operator==(const DecidedPair&) const = default;
};

/// Majority vote per pair on one dimension; keeps pairs whose winner is
/// A-better or B-better with a strict plurality. Ordered by key.
std::vector<DecidedPair> filter_decided_pairs(const std::vector<AnnotationRecord>& annotations,
                                              Dimension dim = Dimension::TaskProgress);

struct F1Result {
  double f1_a = 0, f1_b = 0;
  double macro = 0;  // mean over classes present in the labels
  std::size_t n = 0;
};
/// Labels must be A-better or B-better; other predictions count as misses.
F1Result comparative_f1(const std::vector<Verdict>& predictions, const std::vector<Verdict>& labels);

struct Correlation {
  double coefficient = 0;
  double p_value = 1;
  std::size_t n = 0;
};
/// Sample Pearson r, two-sided p from Student's t with n-2 degrees of freedom.
Correlation pearson(const std::vector<double>& xs, const std::vector<double>& ys);
/// Tau-b in O(n log n), two-sided p from the tie-corrected normal approximation.
Correlation kendall_tau(const std::vector<double>& xs, const std::vector<double>& ys);

/// Mean pairwise Pearson r between raters over co-rated trajectories (>= 3).
/// Throws ValidationError when no rater pair qualifies for a dimension.
std::array<double, kDimensionCount> inter_rater(const std::vector<AnnotationRecord>& ratings);

struct AutoComparison {
  std::string task, a, b;
  eval::ComparisonResult result;
};
/// {"task","a","b","mode","verdicts":{dimension: verdict},"evidence":{...}}
std::string to_json(const AutoComparison& c);
AutoComparison auto_comparison_from_json(std::string_view line);
std::vector<AutoComparison> load_auto_comparisons(const std::string& path);

struct AlignmentReport {
  std::map<std::string, F1Result> per_category;  // on Task Progress
  std::array<F1Result, kDimensionCount> per_dimension{};
  std::array<std::optional<Correlation>, kDimensionCount> pearson{}, kendall{};
  std::array<std::optional<double>, kDimensionCount> inter_rater{};
  std::array<std::size_t, kDimensionCount> decided_pairs{};
  std::size_t joined_ratings = 0;
  std::vector<std::string> join_failures;

  std::string to_text() const;
  std::string to_json() const;
};

/// `categories` maps task id -> category; unknown tasks go to "uncategorized".
AlignmentReport alignment_report(const std::vector<AnnotationRecord>& annotations,
                                 const std::vector<AutoComparison>& comparisons,
                                 const std::vector<eval::ScoreReport>& scores,
                                 const std::map<std::string, std::string>& categories = {});

} // namespace mcu::align
