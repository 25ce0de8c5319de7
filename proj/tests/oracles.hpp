#pragma once

#include "mcu/alignment.hpp"
#include "mcu/random.hpp"

#include <string>
#include <utility>
#include <vector>

// Brute-force reference implementations and annotation fixtures shared by the
// alignment tests and the acceptance binary.
namespace mcu::test {

double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y);
double kendall_oracle(const std::vector<double>& x, const std::vector<double>& y);
align::F1Result f1_oracle(const std::vector<eval::Verdict>& pred, const std::vector<eval::Verdict>& lab);

/// levels > 0 draws integers in [0, levels); otherwise uniform reals in [-5, 5).
std::vector<double> random_vector(Rng& rng, std::size_t n, int levels);
eval::Verdict random_ab(Rng& rng);

align::AnnotationRecord comparison(const std::string& task, const std::string& a, const std::string& b,
                                   const std::string& rater, eval::Verdict v);
align::AnnotationRecord rating(const std::string& traj, const std::string& rater,
                               std::array<double, eval::kDimensionCount> a);

/// 500 records: 236 pairs rated twice with the same label (some presented
/// swapped), 10 pairs split A against B, 8 single tie/both-bad records.
std::vector<align::AnnotationRecord> synthetic_500(std::vector<std::pair<align::PairKey, eval::Verdict>>* truth = nullptr);

} // namespace mcu::test
