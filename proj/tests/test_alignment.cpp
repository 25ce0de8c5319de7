#include "oracles.hpp"
#include "support.hpp"

#include "mcu/alignment.hpp"
#include "mcu/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace mcu;
using namespace mcu::align;
using eval::kDimensions;

using namespace mcu::test;

TEST(Pearson, ClosedForms) {
  std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> neg;
  for (double v : x) neg.push_back(-v);
  EXPECT_DOUBLE_EQ(pearson(x, x).coefficient, 1.0);
  EXPECT_DOUBLE_EQ(pearson(x, neg).coefficient, -1.0);
  auto c = pearson({1, 2, 3}, {1, 3, 2});
  EXPECT_NEAR(c.coefficient, 0.5, 1e-12);
  // df = 1 is the Cauchy distribution: p = 1 - (2/pi) atan(t), t = 0.5 * sqrt(1 / 0.75).
  EXPECT_NEAR(c.p_value, 1.0 - 2.0 / std::numbers::pi * std::atan(0.5 * std::sqrt(1 / 0.75)), 1e-9);
  EXPECT_NEAR(c.p_value, 2.0 / 3.0, 1e-9);
}

TEST(Pearson, Errors) {
  EXPECT_THROW(pearson({1, 2}, {1, 2}), ValidationError);
  EXPECT_THROW(pearson({1, 2, 3}, {1, 2}), ValidationError);
  EXPECT_THROW(pearson({1, 1, 1}, {1, 2, 3}), ValidationError);
}

TEST(Pearson, MatchesPairwiseOracle) {
  Rng rng(11);
  for (int k = 0; k < 1000; ++k) {
    std::size_t n = 3 + uniform_index(rng, 198);
    int levels = k % 3 == 0 ? 5 : 0;
    auto x = random_vector(rng, n, levels), y = random_vector(rng, n, levels);
    double want;
    try {
      want = pearson_oracle(x, y);
      if (!std::isfinite(want)) continue;
    } catch (...) {
      continue;
    }
    auto got = pearson(x, y);
    EXPECT_NEAR(got.coefficient, want, 1e-9) << "n=" << n;
    EXPECT_GE(got.p_value, 0.0);
    EXPECT_LE(got.p_value, 1.0);
  }
}

TEST(Kendall, ClosedForms) {
  EXPECT_DOUBLE_EQ(kendall_tau({1, 2, 3, 4}, {1, 2, 3, 4}).coefficient, 1.0);
  EXPECT_DOUBLE_EQ(kendall_tau({1, 2, 3, 4}, {4, 3, 2, 1}).coefficient, -1.0);
  EXPECT_NEAR(kendall_tau({1, 2, 3}, {1, 3, 2}).coefficient, 1.0 / 3.0, 1e-12);
  EXPECT_THROW(kendall_tau({1, 1, 1}, {1, 2, 3}), ValidationError);
  EXPECT_THROW(kendall_tau({1}, {1}), ValidationError);
  EXPECT_THROW(kendall_tau({1, 2}, {1}), ValidationError);
}

TEST(Kendall, MatchesPairOracle) {
  Rng rng(12);
  int checked = 0;
  for (int k = 0; k < 1000; ++k) {
    std::size_t n = 2 + uniform_index(rng, 199);
    int levels = k % 2 == 0 ? 5 : 0;
    auto x = random_vector(rng, n, levels), y = random_vector(rng, n, levels);
    double want = kendall_oracle(x, y);
    if (!std::isfinite(want)) {
      EXPECT_THROW(kendall_tau(x, y), ValidationError);
      continue;
    }
    auto got = kendall_tau(x, y);
    EXPECT_NEAR(got.coefficient, want, 1e-9) << "n=" << n;
    EXPECT_GE(got.p_value, 0.0);
    EXPECT_LE(got.p_value, 1.0);
    ++checked;
  }
  EXPECT_GT(checked, 900);
}

TEST(Kendall, InvariantUnderMonotoneTransforms) {
  Rng rng(13);
  for (int k = 0; k < 200; ++k) {
    std::size_t n = 3 + uniform_index(rng, 60);
    auto x = random_vector(rng, n, k % 2 ? 5 : 0), y = random_vector(rng, n, 5);
    std::vector<double> fx, gy;
    for (double v : x) fx.push_back(std::exp(v) * 3 + 1);
    for (double v : y) gy.push_back(v * v * v - 7);
    try {
      auto a = kendall_tau(x, y), b = kendall_tau(fx, gy);
      EXPECT_NEAR(a.coefficient, b.coefficient, 1e-12);
      EXPECT_NEAR(a.p_value, b.p_value, 1e-12);
    } catch (const ValidationError&) {
    }
  }
}

TEST(Kendall, PValueShrinksWithAgreement) {
  std::vector<double> x, y;
  for (int i = 0; i < 50; ++i) {
    x.push_back(i);
    y.push_back(i + (i % 3));
  }
  EXPECT_LT(kendall_tau(x, y).p_value, 1e-6);
  EXPECT_LT(pearson(x, y).p_value, 1e-6);
}

TEST(F1, ClosedForms) {
  using V = Verdict;
  std::vector<V> lab{V::ABetter, V::ABetter, V::BBetter, V::BBetter};
  EXPECT_DOUBLE_EQ(comparative_f1(lab, lab).macro, 1.0);
  std::vector<V> inv{V::BBetter, V::BBetter, V::ABetter, V::ABetter};
  EXPECT_DOUBLE_EQ(comparative_f1(inv, lab).macro, 0.0);
  std::vector<V> pred{V::ABetter, V::Tie, V::BBetter, V::ABetter};
  auto got = comparative_f1(pred, lab);
  auto want = f1_oracle(pred, lab);
  EXPECT_DOUBLE_EQ(got.f1_a, want.f1_a);
  EXPECT_DOUBLE_EQ(got.f1_b, want.f1_b);
  EXPECT_DOUBLE_EQ(got.macro, want.macro);
  EXPECT_NEAR(got.f1_a, 0.5, 1e-12);
  EXPECT_NEAR(got.f1_b, 2.0 / 3.0, 1e-12);
  EXPECT_THROW(comparative_f1({V::ABetter}, lab), ValidationError);
  EXPECT_THROW(comparative_f1({V::ABetter}, {V::Tie}), ValidationError);
  EXPECT_EQ(comparative_f1({}, {}).macro, 0.0);
}

TEST(F1, MatchesConfusionOracleAndInvariances) {
  Rng rng(14);
  for (int k = 0; k < 1000; ++k) {
    std::size_t n = 1 + uniform_index(rng, 60);
    std::vector<Verdict> lab(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      lab[i] = random_ab(rng);
      pred[i] = static_cast<Verdict>(uniform_index(rng, 4));
    }
    auto got = comparative_f1(pred, lab);
    auto want = f1_oracle(pred, lab);
    EXPECT_NEAR(got.f1_a, want.f1_a, 1e-12);
    EXPECT_NEAR(got.f1_b, want.f1_b, 1e-12);
    EXPECT_NEAR(got.macro, want.macro, 1e-12);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Verdict> pl(n), pp(n), sl(n), sp(n);
    for (std::size_t i = 0; i < n; ++i) {
      pl[i] = lab[perm[i]];
      pp[i] = pred[perm[i]];
      sl[i] = eval::mirror(lab[i]);
      sp[i] = eval::mirror(pred[i]);
    }
    EXPECT_NEAR(comparative_f1(pp, pl).macro, got.macro, 1e-12);
    EXPECT_NEAR(comparative_f1(sp, sl).macro, got.macro, 1e-12);
  }
}

TEST(Annotations, JsonRoundTripAndValidation) {
  auto c = comparison("hunt sheep", "a", "b", "r1", Verdict::Tie);
  c.verdicts[0] = Verdict::ABetter;
  c.timestamp = 17;
  EXPECT_EQ(annotation_from_json(to_json(c)), c);
  auto r = rating("a", "r1", {0, 0.25, 0.5, 0.75, 1, 0});
  EXPECT_EQ(annotation_from_json(to_json(r)), r);

  auto bad = r;
  bad.anchors[2] = 0.3;
  EXPECT_THROW(validate(bad), ValidationError);
  auto self = comparison("t", "a", "a", "r", Verdict::Tie);
  EXPECT_THROW(validate(self), ValidationError);
  auto norater = c;
  norater.rater = "";
  EXPECT_THROW(validate(norater), ValidationError);
  EXPECT_THROW(annotation_from_json("{"), ValidationError);
  EXPECT_THROW(annotation_from_json(R"({"kind":"rating","task":"t","trajectories":["a"],"rater":"r","anchors":{}})"),
               ValidationError);
  try {
    parse_annotations(to_json(c) + "\n\n{\"kind\":\"x\"}\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(DecidedPairs, TieDroppedAndEmpty) {
  EXPECT_TRUE(filter_decided_pairs({}).empty());
  std::vector<AnnotationRecord> all_tie{comparison("t", "a", "b", "r1", Verdict::Tie),
                                        comparison("t", "a", "b", "r2", Verdict::Tie)};
  EXPECT_TRUE(filter_decided_pairs(all_tie).empty());
}

TEST(DecidedPairs, MajorityAcrossPresentationOrder) {
  std::vector<AnnotationRecord> recs{comparison("t", "x", "y", "r1", Verdict::ABetter),
                                     comparison("t", "y", "x", "r2", Verdict::BBetter),
                                     comparison("t", "x", "y", "r3", Verdict::BBetter)};
  auto d = filter_decided_pairs(recs);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].label, Verdict::ABetter);
  EXPECT_EQ(d[0].votes, 2);
  auto rev = filter_decided_pairs({comparison("t", "y", "x", "r1", Verdict::ABetter)});
  ASSERT_EQ(rev.size(), 1u);
  EXPECT_EQ(rev[0].key.a, "x");
  EXPECT_EQ(rev[0].label, Verdict::BBetter);
}

TEST(DecidedPairs, SyntheticFiveHundredKeeps236) {
  std::vector<std::pair<PairKey, Verdict>> truth;
  auto recs = synthetic_500(&truth);
  ASSERT_EQ(recs.size(), 500u);
  auto d = filter_decided_pairs(recs);
  ASSERT_EQ(d.size(), 236u);
  std::sort(truth.begin(), truth.end());
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(d[i].key, truth[i].first);
    EXPECT_EQ(d[i].label, truth[i].second);
    EXPECT_EQ(d[i].votes, 2);
  }
}

TEST(InterRater, IdenticalRatersGiveOne) {
  std::vector<AnnotationRecord> recs;
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    std::array<double, kDimensionCount> a{};
    for (auto& v : a) v = eval::kAnchors[uniform_index(rng, 5)];
    a[0] = eval::kAnchors[i % 5];
    for (std::size_t d = 1; d < kDimensionCount; ++d) a[d] = eval::kAnchors[(i + d) % 5];
    recs.push_back(rating("t" + std::to_string(i), "r1", a));
    recs.push_back(rating("t" + std::to_string(i), "r2", a));
  }
  for (double v : inter_rater(recs)) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(InterRater, NoisyRatersMatchOracle) {
  Rng rng(4);
  const int n = 40;
  std::array<std::vector<std::array<double, kDimensionCount>>, 3> by_rater;
  std::vector<AnnotationRecord> recs;
  for (int i = 0; i < n; ++i) {
    std::array<std::size_t, kDimensionCount> base{};
    for (auto& b : base) b = uniform_index(rng, 5);
    for (int r = 0; r < 3; ++r) {
      std::array<double, kDimensionCount> a{};
      for (std::size_t d = 0; d < kDimensionCount; ++d) {
        long j = static_cast<long>(base[d]) + static_cast<long>(uniform_index(rng, 3)) - 1;
        a[d] = eval::kAnchors[static_cast<std::size_t>(std::clamp(j, 0L, 4L))];
      }
      by_rater[r].push_back(a);
      recs.push_back(rating("t" + std::to_string(i), "r" + std::to_string(r), a));
    }
  }
  auto got = inter_rater(recs);
  for (std::size_t d = 0; d < kDimensionCount; ++d) {
    double sum = 0;
    for (int p = 0; p < 3; ++p)
      for (int q = p + 1; q < 3; ++q) {
        std::vector<double> x, y;
        for (int i = 0; i < n; ++i) {
          x.push_back(by_rater[p][i][d]);
          y.push_back(by_rater[q][i][d]);
        }
        sum += pearson_oracle(x, y);
      }
    EXPECT_NEAR(got[d], sum / 3, 1e-9);
  }
}

TEST(InterRater, SingleRaterIsInsufficient) {
  std::vector<AnnotationRecord> recs;
  for (int i = 0; i < 5; ++i) recs.push_back(rating("t" + std::to_string(i), "r1", {0, 0.25, 0.5, 0.75, 1, 0}));
  EXPECT_THROW(inter_rater(recs), ValidationError);
}

TEST(AutoComparisonJson, RoundTrip) {
  AutoComparison c{"t", "a", "b", {}};
  c.result.mode = eval::CompareMode::Direct;
  c.result.verdicts.fill(Verdict::BBetter);
  c.result.evidence[0] = {"Video A: x"};
  auto back = auto_comparison_from_json(to_json(c));
  EXPECT_EQ(back.task, "t");
  EXPECT_EQ(back.result, c.result);
  EXPECT_THROW(auto_comparison_from_json("{}"), ParseError);
}

TEST(Report, PerfectAgreement) {
  std::vector<std::pair<PairKey, Verdict>> truth;
  auto recs = synthetic_500(&truth);
  std::vector<AutoComparison> autos;
  for (const auto& [k, v] : truth) {
    AutoComparison c{k.task, k.b, k.a, {}};  // presented swapped on purpose
    c.result.verdicts.fill(eval::mirror(v));
    autos.push_back(c);
  }
  std::vector<eval::ScoreReport> scores;
  for (int i = 0; i < 6; ++i) {
    std::array<double, kDimensionCount> a{};
    for (std::size_t d = 0; d < kDimensionCount; ++d) a[d] = eval::kAnchors[(i + d) % 5];
    recs.push_back(rating("traj-" + std::to_string(i), "r1", a));
    recs.push_back(rating("traj-" + std::to_string(i), "r2", a));
    eval::ScoreReport s;
    s.trajectory_id = "traj-" + std::to_string(i);
    for (std::size_t d = 0; d < kDimensionCount; ++d) s.scores[d].anchor = a[d];
    scores.push_back(s);
  }
  std::map<std::string, std::string> cats;
  for (int i = 0; i < 7; ++i) cats["task-" + std::to_string(i)] = i < 4 ? "combat" : "crafting";
  auto rep = alignment_report(recs, autos, scores, cats);
  for (std::size_t d = 0; d < kDimensionCount; ++d) {
    EXPECT_EQ(rep.decided_pairs[d], 236u);
    EXPECT_DOUBLE_EQ(rep.per_dimension[d].macro, 1.0);
    ASSERT_TRUE(rep.pearson[d]);
    EXPECT_NEAR(rep.pearson[d]->coefficient, 1.0, 1e-12);
    ASSERT_TRUE(rep.kendall[d]);
    EXPECT_NEAR(rep.kendall[d]->coefficient, 1.0, 1e-12);
    ASSERT_TRUE(rep.inter_rater[d]);
    EXPECT_NEAR(*rep.inter_rater[d], 1.0, 1e-12);
  }
  ASSERT_EQ(rep.per_category.size(), 2u);
  EXPECT_DOUBLE_EQ(rep.per_category["combat"].macro, 1.0);
  EXPECT_EQ(rep.per_category["combat"].n + rep.per_category["crafting"].n, 236u);
  EXPECT_EQ(rep.joined_ratings, 6u);
  EXPECT_TRUE(rep.join_failures.empty());
  EXPECT_NE(rep.to_text().find("Task Progress"), std::string::npos);
  EXPECT_NE(rep.to_json().find("\"per_category\""), std::string::npos);
}

TEST(Report, PlantedDisagreementMatchesOracle) {
  std::vector<std::pair<PairKey, Verdict>> truth;
  auto recs = synthetic_500(&truth);
  std::vector<AutoComparison> autos;
  std::vector<Verdict> labels, preds;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto& [k, v] = truth[i];
    AutoComparison c{k.task, k.a, k.b, {}};
    Verdict p = i % 5 == 0 ? eval::mirror(v) : i % 11 == 0 ? Verdict::Tie : v;
    c.result.verdicts.fill(p);
    autos.push_back(c);
  }
  // Oracle input in the report's canonical key order.
  std::sort(truth.begin(), truth.end());
  std::map<PairKey, Verdict> pred_by_key;
  for (const auto& c : autos) pred_by_key[canonical_pair(c.task, c.a, c.b).first] = c.result.verdicts[0];
  for (const auto& [k, v] : truth) {
    labels.push_back(v);
    preds.push_back(pred_by_key[k]);
  }
  auto rep = alignment_report(recs, autos, {});
  auto want = f1_oracle(preds, labels);
  EXPECT_NEAR(rep.per_dimension[0].macro, want.macro, 1e-12);
  EXPECT_NEAR(rep.per_dimension[0].f1_a, want.f1_a, 1e-12);
  EXPECT_LT(want.macro, 1.0);
  EXPECT_NEAR(rep.per_category["uncategorized"].macro, want.macro, 1e-12);
}

TEST(Report, DisjointIdsListEveryJoinFailure) {
  auto recs = synthetic_500();
  recs.push_back(rating("lonely", "r1", {0, 0, 0, 0, 0, 0}));
  AutoComparison other{"zzz", "p", "q", {}};
  auto rep = alignment_report(recs, {other}, {});
  EXPECT_EQ(rep.join_failures.size(), 236u + 1u);
  for (std::size_t d = 0; d < kDimensionCount; ++d) {
    EXPECT_EQ(rep.decided_pairs[d], 0u);
    EXPECT_FALSE(rep.pearson[d]);
  }
  EXPECT_EQ(rep.joined_ratings, 0u);
}
