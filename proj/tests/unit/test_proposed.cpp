/*
 * Copyright 2026 The GBQA Measures Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>

#include "gbqa/errors.hpp"
#include "gbqa/proposed.hpp"
#include "support.hpp"

namespace gbqa {
namespace {

using test::Gen;
using test::gesture_ids;
using test::from_arranged;
using test::identity_ranking;
using test::normalized;

TEST(RankDeviation, Examples) {
  const auto gt = identity_ranking(4);
  EXPECT_EQ(rank_deviation(gt, gt), 0.0);
  const Ranking rev(gesture_ids(4), {4, 3, 2, 1});
  EXPECT_DOUBLE_EQ(rank_deviation(rev, gt), 2.0);
  const Ranking out3(gesture_ids(3), {1, 3, 2});
  EXPECT_NEAR(rank_deviation(out3, identity_ranking(3)), 2.0 / 3.0, 1e-15);
}

TEST(RankDeviation, SymmetricAndReversal) {
  Gen gen(21);
  for (int t = 0; t < 200; ++t) {
    const std::size_t g = gen.integer(1, 12);
    auto pa = gen.permutation(g), pb = gen.permutation(g);
    std::vector<int> ra(g), rb(g);
    for (std::size_t i = 0; i < g; ++i) {
      ra[i] = static_cast<int>(pa[i] + 1);
      rb[i] = static_cast<int>(pb[i] + 1);
    }
    const Ranking a(gesture_ids(g), ra), b(gesture_ids(g), rb);
    EXPECT_EQ(rank_deviation(a, b), rank_deviation(b, a));
    EXPECT_EQ(rank_deviation(a, a), 0.0);
  }
  for (std::size_t g = 2; g <= 12; g += 2) {
    std::vector<int> rev(g);
    for (std::size_t i = 0; i < g; ++i) rev[i] = static_cast<int>(g - i);
    EXPECT_DOUBLE_EQ(rank_deviation(Ranking(gesture_ids(g), rev), identity_ranking(g)),
                     static_cast<double>(g) / 2.0);
  }
}

TEST(Relevance, PerGestureExamples) {
  const auto delta = from_arranged({-0.5, -0.2, 0.3, 0.8});
  const auto arr = arrange_by_ground_truth(delta, identity_ranking(4));
  const MeasureParams p;
  EXPECT_NEAR(relevance_per_gesture(arr, 1, p), 1.65, 1e-12);
  EXPECT_NEAR(relevance_per_gesture(arr, 4, p), 1.25, 1e-12);
  EXPECT_THROW(relevance_per_gesture(arr, 0, p), ValidationError);
  EXPECT_THROW(relevance_per_gesture(arr, 5, p), ValidationError);
}

TEST(Relevance, ZeroScoresGiveRankShare) {
  const auto delta = from_arranged({0, 0, 0, 0});
  const auto arr = arrange_by_ground_truth(delta, identity_ranking(4));
  for (int r = 1; r <= 4; ++r) {
    EXPECT_DOUBLE_EQ(relevance_per_gesture(arr, r, MeasureParams{}), r / 4.0);
  }
  EXPECT_DOUBLE_EQ(relevance_total(delta, identity_ranking(4), MeasureParams{}), 2.5);
}

TEST(Relevance, TotalHandOracle) {
  // 1.65 + 0.8 + 0.7 + 1.25, evaluated term by term.
  const auto delta = from_arranged({-0.5, -0.2, 0.3, 0.8});
  EXPECT_NEAR(relevance_total(delta, identity_ranking(4), MeasureParams{}), 4.4, 1e-9);
}

TEST(Relevance, RankOneScoreIsMonotone) {
  const MeasureParams p;
  double prev = -1e9;
  for (double s = -0.9; s <= 0.9; s += 0.1) {
    const double v = relevance_total(from_arranged({-0.5, -0.2, 0.3, s}),
                                     identity_ranking(4), p);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Relevance, SlopeSignAcrossThreshold) {
  const MeasureParams p;  // gamma = 2
  for (std::size_t g : {4u, 7u, 11u}) {
    const double r_star = (2.0 * g + 2.0) / 3.0;
    for (int r = 1; r <= static_cast<int>(g); ++r) {
      std::vector<double> arranged(g, 0.1);
      const std::size_t slot = g - static_cast<std::size_t>(r);
      const double h = 1e-3;
      auto total = [&](double s) {
        auto a = arranged;
        a[slot] = s;
        return relevance_total(from_arranged(a), identity_ranking(g), p);
      };
      const double slope = (total(0.1 + h) - total(0.1 - h)) / (2 * h);
      const double exact = (2.0 * (g - r + 1) - r) / static_cast<double>(g);
      EXPECT_NEAR(slope, exact, 1e-9);
      if (r < r_star) EXPECT_GT(slope, 0.0) << "G=" << g << " r=" << r;
      if (r > r_star) EXPECT_LT(slope, 0.0) << "G=" << g << " r=" << r;
    }
  }
}

TEST(Trend, IdenticalIsZero) {
  const auto e = normalized({3, 1, 4, 1.5, 9});
  const auto rank = rank_descending(e);
  const auto arr = arrange_by_ground_truth(e, rank);
  const auto t = trend_match(arr, arr);
  EXPECT_EQ(t.total, 0.0);
  for (double f : t.forward) EXPECT_EQ(f, 0.0);
  for (double b : t.backward) EXPECT_EQ(b, 0.0);
  EXPECT_EQ(t.forward.size(), 4u);
  EXPECT_EQ(t.backward.size(), 4u);
}

TEST(Trend, ThreeGestureExample) {
  const double s = 0.70710678118654752;
  const auto gt = from_arranged({-s, 0, s});
  const auto delta = from_arranged({-s, s, 0});
  const auto rank = identity_ranking(3);
  const auto t = trend_match(arrange_by_ground_truth(delta, rank),
                             arrange_by_ground_truth(gt, rank));
  EXPECT_NEAR(t.total, 3.18198051533946, 1e-12);
}

TEST(Trend, ShiftInvariant) {
  Gen gen(22);
  for (int t = 0; t < 100; ++t) {
    const std::size_t g = gen.integer(2, 10);
    const auto e = gen.vec(g), d = gen.vec(g);
    const double c = gen.uniform(-0.5, 0.5);
    std::vector<double> ds(g), es(g);
    for (std::size_t i = 0; i < g; ++i) {
      ds[i] = d[i] + c;
      es[i] = e[i] - c;
    }
    const auto rank = identity_ranking(g);
    auto run = [&](const std::vector<double>& a, const std::vector<double>& b) {
      return trend_match(arrange_by_ground_truth(from_arranged(a), rank),
                         arrange_by_ground_truth(from_arranged(b), rank))
          .total;
    };
    EXPECT_NEAR(run(d, e), run(ds, e), 1e-12);
    EXPECT_NEAR(run(d, e), run(d, es), 1e-12);
  }
}

TEST(Trend, ClosedFormAndPassSymmetry) {
  Gen gen(23);
  for (int t = 0; t < 500; ++t) {
    const std::size_t g = gen.integer(2, 12);
    const auto e = gen.vec(g), d = gen.vec(g);
    const auto rank = identity_ranking(g);
    const auto tc = trend_match(arrange_by_ground_truth(from_arranged(d), rank),
                                arrange_by_ground_truth(from_arranged(e), rank));
    EXPECT_NEAR(tc.total, test::oracle::trend_closed_form(e, d), 1e-12);
    for (std::size_t j = 0; j + 1 < g; ++j) EXPECT_EQ(tc.backward[j], tc.forward[j]);
  }
}

TEST(Trend, SingleGestureUndefined) {
  const auto one = ScoreVector::raw({"a"}, {0.0});
  const auto arr = arrange_by_ground_truth(one, Ranking({"a"}, {1}));
  EXPECT_THROW(trend_match(arr, arr), UndefinedMeasureError);
}

TEST(Penalties, Examples) {
  const MeasureParams p;
  EXPECT_EQ(penalty_entanglement(0.0, p), 1.0);
  EXPECT_EQ(penalty_trend(0.0, p), 1.0);
  EXPECT_NEAR(penalty_entanglement(0.123, p), 0.911877151758615, 1e-12);
  EXPECT_NEAR(penalty_trend(2.0, p), 0.70710678118654752, 1e-12);
  EXPECT_THROW(penalty_entanglement(-0.1, p), ValidationError);
  EXPECT_THROW(penalty_trend(-0.1, p), ValidationError);
}

TEST(Acceptance, GuardedTerms) {
  const MeasureParams p;
  EXPECT_NEAR(acceptance_from_terms({1.65, 1.25}, {0, 0}, p), 15.506009556251708,
              1e-9);
  const double one = acceptance_from_terms({1.0}, {1}, p);
  const double two = acceptance_from_terms({1.0}, {2}, p);
  EXPECT_DOUBLE_EQ(two, one / 2.0);
  EXPECT_DOUBLE_EQ(acceptance_from_terms({1.0}, {0}, p), one);
}

TEST(Advanced, IdentityIsReference) {
  const auto gt = normalized({9, 2, 5, 7});
  const MeasureParams p;
  EXPECT_NEAR(advanced_acceptance(gt, gt, 0.0, p), advanced_reference(gt, p), 1e-12);
  EXPECT_NEAR(normalized_advanced_acceptance(gt, gt, std::nullopt, p), 1.0, 1e-12);
  EXPECT_NEAR(normalized_advanced_acceptance(gt, gt, 0.5, p), 0.6872892787909722,
              1e-12);
}

TEST(Advanced, ThreeGestureFrozenOracle) {
  // Values from an independent transcription of the formulas.
  const auto gt = normalized({1, 0, -1});
  const auto delta = normalized({1, -1, 0});
  const MeasureParams p;
  EXPECT_NEAR(advanced_acceptance(delta, gt, 0.2, p), 5.634932126079811, 1e-12);
  EXPECT_NEAR(normalized_advanced_acceptance(delta, gt, 0.2, p), 0.3478756430213649,
              1e-12);
}

TEST(Advanced, MatchesDirectOracle) {
  Gen gen(24);
  for (int t = 0; t < 300; ++t) {
    const std::size_t g = gen.integer(2, 12);
    const auto gt = normalized(gen.distinct(g));
    const auto delta = normalized(gen.vec(g));
    const double cd = gen.uniform(0, 1);
    MeasureParams p;
    p.lambda = gen.uniform(0.25, 4);
    p.kappa = gen.uniform(0, 4);
    p.nu = gen.uniform(0, 4);
    p.beta = gen.uniform(0, 4);
    p.gamma = gen.uniform(0.5, 3);
    const double want = test::oracle::advanced(delta.values, gt.values, cd, p.lambda,
                                               p.kappa, p.nu, p.beta, p.gamma);
    EXPECT_NEAR(advanced_acceptance(delta, gt, cd, p), want, 1e-9 * want);
  }
}

TEST(Advanced, PenaltiesNonIncreasing) {
  Gen gen(25);
  for (int t = 0; t < 100; ++t) {
    const std::size_t g = gen.integer(3, 10);
    const auto gt = normalized(gen.distinct(g));
    const auto delta = normalized(gen.distinct(g));
    const double cd = gen.uniform(0.01, 1);
    MeasureParams lo, hi;
    hi.kappa = lo.kappa + 0.5;
    EXPECT_LE(advanced_acceptance(delta, gt, cd, hi), advanced_acceptance(delta, gt, cd, lo));
    hi = lo;
    hi.nu = lo.nu + 0.5;
    EXPECT_LE(advanced_acceptance(delta, gt, cd, hi), advanced_acceptance(delta, gt, cd, lo));
    hi = lo;
    hi.beta = lo.beta + 0.5;
    EXPECT_LT(advanced_acceptance(delta, gt, cd, hi), advanced_acceptance(delta, gt, cd, lo));
    EXPECT_LT(advanced_acceptance(delta, gt, cd + 0.1, lo),
              advanced_acceptance(delta, gt, cd, lo));
    EXPECT_GT(normalized_advanced_acceptance(delta, gt, cd, lo), 0.0);
  }
}

TEST(Advanced, DegenerateGroundTruthUndefined) {
  const auto gt = normalized({2, 2, 2});
  const auto delta = normalized({1, 2, 3});
  EXPECT_THROW(normalized_advanced_acceptance(delta, gt, 0.0, MeasureParams{}),
               UndefinedMeasureError);
}

TEST(Compare, RankDiffAlignedWithGroundTruthOrder) {
  const auto gt = normalized({3, 2, 1});
  const auto delta = normalized({1, 2, 3});
  const auto cmp = compare_scores(delta, gt, MeasureParams{});
  EXPECT_EQ(cmp.rank_diff, (std::vector<int>{2, 0, 2}));
  EXPECT_NEAR(cmp.rank_dev, 4.0 / 3.0, 1e-15);
  ASSERT_TRUE(cmp.trend.has_value());
}

}  // namespace
}  // namespace gbqa
