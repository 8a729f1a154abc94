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

#include "gbqa/proposed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "gbqa/errors.hpp"

namespace gbqa {
namespace {

constexpr double kRangeSlack = 1e-9;

double relevance_term(double score, int rank, std::size_t g,
                      const MeasureParams& params) {
  const double gd = static_cast<double>(g);
  return params.gamma * (gd - rank + 1) / gd * score +
         (rank / gd) * (1.0 - score);
}

void require_same_gestures(const ScoreVector& a, const ScoreVector& b) {
  if (a.size() != b.size()) {
    throw ValidationError("score vectors cover " + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + " gestures");
  }
  for (const auto& id : a.gesture_ids) b.index_of(id);
}

}  // namespace

double rank_deviation(const Ranking& out, const Ranking& gt) {
  if (!out.covers_same_gestures(gt)) {
    throw ValidationError("rank_deviation: rankings cover different gestures");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    total += std::abs(out.rank_of(gt.gesture_ids()[i]) - gt.ranks()[i]);
  }
  return total / static_cast<double>(gt.size());
}

double relevance_per_gesture(const ArrangedScores& delta_arranged, int gt_rank,
                             const MeasureParams& params) {
  const std::size_t g = delta_arranged.size();
  if (gt_rank < 1 || static_cast<std::size_t>(gt_rank) > g) {
    throw ValidationError("relevance: rank " + std::to_string(gt_rank) +
                          " outside 1.." + std::to_string(g));
  }
  const double score = delta_arranged.values[g - gt_rank];
  if (score < -1.0 - kRangeSlack || score > 1.0 + kRangeSlack) {
    throw ValidationError("relevance: score outside [-1, 1]");
  }
  return relevance_term(score, gt_rank, g, params);
}

double relevance_total(const ScoreVector& delta, const Ranking& gt,
                       const MeasureParams& params) {
  const ArrangedScores arranged = arrange_by_ground_truth(delta, gt);
  double total = 0.0;
  for (int r = 1; r <= static_cast<int>(arranged.size()); ++r) {
    total += relevance_per_gesture(arranged, r, params);
  }
  return total;
}

TrendComponents trend_match(const ArrangedScores& delta_arranged,
                            const ArrangedScores& gt_arranged) {
  const std::size_t g = delta_arranged.size();
  if (gt_arranged.size() != g || delta_arranged.gesture_ids != gt_arranged.gesture_ids) {
    throw ValidationError(
        "trend_match: inputs are not arranged under the same ranking");
  }
  if (g < 2) {
    throw UndefinedMeasureError("trend_match: needs at least two gestures");
  }
  const auto& d = delta_arranged.values;
  const auto& e = gt_arranged.values;

  TrendComponents out;
  out.forward.resize(g - 1);
  out.backward.resize(g - 1);
  // Both passes are written as step differences, so backward[j - 1] ==
  // forward[j - 1] bitwise and identical inputs give exact zeros.
  // Forward: |e_{j-1} + (d_j - d_{j-1}) - e_j|.
  for (std::size_t j = 1; j < g; ++j) {
    out.forward[j - 1] = std::abs((d[j] - d[j - 1]) - (e[j] - e[j - 1]));
  }
  // Backward: |e_{j+1} - (d_{j+1} - d_j) - e_j|.
  for (std::size_t j = 0; j + 1 < g; ++j) {
    out.backward[j] = std::abs((e[j + 1] - e[j]) - (d[j + 1] - d[j]));
  }

  // Interior slots get both passes; the two end slots get one pass, doubled.
  double interior = 0.0;
  for (std::size_t j = 1; j + 1 < g; ++j) {
    interior += out.forward[j - 1] + out.backward[j];
  }
  const double ends = out.forward[g - 2] + out.backward[0];
  out.total = (interior + 2.0 * ends) / 2.0;
  return out;
}

double penalty_entanglement(double icgd, const MeasureParams& params) {
  if (!(icgd >= 0.0)) throw ValidationError("icgd must be >= 0");
  return std::exp(-params.beta * icgd);
}

double penalty_trend(double trend, const MeasureParams& params) {
  if (!(trend >= 0.0)) throw ValidationError("trend must be >= 0");
  return 1.0 / std::sqrt(std::log2(2.0 + params.nu * trend));
}

ScoreComparison compare_scores(const ScoreVector& delta, const ScoreVector& gt,
                               const MeasureParams& params) {
  params.validate();
  require_same_gestures(delta, gt);

  ScoreComparison cmp{rank_descending(delta), rank_descending(gt), {}, {}, 0.0,
                      0.0, std::nullopt};
  const std::size_t g = gt.size();
  cmp.relevance.resize(g);
  cmp.rank_diff.resize(g);
  for (std::size_t i = 0; i < g; ++i) {
    const std::string& id = gt.gesture_ids[i];
    const int r_gt = cmp.gt_ranking.ranks()[i];
    const double score = delta.values[delta.index_of(id)];
    if (score < -1.0 - kRangeSlack || score > 1.0 + kRangeSlack) {
      throw ValidationError("candidate score outside [-1, 1]; normalize first");
    }
    cmp.relevance[i] = relevance_term(score, r_gt, g, params);
    cmp.rank_diff[i] = std::abs(cmp.delta_ranking.rank_of(id) - r_gt);
    cmp.relevance_sum += cmp.relevance[i];
  }
  cmp.rank_dev = rank_deviation(cmp.delta_ranking, cmp.gt_ranking);
  if (g >= 2) {
    cmp.trend = trend_match(arrange_by_ground_truth(delta, cmp.gt_ranking),
                            arrange_by_ground_truth(gt, cmp.gt_ranking));
  }
  return cmp;
}

double acceptance_from_terms(const std::vector<double>& relevance,
                             const std::vector<int>& rank_diff,
                             const MeasureParams& params) {
  if (relevance.size() != rank_diff.size()) {
    throw ValidationError("acceptance: term vectors differ in length");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < relevance.size(); ++j) {
    const int diff = std::abs(rank_diff[j]);
    total += std::exp2(params.lambda * relevance[j]) / std::max(1, diff);
  }
  return total;
}

double acceptance_score(const ScoreVector& delta, const ScoreVector& gt,
                        const MeasureParams& params) {
  const ScoreComparison cmp = compare_scores(delta, gt, params);
  return acceptance_from_terms(cmp.relevance, cmp.rank_diff, params);
}

double advanced_from_terms(const std::vector<double>& relevance,
                           const std::vector<int>& rank_diff, double trend,
                           double icgd, const MeasureParams& params) {
  if (relevance.size() != rank_diff.size()) {
    throw ValidationError("advanced acceptance: term vectors differ in length");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < relevance.size(); ++j) {
    total += std::exp2(params.lambda * relevance[j]) /
             std::exp(params.kappa * std::abs(rank_diff[j]));
  }
  return total * penalty_trend(trend, params) *
         penalty_entanglement(icgd, params);
}

double advanced_acceptance(const ScoreVector& delta, const ScoreVector& gt,
                           std::optional<double> icgd,
                           const MeasureParams& params) {
  const ScoreComparison cmp = compare_scores(delta, gt, params);
  if (!cmp.trend) {
    throw UndefinedMeasureError(
        "advanced acceptance: trend match needs at least two gestures");
  }
  return advanced_from_terms(cmp.relevance, cmp.rank_diff, cmp.trend->total,
                             icgd.value_or(0.0), params);
}

double advanced_reference(const ScoreVector& gt, const MeasureParams& params) {
  params.validate();
  if (gt.degenerate) {
    throw UndefinedMeasureError(
        "normalized advanced acceptance: ground truth is degenerate");
  }
  const Ranking ranking = rank_descending(gt);
  double total = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    total += std::exp2(params.lambda * relevance_term(gt.values[i],
                                                      ranking.ranks()[i],
                                                      gt.size(), params));
  }
  return total;
}

double normalized_advanced_acceptance(const ScoreVector& delta,
                                      const ScoreVector& gt,
                                      std::optional<double> icgd,
                                      const MeasureParams& params) {
  const double reference = advanced_reference(gt, params);
  return advanced_acceptance(delta, gt, icgd, params) / reference;
}

}  // namespace gbqa
