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

// Rank deviation, relevance, trend match distance and the acceptance-score
// family built from them.
//
// Conventions shared by every function here:
//  * `delta` is the candidate score vector, `gt` the ground truth; both are
//    normalized and cover the same gesture ids (order may differ).
//  * Gesture j's relevance uses its own ground-truth rank r_j and its own
//    candidate score, so R_j and the rank difference |r_j^delta - r_j^gt|
//    always refer to the same gesture.

#pragma once

#include <optional>
#include <vector>

#include "gbqa/core.hpp"

namespace gbqa {

// Mean absolute rank difference. Symmetric; zero iff the rankings agree.
double rank_deviation(const Ranking& out, const Ranking& gt);

// R for the gesture holding ground-truth rank `gt_rank` (1-based):
//   gamma * (G - r + 1) / G * s + (r / G) * (1 - s)
// where s is that gesture's score taken from the arranged vector.
double relevance_per_gesture(const ArrangedScores& delta_arranged, int gt_rank,
                             const MeasureParams& params);

double relevance_total(const ScoreVector& delta, const Ranking& gt,
                       const MeasureParams& params);

struct TrendComponents {
  // forward[k] is the forward error of slot j = k + 2 (j = 2..G, 1-based).
  std::vector<double> forward;
  // backward[k] is the backward error of slot j = k + 1 (j = 1..G-1).
  std::vector<double> backward;
  double total = 0.0;
};

// Two-pass trend match over scores arranged by the same ground-truth
// ranking. Throws UndefinedMeasureError for G < 2.
TrendComponents trend_match(const ArrangedScores& delta_arranged,
                            const ArrangedScores& gt_arranged);

double penalty_entanglement(double icgd, const MeasureParams& params);
double penalty_trend(double trend, const MeasureParams& params);

// Everything the aggregate scores need, computed once per (delta, gt) pair.
struct ScoreComparison {
  Ranking delta_ranking;
  Ranking gt_ranking;
  // Both indexed by the ground truth's gesture order.
  std::vector<double> relevance;
  std::vector<int> rank_diff;
  double rank_dev = 0.0;
  double relevance_sum = 0.0;
  std::optional<TrendComponents> trend;  // empty when G < 2
};

ScoreComparison compare_scores(const ScoreVector& delta, const ScoreVector& gt,
                               const MeasureParams& params);

// sum_j 2^(lambda R_j) / max(1, |rank diff_j|). The max(1, .) guard keeps
// exact matches at full reward instead of dividing by zero.
double acceptance_from_terms(const std::vector<double>& relevance,
                             const std::vector<int>& rank_diff,
                             const MeasureParams& params);
double acceptance_score(const ScoreVector& delta, const ScoreVector& gt,
                        const MeasureParams& params);

// [sum_j 2^(lambda R_j) / exp(kappa |diff_j|)] / sqrt(log2(2 + nu Psi))
//   * exp(-beta C_d)
double advanced_from_terms(const std::vector<double>& relevance,
                           const std::vector<int>& rank_diff, double trend,
                           double icgd, const MeasureParams& params);
// Missing `icgd` counts as 0.
double advanced_acceptance(const ScoreVector& delta, const ScoreVector& gt,
                           std::optional<double> icgd,
                           const MeasureParams& params);

// Reference term: sum_j 2^(lambda R_j(gt)) with no penalties. Throws
// UndefinedMeasureError for a degenerate ground truth.
double advanced_reference(const ScoreVector& gt, const MeasureParams& params);

double normalized_advanced_acceptance(const ScoreVector& delta,
                                      const ScoreVector& gt,
                                      std::optional<double> icgd,
                                      const MeasureParams& params);

}  // namespace gbqa
