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

// Score vectors, normalization, ground truth and the ranking primitives
// shared by every measure.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gbqa {

enum class ScoreState { kRaw, kNormalized, kGroundTruth };

const char* to_string(ScoreState state);

// Per-gesture scores. For normalized and ground-truth vectors that are not
// degenerate the values have zero mean and unit Euclidean norm.
struct ScoreVector {
  std::vector<std::string> gesture_ids;
  std::vector<double> values;
  ScoreState state = ScoreState::kRaw;
  bool degenerate = false;

  std::size_t size() const { return values.size(); }

  // Builds a raw vector; throws ValidationError on empty input, duplicate
  // ids, size mismatch or non-finite values.
  static ScoreVector raw(std::vector<std::string> ids,
                         std::vector<double> values);

  // Wraps values already on the unit sphere (e.g. a `gt_score` column).
  // Checks the normalized invariants at `tolerance`.
  static ScoreVector prenormalized(std::vector<std::string> ids,
                                   std::vector<double> values,
                                   ScoreState state, double tolerance = 1e-9);

  // Position of `id` in gesture_ids; throws ValidationError if absent.
  std::size_t index_of(std::string_view id) const;

  void validate(double tolerance = 1e-9) const;
};

// Dense ranks 1..G over a fixed gesture order (1 = highest score).
class Ranking {
 public:
  Ranking(std::vector<std::string> gesture_ids, std::vector<int> ranks);

  std::size_t size() const { return ranks_.size(); }
  const std::vector<std::string>& gesture_ids() const { return ids_; }
  const std::vector<int>& ranks() const { return ranks_; }

  int rank_of(std::string_view id) const;
  bool contains(std::string_view id) const;
  bool covers_same_gestures(const Ranking& other) const;

  // Gesture id holding rank `r` (1-based).
  const std::string& gesture_at_rank(int r) const;

 private:
  std::vector<std::string> ids_;
  std::vector<int> ranks_;
  std::vector<std::size_t> by_rank_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Scores laid out in ascending ground-truth merit: slot 0 holds the gesture
// ranked G by the ground truth, slot G-1 the gesture ranked 1.
struct ArrangedScores {
  std::vector<double> values;
  std::vector<std::string> gesture_ids;
  // slot -> index into the source ScoreVector
  std::vector<std::size_t> source_index;

  std::size_t size() const { return values.size(); }

  // Inverse permutation: values back in source order.
  std::vector<double> restore() const;
};

// Scaling and weighting factors of the measure suite.
struct MeasureParams {
  double lambda = 2.0;  // relevance exponent scale, > 0
  double kappa = 1.0;   // rank penalty scale, >= 0
  double nu = 1.0;      // trend penalty scale, >= 0
  double beta = 0.75;   // entanglement penalty scale, >= 0
  double gamma = 2.0;   // high-rank relevance weight, > 0

  void validate() const;
  bool operator==(const MeasureParams&) const = default;
};

// z-score with the population standard deviation, then l2 normalization.
// All-equal input yields the zero vector flagged degenerate.
ScoreVector zscore_l2_normalize(const ScoreVector& raw);

// 100 - EER per gesture, normalized. Entries must lie in [0, 100].
ScoreVector ground_truth_from_eer(std::vector<std::string> ids,
                                  std::span<const double> eer_percent);

// Rank 1 = largest value; ties keep input order.
Ranking rank_descending(const ScoreVector& scores);

ArrangedScores arrange_by_ground_truth(const ScoreVector& scores,
                                       const Ranking& gt);

}  // namespace gbqa
