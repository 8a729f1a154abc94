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

#include "gbqa/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "gbqa/errors.hpp"

namespace gbqa {

const char* to_string(ScoreState state) {
  switch (state) {
    case ScoreState::kRaw:
      return "raw";
    case ScoreState::kNormalized:
      return "normalized";
    case ScoreState::kGroundTruth:
      return "ground_truth";
  }
  return "unknown";
}

ScoreVector ScoreVector::raw(std::vector<std::string> ids,
                             std::vector<double> values) {
  ScoreVector out{std::move(ids), std::move(values), ScoreState::kRaw, false};
  out.validate();
  return out;
}

ScoreVector ScoreVector::prenormalized(std::vector<std::string> ids,
                                       std::vector<double> values,
                                       ScoreState state, double tolerance) {
  if (state == ScoreState::kRaw) {
    throw ValidationError("prenormalized: state must not be raw");
  }
  ScoreVector out{std::move(ids), std::move(values), state, false};
  out.degenerate = std::all_of(out.values.begin(), out.values.end(),
                               [](double v) { return v == 0.0; });
  out.validate(tolerance);
  return out;
}

std::size_t ScoreVector::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < gesture_ids.size(); ++i) {
    if (gesture_ids[i] == id) return i;
  }
  throw ValidationError("unknown gesture_id '" + std::string(id) + "'");
}

void ScoreVector::validate(double tolerance) const {
  if (values.empty()) throw ValidationError("score vector is empty");
  if (gesture_ids.size() != values.size()) {
    throw ValidationError("score vector: " + std::to_string(gesture_ids.size()) +
                          " ids for " + std::to_string(values.size()) +
                          " values");
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : gesture_ids) {
    if (!seen.insert(id).second) {
      throw ValidationError("duplicate gesture_id '" + id + "'");
    }
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError("non-finite score for gesture '" + gesture_ids[i] +
                            "'");
    }
  }
  if (state == ScoreState::kRaw || degenerate) return;

  double sum = 0.0, sq = 0.0;
  for (double v : values) {
    if (v < -1.0 - tolerance || v > 1.0 + tolerance) {
      throw ValidationError("normalized score outside [-1, 1]");
    }
    sum += v;
    sq += v * v;
  }
  if (std::abs(std::sqrt(sq) - 1.0) > tolerance) {
    throw ValidationError("normalized scores do not have unit norm");
  }
  if (std::abs(sum / static_cast<double>(values.size())) > tolerance) {
    throw ValidationError("normalized scores do not have zero mean");
  }
}

Ranking::Ranking(std::vector<std::string> gesture_ids, std::vector<int> ranks)
    : ids_(std::move(gesture_ids)), ranks_(std::move(ranks)) {
  const std::size_t g = ranks_.size();
  if (g == 0 || ids_.size() != g) {
    throw ValidationError("ranking: ids and ranks must be non-empty and equal "
                          "in length");
  }
  by_rank_.assign(g, g);
  for (std::size_t i = 0; i < g; ++i) {
    const int r = ranks_[i];
    if (r < 1 || static_cast<std::size_t>(r) > g || by_rank_[r - 1] != g) {
      throw ValidationError("ranking: ranks are not a bijection onto 1..G");
    }
    by_rank_[r - 1] = i;
    if (!index_.emplace(ids_[i], i).second) {
      throw ValidationError("ranking: duplicate gesture_id '" + ids_[i] + "'");
    }
  }
}

int Ranking::rank_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    throw ValidationError("ranking: unknown gesture_id '" + std::string(id) +
                          "'");
  }
  return ranks_[it->second];
}

bool Ranking::contains(std::string_view id) const {
  return index_.count(std::string(id)) > 0;
}

bool Ranking::covers_same_gestures(const Ranking& other) const {
  if (other.size() != size()) return false;
  return std::all_of(other.ids_.begin(), other.ids_.end(),
                     [this](const std::string& id) { return contains(id); });
}

const std::string& Ranking::gesture_at_rank(int r) const {
  if (r < 1 || static_cast<std::size_t>(r) > size()) {
    throw ValidationError("ranking: rank " + std::to_string(r) +
                          " out of range");
  }
  return ids_[by_rank_[r - 1]];
}

std::vector<double> ArrangedScores::restore() const {
  std::vector<double> out(values.size());
  for (std::size_t slot = 0; slot < values.size(); ++slot) {
    out[source_index[slot]] = values[slot];
  }
  return out;
}

void MeasureParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(lambda) || lambda <= 0.0) {
    throw ValidationError("lambda must be > 0");
  }
  if (!finite(gamma) || gamma <= 0.0) {
    throw ValidationError("gamma must be > 0");
  }
  if (!finite(kappa) || kappa < 0.0) {
    throw ValidationError("kappa must be >= 0");
  }
  if (!finite(nu) || nu < 0.0) throw ValidationError("nu must be >= 0");
  if (!finite(beta) || beta < 0.0) throw ValidationError("beta must be >= 0");
}

ScoreVector zscore_l2_normalize(const ScoreVector& raw) {
  raw.validate();
  const auto n = static_cast<double>(raw.size());
  ScoreVector out{raw.gesture_ids, std::vector<double>(raw.size(), 0.0),
                  ScoreState::kNormalized, false};

  const auto [lo, hi] = std::minmax_element(raw.values.begin(), raw.values.end());
  if (*lo == *hi) {
    out.degenerate = true;
    return out;
  }

  const double mean =
      std::accumulate(raw.values.begin(), raw.values.end(), 0.0) / n;
  double var = 0.0;
  for (double v : raw.values) var += (v - mean) * (v - mean);
  const double stddev = std::sqrt(var / n);

  double sq = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out.values[i] = (raw.values[i] - mean) / stddev;
    sq += out.values[i] * out.values[i];
  }
  const double norm = std::sqrt(sq);
  for (double& v : out.values) v /= norm;
  return out;
}

ScoreVector ground_truth_from_eer(std::vector<std::string> ids,
                                  std::span<const double> eer_percent) {
  std::vector<double> merit;
  merit.reserve(eer_percent.size());
  for (std::size_t i = 0; i < eer_percent.size(); ++i) {
    const double eer = eer_percent[i];
    if (!(eer >= 0.0 && eer <= 100.0)) {
      throw ValidationError("eer_percent outside [0, 100] for gesture '" +
                            (i < ids.size() ? ids[i] : std::to_string(i)) +
                            "'");
    }
    merit.push_back(100.0 - eer);
  }
  ScoreVector gt = zscore_l2_normalize(ScoreVector::raw(std::move(ids),
                                                        std::move(merit)));
  gt.state = ScoreState::kGroundTruth;
  return gt;
}

Ranking rank_descending(const ScoreVector& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores.values[a] > scores.values[b];
  });
  std::vector<int> ranks(scores.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    ranks[order[pos]] = static_cast<int>(pos) + 1;
  }
  return Ranking(scores.gesture_ids, std::move(ranks));
}

ArrangedScores arrange_by_ground_truth(const ScoreVector& scores,
                                       const Ranking& gt) {
  const std::size_t g = scores.size();
  if (gt.size() != g) {
    throw ValidationError("arrange: score vector and ground truth cover " +
                          std::to_string(g) + " vs " +
                          std::to_string(gt.size()) + " gestures");
  }
  ArrangedScores out;
  out.values.resize(g);
  out.gesture_ids.resize(g);
  out.source_index.resize(g);
  for (std::size_t slot = 0; slot < g; ++slot) {
    const int rank = static_cast<int>(g - slot);
    const std::string& id = gt.gesture_at_rank(rank);
    const std::size_t src = scores.index_of(id);
    out.values[slot] = scores.values[src];
    out.gesture_ids[slot] = id;
    out.source_index[slot] = src;
  }
  return out;
}

}  // namespace gbqa
