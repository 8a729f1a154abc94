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

#include "gbqa/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gbqa/errors.hpp"

namespace gbqa {
namespace {

struct Aligned {
  // Indexed by ground-truth gesture order.
  std::vector<double> delta;
  std::vector<double> gt;
  std::vector<int> delta_rank;
  std::vector<int> gt_rank;
  // position (0-based, candidate order) -> ground-truth gesture index
  std::vector<std::size_t> by_position;
};

Aligned align(const ScoreVector& delta, const ScoreVector& gt) {
  if (delta.size() != gt.size()) {
    throw ValidationError("baseline: score vectors cover " +
                          std::to_string(delta.size()) + " vs " +
                          std::to_string(gt.size()) + " gestures");
  }
  const std::size_t g = gt.size();
  Aligned a;
  a.delta.resize(g);
  a.gt = gt.values;
  for (std::size_t i = 0; i < g; ++i) {
    a.delta[i] = delta.values[delta.index_of(gt.gesture_ids[i])];
  }
  const ScoreVector reordered{gt.gesture_ids, a.delta, delta.state,
                              delta.degenerate};
  a.delta_rank = rank_descending(reordered).ranks();
  a.gt_rank = rank_descending(gt).ranks();
  a.by_position.resize(g);
  for (std::size_t i = 0; i < g; ++i) a.by_position[a.delta_rank[i] - 1] = i;
  return a;
}

double gain(double gt_score) { return (gt_score + 1.0) / 2.0; }

struct PairCounts {
  std::size_t concordant = 0;
  std::size_t discordant = 0;
  std::size_t total = 0;
};

PairCounts count_pairs(const Aligned& a) {
  const std::size_t g = a.gt.size();
  if (g < 2) {
    throw UndefinedMeasureError("pairwise measure needs at least two gestures");
  }
  PairCounts c;
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = i + 1; j < g; ++j) {
      const double s = (a.delta[i] - a.delta[j]) * (a.gt[i] - a.gt[j]);
      if (s > 0.0) ++c.concordant;
      if (s < 0.0) ++c.discordant;
      ++c.total;
    }
  }
  return c;
}

double discounted_sum(const Aligned& a, bool signed_gain) {
  double total = 0.0;
  for (std::size_t k = 0; k < a.by_position.size(); ++k) {
    const double e = a.gt[a.by_position[k]];
    total += (signed_gain ? e : gain(e)) / std::log2(static_cast<double>(k) + 2.0);
  }
  return total;
}

}  // namespace

std::string_view baseline_name(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kRmse:
      return "rmse";
    case BaselineKind::kCosine:
      return "cosine";
    case BaselineKind::kDcg:
      return "dcg";
    case BaselineKind::kKendallTau:
      return "kendall_tau";
    case BaselineKind::kErr:
      return "err";
    case BaselineKind::kUMeasure:
      return "u_measure";
    case BaselineKind::kGre:
      return "gre";
    case BaselineKind::kInfAp:
      return "inf_ap";
    case BaselineKind::kNegRelDcg:
      return "neg_rel_dcg";
    case BaselineKind::kRpp:
      return "rpp";
  }
  return "unknown";
}

std::optional<BaselineKind> parse_baseline(std::string_view name) {
  for (BaselineKind kind : kAllBaselines) {
    if (baseline_name(kind) == name) return kind;
  }
  return std::nullopt;
}

bool baseline_higher_is_better(BaselineKind kind) {
  return kind != BaselineKind::kRmse && kind != BaselineKind::kKendallTau &&
         kind != BaselineKind::kGre;
}

int GradeMap::grade(double score) const {
  if (g_max < 1) throw ValidationError("grade map: g_max must be >= 1");
  const long g = std::lround((score + 1.0) / 2.0 * g_max);
  return static_cast<int>(std::clamp<long>(g, 0, g_max));
}

double baseline_measure(BaselineKind kind, const ScoreVector& delta,
                        const ScoreVector& gt, const GradeMap& grades) {
  const Aligned a = align(delta, gt);
  const std::size_t g = a.gt.size();
  const auto gd = static_cast<double>(g);

  switch (kind) {
    case BaselineKind::kRmse: {
      double sq = 0.0;
      for (std::size_t i = 0; i < g; ++i) {
        sq += (a.delta[i] - a.gt[i]) * (a.delta[i] - a.gt[i]);
      }
      return std::sqrt(sq / gd);
    }
    case BaselineKind::kCosine: {
      // Explicit norms: sqrt(fl(x * x)) == x, so cosine(e, e) is exactly 1.
      double dot = 0.0, nd = 0.0, ne = 0.0;
      for (std::size_t i = 0; i < g; ++i) {
        dot += a.delta[i] * a.gt[i];
        nd += a.delta[i] * a.delta[i];
        ne += a.gt[i] * a.gt[i];
      }
      if (nd == 0.0 || ne == 0.0) return 0.0;  // degenerate (constant) scores
      return std::clamp(dot / std::sqrt(nd * ne), -1.0, 1.0);
    }
    case BaselineKind::kDcg:
      return discounted_sum(a, false);
    case BaselineKind::kNegRelDcg:
      return discounted_sum(a, true);
    case BaselineKind::kKendallTau:
      return static_cast<double>(count_pairs(a).discordant);
    case BaselineKind::kRpp: {
      const PairCounts c = count_pairs(a);
      return static_cast<double>(c.concordant) / static_cast<double>(c.total);
    }
    case BaselineKind::kErr: {
      const double denom = std::exp2(grades.g_max);
      double total = 0.0;
      double not_stopped = 1.0;
      for (std::size_t k = 0; k < g; ++k) {
        const int grade = grades.grade(a.gt[a.by_position[k]]);
        const double r = (std::exp2(grade) - 1.0) / denom;
        total += not_stopped * r / static_cast<double>(k + 1);
        not_stopped *= 1.0 - r;
      }
      return total;
    }
    case BaselineKind::kUMeasure: {
      double total = 0.0;
      for (std::size_t k = 0; k < g; ++k) {
        const double decay = std::max(0.0, 1.0 - static_cast<double>(k) / gd);
        total += gain(a.gt[a.by_position[k]]) * decay;
      }
      return total;
    }
    case BaselineKind::kGre: {
      double total = 0.0;
      for (std::size_t i = 0; i < g; ++i) {
        total += std::abs(a.delta_rank[i] - a.gt_rank[i]) /
                 std::log2(1.0 + a.gt_rank[i]);
      }
      return total;
    }
    case BaselineKind::kInfAp: {
      const int cutoff = static_cast<int>((g + 1) / 2);
      double precision_sum = 0.0;
      int hits = 0;
      for (std::size_t k = 0; k < g; ++k) {
        if (a.gt_rank[a.by_position[k]] <= cutoff) {
          ++hits;
          precision_sum += static_cast<double>(hits) / static_cast<double>(k + 1);
        }
      }
      return precision_sum / cutoff;
    }
  }
  throw ValidationError("unknown baseline kind");
}

}  // namespace gbqa
