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

// Retrieval-quality measures adapted to (candidate, ground truth) score
// pairs. Positions k = 1..G follow the candidate's descending ranking; gains
// and grades come from the ground truth of the gesture at each position.

#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "gbqa/core.hpp"

namespace gbqa {

// Bumped whenever an adaptation formula changes; reports carry it.
inline constexpr std::string_view kBaselineAdaptationVersion = "baselines-v1";

enum class BaselineKind {
  kRmse,
  kCosine,
  kDcg,
  kKendallTau,
  kErr,
  kUMeasure,
  kGre,
  kInfAp,
  kNegRelDcg,
  kRpp,
};

inline constexpr std::array<BaselineKind, 10> kAllBaselines = {
    BaselineKind::kRmse,   BaselineKind::kCosine,   BaselineKind::kDcg,
    BaselineKind::kKendallTau, BaselineKind::kErr,  BaselineKind::kUMeasure,
    BaselineKind::kGre,    BaselineKind::kInfAp,    BaselineKind::kNegRelDcg,
    BaselineKind::kRpp,
};

std::string_view baseline_name(BaselineKind kind);
std::optional<BaselineKind> parse_baseline(std::string_view name);

// rmse, kendall_tau and gre are better when smaller.
bool baseline_higher_is_better(BaselineKind kind);

// grade(s) = round((s + 1) / 2 * g_max), clamped to [0, g_max].
struct GradeMap {
  int g_max = 4;

  int grade(double score) const;
};

double baseline_measure(BaselineKind kind, const ScoreVector& delta,
                        const ScoreVector& gt, const GradeMap& grades = {});

}  // namespace gbqa
