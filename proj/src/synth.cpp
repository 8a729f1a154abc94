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

#include "gbqa/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

#include "gbqa/errors.hpp"

namespace gbqa {

double Prng::gaussian() {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  return r * std::cos(theta);
}

std::vector<double> Prng::unit_direction(std::size_t dim) {
  std::vector<double> v(dim);
  double sq = 0.0;
  do {
    sq = 0.0;
    for (double& x : v) {
      x = gaussian();
      sq += x * x;
    }
  } while (sq == 0.0);
  const double norm = std::sqrt(sq);
  for (double& x : v) x /= norm;
  return v;
}

ScoreVector perturb_scores(const ScoreVector& gt, const ScorePerturbation& p) {
  if (gt.state == ScoreState::kRaw || gt.degenerate) {
    throw ValidationError("perturb_scores: needs a non-degenerate normalized "
                          "score vector");
  }
  if (p.adjacent_swaps < 0 || !(p.noise_sigma >= 0.0) || !(p.trend_warp >= 0.0)) {
    throw ValidationError("perturb_scores: perturbation knobs must be >= 0");
  }
  const std::size_t g = gt.size();
  std::vector<double> v = gt.values;

  if (g >= 2) {
    const Ranking ranking = rank_descending(gt);
    std::vector<std::size_t> order(g);
    for (std::size_t i = 0; i < g; ++i) order[ranking.ranks()[i] - 1] = i;
    // Swapping position k with k + 1 for k = 0, 1, ... walks the top score
    // down the ranking one step per swap.
    for (int s = 0; s < p.adjacent_swaps; ++s) {
      const std::size_t k = static_cast<std::size_t>(s) % (g - 1);
      std::swap(v[order[k]], v[order[k + 1]]);
    }
  }

  if (p.noise_sigma > 0.0) {
    Prng rng(p.seed);
    for (double& x : v) x += p.noise_sigma * rng.gaussian();
  }

  if (p.trend_warp > 0.0) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double low = *lo, range = *hi - *lo;
    if (range > 0.0) {
      for (double& x : v) x = std::pow((x - low) / range, 1.0 + p.trend_warp);
    }
  }

  return zscore_l2_normalize(ScoreVector::raw(gt.gesture_ids, std::move(v)));
}

EmbeddingSet synth_embeddings(const EmbeddingSpec& spec) {
  if (spec.gestures == 0 || spec.identities == 0 || spec.samples_per_cell == 0 ||
      spec.dim == 0) {
    throw ValidationError("synth_embeddings: sizes must be positive");
  }
  if (!(spec.rho >= 0.0 && spec.rho <= 1.0)) {
    throw ValidationError("synth_embeddings: rho must lie in [0, 1]");
  }
  if (!(spec.separation >= 0.0) || !(spec.spread >= 0.0) ||
      !(spec.anchor_norm >= 0.0)) {
    throw ValidationError("synth_embeddings: scales must be >= 0");
  }

  Prng rng(spec.seed);
  const std::size_t d = spec.dim;
  std::vector<std::vector<double>> anchors, shared, own;
  for (std::size_t g = 0; g < spec.gestures; ++g) {
    anchors.push_back(rng.unit_direction(d));
  }
  for (std::size_t i = 0; i < spec.identities; ++i) {
    shared.push_back(rng.unit_direction(d));
  }
  for (std::size_t c = 0; c < spec.gestures * spec.identities; ++c) {
    own.push_back(rng.unit_direction(d));
  }

  const double private_weight = std::sqrt(1.0 - spec.rho * spec.rho);
  const std::size_t n = spec.gestures * spec.identities * spec.samples_per_cell;
  std::vector<double> rows;
  rows.reserve(n * d);
  std::vector<std::string> gesture_labels, identity_labels;
  gesture_labels.reserve(n);
  identity_labels.reserve(n);

  std::vector<double> centroid(d);
  for (std::size_t g = 0; g < spec.gestures; ++g) {
    for (std::size_t i = 0; i < spec.identities; ++i) {
      const auto& priv = own[g * spec.identities + i];
      for (std::size_t k = 0; k < d; ++k) {
        centroid[k] = spec.anchor_norm * anchors[g][k] +
                      spec.separation *
                          (spec.rho * shared[i][k] + private_weight * priv[k]);
      }
      for (std::size_t s = 0; s < spec.samples_per_cell; ++s) {
        for (std::size_t k = 0; k < d; ++k) {
          rows.push_back(centroid[k] + spec.spread * rng.gaussian());
        }
        gesture_labels.push_back("g" + std::to_string(g + 1));
        identity_labels.push_back("id" + std::to_string(i + 1));
      }
    }
  }
  return EmbeddingSet(d, std::move(rows), std::move(gesture_labels),
                      std::move(identity_labels));
}

SyntheticFamily synth_family(const FamilySpec& spec) {
  if (spec.runs == 0 || spec.gestures < 2) {
    throw ValidationError("synth_family: needs >= 1 run and >= 2 gestures");
  }
  Prng rng(spec.seed);
  SyntheticFamily family;
  for (std::size_t g = 0; g < spec.gestures; ++g) {
    family.gesture_ids.push_back("g" + std::to_string(g + 1));
    family.eer_percent.push_back(2.0 + 38.0 * rng.uniform());
  }
  family.ground_truth =
      ground_truth_from_eer(family.gesture_ids, family.eer_percent);

  const int width = spec.runs > 100 ? 3 : 2;
  for (std::size_t t = 0; t < spec.runs; ++t) {
    const double level =
        spec.runs > 1 ? static_cast<double>(t) / static_cast<double>(spec.runs - 1)
                      : 0.0;
    char id[32];
    std::snprintf(id, sizeof(id), "synth-%0*zu", width, t);

    ScorePerturbation p;
    p.adjacent_swaps = static_cast<int>(std::lround(level * spec.max_swaps));
    p.noise_sigma = level * spec.max_noise;
    p.seed = rng.next();
    SyntheticRun run{id, perturb_scores(family.ground_truth, p), std::nullopt};

    if (spec.with_embeddings) {
      EmbeddingSpec es = spec.embedding;
      es.gestures = spec.gestures;
      es.rho = level * spec.max_rho;
      es.seed = rng.next();
      run.embeddings = synth_embeddings(es);
    }
    family.runs.push_back(std::move(run));
  }
  return family;
}

}  // namespace gbqa
