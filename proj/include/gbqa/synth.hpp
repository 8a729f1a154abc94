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

// Seeded generators for perturbed score vectors and entanglement-tunable
// embedding sets.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "gbqa/core.hpp"
#include "gbqa/embedding.hpp"

namespace gbqa {

// std::mt19937_64 (bit-exact by the standard) with 53-bit uniforms and
// Box-Muller normals. Does not use std::normal_distribution, whose output is
// implementation-defined.
class Prng {
 public:
  static constexpr std::string_view kName = "mt19937_64/box-muller-v1";

  explicit Prng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double gaussian();
  // Uniform direction on the unit sphere in R^dim.
  std::vector<double> unit_direction(std::size_t dim);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

struct ScorePerturbation {
  int adjacent_swaps = 0;
  double noise_sigma = 0.0;
  // Rescaled scores are raised to the power (1 + trend_warp).
  double trend_warp = 0.0;
  std::uint64_t seed = 0;
};

// Applied in order: cascading adjacent swaps from the top of the ranking,
// additive Gaussian noise, min-max rescale and warp, then renormalization.
ScoreVector perturb_scores(const ScoreVector& gt, const ScorePerturbation& p);

struct EmbeddingSpec {
  std::size_t gestures = 4;
  std::size_t identities = 5;
  std::size_t samples_per_cell = 10;
  std::size_t dim = 16;
  double separation = 1.0;  // identity-centroid offset from the anchor
  double spread = 0.1;      // within-identity Gaussian noise
  double rho = 0.0;         // identity-direction sharing across gestures
  double anchor_norm = 1.0; // 0 puts every gesture anchor at the origin
  std::uint64_t seed = 0;
};

// Labels are "g1".."gG" and "id1".."idI"; rows are gesture-major, then
// identity, then sample, and are not normalized.
EmbeddingSet synth_embeddings(const EmbeddingSpec& spec);

// A family of runs degrading linearly from the ground truth: run t of T gets
// level t / (T - 1) of max swaps, noise and (with embeddings) rho.
struct FamilySpec {
  std::size_t runs = 24;
  std::size_t gestures = 8;
  int max_swaps = 6;
  double max_noise = 0.6;
  double max_rho = 0.9;
  bool with_embeddings = true;
  EmbeddingSpec embedding;  // gestures and seed are overridden per run
  std::uint64_t seed = 0;
};

struct SyntheticRun {
  std::string run_id;
  ScoreVector scores;  // normalized; ingested as raw scores
  std::optional<EmbeddingSet> embeddings;
};

struct SyntheticFamily {
  std::vector<std::string> gesture_ids;
  std::vector<double> eer_percent;
  ScoreVector ground_truth;
  std::vector<SyntheticRun> runs;
};

SyntheticFamily synth_family(const FamilySpec& spec);

}  // namespace gbqa
