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

// Embedding-level quantities: Gram matrix, cross-gesture entanglement
// (ICGD), per-gesture uniqueness/variability and the DGBQA scores built on
// them.
//
// Every kernel comes in two flavours. The plain name is the OpenMP kernel
// used by the harness; the `_reference` variant is a serial, literal
// transcription kept for tests and benchmarks. Both return identical values
// up to floating-point summation order.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gbqa/core.hpp"

namespace gbqa {

// N labelled feature rows of dimension d. Rows are unit-normalized on
// construction; the raw rows are kept for export.
class EmbeddingSet {
 public:
  EmbeddingSet(std::size_t dim, std::vector<double> rows,
               std::vector<std::string> gesture_labels,
               std::vector<std::string> identity_labels);

  std::size_t size() const { return gesture_of_.size(); }
  std::size_t dim() const { return dim_; }

  std::span<const double> raw_row(std::size_t i) const {
    return {raw_.data() + i * dim_, dim_};
  }
  std::span<const double> unit_row(std::size_t i) const {
    return {unit_.data() + i * dim_, dim_};
  }

  // Distinct labels in first-appearance order.
  const std::vector<std::string>& gestures() const { return gestures_; }
  const std::vector<std::string>& identities() const { return identities_; }

  // Per-row indices into gestures() / identities().
  const std::vector<std::uint32_t>& gesture_of() const { return gesture_of_; }
  const std::vector<std::uint32_t>& identity_of() const { return identity_of_; }

  const std::string& gesture_label(std::size_t row) const {
    return gestures_[gesture_of_[row]];
  }
  const std::string& identity_label(std::size_t row) const {
    return identities_[identity_of_[row]];
  }

 private:
  std::size_t dim_;
  std::vector<double> raw_;
  std::vector<double> unit_;
  std::vector<std::string> gestures_;
  std::vector<std::string> identities_;
  std::vector<std::uint32_t> gesture_of_;
  std::vector<std::uint32_t> identity_of_;
};

// Row-major N x N matrix of unit-row dot products.
std::vector<double> gram_matrix(const EmbeddingSet& emb);
std::vector<double> gram_matrix_reference(const EmbeddingSet& emb);

// Per-identity binary masks: entry (m, n) is set iff m != n, the unit rows
// have a non-negative dot product, and both rows carry identity i but
// different gestures.
struct IcgdMask {
  std::size_t n = 0;
  std::vector<std::vector<std::uint8_t>> per_identity;

  bool at(std::size_t identity, std::size_t m, std::size_t k) const {
    return per_identity[identity][m * n + k] != 0;
  }
};

IcgdMask icgd_masks(const EmbeddingSet& emb);

// Mean over identities of the mean masked similarity. An identity with an
// empty mask contributes 0. Result lies in [0, 1].
double icgd_score(const EmbeddingSet& emb);
double icgd_score_reference(const EmbeddingSet& emb);

enum class CentroidMode {
  kArithmetic,    // plain mean of the unit rows
  kRenormalized,  // mean projected back onto the unit sphere
};

struct GesturePartition {
  std::string gesture;
  // Mean pairwise distance between identity centroids; needs >= 2
  // identities.
  std::optional<double> uniqueness;
  // Mean over identities with >= 2 samples of the mean sample-to-centroid
  // distance.
  std::optional<double> variability;
};

GesturePartition uniqueness_variability(
    const EmbeddingSet& emb, std::string_view gesture,
    CentroidMode mode = CentroidMode::kArithmetic);

// exp(d_UNQ - d_VRB) - d_VRB / d_UNQ for a single gesture.
double dgbqa_score(double uniqueness, double variability);

// One raw score per gesture, in first-appearance order. Throws
// ValidationError when a gesture lacks the samples for either quantity and
// SingularGeometryError when its uniqueness is zero.
ScoreVector dgbqa_scores(const EmbeddingSet& emb,
                         CentroidMode mode = CentroidMode::kArithmetic);

}  // namespace gbqa
