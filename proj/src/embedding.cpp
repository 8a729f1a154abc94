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

#include "gbqa/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "gbqa/errors.hpp"

namespace gbqa {
namespace {

// Cosine of two unit rows, clamped against rounding past +-1.
double unit_dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return std::clamp(s, -1.0, 1.0);
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

std::uint32_t intern(const std::string& label, std::vector<std::string>& table,
                     std::unordered_map<std::string, std::uint32_t>& index) {
  auto [it, inserted] =
      index.emplace(label, static_cast<std::uint32_t>(table.size()));
  if (inserted) table.push_back(label);
  return it->second;
}

// Rows grouped by identity, each group in row order.
std::vector<std::vector<std::size_t>> rows_by_identity(const EmbeddingSet& emb) {
  std::vector<std::vector<std::size_t>> groups(emb.identities().size());
  for (std::size_t m = 0; m < emb.size(); ++m) {
    groups[emb.identity_of()[m]].push_back(m);
  }
  return groups;
}

}  // namespace

EmbeddingSet::EmbeddingSet(std::size_t dim, std::vector<double> rows,
                           std::vector<std::string> gesture_labels,
                           std::vector<std::string> identity_labels)
    : dim_(dim), raw_(std::move(rows)) {
  if (dim_ == 0) throw ValidationError("embedding dimension must be >= 1");
  const std::size_t n = gesture_labels.size();
  if (n == 0) throw ValidationError("embedding set is empty");
  if (identity_labels.size() != n || raw_.size() != n * dim_) {
    throw ValidationError("embedding set: " + std::to_string(n) +
                          " gesture labels, " +
                          std::to_string(identity_labels.size()) +
                          " identity labels and " +
                          std::to_string(raw_.size()) + " values for d = " +
                          std::to_string(dim_));
  }

  std::unordered_map<std::string, std::uint32_t> g_index, i_index;
  gesture_of_.reserve(n);
  identity_of_.reserve(n);
  for (std::size_t m = 0; m < n; ++m) {
    gesture_of_.push_back(intern(gesture_labels[m], gestures_, g_index));
    identity_of_.push_back(intern(identity_labels[m], identities_, i_index));
  }

  unit_.resize(raw_.size());
  for (std::size_t m = 0; m < n; ++m) {
    double sq = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double v = raw_[m * dim_ + k];
      if (!std::isfinite(v)) {
        throw ValidationError("embedding row " + std::to_string(m) +
                              " has a non-finite entry");
      }
      sq += v * v;
    }
    if (sq == 0.0) {
      throw ValidationError("embedding row " + std::to_string(m) +
                            " has zero norm");
    }
    const double norm = std::sqrt(sq);
    for (std::size_t k = 0; k < dim_; ++k) {
      unit_[m * dim_ + k] = raw_[m * dim_ + k] / norm;
    }
  }
}

std::vector<double> gram_matrix(const EmbeddingSet& emb) {
  const auto n = static_cast<std::int64_t>(emb.size());
  std::vector<double> gram(emb.size() * emb.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t m = 0; m < n; ++m) {
    gram[m * n + m] = unit_dot(emb.unit_row(m), emb.unit_row(m));
    for (std::int64_t k = m + 1; k < n; ++k) {
      const double s = unit_dot(emb.unit_row(m), emb.unit_row(k));
      gram[m * n + k] = s;
      gram[k * n + m] = s;
    }
  }
  return gram;
}

std::vector<double> gram_matrix_reference(const EmbeddingSet& emb) {
  const std::size_t n = emb.size();
  std::vector<double> gram(n * n);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < n; ++k) {
      gram[m * n + k] = unit_dot(emb.unit_row(m), emb.unit_row(k));
    }
  }
  return gram;
}

IcgdMask icgd_masks(const EmbeddingSet& emb) {
  const std::size_t n = emb.size();
  const std::vector<double> gram = gram_matrix_reference(emb);
  IcgdMask mask;
  mask.n = n;
  mask.per_identity.assign(emb.identities().size(),
                           std::vector<std::uint8_t>(n * n, 0));
  const auto& gesture = emb.gesture_of();
  const auto& identity = emb.identity_of();
  for (std::size_t i = 0; i < emb.identities().size(); ++i) {
    auto& mi = mask.per_identity[i];
    for (std::size_t m = 0; m < n; ++m) {
      for (std::size_t k = 0; k < n; ++k) {
        mi[m * n + k] = m != k && gram[m * n + k] >= 0.0 &&
                        identity[m] == i && identity[k] == i &&
                        gesture[m] != gesture[k];
      }
    }
  }
  return mask;
}

double icgd_score_reference(const EmbeddingSet& emb) {
  const std::size_t n = emb.size();
  const std::vector<double> gram = gram_matrix_reference(emb);
  const IcgdMask mask = icgd_masks(emb);
  double total = 0.0;
  for (const auto& mi : mask.per_identity) {
    double masked = 0.0;
    double count = 0.0;
    for (std::size_t idx = 0; idx < n * n; ++idx) {
      masked += gram[idx] * mi[idx];
      count += mi[idx];
    }
    total += count > 0.0 ? masked / count : 0.0;
  }
  return total / static_cast<double>(emb.identities().size());
}

double icgd_score(const EmbeddingSet& emb) {
  const auto groups = rows_by_identity(emb);
  const auto& gesture = emb.gesture_of();
  const auto& identity = emb.identity_of();
  const auto n = static_cast<std::int64_t>(emb.size());

  // Per-row partials, reduced serially below so the result does not depend
  // on the thread count.
  std::vector<double> row_sum(emb.size(), 0.0);
  std::vector<std::size_t> row_count(emb.size(), 0);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t m = 0; m < n; ++m) {
    double s = 0.0;
    std::size_t c = 0;
    for (std::size_t k : groups[identity[m]]) {
      if (gesture[k] == gesture[m]) continue;
      const double dot = unit_dot(emb.unit_row(m), emb.unit_row(k));
      if (dot >= 0.0) {
        s += dot;
        ++c;
      }
    }
    row_sum[m] = s;
    row_count[m] = c;
  }

  double total = 0.0;
  for (const auto& rows : groups) {
    double s = 0.0;
    std::size_t c = 0;
    for (std::size_t m : rows) {
      s += row_sum[m];
      c += row_count[m];
    }
    if (c > 0) total += s / static_cast<double>(c);
  }
  return total / static_cast<double>(groups.size());
}

GesturePartition uniqueness_variability(const EmbeddingSet& emb,
                                        std::string_view gesture,
                                        CentroidMode mode) {
  const auto& gestures = emb.gestures();
  const auto git = std::find(gestures.begin(), gestures.end(), gesture);
  if (git == gestures.end()) {
    throw ValidationError("gesture '" + std::string(gesture) +
                          "' has no embedding rows");
  }
  const auto g = static_cast<std::uint32_t>(git - gestures.begin());
  const std::size_t d = emb.dim();

  // Identity clusters inside this gesture, in first-appearance order.
  std::vector<std::uint32_t> ids;
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t m = 0; m < emb.size(); ++m) {
    if (emb.gesture_of()[m] != g) continue;
    const std::uint32_t id = emb.identity_of()[m];
    auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) {
      ids.push_back(id);
      members.emplace_back();
      it = ids.end() - 1;
    }
    members[it - ids.begin()].push_back(m);
  }

  std::vector<std::vector<double>> centroids(ids.size(),
                                             std::vector<double>(d, 0.0));
  for (std::size_t c = 0; c < ids.size(); ++c) {
    for (std::size_t m : members[c]) {
      const auto row = emb.unit_row(m);
      for (std::size_t k = 0; k < d; ++k) centroids[c][k] += row[k];
    }
    for (double& v : centroids[c]) v /= static_cast<double>(members[c].size());
    if (mode == CentroidMode::kRenormalized) {
      double sq = 0.0;
      for (double v : centroids[c]) sq += v * v;
      if (sq > 0.0) {
        const double norm = std::sqrt(sq);
        for (double& v : centroids[c]) v /= norm;
      }
    }
  }

  GesturePartition out{std::string(gesture), std::nullopt, std::nullopt};
  if (ids.size() >= 2) {
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < ids.size(); ++a) {
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        sum += distance(centroids[a], centroids[b]);
        ++pairs;
      }
    }
    out.uniqueness = sum / static_cast<double>(pairs);
  }

  double spread_sum = 0.0;
  std::size_t spread_ids = 0;
  for (std::size_t c = 0; c < ids.size(); ++c) {
    if (members[c].size() < 2) continue;
    double s = 0.0;
    for (std::size_t m : members[c]) s += distance(emb.unit_row(m), centroids[c]);
    spread_sum += s / static_cast<double>(members[c].size());
    ++spread_ids;
  }
  if (spread_ids > 0) {
    out.variability = spread_sum / static_cast<double>(spread_ids);
  }
  return out;
}

double dgbqa_score(double uniqueness, double variability) {
  return std::exp(uniqueness - variability) - variability / uniqueness;
}

ScoreVector dgbqa_scores(const EmbeddingSet& emb, CentroidMode mode) {
  const auto& gestures = emb.gestures();
  const auto count = static_cast<std::int64_t>(gestures.size());
  std::vector<GesturePartition> parts(gestures.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t j = 0; j < count; ++j) {
    parts[j] = uniqueness_variability(emb, gestures[j], mode);
  }

  std::vector<double> values;
  values.reserve(parts.size());
  for (const auto& p : parts) {
    if (!p.uniqueness) {
      throw ValidationError("gesture '" + p.gesture +
                            "' needs at least two identities for uniqueness");
    }
    if (!p.variability) {
      throw ValidationError(
          "gesture '" + p.gesture +
          "' needs an identity with at least two samples for variability");
    }
    if (*p.uniqueness == 0.0) throw SingularGeometryError(p.gesture);
    values.push_back(dgbqa_score(*p.uniqueness, *p.variability));
  }
  return ScoreVector::raw(gestures, std::move(values));
}

}  // namespace gbqa
