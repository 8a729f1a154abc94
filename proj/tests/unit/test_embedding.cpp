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

#include <gtest/gtest.h>

#include <cmath>

#include "gbqa/embedding.hpp"
#include "gbqa/errors.hpp"
#include "gbqa/parallel.hpp"
#include "gbqa/synth.hpp"
#include "support.hpp"

namespace gbqa {
namespace {

using test::Gen;
using test::random_rotation;
using test::random_set;
using test::transformed;

TEST(EmbeddingSet, RejectsBadRows) {
  EXPECT_THROW(EmbeddingSet(2, {0, 0}, {"g"}, {"i"}), ValidationError);
  EXPECT_THROW(EmbeddingSet(2, {1, NAN}, {"g"}, {"i"}), ValidationError);
  EXPECT_THROW(EmbeddingSet(2, {1, 0, 1}, {"g"}, {"i"}), ValidationError);
  EXPECT_THROW(EmbeddingSet(2, {1, 0}, {"g", "h"}, {"i"}), ValidationError);
  EXPECT_THROW(EmbeddingSet(0, {}, {}, {}), ValidationError);
}

TEST(EmbeddingSet, InternsLabelsAndNormalizes) {
  const EmbeddingSet emb(2, {3, 4, 0, 2, 1, 1}, {"b", "a", "b"}, {"x", "x", "y"});
  EXPECT_EQ(emb.gestures(), (std::vector<std::string>{"b", "a"}));
  EXPECT_EQ(emb.identities(), (std::vector<std::string>{"x", "y"}));
  EXPECT_DOUBLE_EQ(emb.unit_row(0)[0], 0.6);
  EXPECT_DOUBLE_EQ(emb.unit_row(0)[1], 0.8);
  EXPECT_EQ(emb.raw_row(0)[0], 3.0);
}

TEST(Gram, SymmetricUnitDiagonalAndMatchesReference) {
  Gen gen(31);
  const auto emb = random_set(gen, 40, 5, 3, 4);
  const auto g = gram_matrix(emb);
  const auto ref = gram_matrix_reference(emb);
  const std::size_t n = emb.size();
  for (std::size_t m = 0; m < n; ++m) {
    EXPECT_NEAR(g[m * n + m], 1.0, 1e-12);
    for (std::size_t k = 0; k < n; ++k) {
      EXPECT_EQ(g[m * n + k], g[k * n + m]);
      EXPECT_EQ(g[m * n + k], ref[m * n + k]);
    }
  }
}

TEST(Icgd, DuplicatePairIsOne) {
  const EmbeddingSet emb(3, {2, 0, 0, 5, 0, 0}, {"a", "b"}, {"x", "x"});
  EXPECT_EQ(icgd_score(emb), 1.0);
  EXPECT_EQ(icgd_score_reference(emb), 1.0);
}

TEST(Icgd, OrthogonalPairIsZero) {
  const EmbeddingSet emb(3, {1, 0, 0, 0, 4, 0}, {"a", "b"}, {"x", "x"});
  EXPECT_EQ(icgd_score(emb), 0.0);
  EXPECT_EQ(icgd_score_reference(emb), 0.0);
}

TEST(Icgd, NoCrossGesturePairsIsZero) {
  // Same gesture for one identity, different identities across gestures.
  const EmbeddingSet emb(2, {1, 0, 1, 0.1, 0.5, 1}, {"a", "a", "b"}, {"x", "x", "y"});
  EXPECT_EQ(icgd_score(emb), 0.0);
}

TEST(Icgd, NegativeSimilarityIsMaskedOut) {
  // Opposite vectors: masked out, identity contributes 0.
  const EmbeddingSet emb(2, {1, 0, -1, 0}, {"a", "b"}, {"x", "x"});
  EXPECT_EQ(icgd_score(emb), 0.0);
  const auto mask = icgd_masks(emb);
  EXPECT_FALSE(mask.at(0, 0, 1));
}

TEST(Icgd, EmptyIdentityContributesZero) {
  // Identity x: one duplicate cross-gesture pair (term 1); identity y: none.
  const EmbeddingSet emb(2, {1, 0, 1, 0, 0, 1}, {"a", "b", "a"}, {"x", "x", "y"});
  EXPECT_DOUBLE_EQ(icgd_score(emb), 0.5);
}

TEST(Icgd, MasksSymmetricZeroDiagonal) {
  Gen gen(32);
  const auto emb = random_set(gen, 30, 4, 3, 3);
  const auto mask = icgd_masks(emb);
  for (std::size_t i = 0; i < mask.per_identity.size(); ++i) {
    for (std::size_t m = 0; m < mask.n; ++m) {
      EXPECT_FALSE(mask.at(i, m, m));
      for (std::size_t k = 0; k < mask.n; ++k) {
        EXPECT_EQ(mask.at(i, m, k), mask.at(i, k, m));
      }
    }
  }
}

TEST(Icgd, BoundedAndMatchesReference) {
  Gen gen(33);
  for (int t = 0; t < 100; ++t) {
    const auto emb = random_set(gen, gen.integer(1, 60), gen.integer(1, 6),
                                gen.integer(1, 4), gen.integer(1, 5));
    const double c = icgd_score(emb);
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
    EXPECT_NEAR(c, icgd_score_reference(emb), 1e-12);
  }
}

TEST(Icgd, ThreadCountDoesNotChangeResult) {
  Gen gen(34);
  const auto emb = random_set(gen, 200, 8, 4, 5);
  parallel::set_threads(1);
  const double one = icgd_score(emb);
  parallel::set_threads(4);
  const double four = icgd_score(emb);
  parallel::set_threads(0);
  EXPECT_EQ(one, four);
}

TEST(Icgd, RotationAndScaleInvariant) {
  Gen gen(35);
  for (int t = 0; t < 30; ++t) {
    const std::size_t d = gen.integer(2, 8);
    const auto emb = random_set(gen, 50, d, 3, 4);
    std::vector<double> scale(emb.size());
    for (double& s : scale) s = gen.uniform(0.1, 10);
    const auto rotated = transformed(emb, random_rotation(gen, d), scale);
    EXPECT_NEAR(icgd_score(emb), icgd_score(rotated), 1e-9);
  }
}

TEST(Partition, TwoIdentitiesUnitApart) {
  // Unit vectors 60 degrees apart: chord length 1; zero within-spread.
  const double c = 0.5, s = std::sqrt(3.0) / 2.0;
  const EmbeddingSet emb(2, {1, 0, 1, 0, c, s, c, s}, {"g", "g", "g", "g"},
                         {"a", "a", "b", "b"});
  const auto p = uniqueness_variability(emb, "g");
  ASSERT_TRUE(p.uniqueness && p.variability);
  EXPECT_NEAR(*p.uniqueness, 1.0, 1e-12);
  EXPECT_NEAR(*p.variability, 0.0, 1e-12);
}

TEST(Partition, SymmetricSpreadGivesEpsilon) {
  // Samples at angle +-theta around an axis: distance to centroid is sin(theta).
  const double eps = 0.05, th = std::asin(eps);
  const EmbeddingSet emb(2,
                         {std::cos(th), std::sin(th), std::cos(th), -std::sin(th),
                          std::sin(th), std::cos(th), -std::sin(th), std::cos(th)},
                         {"g", "g", "g", "g"}, {"a", "a", "b", "b"});
  const auto p = uniqueness_variability(emb, "g");
  EXPECT_NEAR(*p.variability, eps, 1e-12);
}

TEST(Partition, IdenticalSamplesGiveZeros) {
  const EmbeddingSet emb(2, {1, 1, 1, 1, 1, 1, 1, 1}, {"g", "g", "g", "g"},
                         {"a", "a", "b", "b"});
  const auto p = uniqueness_variability(emb, "g");
  EXPECT_EQ(*p.uniqueness, 0.0);
  EXPECT_EQ(*p.variability, 0.0);
  EXPECT_THROW(dgbqa_scores(emb), SingularGeometryError);
  try {
    dgbqa_scores(emb);
  } catch (const SingularGeometryError& e) {
    EXPECT_EQ(e.gesture_id(), "g");
  }
}

TEST(Partition, InsufficientSamplesAreFlagged) {
  const EmbeddingSet emb(2, {1, 0, 0, 1}, {"g", "g"}, {"a", "b"});
  const auto p = uniqueness_variability(emb, "g");
  EXPECT_TRUE(p.uniqueness.has_value());
  EXPECT_FALSE(p.variability.has_value());
  EXPECT_THROW(dgbqa_scores(emb), ValidationError);
  EXPECT_THROW(uniqueness_variability(emb, "nope"), ValidationError);
}

TEST(Partition, RenormalizedCentroidsOnSphere) {
  const EmbeddingSet emb(2, {1, 0, 0, 1, -1, 0, 0, -1}, {"g", "g", "g", "g"},
                         {"a", "a", "b", "b"});
  // Arithmetic centroids (.5,.5) and (-.5,-.5); renormalized to the sphere.
  const auto arith = uniqueness_variability(emb, "g", CentroidMode::kArithmetic);
  const auto renorm = uniqueness_variability(emb, "g", CentroidMode::kRenormalized);
  EXPECT_NEAR(*arith.uniqueness, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(*renorm.uniqueness, 2.0, 1e-12);
}

TEST(Dgbqa, ScoreExamples) {
  EXPECT_DOUBLE_EQ(dgbqa_score(0.5, 0.5), 0.0);
  EXPECT_NEAR(dgbqa_score(1.0, 0.5), 1.1487212707001282, 1e-12);
  EXPECT_NEAR(dgbqa_score(1.0, 0.0), 2.718281828459045, 1e-12);
}

TEST(Dgbqa, SpreadLowersScores) {
  double prev = 1e9;
  for (double spread : {0.02, 0.1, 0.3}) {
    double mean = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      EmbeddingSpec spec;
      spec.spread = spread;
      spec.seed = seed;
      const auto s = dgbqa_scores(synth_embeddings(spec));
      for (double v : s.values) mean += v;
    }
    EXPECT_LT(mean, prev);
    prev = mean;
  }
}

}  // namespace
}  // namespace gbqa
