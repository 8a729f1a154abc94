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


// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <vector>

#include "gbqa/embedding.hpp"
#include "gbqa/harness.hpp"
#include "gbqa/parallel.hpp"
#include "gbqa/synth.hpp"

namespace {

gbqa::EmbeddingSet make_set(std::size_t samples) {
  gbqa::EmbeddingSpec spec;
  spec.gestures = 8;
  spec.identities = 8;
  spec.samples_per_cell = samples;
  spec.dim = 64;
  spec.rho = 0.5;
  spec.seed = 11;
  return gbqa::synth_embeddings(spec);
}

void BM_IcgdReference(benchmark::State& state) {
  const auto emb = make_set(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gbqa::icgd_score_reference(emb));
  state.SetItemsProcessed(state.iterations() * emb.size() * emb.size());
}

void BM_IcgdParallel(benchmark::State& state) {
  const auto emb = make_set(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gbqa::icgd_score(emb));
  state.SetItemsProcessed(state.iterations() * emb.size() * emb.size());
}

void BM_GramReference(benchmark::State& state) {
  const auto emb = make_set(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gbqa::gram_matrix_reference(emb));
}

void BM_GramParallel(benchmark::State& state) {
  const auto emb = make_set(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gbqa::gram_matrix(emb));
}

void BM_EvaluateRuns(benchmark::State& state) {
  gbqa::FamilySpec spec;
  spec.runs = 16;
  spec.embedding.identities = 4;
  spec.embedding.samples_per_cell = 6;
  spec.embedding.dim = 32;
  spec.seed = 3;
  const auto family = gbqa::synth_family(spec);
  std::vector<gbqa::ModelRun> runs;
  for (const auto& r : family.runs) {
    runs.push_back({r.run_id, r.scores, r.embeddings, {}});
  }
  const std::optional<gbqa::ScoreVector> gt = family.ground_truth;
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gbqa::evaluate_runs(runs, gt, {}, jobs));
  }
}

BENCHMARK(BM_IcgdReference)->Arg(4)->Arg(16);
BENCHMARK(BM_IcgdParallel)->Arg(4)->Arg(16);
BENCHMARK(BM_GramReference)->Arg(4)->Arg(16);
BENCHMARK(BM_GramParallel)->Arg(4)->Arg(16);
// 1: serial; 0: runtime default thread count.
BENCHMARK(BM_EvaluateRuns)->Arg(1)->Arg(0);

}  // namespace

BENCHMARK_MAIN();
