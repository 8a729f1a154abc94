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

// Full-suite evaluation of candidate score sets, selection, correlation and
// scaling-factor sweeps.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gbqa/baselines.hpp"
#include "gbqa/core.hpp"
#include "gbqa/embedding.hpp"

namespace gbqa {

enum class Direction { kMax, kMin };

struct MeasureInfo {
  std::string_view name;
  Direction direction;
};

// Every measure a record can carry, in report column order.
std::span<const MeasureInfo> measure_catalog();
std::optional<Direction> measure_direction(std::string_view name);

enum class Provenance {
  kComputed,  // evaluated from scores / embeddings
  kReplayed,  // taken verbatim from a precomputed table
  kDerived,   // combined from replayed values (e.g. a penalty product)
};

const char* to_string(Provenance p);
std::optional<Provenance> parse_provenance(std::string_view s);

struct MeasureValue {
  double value = 0.0;
  Provenance provenance = Provenance::kComputed;
};

struct MeasureRecord {
  std::string run_id;
  // False when no embeddings (and no replayed icgd) were available; C_d then
  // enters the aggregates as 0.
  bool entanglement_available = false;
  std::map<std::string, MeasureValue, std::less<>> values;

  bool has(std::string_view measure) const;
  double at(std::string_view measure) const;
  void set(std::string_view measure, double value, Provenance p);
};

struct ModelRun {
  std::string run_id;
  std::optional<ScoreVector> raw_scores;
  std::optional<EmbeddingSet> embeddings;
  std::map<std::string, double, std::less<>> precomputed;
};

struct RunSet {
  std::vector<ModelRun> runs;
  std::optional<ScoreVector> ground_truth;
};

struct LoadOptions {
  std::optional<std::filesystem::path> scores;
  std::optional<std::filesystem::path> ground_truth;
  std::optional<std::filesystem::path> embeddings_dir;
  std::optional<std::filesystem::path> precomputed;
};

// Runs come from the scores file (first-appearance order), then any run only
// present in the precomputed file. Score vectors are reordered to the
// ground-truth gesture order. A run without a `<run_id>.emb` file under the
// embeddings directory loads with entanglement unavailable.
RunSet load_runs(const LoadOptions& options);

struct EvalOptions {
  MeasureParams params;
  GradeMap grades;
  CentroidMode centroid = CentroidMode::kArithmetic;
};

// Computes every measure the run's inputs allow. Precomputed values override
// computed ones and are flagged as replayed.
MeasureRecord evaluate_run(const ModelRun& run,
                           const std::optional<ScoreVector>& gt,
                           const EvalOptions& options);

// Evaluates runs on up to `jobs` threads (<= 0: runtime default); output
// order matches input order.
std::vector<MeasureRecord> evaluate_runs(std::span<const ModelRun> runs,
                                         const std::optional<ScoreVector>& gt,
                                         const EvalOptions& options,
                                         int jobs = 0);

enum class TieBreak {
  kInputOrder,     // first record in input order wins
  kLexicographic,  // smallest run_id wins
};

struct SelectionResult {
  std::string measure;
  std::string winner;
  double value = 0.0;
  std::optional<double> rank_dev;
  std::optional<double> relevance;
  std::optional<double> trend;
  std::optional<double> icgd;
};

SelectionResult select_best(std::span<const MeasureRecord> records,
                            std::string_view measure,
                            TieBreak tie_break = TieBreak::kInputOrder);

// Measures present in every record, in catalog order.
std::vector<std::string> common_measures(std::span<const MeasureRecord> records);

enum class CorrelationMethod { kPearson, kSpearman };

double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

double correlation(std::span<const MeasureRecord> records,
                   std::string_view measure_x, std::string_view measure_y,
                   CorrelationMethod method = CorrelationMethod::kPearson);

enum class SweepParam { kLambda, kKappa, kNu, kBeta };

std::string_view sweep_param_name(SweepParam p);
std::optional<SweepParam> parse_sweep_param(std::string_view name);

inline constexpr double kDefaultSweepGrid[] = {0.25, 0.5, 0.75, 1.0, 2.0, 4.0};

struct SweepPoint {
  double value = 0.0;
  double normalized_advanced = 0.0;
};

std::vector<SweepPoint> ablation_sweep(const ModelRun& run,
                                       const ScoreVector& gt, SweepParam param,
                                       std::span<const double> grid,
                                       const EvalOptions& options = {});

struct CriteriaRow {
  SelectionResult selection;
  // Each criterion divided by its largest value across the table; relevance
  // enters as 2^(lambda R).
  std::optional<double> rank_dev_scaled;
  std::optional<double> relevance_scaled;
  std::optional<double> trend_scaled;
  std::optional<double> icgd_scaled;
};

std::vector<CriteriaRow> criteria_table(std::span<const SelectionResult> rows,
                                        const MeasureParams& params);

}  // namespace gbqa
