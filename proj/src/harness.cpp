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

#include "gbqa/harness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <numeric>
#include <set>
#include <unordered_map>

#include "gbqa/errors.hpp"
#include "gbqa/io.hpp"
#include "gbqa/parallel.hpp"
#include "gbqa/proposed.hpp"

namespace gbqa {
namespace {

constexpr std::array<MeasureInfo, 23> kCatalog = {{
    {"rank_dev", Direction::kMin},
    {"relevance", Direction::kMax},
    {"trend", Direction::kMin},
    {"icgd", Direction::kMin},
    {"acceptance", Direction::kMax},
    {"Ar_star", Direction::kMax},
    {"nAr_star", Direction::kMax},
    {"icgd_penalty", Direction::kMax},
    {"trend_penalty", Direction::kMax},
    {"acceptance_x_icgd_penalty", Direction::kMax},
    {"acceptance_x_trend_penalty", Direction::kMax},
    {"trend_penalty_x_icgd_penalty", Direction::kMax},
    {"relevance_x_icgd_penalty", Direction::kMax},
    {"rmse", Direction::kMin},
    {"cosine", Direction::kMax},
    {"dcg", Direction::kMax},
    {"kendall_tau", Direction::kMin},
    {"err", Direction::kMax},
    {"u_measure", Direction::kMax},
    {"gre", Direction::kMin},
    {"inf_ap", Direction::kMax},
    {"neg_rel_dcg", Direction::kMax},
    {"rpp", Direction::kMax},
}};

// Reorders `s` to the gesture order of `gt`; both must cover the same ids.
ScoreVector align_to(const ScoreVector& s, const ScoreVector& gt,
                     const std::string& run_id) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < s.size(); ++i) index.emplace(s.gesture_ids[i], i);
  std::vector<double> values;
  values.reserve(gt.size());
  for (const auto& id : gt.gesture_ids) {
    auto it = index.find(id);
    if (it == index.end()) {
      throw ValidationError("run '" + run_id + "' is missing gesture '" + id + "'");
    }
    values.push_back(s.values[it->second]);
  }
  if (s.size() != gt.size()) {
    std::set<std::string_view> known(gt.gesture_ids.begin(), gt.gesture_ids.end());
    for (const auto& id : s.gesture_ids) {
      if (!known.count(id)) {
        throw ValidationError("run '" + run_id + "' has gesture '" + id +
                              "' absent from the ground truth");
      }
    }
  }
  ScoreVector out = s;
  out.gesture_ids = gt.gesture_ids;
  out.values = std::move(values);
  return out;
}

void check_same_gestures(const ScoreVector& ref, const std::string& ref_id,
                         const ScoreVector& s, const std::string& run_id) {
  std::set<std::string_view> a(ref.gesture_ids.begin(), ref.gesture_ids.end());
  std::set<std::string_view> b(s.gesture_ids.begin(), s.gesture_ids.end());
  for (auto id : a) {
    if (!b.count(id)) {
      throw ValidationError("run '" + run_id + "' is missing gesture '" +
                            std::string(id) + "' present in run '" + ref_id + "'");
    }
  }
  for (auto id : b) {
    if (!a.count(id)) {
      throw ValidationError("run '" + run_id + "' has gesture '" + std::string(id) +
                            "' absent from run '" + ref_id + "'");
    }
  }
}

// Candidate scores for a run: explicit scores, else DGBQA scores from its
// embeddings.
std::optional<ScoreVector> candidate_scores(const ModelRun& run,
                                            const std::optional<ScoreVector>& gt,
                                            CentroidMode mode) {
  std::optional<ScoreVector> raw;
  if (run.raw_scores) {
    raw = *run.raw_scores;
  } else if (run.embeddings && gt) {
    raw = dgbqa_scores(*run.embeddings, mode);
  }
  if (!raw) return std::nullopt;
  if (gt) raw = align_to(*raw, *gt, run.run_id);
  return zscore_l2_normalize(*raw);
}

struct Derivation {
  std::string_view target;
  std::string_view a;
  std::string_view b;  // empty for single-input penalties
};

constexpr Derivation kDerivations[] = {
    {"icgd_penalty", "icgd", ""},
    {"trend_penalty", "trend", ""},
    {"acceptance_x_icgd_penalty", "acceptance", "icgd_penalty"},
    {"acceptance_x_trend_penalty", "acceptance", "trend_penalty"},
    {"trend_penalty_x_icgd_penalty", "trend_penalty", "icgd_penalty"},
    {"relevance_x_icgd_penalty", "relevance", "icgd_penalty"},
};

void derive_from_replayed(MeasureRecord& rec, const ModelRun& run,
                          const MeasureParams& params) {
  for (const auto& d : kDerivations) {
    if (run.precomputed.count(d.target)) continue;
    if (!rec.has(d.a) || (!d.b.empty() && !rec.has(d.b))) continue;
    const bool replayed_input =
        rec.values.find(d.a)->second.provenance != Provenance::kComputed ||
        (!d.b.empty() &&
         rec.values.find(d.b)->second.provenance != Provenance::kComputed);
    if (!replayed_input) continue;
    double v = 0.0;
    if (d.target == "icgd_penalty") {
      v = penalty_entanglement(rec.at("icgd"), params);
    } else if (d.target == "trend_penalty") {
      v = penalty_trend(rec.at("trend"), params);
    } else {
      v = rec.at(d.a) * rec.at(d.b);
    }
    rec.set(d.target, v, Provenance::kDerived);
  }
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> value_if(const MeasureRecord& rec, std::string_view m) {
  return rec.has(m) ? std::optional<double>(rec.at(m)) : std::nullopt;
}

}  // namespace

std::span<const MeasureInfo> measure_catalog() { return kCatalog; }

std::optional<Direction> measure_direction(std::string_view name) {
  for (const auto& info : kCatalog) {
    if (info.name == name) return info.direction;
  }
  return std::nullopt;
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::kComputed: return "computed";
    case Provenance::kReplayed: return "replayed";
    case Provenance::kDerived: return "derived";
  }
  return "?";
}

std::optional<Provenance> parse_provenance(std::string_view s) {
  if (s == "computed") return Provenance::kComputed;
  if (s == "replayed") return Provenance::kReplayed;
  if (s == "derived") return Provenance::kDerived;
  return std::nullopt;
}

bool MeasureRecord::has(std::string_view measure) const {
  return values.find(measure) != values.end();
}

double MeasureRecord::at(std::string_view measure) const {
  auto it = values.find(measure);
  if (it == values.end()) {
    throw ValidationError("run '" + run_id + "' has no value for measure '" +
                          std::string(measure) + "'");
  }
  return it->second.value;
}

void MeasureRecord::set(std::string_view measure, double value, Provenance p) {
  auto it = values.find(measure);
  if (it == values.end()) {
    values.emplace(std::string(measure), MeasureValue{value, p});
  } else {
    it->second = MeasureValue{value, p};
  }
}

RunSet load_runs(const LoadOptions& options) {
  if (!options.scores && !options.precomputed) {
    throw ValidationError("need a scores file or a precomputed-measures file");
  }
  RunSet set;
  if (options.ground_truth) {
    set.ground_truth = io::read_ground_truth_csv(*options.ground_truth);
  }

  std::unordered_map<std::string, std::size_t> index;
  if (options.scores) {
    auto named = io::read_scores_csv(*options.scores);
    for (auto& [run_id, scores] : named) {
      if (set.ground_truth) {
        scores = align_to(scores, *set.ground_truth, run_id);
      } else if (!set.runs.empty()) {
        check_same_gestures(*set.runs.front().raw_scores, set.runs.front().run_id,
                            scores, run_id);
      }
      index.emplace(run_id, set.runs.size());
      set.runs.push_back(ModelRun{run_id, std::move(scores), std::nullopt, {}});
    }
  }

  if (options.precomputed) {
    for (const auto& rec : io::read_records_csv(*options.precomputed)) {
      auto [it, inserted] = index.try_emplace(rec.run_id, set.runs.size());
      if (inserted) set.runs.push_back(ModelRun{rec.run_id, {}, {}, {}});
      auto& pre = set.runs[it->second].precomputed;
      for (const auto& [name, v] : rec.values) pre.emplace(name, v.value);
    }
  }

  if (options.embeddings_dir) {
    const auto& dir = *options.embeddings_dir;
    if (!std::filesystem::is_directory(dir)) {
      throw ValidationError("embeddings directory '" + dir.string() +
                            "' does not exist");
    }
    for (auto& run : set.runs) {
      const auto path = dir / (io::run_file_stem(run.run_id) + ".emb");
      if (!std::filesystem::exists(path)) continue;
      EmbeddingSet emb = io::read_embeddings(path);
      if (set.ground_truth) {
        for (const auto& g : emb.gestures()) {
          set.ground_truth->index_of(g);  // throws on an unknown gesture
        }
      }
      run.embeddings = std::move(emb);
    }
  }
  if (set.runs.empty()) throw ValidationError("no runs to evaluate");
  return set;
}

MeasureRecord evaluate_run(const ModelRun& run,
                           const std::optional<ScoreVector>& gt,
                           const EvalOptions& options) {
  const MeasureParams& params = options.params;
  params.validate();
  MeasureRecord rec;
  rec.run_id = run.run_id;
  constexpr auto kC = Provenance::kComputed;

  std::optional<double> icgd;
  if (run.embeddings) {
    icgd = icgd_score(*run.embeddings);
    rec.set("icgd", *icgd, kC);
    rec.set("icgd_penalty", penalty_entanglement(*icgd, params), kC);
  }

  if (gt) {
    if (auto delta = candidate_scores(run, gt, options.centroid)) {
      const ScoreComparison cmp = compare_scores(*delta, *gt, params);
      rec.set("rank_dev", cmp.rank_dev, kC);
      rec.set("relevance", cmp.relevance_sum, kC);
      const double acc = acceptance_from_terms(cmp.relevance, cmp.rank_diff, params);
      rec.set("acceptance", acc, kC);

      const double trend = cmp.trend ? cmp.trend->total : 0.0;
      if (cmp.trend) {
        rec.set("trend", trend, kC);
        rec.set("trend_penalty", penalty_trend(trend, params), kC);
        rec.set("acceptance_x_trend_penalty", acc * penalty_trend(trend, params), kC);
      }
      // Without embeddings C_d enters the aggregates as 0 (no discount).
      const double cd = icgd.value_or(0.0);
      const double ar_star =
          advanced_from_terms(cmp.relevance, cmp.rank_diff, trend, cd, params);
      rec.set("Ar_star", ar_star, kC);
      rec.set("nAr_star", ar_star / advanced_reference(*gt, params), kC);
      if (icgd) {
        const double cbar = penalty_entanglement(*icgd, params);
        rec.set("acceptance_x_icgd_penalty", acc * cbar, kC);
        rec.set("relevance_x_icgd_penalty", cmp.relevance_sum * cbar, kC);
        if (cmp.trend) {
          rec.set("trend_penalty_x_icgd_penalty", penalty_trend(trend, params) * cbar,
                  kC);
        }
      }
      for (auto kind : kAllBaselines) {
        rec.set(baseline_name(kind),
                baseline_measure(kind, *delta, *gt, options.grades), kC);
      }
    }
  }

  for (const auto& [name, value] : run.precomputed) {
    rec.set(name, value, Provenance::kReplayed);
  }
  if (!run.precomputed.empty()) derive_from_replayed(rec, run, params);

  rec.entanglement_available = rec.has("icgd");
  return rec;
}

std::vector<MeasureRecord> evaluate_runs(std::span<const ModelRun> runs,
                                         const std::optional<ScoreVector>& gt,
                                         const EvalOptions& options, int jobs) {
  const auto n = static_cast<std::ptrdiff_t>(runs.size());
  std::vector<MeasureRecord> out(runs.size());
  std::vector<std::exception_ptr> errors(runs.size());
  const int threads = jobs > 0 ? jobs : parallel::max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = evaluate_run(runs[i], gt, options);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

SelectionResult select_best(std::span<const MeasureRecord> records,
                            std::string_view measure, TieBreak tie_break) {
  const auto direction = measure_direction(measure);
  if (!direction) {
    throw ValidationError("unknown measure '" + std::string(measure) + "'");
  }
  if (records.empty()) throw ValidationError("select: no records");
  for (const auto& rec : records) {
    if (!rec.has(measure)) {
      throw ValidationError("select: run '" + rec.run_id + "' has no value for '" +
                            std::string(measure) + "'");
    }
  }
  const bool maximize = *direction == Direction::kMax;
  const MeasureRecord* best = &records.front();
  for (const auto& rec : records.subspan(1)) {
    const double v = rec.at(measure), b = best->at(measure);
    const bool better = maximize ? v > b : v < b;
    const bool tie_wins = v == b && tie_break == TieBreak::kLexicographic &&
                          rec.run_id < best->run_id;
    if (better || tie_wins) best = &rec;
  }
  SelectionResult out;
  out.measure = std::string(measure);
  out.winner = best->run_id;
  out.value = best->at(measure);
  out.rank_dev = value_if(*best, "rank_dev");
  out.relevance = value_if(*best, "relevance");
  out.trend = value_if(*best, "trend");
  out.icgd = value_if(*best, "icgd");
  return out;
}

std::vector<std::string> common_measures(std::span<const MeasureRecord> records) {
  std::vector<std::string> out;
  if (records.empty()) return out;
  for (const auto& info : kCatalog) {
    const bool everywhere = std::all_of(
        records.begin(), records.end(),
        [&](const MeasureRecord& r) { return r.has(info.name); });
    if (everywhere) out.emplace_back(info.name);
  }
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ValidationError("pearson: samples differ in length");
  }
  if (x.size() < 3) throw ValidationError("pearson: needs at least 3 samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedMeasureError("correlation undefined: zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ValidationError("spearman: samples differ in length");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

double correlation(std::span<const MeasureRecord> records,
                   std::string_view measure_x, std::string_view measure_y,
                   CorrelationMethod method) {
  if (records.size() < 3) {
    throw ValidationError("correlation: needs at least 3 records");
  }
  std::vector<double> x, y;
  for (const auto& rec : records) {
    x.push_back(rec.at(measure_x));
    y.push_back(rec.at(measure_y));
  }
  return method == CorrelationMethod::kPearson ? pearson(x, y) : spearman(x, y);
}

std::string_view sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::kLambda: return "lambda";
    case SweepParam::kKappa: return "kappa";
    case SweepParam::kNu: return "nu";
    case SweepParam::kBeta: return "beta";
  }
  return "?";
}

std::optional<SweepParam> parse_sweep_param(std::string_view name) {
  for (auto p : {SweepParam::kLambda, SweepParam::kKappa, SweepParam::kNu,
                 SweepParam::kBeta}) {
    if (sweep_param_name(p) == name) return p;
  }
  return std::nullopt;
}

std::vector<SweepPoint> ablation_sweep(const ModelRun& run, const ScoreVector& gt,
                                       SweepParam param,
                                       std::span<const double> grid,
                                       const EvalOptions& options) {
  if (grid.empty()) throw ValidationError("sweep: empty grid");
  options.params.validate();
  const auto delta = candidate_scores(run, gt, options.centroid);
  if (!delta) {
    throw ValidationError("sweep: run '" + run.run_id + "' has no scores");
  }
  double cd = 0.0;
  if (run.embeddings) {
    cd = icgd_score(*run.embeddings);
  } else if (auto it = run.precomputed.find("icgd"); it != run.precomputed.end()) {
    cd = it->second;
  }
  // Relevance depends on gamma only, so one comparison serves every point.
  const ScoreComparison cmp = compare_scores(*delta, gt, options.params);
  const double trend = cmp.trend ? cmp.trend->total : 0.0;

  std::vector<SweepPoint> out;
  for (double v : grid) {
    MeasureParams p = options.params;
    switch (param) {
      case SweepParam::kLambda: p.lambda = v; break;
      case SweepParam::kKappa: p.kappa = v; break;
      case SweepParam::kNu: p.nu = v; break;
      case SweepParam::kBeta: p.beta = v; break;
    }
    p.validate();
    const double ar = advanced_from_terms(cmp.relevance, cmp.rank_diff, trend, cd, p);
    out.push_back({v, ar / advanced_reference(gt, p)});
  }
  return out;
}

std::vector<CriteriaRow> criteria_table(std::span<const SelectionResult> rows,
                                        const MeasureParams& params) {
  auto column_max = [&](auto get) {
    std::optional<double> m;
    for (const auto& r : rows) {
      if (auto v = get(r)) m = m ? std::max(*m, *v) : *v;
    }
    return m;
  };
  auto rel_exp = [&](const SelectionResult& r) -> std::optional<double> {
    if (!r.relevance) return std::nullopt;
    return std::exp2(params.lambda * *r.relevance);
  };
  const auto max_rd = column_max([](const SelectionResult& r) { return r.rank_dev; });
  const auto max_rel = column_max(rel_exp);
  const auto max_tr = column_max([](const SelectionResult& r) { return r.trend; });
  const auto max_cd = column_max([](const SelectionResult& r) { return r.icgd; });

  auto scale = [](std::optional<double> v, std::optional<double> m) {
    if (!v) return std::optional<double>();
    return std::optional<double>(*m > 0.0 ? *v / *m : 0.0);
  };
  std::vector<CriteriaRow> out;
  for (const auto& r : rows) {
    out.push_back({r, scale(r.rank_dev, max_rd), scale(rel_exp(r), max_rel),
                   scale(r.trend, max_tr), scale(r.icgd, max_cd)});
  }
  return out;
}

}  // namespace gbqa
