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

#include "gbqa/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gbqa/errors.hpp"
#include "gbqa/harness.hpp"
#include "gbqa/io.hpp"
#include "gbqa/synth.hpp"

namespace gbqa {
namespace {

namespace fs = std::filesystem;

struct Common {
  MeasureParams params;
  int g_max = 4;
  std::string format = "csv";
  std::string output;
  bool timestamp = false;
  bool verbose = false;
  int jobs = 0;
  std::string centroid = "arithmetic";
};

struct Inputs {
  std::string scores;
  std::string ground_truth;
  std::string embeddings;
  std::string precomputed;
  std::string records;
};

void add_params(CLI::App* app, Common& c) {
  app->add_option("--lambda", c.params.lambda, "Relevance exponent scale (> 0)")
      ->capture_default_str();
  app->add_option("--kappa", c.params.kappa, "Rank penalty scale (>= 0)")
      ->capture_default_str();
  app->add_option("--nu", c.params.nu, "Trend penalty scale (>= 0)")
      ->capture_default_str();
  app->add_option("--beta", c.params.beta, "Entanglement penalty scale (>= 0)")
      ->capture_default_str();
  app->add_option("--gamma", c.params.gamma, "High-rank relevance weight (> 0)")
      ->capture_default_str();
  app->add_option("--g-max", c.g_max, "Largest relevance grade for the baselines")
      ->capture_default_str()
      ->check(CLI::Range(1, 30));
  app->add_option("--centroid", c.centroid, "Centroid mode for DGBQA scores")
      ->check(CLI::IsMember({"arithmetic", "renormalized"}))
      ->capture_default_str();
}

void add_output(CLI::App* app, Common& c) {
  app->add_option("--format", c.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app->add_option("-o,--output", c.output,
                  "Output file (default: $GBQA_OUTPUT_DIR/<command>.<ext>, "
                  "else standard output)");
  app->add_flag("--timestamp", c.timestamp,
                "Add a generation timestamp to JSON metadata");
  app->add_flag("-v,--verbose", c.verbose, "Progress notes on standard error");
}

void add_run_inputs(CLI::App* app, Inputs& in, bool gt_required) {
  app->add_option("--scores", in.scores, "Scores CSV (run_id,gesture_id,score)")
      ->check(CLI::ExistingFile);
  auto* gt = app->add_option("--ground-truth", in.ground_truth,
                             "Ground-truth CSV (gesture_id,eer_percent|gt_score)")
                 ->check(CLI::ExistingFile);
  if (gt_required) gt->required();
  app->add_option("--embeddings", in.embeddings,
                  "Directory of <run_id>.emb embedding files");
  app->add_option("--precomputed", in.precomputed,
                  "Precomputed measures CSV (run_id,measure,value)")
      ->check(CLI::ExistingFile);
}

EvalOptions eval_options(const Common& c) {
  c.params.validate();
  EvalOptions opts;
  opts.params = c.params;
  opts.grades.g_max = c.g_max;
  opts.centroid = c.centroid == "renormalized" ? CentroidMode::kRenormalized
                                               : CentroidMode::kArithmetic;
  return opts;
}

std::string utc_now() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

io::ReportMeta report_meta(const Common& c) {
  io::ReportMeta meta;
  meta.params = c.params;
  meta.g_max = c.g_max;
  if (c.timestamp) meta.timestamp = utc_now();
  return meta;
}

io::Format format_of(const Common& c) { return *io::parse_format(c.format); }

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ValidationError("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw ValidationError("failed writing '" + path.string() + "'");
}

void emit(const std::string& content, const Common& c, std::string_view command,
          std::ostream& out, std::ostream& err) {
  fs::path target;
  if (!c.output.empty()) {
    target = c.output;
  } else if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
    target = fs::path(dir) /
             (std::string(command) + "." + std::string(io::extension(format_of(c))));
  }
  if (target.empty()) {
    out << content;
    out.flush();
    return;
  }
  write_file(target, content);
  if (c.verbose) err << "wrote " << target.string() << '\n';
}

RunSet load(const Inputs& in) {
  LoadOptions lo;
  if (!in.scores.empty()) lo.scores = in.scores;
  if (!in.ground_truth.empty()) lo.ground_truth = in.ground_truth;
  if (!in.embeddings.empty()) lo.embeddings_dir = in.embeddings;
  if (!in.precomputed.empty()) lo.precomputed = in.precomputed;
  return load_runs(lo);
}

std::vector<MeasureRecord> obtain_records(const Inputs& in, const Common& c,
                                          std::ostream& err) {
  if (!in.records.empty()) {
    if (!in.scores.empty() || !in.precomputed.empty()) {
      throw ValidationError("--records cannot be combined with --scores or "
                            "--precomputed");
    }
    auto records = io::read_records_csv(in.records);
    if (c.verbose) err << "read " << records.size() << " records\n";
    return records;
  }
  const RunSet set = load(in);
  if (c.verbose) err << "evaluating " << set.runs.size() << " runs\n";
  return evaluate_runs(set.runs, set.ground_truth, eval_options(c), c.jobs);
}

std::vector<CriteriaRow> select_table(std::span<const MeasureRecord> records,
                                      std::vector<std::string> measures,
                                      TieBreak tie, const MeasureParams& params) {
  if (measures.empty()) measures = common_measures(records);
  if (measures.empty()) throw ValidationError("no measure is present in every run");
  std::vector<SelectionResult> rows;
  for (const auto& m : measures) rows.push_back(select_best(records, m, tie));
  return criteria_table(rows, params);
}

TieBreak parse_tie(const std::string& s) {
  return s == "lexicographic" ? TieBreak::kLexicographic : TieBreak::kInputOrder;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Gesture biometric quality measures", "gbqa"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "gbqa 0.1.0");

  Common c;
  Inputs in;

  // normalize
  auto* normalize = app.add_subcommand("normalize", "Z-score and l2-normalize score vectors");
  normalize->add_option("--scores", in.scores, "Scores CSV")
      ->required()
      ->check(CLI::ExistingFile);
  add_output(normalize, c);

  // measure
  auto* measure = app.add_subcommand("measure", "Evaluate every measure for each run");
  add_run_inputs(measure, in, true);
  add_params(measure, c);
  add_output(measure, c);
  measure->add_option("--jobs", c.jobs, "Worker threads (0: runtime default)")
      ->check(CLI::NonNegativeNumber);

  // select
  std::vector<std::string> select_measures;
  std::string tie = "input_order";
  auto* select = app.add_subcommand("select", "Pick the best run per measure");
  add_run_inputs(select, in, false);
  select->add_option("--records", in.records, "Records CSV written by `measure`")
      ->check(CLI::ExistingFile);
  select->add_option("--measure", select_measures,
                     "Measure(s) to select on (default: all available)");
  select->add_option("--tie-break", tie, "Tie-break rule")
      ->check(CLI::IsMember({"input_order", "lexicographic"}))
      ->capture_default_str();
  add_params(select, c);
  add_output(select, c);
  select->add_option("--jobs", c.jobs, "Worker threads (0: runtime default)")
      ->check(CLI::NonNegativeNumber);

  // sweep
  std::string sweep_param;
  std::string sweep_run;
  std::vector<double> sweep_values(std::begin(kDefaultSweepGrid),
                                   std::end(kDefaultSweepGrid));
  auto* sweep = app.add_subcommand("sweep", "Vary one scaling factor and report nAr_star");
  add_run_inputs(sweep, in, true);
  sweep->add_option("--param", sweep_param, "Factor to vary")
      ->required()
      ->check(CLI::IsMember({"lambda", "kappa", "nu", "beta"}));
  sweep->add_option("--run", sweep_run, "Run to sweep (default: first run)");
  sweep->add_option("--values", sweep_values, "Grid values, comma-separated")
      ->delimiter(',');
  add_params(sweep, c);
  add_output(sweep, c);

  // correlate
  std::vector<std::string> corr_measures;
  std::string method = "pearson";
  auto* correlate = app.add_subcommand("correlate", "Correlation matrix across runs");
  add_run_inputs(correlate, in, false);
  correlate->add_option("--records", in.records, "Records CSV written by `measure`")
      ->check(CLI::ExistingFile);
  correlate->add_option("--measure", corr_measures,
                        "Measures to include (default: all available)");
  correlate->add_option("--method", method, "Correlation coefficient")
      ->check(CLI::IsMember({"pearson", "spearman"}))
      ->capture_default_str();
  add_params(correlate, c);
  add_output(correlate, c);
  correlate->add_option("--jobs", c.jobs, "Worker threads (0: runtime default)")
      ->check(CLI::NonNegativeNumber);

  // synth
  FamilySpec fam;
  std::string synth_dir;
  std::string emb_format = "text";
  bool no_embeddings = false;
  auto* synth = app.add_subcommand("synth", "Write a synthetic degradation family");
  synth->add_option("--out-dir", synth_dir,
                    "Destination directory (default: $GBQA_OUTPUT_DIR)");
  synth->add_option("--seed", fam.seed, "Generator seed")->capture_default_str();
  synth->add_option("--runs", fam.runs, "Number of runs")
      ->capture_default_str()
      ->check(CLI::Range(1, 10000));
  synth->add_option("--gestures", fam.gestures, "Gestures per run")
      ->capture_default_str()
      ->check(CLI::Range(2, 1000));
  synth->add_option("--identities", fam.embedding.identities, "Identities")
      ->capture_default_str()
      ->check(CLI::Range(1, 10000));
  synth->add_option("--samples", fam.embedding.samples_per_cell,
                    "Samples per (gesture, identity) cell")
      ->capture_default_str()
      ->check(CLI::Range(1, 100000));
  synth->add_option("--dim", fam.embedding.dim, "Embedding dimension")
      ->capture_default_str()
      ->check(CLI::Range(1, 4096));
  synth->add_option("--max-swaps", fam.max_swaps, "Swaps at the last run")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--max-noise", fam.max_noise, "Noise sigma at the last run")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--max-rho", fam.max_rho, "Entanglement rho at the last run")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  synth->add_flag("--no-embeddings", no_embeddings, "Write scores only");
  synth->add_option("--embedding-format", emb_format, "Embedding file format")
      ->check(CLI::IsMember({"text", "binary"}))
      ->capture_default_str();
  synth->add_flag("-v,--verbose", c.verbose, "Progress notes on standard error");

  // replay
  std::vector<std::string> replay_measures;
  auto* replay = app.add_subcommand("replay",
                                    "Selection table from precomputed measure values");
  replay->add_option("--precomputed", in.precomputed, "Precomputed measures CSV")
      ->required()
      ->check(CLI::ExistingFile);
  replay->add_option("--measure", replay_measures,
                     "Measure(s) to select on (default: all available)");
  replay->add_option("--tie-break", tie, "Tie-break rule")
      ->check(CLI::IsMember({"input_order", "lexicographic"}))
      ->capture_default_str();
  add_params(replay, c);
  add_output(replay, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    err << app.help();
    return kExitValidation;
  }

  try {
    io::ReportMeta meta = report_meta(c);
    meta.tie_break = tie;
    meta.correlation = method;

    if (normalize->parsed()) {
      io::NamedScores runs = io::read_scores_csv(in.scores);
      for (auto& [id, s] : runs) {
        s = zscore_l2_normalize(s);
        if (s.degenerate) err << "warning: run '" << id << "' has constant scores\n";
      }
      std::ostringstream buf;
      io::write_normalized(buf, format_of(c), runs, meta);
      emit(buf.str(), c, "normalize", out, err);
    } else if (measure->parsed()) {
      const RunSet set = load(in);
      if (c.verbose) err << "evaluating " << set.runs.size() << " runs\n";
      const auto records =
          evaluate_runs(set.runs, set.ground_truth, eval_options(c), c.jobs);
      std::ostringstream buf;
      io::write_records(buf, format_of(c), records, meta);
      emit(buf.str(), c, "measure", out, err);
    } else if (select->parsed()) {
      const auto records = obtain_records(in, c, err);
      const auto table =
          select_table(records, select_measures, parse_tie(tie), c.params);
      std::ostringstream buf;
      io::write_criteria(buf, format_of(c), table, meta);
      emit(buf.str(), c, "select", out, err);
    } else if (sweep->parsed()) {
      const RunSet set = load(in);
      const ModelRun* run = &set.runs.front();
      if (!sweep_run.empty()) {
        run = nullptr;
        for (const auto& r : set.runs) {
          if (r.run_id == sweep_run) run = &r;
        }
        if (!run) throw ValidationError("no run named '" + sweep_run + "'");
      }
      const SweepParam param = *parse_sweep_param(sweep_param);
      const auto points = ablation_sweep(*run, *set.ground_truth, param,
                                         sweep_values, eval_options(c));
      std::ostringstream buf;
      io::write_sweep(buf, format_of(c), run->run_id, param, points, meta);
      emit(buf.str(), c, "sweep", out, err);
    } else if (correlate->parsed()) {
      const auto records = obtain_records(in, c, err);
      if (corr_measures.empty()) corr_measures = common_measures(records);
      const auto kind = method == "spearman" ? CorrelationMethod::kSpearman
                                             : CorrelationMethod::kPearson;
      const std::size_t m = corr_measures.size();
      std::vector<std::vector<std::optional<double>>> matrix(
          m, std::vector<std::optional<double>>(m));
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          try {
            matrix[i][j] = correlation(records, corr_measures[i], corr_measures[j], kind);
          } catch (const UndefinedMeasureError&) {
            if (i <= j) {
              err << "warning: correlation of " << corr_measures[i] << " and "
                  << corr_measures[j] << " is undefined (zero variance)\n";
            }
          }
        }
      }
      std::ostringstream buf;
      io::write_correlation(buf, format_of(c), corr_measures, matrix, meta);
      emit(buf.str(), c, "correlate", out, err);
    } else if (synth->parsed()) {
      fs::path dir = synth_dir;
      if (dir.empty()) {
        const char* env = std::getenv(kOutputDirEnv);
        if (!env || !*env) {
          throw ValidationError(std::string("synth needs --out-dir or ") +
                                kOutputDirEnv);
        }
        dir = env;
      }
      fam.with_embeddings = !no_embeddings;
      const SyntheticFamily family = synth_family(fam);

      std::ostringstream gt;
      io::write_ground_truth_eer_csv(gt, family.gesture_ids, family.eer_percent);
      write_file(dir / "ground_truth.csv", gt.str());

      io::NamedScores named;
      for (const auto& run : family.runs) named.emplace_back(run.run_id, run.scores);
      std::ostringstream scores;
      io::write_scores_csv(scores, named, true);
      write_file(dir / "scores.csv", scores.str());

      if (fam.with_embeddings) {
        for (const auto& run : family.runs) {
          std::ostringstream buf;
          if (emb_format == "binary") {
            io::write_embeddings_binary(buf, *run.embeddings);
          } else {
            io::write_embeddings_text(buf, *run.embeddings);
          }
          write_file(dir / "embeddings" / (io::run_file_stem(run.run_id) + ".emb"),
                     buf.str());
        }
      }
      if (c.verbose) {
        err << "wrote " << family.runs.size() << " runs to " << dir.string() << '\n';
      }
    } else if (replay->parsed()) {
      const RunSet set = load(in);
      const auto records =
          evaluate_runs(set.runs, std::nullopt, eval_options(c), 1);
      const auto table =
          select_table(records, replay_measures, parse_tie(tie), c.params);
      std::ostringstream buf;
      io::write_criteria(buf, format_of(c), table, meta);
      emit(buf.str(), c, "replay", out, err);
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const UndefinedMeasureError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const SingularGeometryError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace gbqa
