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

// File formats: score / ground-truth / precomputed CSVs, embedding files
// (text and binary) and the CSV / JSON reports. See docs/formats.md.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gbqa/core.hpp"
#include "gbqa/embedding.hpp"
#include "gbqa/harness.hpp"

namespace gbqa::io {

// ---- CSV -----------------------------------------------------------------

struct CsvTable {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // 1-based source line of each row
};

// RFC 4180 quoting, optional UTF-8 BOM, LF or CRLF. Blank lines are skipped.
CsvTable read_csv(std::istream& in, std::string source);
CsvTable read_csv_file(const std::filesystem::path& path);

std::string csv_field(std::string_view s);

// Six significant digits, trailing zeros kept ("1.00000").
std::string format_report(double v);
// Round-trip precision for data files.
std::string format_exact(double v);

using NamedScores = std::vector<std::pair<std::string, ScoreVector>>;

// `run_id,gesture_id,score`; runs and gestures in first-appearance order.
NamedScores read_scores_csv(const std::filesystem::path& path);
void write_scores_csv(std::ostream& out, const NamedScores& runs,
                      bool exact = false);

// `gesture_id,eer_percent` (converted) or `gesture_id,gt_score` (taken as
// already normalized, checked to 1e-6).
ScoreVector read_ground_truth_csv(const std::filesystem::path& path);
void write_ground_truth_eer_csv(std::ostream& out,
                                std::span<const std::string> ids,
                                std::span<const double> eer_percent);

// `run_id,measure,value[,provenance]`. Without a provenance column every
// value is replayed. A row with an empty value and provenance `unavailable`
// marks the measure as unavailable for that run.
std::vector<MeasureRecord> read_records_csv(const std::filesystem::path& path);

// ---- embeddings ----------------------------------------------------------

// 16-byte magic that opens a binary embedding file.
inline constexpr char kEmbeddingMagic[17] = "GBQA-EMBEDDING01";

// Text or binary, sniffed from the first 16 bytes.
EmbeddingSet read_embeddings(const std::filesystem::path& path);
EmbeddingSet read_embeddings_text(std::istream& in, const std::string& source);
EmbeddingSet read_embeddings_binary(std::istream& in, const std::string& source);
void write_embeddings_text(std::ostream& out, const EmbeddingSet& emb);
void write_embeddings_binary(std::ostream& out, const EmbeddingSet& emb);

// Characters outside [A-Za-z0-9._-(), ] become '_'.
std::string run_file_stem(std::string_view run_id);

// ---- reports -------------------------------------------------------------

enum class Format { kCsv, kJson };

std::optional<Format> parse_format(std::string_view s);
std::string_view extension(Format f);

struct ReportMeta {
  MeasureParams params;
  int g_max = 4;
  std::string correlation = "pearson";
  std::string tie_break = "input_order";
  std::optional<std::string> timestamp;
};

void write_records(std::ostream& out, Format f,
                   std::span<const MeasureRecord> records,
                   const ReportMeta& meta);
void write_criteria(std::ostream& out, Format f,
                    std::span<const CriteriaRow> rows, const ReportMeta& meta);
void write_sweep(std::ostream& out, Format f, const std::string& run_id,
                 SweepParam param, std::span<const SweepPoint> points,
                 const ReportMeta& meta);
// Entries without a value (undefined correlation) are left empty / null.
void write_correlation(
    std::ostream& out, Format f, std::span<const std::string> measures,
    const std::vector<std::vector<std::optional<double>>>& matrix,
    const ReportMeta& meta);
void write_normalized(std::ostream& out, Format f, const NamedScores& runs,
                      const ReportMeta& meta);

}  // namespace gbqa::io
