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

#include "gbqa/io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "gbqa/errors.hpp"

namespace gbqa::io {
namespace {

using Json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const std::string& source, std::size_t line,
                       const std::string& what) {
  throw ValidationError(source + ":" + std::to_string(line) + ": " + what);
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

double require_double(std::string_view s, const std::string& source,
                      std::size_t line, std::string_view column) {
  auto v = parse_double(s);
  if (!v) {
    fail(source, line,
         "column '" + std::string(column) + "': '" + std::string(s) +
             "' is not a finite decimal number");
  }
  return *v;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  return in;
}

void expect_header(const CsvTable& t, std::initializer_list<std::string_view> cols) {
  const std::vector<std::string_view> want(cols);
  bool ok = t.header.size() == want.size();
  for (std::size_t i = 0; ok && i < want.size(); ++i) {
    ok = trim(t.header[i]) == want[i];
  }
  if (!ok) {
    std::string expected;
    for (auto c : want) expected += (expected.empty() ? "" : ",") + std::string(c);
    fail(t.source, 1, "expected header '" + expected + "'");
  }
}

void check_width(const CsvTable& t, std::size_t r, std::size_t width) {
  if (t.rows[r].size() != width) {
    fail(t.source, t.lines[r],
         "expected " + std::to_string(width) + " columns, found " +
             std::to_string(t.rows[r].size()));
  }
}

double round_report(double v) { return std::stod(format_report(v)); }

Json opt_number(const std::optional<double>& v) {
  return v ? Json(round_report(*v)) : Json(nullptr);
}

std::string opt_field(const std::optional<double>& v) {
  return v ? format_report(*v) : std::string();
}

Json meta_json(const ReportMeta& meta) {
  Json m;
  m["params"] = {{"lambda", meta.params.lambda}, {"kappa", meta.params.kappa},
                 {"nu", meta.params.nu},         {"beta", meta.params.beta},
                 {"gamma", meta.params.gamma}};
  m["g_max"] = meta.g_max;
  m["baseline_adaptation"] = std::string(kBaselineAdaptationVersion);
  m["correlation"] = meta.correlation;
  m["tie_break"] = meta.tie_break;
  if (meta.timestamp) m["timestamp"] = *meta.timestamp;
  return m;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_u64(std::ostream& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(std::istream& in, int bytes, const std::string& source) {
  std::array<unsigned char, 8> buf{};
  in.read(reinterpret_cast<char*>(buf.data()), bytes);
  if (in.gcount() != bytes) {
    throw ValidationError(source + ": truncated binary embedding file");
  }
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

std::string get_string(std::istream& in, const std::string& source) {
  const auto len = static_cast<std::size_t>(get_le(in, 4, source));
  if (len > (1u << 20)) throw ValidationError(source + ": label too long");
  std::string s(len, '\0');
  in.read(s.data(), static_cast<std::streamsize>(len));
  if (static_cast<std::size_t>(in.gcount()) != len) {
    throw ValidationError(source + ": truncated binary embedding file");
  }
  return s;
}

}  // namespace

// ---- CSV -----------------------------------------------------------------

CsvTable read_csv(std::istream& in, std::string source) {
  CsvTable table;
  table.source = std::move(source);
  std::string line;
  std::size_t line_no = 0;
  bool first_record = true;

  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t record_line = line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;

    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    while (true) {
      if (i == line.size()) {
        if (!quoted) break;
        // Quoted field spanning lines.
        std::string next;
        if (!std::getline(in, next)) {
          fail(table.source, record_line, "unterminated quoted field");
        }
        ++line_no;
        if (!next.empty() && next.back() == '\r') next.pop_back();
        field += '\n';
        line = next;
        i = 0;
        continue;
      }
      const char c = line[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field += '"';
            ++i;
          } else {
            quoted = false;
          }
        } else {
          field += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else {
        field += c;
      }
      ++i;
    }
    fields.push_back(std::move(field));

    if (first_record) {
      table.header = std::move(fields);
      first_record = false;
    } else {
      table.rows.push_back(std::move(fields));
      table.lines.push_back(record_line);
    }
  }
  if (first_record) throw ValidationError(table.source + ": empty file");
  return table;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_csv(in, path.string());
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_report(double v) {
  if (v == 0.0) v = 0.0;  // no "-0.00000"
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%#.6g", v);
  return buf;
}

std::string format_exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

NamedScores read_scores_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv_file(path);
  expect_header(t, {"run_id", "gesture_id", "score"});

  std::vector<std::string> order;
  std::unordered_map<std::string, std::pair<std::vector<std::string>,
                                            std::vector<double>>> runs;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    check_width(t, r, 3);
    const std::string run_id(trim(t.rows[r][0]));
    const std::string gesture(trim(t.rows[r][1]));
    if (run_id.empty() || gesture.empty()) {
      fail(t.source, t.lines[r], "empty run_id or gesture_id");
    }
    const double score = require_double(t.rows[r][2], t.source, t.lines[r], "score");
    if (!seen.emplace(run_id, gesture).second) {
      fail(t.source, t.lines[r],
           "duplicate row for run '" + run_id + "', gesture '" + gesture + "'");
    }
    auto [it, inserted] = runs.try_emplace(run_id);
    if (inserted) order.push_back(run_id);
    it->second.first.push_back(gesture);
    it->second.second.push_back(score);
  }
  if (order.empty()) throw ValidationError(t.source + ": no score rows");

  NamedScores out;
  for (const auto& id : order) {
    auto& [ids, values] = runs.at(id);
    out.emplace_back(id, ScoreVector::raw(std::move(ids), std::move(values)));
  }
  return out;
}

void write_scores_csv(std::ostream& out, const NamedScores& runs, bool exact) {
  out << "run_id,gesture_id,score\n";
  for (const auto& [run_id, scores] : runs) {
    for (std::size_t i = 0; i < scores.size(); ++i) {
      out << csv_field(run_id) << ',' << csv_field(scores.gesture_ids[i]) << ','
          << (exact ? format_exact(scores.values[i])
                    : format_report(scores.values[i]))
          << '\n';
    }
  }
}

ScoreVector read_ground_truth_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv_file(path);
  if (t.header.size() != 2 || trim(t.header[0]) != "gesture_id" ||
      (trim(t.header[1]) != "eer_percent" && trim(t.header[1]) != "gt_score")) {
    fail(t.source, 1, "expected header 'gesture_id,eer_percent' or "
                      "'gesture_id,gt_score'");
  }
  const bool eer = trim(t.header[1]) == "eer_percent";
  std::vector<std::string> ids;
  std::vector<double> values;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    check_width(t, r, 2);
    ids.emplace_back(trim(t.rows[r][0]));
    if (ids.back().empty()) fail(t.source, t.lines[r], "empty gesture_id");
    values.push_back(require_double(t.rows[r][1], t.source, t.lines[r],
                                    eer ? "eer_percent" : "gt_score"));
    if (eer && !(values.back() >= 0.0 && values.back() <= 100.0)) {
      fail(t.source, t.lines[r], "eer_percent outside [0, 100]");
    }
  }
  if (ids.empty()) throw ValidationError(t.source + ": no ground-truth rows");
  try {
    if (eer) return ground_truth_from_eer(std::move(ids), values);
    return ScoreVector::prenormalized(std::move(ids), std::move(values),
                                      ScoreState::kGroundTruth, 1e-6);
  } catch (const ValidationError& e) {
    throw ValidationError(t.source + ": " + e.what());
  }
}

void write_ground_truth_eer_csv(std::ostream& out,
                                std::span<const std::string> ids,
                                std::span<const double> eer_percent) {
  out << "gesture_id,eer_percent\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << csv_field(ids[i]) << ',' << format_exact(eer_percent[i]) << '\n';
  }
}

std::vector<MeasureRecord> read_records_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv_file(path);
  const bool with_provenance = t.header.size() == 4;
  if (with_provenance) {
    expect_header(t, {"run_id", "measure", "value", "provenance"});
  } else {
    expect_header(t, {"run_id", "measure", "value"});
  }

  std::vector<MeasureRecord> records;
  std::unordered_map<std::string, std::size_t> index;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    check_width(t, r, t.header.size());
    const std::string run_id(trim(t.rows[r][0]));
    const std::string measure(trim(t.rows[r][1]));
    if (run_id.empty()) fail(t.source, t.lines[r], "empty run_id");
    if (!measure_direction(measure)) {
      fail(t.source, t.lines[r], "unknown measure '" + measure + "'");
    }
    if (!seen.emplace(run_id, measure).second) {
      fail(t.source, t.lines[r], "duplicate value for run '" + run_id +
                                     "', measure '" + measure + "'");
    }
    auto [it, inserted] = index.try_emplace(run_id, records.size());
    if (inserted) records.push_back(MeasureRecord{run_id, false, {}});
    MeasureRecord& rec = records[it->second];

    const std::string prov_text =
        with_provenance ? std::string(trim(t.rows[r][3])) : "replayed";
    if (prov_text == "unavailable") {
      if (!trim(t.rows[r][2]).empty()) {
        fail(t.source, t.lines[r], "unavailable measure must have an empty value");
      }
      continue;
    }
    const auto prov = parse_provenance(prov_text);
    if (!prov) fail(t.source, t.lines[r], "unknown provenance '" + prov_text + "'");
    rec.set(measure, require_double(t.rows[r][2], t.source, t.lines[r], "value"),
            *prov);
  }
  if (records.empty()) throw ValidationError(t.source + ": no measure rows");
  for (auto& rec : records) rec.entanglement_available = rec.has("icgd");
  return records;
}

// ---- embeddings ----------------------------------------------------------

EmbeddingSet read_embeddings(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  char magic[16] = {};
  in.read(magic, 16);
  const bool binary =
      in.gcount() == 16 && std::memcmp(magic, kEmbeddingMagic, 16) == 0;
  in.clear();
  in.seekg(0);
  return binary ? read_embeddings_binary(in, path.string())
                : read_embeddings_text(in, path.string());
}

EmbeddingSet read_embeddings_text(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!trim(line).empty()) return true;
    }
    return false;
  };
  if (!next_line()) throw ValidationError(source + ": empty embedding file");

  std::istringstream head{std::string(trim(line))};
  long long n = -1, d = -1;
  std::string extra;
  if (!(head >> n >> d) || (head >> extra) || n < 1 || d < 1) {
    fail(source, line_no, "expected header 'N d' with N, d >= 1");
  }

  std::vector<double> rows;
  rows.reserve(static_cast<std::size_t>(n * d));
  std::vector<std::string> gestures, identities;
  for (long long m = 0; m < n; ++m) {
    if (!next_line()) {
      fail(source, line_no, "expected " + std::to_string(n) + " rows, found " +
                                std::to_string(m));
    }
    std::istringstream row{line};
    std::vector<std::string> tokens;
    for (std::string tok; row >> tok;) tokens.push_back(tok);
    if (tokens.size() != static_cast<std::size_t>(d) + 2) {
      fail(source, line_no, "expected " + std::to_string(d + 2) +
                                " fields, found " + std::to_string(tokens.size()));
    }
    gestures.push_back(tokens[0]);
    identities.push_back(tokens[1]);
    for (long long k = 0; k < d; ++k) {
      rows.push_back(require_double(tokens[k + 2], source, line_no,
                                    "v" + std::to_string(k + 1)));
    }
  }
  if (next_line()) fail(source, line_no, "unexpected extra row");
  try {
    return EmbeddingSet(static_cast<std::size_t>(d), std::move(rows),
                        std::move(gestures), std::move(identities));
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
}

EmbeddingSet read_embeddings_binary(std::istream& in, const std::string& source) {
  char magic[16] = {};
  in.read(magic, 16);
  if (in.gcount() != 16 || std::memcmp(magic, kEmbeddingMagic, 16) != 0) {
    throw ValidationError(source + ": bad binary embedding magic");
  }
  const std::uint64_t n = get_le(in, 8, source);
  const std::uint64_t d = get_le(in, 8, source);
  if (n < 1 || d < 1 || n > (1ull << 32) || d > (1ull << 24)) {
    throw ValidationError(source + ": implausible N or d in binary header");
  }
  std::vector<double> rows;
  std::vector<std::string> gestures, identities;
  for (std::uint64_t m = 0; m < n; ++m) {
    gestures.push_back(get_string(in, source));
    identities.push_back(get_string(in, source));
    for (std::uint64_t k = 0; k < d; ++k) {
      rows.push_back(std::bit_cast<double>(get_le(in, 8, source)));
    }
  }
  try {
    return EmbeddingSet(d, std::move(rows), std::move(gestures),
                        std::move(identities));
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
}

void write_embeddings_text(std::ostream& out, const EmbeddingSet& emb) {
  out << emb.size() << ' ' << emb.dim() << '\n';
  for (std::size_t m = 0; m < emb.size(); ++m) {
    out << emb.gesture_label(m) << ' ' << emb.identity_label(m);
    for (double v : emb.raw_row(m)) out << ' ' << format_exact(v);
    out << '\n';
  }
}

void write_embeddings_binary(std::ostream& out, const EmbeddingSet& emb) {
  out.write(kEmbeddingMagic, 16);
  put_u64(out, emb.size());
  put_u64(out, emb.dim());
  for (std::size_t m = 0; m < emb.size(); ++m) {
    for (const std::string* s : {&emb.gesture_label(m), &emb.identity_label(m)}) {
      put_u32(out, static_cast<std::uint32_t>(s->size()));
      out.write(s->data(), static_cast<std::streamsize>(s->size()));
    }
    for (double v : emb.raw_row(m)) put_u64(out, std::bit_cast<std::uint64_t>(v));
  }
}

std::string run_file_stem(std::string_view run_id) {
  std::string out;
  for (char c : run_id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') ||
                    std::strchr("._-(), ", c) != nullptr;
    out += ok && c != '\0' ? c : '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

// ---- reports -------------------------------------------------------------

std::optional<Format> parse_format(std::string_view s) {
  if (s == "csv") return Format::kCsv;
  if (s == "json") return Format::kJson;
  return std::nullopt;
}

std::string_view extension(Format f) { return f == Format::kCsv ? "csv" : "json"; }

void write_records(std::ostream& out, Format f,
                   std::span<const MeasureRecord> records,
                   const ReportMeta& meta) {
  if (f == Format::kCsv) {
    out << "run_id,measure,value,provenance\n";
    for (const auto& rec : records) {
      for (const auto& info : measure_catalog()) {
        if (rec.has(info.name)) {
          const auto& v = rec.values.find(info.name)->second;
          out << csv_field(rec.run_id) << ',' << info.name << ','
              << format_report(v.value) << ',' << to_string(v.provenance) << '\n';
        } else if (info.name == "icgd" && !rec.entanglement_available) {
          out << csv_field(rec.run_id) << ",icgd,,unavailable\n";
        }
      }
    }
    return;
  }
  Json doc;
  doc["meta"] = meta_json(meta);
  Json arr = Json::array();
  for (const auto& rec : records) {
    Json r;
    r["run_id"] = rec.run_id;
    r["entanglement"] = rec.entanglement_available ? "available" : "unavailable";
    Json measures = Json::object();
    for (const auto& info : measure_catalog()) {
      if (!rec.has(info.name)) continue;
      const auto& v = rec.values.find(info.name)->second;
      measures[std::string(info.name)] = {{"value", round_report(v.value)},
                                          {"provenance", to_string(v.provenance)}};
    }
    r["measures"] = std::move(measures);
    arr.push_back(std::move(r));
  }
  doc["records"] = std::move(arr);
  out << doc.dump(2) << '\n';
}

void write_criteria(std::ostream& out, Format f, std::span<const CriteriaRow> rows,
                    const ReportMeta& meta) {
  if (f == Format::kCsv) {
    out << "measure,winner,value,rank_dev,relevance,trend,icgd,"
           "rank_dev_scaled,relevance_scaled,trend_scaled,icgd_scaled\n";
    for (const auto& row : rows) {
      const auto& s = row.selection;
      out << s.measure << ',' << csv_field(s.winner) << ','
          << format_report(s.value) << ',' << opt_field(s.rank_dev) << ','
          << opt_field(s.relevance) << ',' << opt_field(s.trend) << ','
          << opt_field(s.icgd) << ',' << opt_field(row.rank_dev_scaled) << ','
          << opt_field(row.relevance_scaled) << ','
          << opt_field(row.trend_scaled) << ',' << opt_field(row.icgd_scaled)
          << '\n';
    }
    return;
  }
  Json doc;
  doc["meta"] = meta_json(meta);
  Json arr = Json::array();
  for (const auto& row : rows) {
    const auto& s = row.selection;
    arr.push_back({{"measure", s.measure},
                   {"winner", s.winner},
                   {"value", round_report(s.value)},
                   {"rank_dev", opt_number(s.rank_dev)},
                   {"relevance", opt_number(s.relevance)},
                   {"trend", opt_number(s.trend)},
                   {"icgd", opt_number(s.icgd)},
                   {"rank_dev_scaled", opt_number(row.rank_dev_scaled)},
                   {"relevance_scaled", opt_number(row.relevance_scaled)},
                   {"trend_scaled", opt_number(row.trend_scaled)},
                   {"icgd_scaled", opt_number(row.icgd_scaled)}});
  }
  doc["selections"] = std::move(arr);
  out << doc.dump(2) << '\n';
}

void write_sweep(std::ostream& out, Format f, const std::string& run_id,
                 SweepParam param, std::span<const SweepPoint> points,
                 const ReportMeta& meta) {
  if (f == Format::kCsv) {
    out << "run_id,param,value,nAr_star\n";
    for (const auto& p : points) {
      out << csv_field(run_id) << ',' << sweep_param_name(param) << ','
          << format_report(p.value) << ',' << format_report(p.normalized_advanced)
          << '\n';
    }
    return;
  }
  Json doc;
  doc["meta"] = meta_json(meta);
  doc["run_id"] = run_id;
  doc["param"] = std::string(sweep_param_name(param));
  Json arr = Json::array();
  for (const auto& p : points) {
    arr.push_back({{"value", round_report(p.value)},
                   {"nAr_star", round_report(p.normalized_advanced)}});
  }
  doc["points"] = std::move(arr);
  out << doc.dump(2) << '\n';
}

void write_correlation(std::ostream& out, Format f,
                       std::span<const std::string> measures,
                       const std::vector<std::vector<std::optional<double>>>& matrix,
                       const ReportMeta& meta) {
  if (f == Format::kCsv) {
    out << "measure";
    for (const auto& m : measures) out << ',' << m;
    out << '\n';
    for (std::size_t i = 0; i < measures.size(); ++i) {
      out << measures[i];
      for (std::size_t j = 0; j < measures.size(); ++j) {
        out << ',' << opt_field(matrix[i][j]);
      }
      out << '\n';
    }
    return;
  }
  Json doc;
  doc["meta"] = meta_json(meta);
  doc["measures"] = Json(std::vector<std::string>(measures.begin(), measures.end()));
  Json rows = Json::array();
  for (const auto& row : matrix) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(opt_number(v));
    rows.push_back(std::move(r));
  }
  doc["matrix"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

void write_normalized(std::ostream& out, Format f, const NamedScores& runs,
                      const ReportMeta& meta) {
  if (f == Format::kCsv) {
    write_scores_csv(out, runs, false);
    return;
  }
  Json doc;
  doc["meta"] = meta_json(meta);
  Json arr = Json::array();
  for (const auto& [run_id, scores] : runs) {
    Json values = Json::array();
    for (std::size_t i = 0; i < scores.size(); ++i) {
      values.push_back({{"gesture_id", scores.gesture_ids[i]},
                        {"score", round_report(scores.values[i])}});
    }
    arr.push_back({{"run_id", run_id},
                   {"degenerate", scores.degenerate},
                   {"scores", std::move(values)}});
  }
  doc["runs"] = std::move(arr);
  out << doc.dump(2) << '\n';
}

}  // namespace gbqa::io
