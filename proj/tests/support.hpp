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

// Shared test helpers: temp directories, hand-rolled generators and
// independent oracles. Oracles never call into the library's measure code.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gbqa/core.hpp"
#include "gbqa/embedding.hpp"

namespace gbqa::test {

namespace fs = std::filesystem;

inline fs::path fixture(const std::string& rel) {
  return fs::path(GBQA_FIXTURE_DIR) / rel;
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "gbqa-test-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::vector<std::string> gesture_ids(std::size_t g) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < g; ++i) ids.push_back("g" + std::to_string(i + 1));
  return ids;
}

inline ScoreVector normalized(const std::vector<double>& raw) {
  return zscore_l2_normalize(ScoreVector::raw(gesture_ids(raw.size()), raw));
}

// Ranking whose gesture g_k holds rank k.
inline Ranking identity_ranking(std::size_t g) {
  std::vector<int> r(g);
  for (std::size_t i = 0; i < g; ++i) r[i] = static_cast<int>(i + 1);
  return Ranking(gesture_ids(g), r);
}

// Scores arranged (ascending merit) under identity_ranking: the given
// arranged vector maps slot 0 to the rank-G gesture.
inline ScoreVector from_arranged(const std::vector<double>& arranged) {
  std::vector<double> v(arranged.rbegin(), arranged.rend());
  return ScoreVector::raw(gesture_ids(v.size()), v);
}

// Hand-rolled generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  double normal() { return std::normal_distribution<double>()(rng_); }

  std::vector<double> vec(std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }
  // Pairwise distinct entries (no ties).
  std::vector<double> distinct(std::size_t n) {
    while (true) {
      auto v = vec(n);
      std::set<double> s(v.begin(), v.end());
      if (s.size() == n) return v;
    }
  }
  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng_);
    return p;
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Gaussian rows with random gesture / identity labels.
inline EmbeddingSet random_set(Gen& gen, std::size_t n, std::size_t d, int gestures,
                               int identities) {
  std::vector<double> rows;
  std::vector<std::string> gl, il;
  for (std::size_t m = 0; m < n; ++m) {
    double sq = 0.0;
    std::vector<double> row(d);
    do {
      sq = 0.0;
      for (double& x : row) {
        x = gen.normal();
        sq += x * x;
      }
    } while (sq == 0.0);
    rows.insert(rows.end(), row.begin(), row.end());
    gl.push_back("g" + std::to_string(gen.integer(1, gestures)));
    il.push_back("id" + std::to_string(gen.integer(1, identities)));
  }
  return EmbeddingSet(d, rows, gl, il);
}

// Random orthogonal matrix via Gram-Schmidt on Gaussian columns.
inline std::vector<double> random_rotation(Gen& gen, std::size_t d) {
  std::vector<double> q(d * d);
  for (std::size_t c = 0; c < d; ++c) {
    std::vector<double> v(d);
    while (true) {
      for (double& x : v) x = gen.normal();
      for (std::size_t p = 0; p < c; ++p) {
        double dot = 0.0;
        for (std::size_t k = 0; k < d; ++k) dot += v[k] * q[k * d + p];
        for (std::size_t k = 0; k < d; ++k) v[k] -= dot * q[k * d + p];
      }
      double sq = 0.0;
      for (double x : v) sq += x * x;
      if (sq > 1e-6) {
        for (std::size_t k = 0; k < d; ++k) q[k * d + c] = v[k] / std::sqrt(sq);
        break;
      }
    }
  }
  return q;
}

inline EmbeddingSet transformed(const EmbeddingSet& emb, const std::vector<double>& rot,
                                const std::vector<double>& row_scale) {
  const std::size_t d = emb.dim();
  std::vector<double> rows;
  std::vector<std::string> gl, il;
  for (std::size_t m = 0; m < emb.size(); ++m) {
    const auto r = emb.raw_row(m);
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += rot[i * d + k] * r[k];
      rows.push_back(row_scale[m] * s);
    }
    gl.push_back(emb.gesture_label(m));
    il.push_back(emb.identity_label(m));
  }
  return EmbeddingSet(d, rows, gl, il);
}

namespace oracle {

// Closed form of the two-pass trend distance over arranged slots:
// sum_{j>=2} d_j + (d_2 + d_G) / 2, d_j = |(e_j - e_{j-1}) - (D_j - D_{j-1})|.
inline double trend_closed_form(const std::vector<double>& e,
                                const std::vector<double>& d) {
  const std::size_t g = e.size();
  std::vector<double> dj(g, 0.0);
  double sum = 0.0;
  for (std::size_t j = 1; j < g; ++j) {
    dj[j] = std::fabs((e[j] - e[j - 1]) - (d[j] - d[j - 1]));
    sum += dj[j];
  }
  return sum + 0.5 * (dj[1] + dj[g - 1]);
}

// Descending ranks (1 = largest), ties by position.
inline std::vector<int> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  std::vector<int> r(v.size());
  for (std::size_t k = 0; k < order.size(); ++k) r[order[k]] = static_cast<int>(k + 1);
  return r;
}

// Direct transcription of the advanced acceptance score over aligned,
// normalized vectors.
inline double advanced(const std::vector<double>& delta, const std::vector<double>& gt,
                       double cd, double lambda, double kappa, double nu,
                       double beta, double gamma) {
  const std::size_t g = gt.size();
  const double G = static_cast<double>(g);
  const auto rd = ranks(delta), rg = ranks(gt);
  double num = 0.0;
  for (std::size_t j = 0; j < g; ++j) {
    const double r = rg[j];
    const double rel = gamma * (G - r + 1.0) / G * delta[j] + (r / G) * (1.0 - delta[j]);
    num += std::pow(2.0, lambda * rel) / std::exp(kappa * std::abs(rd[j] - rg[j]));
  }
  // Arrange by ascending ground-truth merit.
  std::vector<double> e(g), d(g);
  for (std::size_t j = 0; j < g; ++j) {
    const std::size_t slot = g - static_cast<std::size_t>(rg[j]);
    e[slot] = gt[j];
    d[slot] = delta[j];
  }
  const double psi = g >= 2 ? trend_closed_form(e, d) : 0.0;
  return num / std::sqrt(std::log2(2.0 + nu * psi)) * std::exp(-beta * cd);
}

}  // namespace oracle
}  // namespace gbqa::test
