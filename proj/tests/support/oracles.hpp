/*
 * Copyright (C) 2026 The gazemap Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Brute-force reference implementations that enumerate the whole search space.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "gazemap/aggregate.hpp"
#include "gazemap/ingest.hpp"
#include "gazemap/model.hpp"

namespace oracle {

// Minimum cost over every monotone warping path from (0,0) to (n-1,m-1).
inline double dtw_brute(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j,
                                                                   double cost) {
    cost += a[i] == b[j] ? 0.0 : 1.0;
    if (i + 1 == a.size() && j + 1 == b.size()) {
      best = std::min(best, cost);
      return;
    }
    if (i + 1 < a.size()) walk(i + 1, j, cost);
    if (j + 1 < b.size()) walk(i, j + 1, cost);
    if (i + 1 < a.size() && j + 1 < b.size()) walk(i + 1, j + 1, cost);
  };
  walk(0, 0, 0.0);
  return best;
}

inline bool is_subsequence(const std::string& sub, const std::string& s) {
  std::size_t k = 0;
  for (char c : s) {
    if (k < sub.size() && sub[k] == c) ++k;
  }
  return k == sub.size();
}

// Longest common subsequence by trying every subsequence of `a`.
inline std::size_t lcs_brute(const std::string& a, const std::string& b) {
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << a.size()); ++mask) {
    std::string sub;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (mask & (1u << i)) sub.push_back(a[i]);
    }
    if (sub.size() > best && is_subsequence(sub, b)) best = sub.size();
  }
  return best;
}

// Pair-count U of x against y: #(x_i > y_j) + 0.5 #(x_i == y_j).
inline double u_statistic(const std::vector<double>& x, const std::vector<double>& y) {
  double u = 0.0;
  for (double a : x) {
    for (double b : y) u += a > b ? 1.0 : (a == b ? 0.5 : 0.0);
  }
  return u;
}

// Two-sided exact p of the rank-sum test: every split of the pooled sample
// into groups of the original sizes is equally likely.
inline double mwu_enumerated_p(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> pooled(x);
  pooled.insert(pooled.end(), y.begin(), y.end());
  const std::size_t n = pooled.size();
  const double observed = u_statistic(x, y);
  std::uint64_t total = 0, low = 0, high = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != x.size()) continue;
    std::vector<double> gx, gy;
    for (std::size_t i = 0; i < n; ++i) ((mask & (1u << i)) ? gx : gy).push_back(pooled[i]);
    const double u = u_statistic(gx, gy);
    ++total;
    if (u <= observed) ++low;
    if (u >= observed) ++high;
  }
  return std::min(1.0, 2.0 * static_cast<double>(std::min(low, high)) / static_cast<double>(total));
}

// Two-sided exact p of the signed-rank test by flipping every sign.
inline double wilcoxon_enumerated_p(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> d;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != y[i]) d.push_back(x[i] - y[i]);
  }
  const std::size_t n = d.size();
  // rank of |d_i| = 1 + #smaller + (#equal - 1)/2
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    double smaller = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(d[j]) < std::abs(d[i])) ++smaller;
      if (std::abs(d[j]) == std::abs(d[i])) ++equal;
    }
    rank[i] = 1.0 + smaller + (equal - 1.0) / 2.0;
  }
  double observed = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] > 0) observed += rank[i];
  }
  std::uint64_t low = 0, high = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) w += rank[i];
    }
    if (w <= observed) ++low;
    if (w >= observed) ++high;
  }
  return std::min(1.0, 2.0 * static_cast<double>(std::min(low, high)) / static_cast<double>(total));
}

// Random fixture: a few files with line counts and sessions whose events
// stay inside them.
struct RandomCorpus {
  gazemap::FileInventory inventory;
  std::vector<gazemap::Session> sessions;
};

inline RandomCorpus random_corpus(std::mt19937_64& rng) {
  RandomCorpus c;
  std::uniform_int_distribution<int> n_files(1, 4), n_lines(3, 30), n_sessions(1, 5), n_events(0, 60);
  std::uniform_int_distribution<int> step(0, 400), pct(0, 99);
  const char* tokens[] = {"foo", "bar", "baz"};
  const int files = n_files(rng);
  std::vector<std::string> paths;
  for (int f = 0; f < files; ++f) {
    std::string path = "src/pkg" + std::to_string(f % 2) + "/F" + std::to_string(f) + ".java";
    paths.push_back(path);
    c.inventory.files[path] = {n_lines(rng), "java"};
  }
  const int sessions = n_sessions(rng);
  for (int s = 0; s < sessions; ++s) {
    gazemap::Session session;
    session.participant_id = "P" + std::to_string(s);
    session.task_id = "T";
    std::int64_t t = 0;
    const int events = n_events(rng);
    for (int e = 0; e < events; ++e) {
      t += step(rng);
      gazemap::GazeEvent ev;
      ev.t_ms = t;
      ev.file = paths[std::uniform_int_distribution<std::size_t>(0, paths.size() - 1)(rng)];
      const auto lines = c.inventory.files.at(ev.file).line_count;
      ev.line = static_cast<std::int32_t>(std::uniform_int_distribution<std::int64_t>(1, lines)(rng));
      if (pct(rng) < 60) ev.token = tokens[pct(rng) % 3];
      ev.valid = pct(rng) >= 10;
      session.events.push_back(ev);
    }
    session.duration_ms = t + 1 + step(rng) * 10;
    c.sessions.push_back(session);
  }
  return c;
}

}  // namespace oracle
