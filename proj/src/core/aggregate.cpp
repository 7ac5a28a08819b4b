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

#include "gazemap/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

namespace gazemap {

std::vector<GazePrint> gaze_prints(const Session& s) {
  std::map<LineKey, GazePrint> prints;
  for (const auto& e : s.events) {
    if (!e.valid) continue;
    auto& p = prints[LineKey{e.file, e.line}];
    p.file = e.file;
    p.line = e.line;
    auto key = e.token_key();
    auto it = p.token_hits.find(key);
    if (it == p.token_hits.end()) {
      p.token_hits.emplace(std::string(key), 1);
    } else {
      ++it->second;
    }
  }
  std::vector<GazePrint> out;
  out.reserve(prints.size());
  for (auto& [key, p] : prints) out.push_back(std::move(p));
  return out;
}

LineHits line_hits(const Session& s) {
  LineHits hits;
  for (const auto& p : gaze_prints(s)) {
    std::int64_t best = 0;
    for (const auto& [token, count] : p.token_hits) best = std::max(best, count);
    hits.emplace(LineKey{p.file, p.line}, best);
  }
  return hits;
}

NormLineHits normalize(const LineHits& hits, std::int64_t duration_ms) {
  if (duration_ms <= 0) {
    throw Error(ErrorCode::kNonPositiveDuration,
                "duration_ms must be positive, got " + std::to_string(duration_ms));
  }
  const double seconds = static_cast<double>(duration_ms) / 1000.0;
  NormLineHits out;
  for (const auto& [key, h] : hits) out.emplace_hint(out.end(), key, static_cast<double>(h) / seconds);
  return out;
}

NormLineHits group_mean(std::span<const NormLineHits> maps, std::size_t group_size) {
  if (group_size == 0) throw Error(ErrorCode::kEmptyGroup, "group size is zero");
  if (maps.size() > group_size) {
    throw Error(ErrorCode::kInvalidArgument, "more maps than group members");
  }
  std::map<LineKey, std::vector<double>> contributions;
  for (const auto& m : maps) {
    for (const auto& [key, v] : m) contributions[key].push_back(v);
  }
  NormLineHits out;
  const double n = static_cast<double>(group_size);
  for (auto& [key, values] : contributions) {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    out.emplace_hint(out.end(), key, sum / n);
  }
  return out;
}

double skewness(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "skewness of an empty sample");
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) return 0.0;
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (m2 <= 0.0) return 0.0;
  return m3 / std::pow(m2, 1.5);
}

double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::kEmptyInput, "percentile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lower = static_cast<std::size_t>(std::floor(pos));
  const auto upper = std::min(lower + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lower);
  return sorted[lower] + (sorted[upper] - sorted[lower]) * frac;
}

GradeResult grade(std::span<const double> means, double skew_threshold) {
  GradeResult result;
  result.info.skew_threshold = skew_threshold;
  result.grades.assign(means.size(), AttentionGrade::kNone);
  std::vector<double> nonzero;
  for (double m : means) {
    if (!(m >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "negative or NaN line mean");
    if (m > 0.0) nonzero.push_back(m);
  }
  if (nonzero.empty()) return result;
  std::sort(nonzero.begin(), nonzero.end());
  const double lo = nonzero.front();
  const double hi = nonzero.back();
  if (lo == hi) {
    result.info.method = "constant";
    for (std::size_t i = 0; i < means.size(); ++i) {
      if (means[i] > 0.0) result.grades[i] = AttentionGrade::kL3;
    }
    return result;
  }
  result.info.skewness = skewness(nonzero);
  auto& bounds = result.info.boundaries;
  if (result.info.skewness > skew_threshold) {
    result.info.method = "quantile";
    for (int k = 1; k <= 4; ++k) bounds.push_back(percentile_sorted(nonzero, 0.2 * k));
  } else {
    result.info.method = "equal-width";
    for (int k = 1; k <= 4; ++k) bounds.push_back(lo + (hi - lo) * k / 5.0);
  }
  // Rounding slack so a value that sits on a boundary in exact arithmetic still
  // lands in the higher grade.
  const double slack = hi * 1e-9;
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (means[i] <= 0.0) continue;
    int level = 1;
    for (double b : bounds) {
      if (means[i] >= b - slack) ++level;
    }
    result.grades[i] = static_cast<AttentionGrade>(level);
  }
  return result;
}

std::vector<RankedFile> rank_files(const NormLineHits& means, std::int32_t top_n) {
  if (top_n < 1) throw Error(ErrorCode::kInvalidArgument, "top_n must be >= 1");
  std::vector<RankedFile> totals;
  for (const auto& [key, mean] : means) {
    if (totals.empty() || totals.back().path != key.file) totals.push_back({key.file, 0.0});
    totals.back().total_attention += mean;
  }
  std::sort(totals.begin(), totals.end(), [](const RankedFile& a, const RankedFile& b) {
    if (a.total_attention != b.total_attention) return a.total_attention > b.total_attention;
    return a.path < b.path;
  });
  // Totals equal up to accumulated rounding count as ties and fall back to
  // path order. Groups are anchored at their first (largest) member.
  for (std::size_t i = 0; i < totals.size();) {
    const double anchor = totals[i].total_attention;
    std::size_t j = i + 1;
    while (j < totals.size() && anchor - totals[j].total_attention <= kTieTolerance * anchor) ++j;
    std::sort(totals.begin() + static_cast<std::ptrdiff_t>(i), totals.begin() + static_cast<std::ptrdiff_t>(j),
              [](const RankedFile& a, const RankedFile& b) { return a.path < b.path; });
    i = j;
  }
  if (totals.size() > static_cast<std::size_t>(top_n)) totals.resize(top_n);
  return totals;
}

std::vector<Block> blocks(const std::map<std::int32_t, AttentionGrade>& grades) {
  std::vector<Block> out;
  for (const auto& [line, g] : grades) {
    if (g == AttentionGrade::kNone) continue;
    if (!out.empty() && out.back().end_line + 1 == line) {
      out.back().end_line = line;
      out.back().grade = std::max(out.back().grade, g);
    } else {
      out.push_back({line, line, g});
    }
  }
  return out;
}

namespace {

void check_events_known(const Session& s, const FileInventory& inventory) {
  for (const auto& e : s.events) {
    if (!e.valid) continue;
    auto it = inventory.files.find(e.file);
    if (it == inventory.files.end()) {
      throw Error(ErrorCode::kUnknownFile,
                  "session '" + s.participant_id + "' references '" + e.file +
                      "' which is not in the source tree",
                  std::nullopt, e.file);
    }
    if (e.line > it->second.line_count) {
      throw Error(ErrorCode::kLineOutOfRange,
                  e.file + ":" + std::to_string(e.line) + " beyond its " +
                      std::to_string(it->second.line_count) + " lines",
                  e.line, e.file);
    }
  }
}

}  // namespace

GazeMap build_gaze_map(std::span<const Session> sessions, const FileInventory& inventory,
                       const MapOptions& options) {
  if (sessions.empty()) throw Error(ErrorCode::kEmptyGroup, "no sessions to aggregate");
  if (options.top_n < 1) throw Error(ErrorCode::kInvalidArgument, "top_n must be >= 1");

  auto per_session = [&](const Session& s) {
    auto checked = validate_session(s);
    check_events_known(checked, inventory);
    return normalize(line_hits(checked), checked.duration_ms);
  };

  std::vector<NormLineHits> normalized(sessions.size());
  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.threads;
  if (threads <= 1 || sessions.size() == 1) {
    for (std::size_t i = 0; i < sessions.size(); ++i) normalized[i] = per_session(sessions[i]);
  } else {
    std::vector<std::future<void>> jobs;
    const std::size_t stride = threads;
    for (std::size_t w = 0; w < std::min<std::size_t>(threads, sessions.size()); ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < sessions.size(); i += stride) {
          normalized[i] = per_session(sessions[i]);
        }
      }));
    }
    for (auto& j : jobs) j.get();
  }

  const NormLineHits means = group_mean(normalized, sessions.size());
  std::vector<double> values;
  values.reserve(means.size());
  for (const auto& [key, m] : means) values.push_back(m);
  GradeResult graded = grade(values, options.skew_threshold);

  GazeMap map;
  map.project_id = options.project_id;
  map.top_n = options.top_n;
  map.grading = graded.info;
  std::size_t i = 0;
  for (const auto& [key, m] : means) {
    auto& file = map.files[key.file];
    file.line_count = inventory.files.find(key.file)->second.line_count;
    file.lines[key.line] = LineRecord{m, graded.grades[i++]};
  }
  map.ranking = rank_files(means, options.top_n);
  for (const auto& [path, file] : map.files) {
    std::map<std::int32_t, AttentionGrade> g;
    for (const auto& [line, rec] : file.lines) g[line] = rec.grade;
    map.blocks[path] = blocks(g);
  }
  return map;
}

NormLineHits means_of(const GazeMap& map) {
  NormLineHits out;
  for (const auto& [path, file] : map.files) {
    for (const auto& [line, rec] : file.lines) out.emplace(LineKey{path, line}, rec.mean_norm_hits);
  }
  return out;
}

}  // namespace gazemap
