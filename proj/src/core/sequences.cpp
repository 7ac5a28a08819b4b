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

#include "gazemap/sequences.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

namespace gazemap {

FileSequence file_sequence(const Session& s, const SequenceOptions& options) {
  if (options.min_dwell_ms < 0) {
    throw Error(ErrorCode::kInvalidArgument, "min_dwell_ms must be >= 0");
  }
  struct Visit {
    std::string file;
    std::int64_t start = 0;
  };
  std::vector<Visit> visits;
  for (const auto& e : s.events) {
    if (!e.valid && !options.include_invalid) continue;
    if (visits.empty() || visits.back().file != e.file) visits.push_back({e.file, e.t_ms});
  }
  FileSequence seq;
  seq.participant_id = s.participant_id;
  seq.task_id = s.task_id;
  for (std::size_t i = 0; i < visits.size(); ++i) {
    const std::int64_t end = i + 1 < visits.size() ? visits[i + 1].start : s.duration_ms;
    if (end - visits[i].start < options.min_dwell_ms) continue;
    seq.items.push_back(visits[i].file);
  }
  collapse_runs(seq.items);
  return seq;
}

double dtw_distance(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kEmptySequence, "DTW needs two non-empty sequences");
  }
  // Intern paths once so the inner loop compares integers.
  std::map<std::string_view, int> ids;
  auto intern = [&](std::span<const std::string> seq) {
    std::vector<int> out;
    out.reserve(seq.size());
    for (const auto& item : seq) {
      out.push_back(ids.emplace(item, static_cast<int>(ids.size())).first->second);
    }
    return out;
  };
  const auto x = intern(a);
  const auto y = intern(b);
  constexpr auto kInf = std::numeric_limits<std::int64_t>::max() / 2;
  std::vector<std::int64_t> prev(y.size() + 1, kInf), cur(y.size() + 1, kInf);
  prev[0] = 0;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = kInf;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      const std::int64_t cost = x[i - 1] == y[j - 1] ? 0 : 1;
      cur[j] = cost + std::min({prev[j], cur[j - 1], prev[j - 1]});
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[y.size()]);
}

ModuleSequence module_sequence(const FileSequence& f, const ModuleMap& modules) {
  ModuleSequence out;
  out.provenance = f.participant_id.empty() ? f.task_id : f.participant_id + "/" + f.task_id;
  for (const auto& path : f.items) {
    auto label = modules.label_of(path);
    if (!label) {
      throw Error(ErrorCode::kUnclassifiedPath, "'" + path + "' has no module label",
                  std::nullopt, path);
    }
    out.items.push_back(*label);
  }
  collapse_runs(out.items);
  return out;
}

double needleman_wunsch_score(std::string_view a, std::string_view b,
                              const AlignmentScoring& scoring) {
  std::vector<double> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = scoring.gap * static_cast<double>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = scoring.gap * static_cast<double>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const double diag = prev[j - 1] + (a[i - 1] == b[j - 1] ? scoring.match : scoring.mismatch);
      cur[j] = std::max({diag, prev[j] + scoring.gap, cur[j - 1] + scoring.gap});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

Similarity nw_similarity(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) {
    throw Error(ErrorCode::kBothEmpty, "cannot compare two empty module sequences");
  }
  const double score = needleman_wunsch_score(a, b);
  Similarity s;
  s.similarity = score / static_cast<double>(std::max(a.size(), b.size()));
  s.distance = 1.0 - s.similarity;
  return s;
}

std::vector<double> group_dtw_distribution(std::span<const FileSequence> sequences,
                                           const FileSequence& reference) {
  if (reference.items.empty()) {
    throw Error(ErrorCode::kEmptySequence, "reference sequence is empty");
  }
  std::vector<double> out;
  out.reserve(sequences.size());
  for (const auto& seq : sequences) out.push_back(dtw_distance(seq, reference));
  return out;
}

FileSequence group_sequence(std::span<const FileSequence> members) {
  std::vector<std::size_t> order(members.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return members[l].participant_id < members[r].participant_id;
  });
  FileSequence out;
  for (std::size_t idx : order) {
    const auto& m = members[idx];
    out.items.insert(out.items.end(), m.items.begin(), m.items.end());
    if (out.task_id.empty()) out.task_id = m.task_id;
  }
  out.participant_id = "group";
  collapse_runs(out.items);
  return out;
}

}  // namespace gazemap
