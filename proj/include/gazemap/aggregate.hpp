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

// LineHits, duration normalization, group means, attention grades, file
// ranking and block extraction, composed into a GazeMap.

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "gazemap/ingest.hpp"
#include "gazemap/model.hpp"

namespace gazemap {

using LineHits = std::map<LineKey, std::int64_t>;
/// Values in hits per second.
using NormLineHits = std::map<LineKey, double>;

/// Per-line maximum over tokens of the per-token valid-event count.
LineHits line_hits(const Session& s);

/// Per-line token counts, the gazeprints line_hits reduces.
std::vector<GazePrint> gaze_prints(const Session& s);

NormLineHits normalize(const LineHits& hits, std::int64_t duration_ms);

/// Mean over `group_size` participants; keys missing from a map count as 0.
/// Each key's contributions are summed in ascending order so the result does
/// not depend on the order of `maps`.
NormLineHits group_mean(std::span<const NormLineHits> maps, std::size_t group_size);

/// Fisher-Pearson g1 = m3 / m2^(3/2); 0 for constant input.
double skewness(std::span<const double> values);

/// Linear-interpolation percentile (q in [0,1]) of sorted values.
double percentile_sorted(std::span<const double> sorted, double q);

struct GradeResult {
  std::vector<AttentionGrade> grades;  // parallel to the input
  GradingInfo info;
};

inline constexpr double kDefaultSkewThreshold = 1.0;

/// Zero maps to None. Nonzero values are binned into L1..L5: quantile bins at
/// the 20/40/60/80th percentiles when their skewness exceeds the threshold,
/// otherwise five equal-width bins over [min, max]. A value on a boundary
/// takes the higher grade; all-equal nonzero values get L3.
GradeResult grade(std::span<const double> means, double skew_threshold = kDefaultSkewThreshold);

/// Relative gap below which two file totals are treated as tied.
inline constexpr double kTieTolerance = 1e-12;

/// Sums line means per file, sorts by (-total, path) and keeps `top_n`.
std::vector<RankedFile> rank_files(const NormLineHits& means, std::int32_t top_n = 10);

/// Maximal runs of consecutive graded lines, each carrying its highest grade.
std::vector<Block> blocks(const std::map<std::int32_t, AttentionGrade>& grades);

struct MapOptions {
  std::int32_t top_n = 10;
  double skew_threshold = kDefaultSkewThreshold;
  std::string project_id;
  /// Worker threads for the per-session stage; 0 picks hardware concurrency.
  unsigned threads = 1;
};

/// All sessions form one group. Pipeline: line_hits, normalize, group_mean,
/// grade (once over every line of the codebase), rank_files, blocks.
GazeMap build_gaze_map(std::span<const Session> sessions, const FileInventory& inventory,
                       const MapOptions& options = {});

/// Per-line group means as stored in a GazeMap.
NormLineHits means_of(const GazeMap& map);

}  // namespace gazemap
