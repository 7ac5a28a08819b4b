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

#include "gazemap/overlap.hpp"

namespace gazemap {

LineSet lines_viewed(const NormLineHits& means) {
  LineSet out;
  for (const auto& [key, m] : means) {
    if (m > 0.0) out.insert(out.end(), key);
  }
  return out;
}

OverlapReport per_file_overlap(const NormLineHits& group_a, const NormLineHits& group_b,
                               const FileInventory* inventory) {
  const LineSet a = lines_viewed(group_a);
  const LineSet b = lines_viewed(group_b);
  std::map<std::string, std::pair<std::set<std::int32_t>, std::set<std::int32_t>>> by_file;
  for (const auto& k : a) by_file[k.file].first.insert(k.line);
  for (const auto& k : b) by_file[k.file].second.insert(k.line);

  OverlapReport report;
  double sum = 0.0;
  for (const auto& [file, sides] : by_file) {
    if (inventory && !inventory->files.contains(file)) {
      throw Error(ErrorCode::kUnknownFile, "'" + file + "' is not in the source tree",
                  std::nullopt, file);
    }
    const auto j = jaccard(sides.first, sides.second);
    report.per_file[file] = j.value;
    if (j.value == 0.0) ++report.zero_overlap_count;
    if (j.value == 1.0) ++report.full_overlap_count;
    sum += j.value;
  }
  if (!report.per_file.empty()) {
    report.per_file_mean = sum / static_cast<double>(report.per_file.size());
  }
  const auto agg = jaccard(a, b);
  report.aggregate = agg.value;
  report.aggregate_both_empty = agg.both_empty;
  return report;
}

}  // namespace gazemap
