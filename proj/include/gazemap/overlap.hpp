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

// Line-level attention overlap between groups.

#pragma once

#include <map>
#include <set>
#include <string>

#include "gazemap/aggregate.hpp"

namespace gazemap {

using LineSet = std::set<LineKey>;

/// Keys whose group mean is positive.
LineSet lines_viewed(const NormLineHits& means);

struct JaccardResult {
  double value = 0.0;
  /// Set when both inputs were empty; value is then 0 by convention.
  bool both_empty = false;
};

template <typename T>
JaccardResult jaccard(const std::set<T>& a, const std::set<T>& b) {
  if (a.empty() && b.empty()) return {0.0, true};
  std::size_t common = 0;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end() && ib != b.end();) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  return {static_cast<double>(common) / static_cast<double>(uni), false};
}

struct OverlapReport {
  /// Files viewed by at least one side.
  std::map<std::string, double> per_file;
  std::size_t zero_overlap_count = 0;
  std::size_t full_overlap_count = 0;
  /// Jaccard over the union of all (file, line) pairs.
  double aggregate = 0.0;
  bool aggregate_both_empty = false;
  /// Unweighted mean of per_file (0 when per_file is empty).
  double per_file_mean = 0.0;
};

/// When `inventory` is given every viewed file must belong to it.
OverlapReport per_file_overlap(const NormLineHits& group_a, const NormLineHits& group_b,
                               const FileInventory* inventory = nullptr);

}  // namespace gazemap
