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

// File and module reading orders and their comparison.

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gazemap/model.hpp"

namespace gazemap {

/// Chronological file visits with consecutive repeats collapsed.
struct FileSequence {
  std::vector<std::string> items;
  std::string participant_id;
  std::string task_id;

  friend bool operator==(const FileSequence&, const FileSequence&) = default;
};

struct ModuleSequence {
  std::string items;
  std::string provenance;

  friend bool operator==(const ModuleSequence&, const ModuleSequence&) = default;
};

struct SequenceOptions {
  std::int64_t min_dwell_ms = 0;
  /// Invalid samples are dropped unless this is set.
  bool include_invalid = false;
};

/// A visit's dwell runs from its first event to the first event of the next
/// visit (or to the session end). Visits shorter than min_dwell_ms are dropped
/// and the remainder collapsed.
FileSequence file_sequence(const Session& s, const SequenceOptions& options = {});

/// Removes consecutive duplicates in place.
template <typename Container>
void collapse_runs(Container& items) {
  items.erase(std::unique(items.begin(), items.end()), items.end());
}

/// Classic DTW with 0/1 cost on exact equality.
double dtw_distance(std::span<const std::string> a, std::span<const std::string> b);
inline double dtw_distance(const FileSequence& a, const FileSequence& b) {
  return dtw_distance(a.items, b.items);
}

ModuleSequence module_sequence(const FileSequence& f, const ModuleMap& modules);

struct AlignmentScoring {
  double match = 1.0;
  double mismatch = 0.0;
  double gap = 0.0;
};

/// Needleman-Wunsch global alignment score.
double needleman_wunsch_score(std::string_view a, std::string_view b,
                              const AlignmentScoring& scoring = {});

struct Similarity {
  double similarity = 0.0;
  double distance = 1.0;
};

/// Score under (1,0,0) divided by the longer length; distance = 1 - similarity.
Similarity nw_similarity(std::string_view a, std::string_view b);
inline Similarity nw_similarity(const ModuleSequence& a, const ModuleSequence& b) {
  return nw_similarity(a.items, b.items);
}

/// Distance of each participant's sequence to the reference, input order kept.
std::vector<double> group_dtw_distribution(std::span<const FileSequence> sequences,
                                           const FileSequence& reference);

/// One sequence for a whole group: members concatenated in participant-id
/// order (stable for equal ids), then collapsed.
/// The group's module sequence is module_sequence(group_sequence(members)).
FileSequence group_sequence(std::span<const FileSequence> members);

}  // namespace gazemap
