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

#include "gazemap/model.hpp"

#include <algorithm>
#include <set>

namespace gazemap {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kUnsortedEvents: return "UnsortedEvents";
    case ErrorCode::kNonPositiveDuration: return "NonPositiveDuration";
    case ErrorCode::kDurationBeforeLastEvent: return "DurationBeforeLastEvent";
    case ErrorCode::kBadPath: return "BadPath";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kMissingHeader: return "MissingHeader";
    case ErrorCode::kBadValue: return "BadValue";
    case ErrorCode::kRootNotFound: return "RootNotFound";
    case ErrorCode::kUnknownFile: return "UnknownFile";
    case ErrorCode::kLineOutOfRange: return "LineOutOfRange";
    case ErrorCode::kEmptyGroup: return "EmptyGroup";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEmptySequence: return "EmptySequence";
    case ErrorCode::kUnclassifiedPath: return "UnclassifiedPath";
    case ErrorCode::kBothEmpty: return "BothEmpty";
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kAllZeroDifferences: return "AllZeroDifferences";
    case ErrorCode::kDegenerateVariance: return "DegenerateVariance";
    case ErrorCode::kBadM: return "BadM";
    case ErrorCode::kWeightSumInvalid: return "WeightSumInvalid";
    case ErrorCode::kRatingOutOfRange: return "RatingOutOfRange";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kSchemaError: return "SchemaError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string message,
             std::optional<std::int64_t> index, std::string subject)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code),
      index_(index),
      subject_(std::move(subject)) {}

std::string_view to_string(Role role) noexcept {
  return role == Role::kExpert ? "expert" : "novice";
}

std::string_view to_string(Group group) noexcept {
  switch (group) {
    case Group::kControl: return "control";
    case Group::kExperiment: return "experiment";
    case Group::kExpert: return "expert";
  }
  return "control";
}

std::optional<Role> parse_role(std::string_view text) noexcept {
  if (text == "expert") return Role::kExpert;
  if (text == "novice") return Role::kNovice;
  return std::nullopt;
}

std::optional<Group> parse_group(std::string_view text) noexcept {
  if (text == "control") return Group::kControl;
  if (text == "experiment") return Group::kExperiment;
  if (text == "expert") return Group::kExpert;
  return std::nullopt;
}

std::string_view to_string(AttentionGrade grade) noexcept {
  switch (grade) {
    case AttentionGrade::kNone: return "None";
    case AttentionGrade::kL1: return "L1";
    case AttentionGrade::kL2: return "L2";
    case AttentionGrade::kL3: return "L3";
    case AttentionGrade::kL4: return "L4";
    case AttentionGrade::kL5: return "L5";
  }
  return "None";
}

std::optional<AttentionGrade> parse_grade(std::string_view text) noexcept {
  for (int g = 0; g <= 5; ++g) {
    auto grade = static_cast<AttentionGrade>(g);
    if (to_string(grade) == text) return grade;
  }
  return std::nullopt;
}

std::string ModuleMap::alphabet() const {
  std::set<char> labels{kFallbackModule};
  for (const auto& rule : rules) labels.insert(rule.label);
  return {labels.begin(), labels.end()};
}

std::optional<char> ModuleMap::label_of(std::string_view path) const {
  auto it = entries.find(path);
  if (it == entries.end()) return std::nullopt;
  return it->second;
}

std::string normalize_path(std::string_view path) {
  std::string unified(path);
  std::replace(unified.begin(), unified.end(), '\\', '/');
  if (unified.empty()) throw Error(ErrorCode::kBadPath, "empty path");
  if (unified.front() == '/' ||
      (unified.size() > 1 && unified[1] == ':')) {
    throw Error(ErrorCode::kBadPath, "absolute path '" + unified + "'",
                std::nullopt, unified);
  }
  std::string out;
  std::size_t pos = 0;
  while (pos <= unified.size()) {
    auto next = unified.find('/', pos);
    if (next == std::string::npos) next = unified.size();
    std::string_view segment(unified.data() + pos, next - pos);
    if (segment == "..") {
      throw Error(ErrorCode::kBadPath, "parent segment in '" + unified + "'",
                  std::nullopt, unified);
    }
    if (!segment.empty() && segment != ".") {
      if (!out.empty()) out.push_back('/');
      out.append(segment);
    }
    pos = next + 1;
  }
  if (out.empty()) throw Error(ErrorCode::kBadPath, "empty path", std::nullopt, unified);
  return out;
}

Session validate_session(Session s) {
  if (s.duration_ms <= 0) {
    throw Error(ErrorCode::kNonPositiveDuration,
                "duration_ms must be positive, got " + std::to_string(s.duration_ms));
  }
  std::int64_t max_t = 0;
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    const auto& e = s.events[i];
    const auto idx = static_cast<std::int64_t>(i);
    if (e.t_ms < 0) {
      throw Error(ErrorCode::kBadValue, "negative t_ms at event " + std::to_string(i), idx);
    }
    if (i > 0 && e.t_ms < s.events[i - 1].t_ms) {
      throw Error(ErrorCode::kUnsortedEvents,
                  "event " + std::to_string(i) + " precedes its predecessor", idx);
    }
    if (e.line < 1 || (e.column && *e.column < 1)) {
      throw Error(ErrorCode::kBadValue,
                  "line/column must be 1-based at event " + std::to_string(i), idx);
    }
    bool canonical = false;
    try {
      canonical = normalize_path(e.file) == e.file;
    } catch (const Error&) {
    }
    if (!canonical) {
      throw Error(ErrorCode::kBadPath,
                  "path '" + e.file + "' at event " + std::to_string(i) + " is not normalized",
                  idx, e.file);
    }
    max_t = std::max(max_t, e.t_ms);
  }
  if (s.duration_ms < max_t) {
    throw Error(ErrorCode::kDurationBeforeLastEvent,
                "duration_ms " + std::to_string(s.duration_ms) + " ends before last event at " +
                    std::to_string(max_t));
  }
  return s;
}

void validate_gaze_map(const GazeMap& map) {
  auto fail = [](const std::string& where, const std::string& what) {
    throw Error(ErrorCode::kSchemaError, where + ": " + what, std::nullopt, where);
  };
  if (map.top_n < 1) fail("/top_n", "must be >= 1");
  if (map.ranking.size() > static_cast<std::size_t>(map.top_n)) {
    fail("/ranking", "longer than top_n");
  }
  for (std::size_t i = 0; i < map.ranking.size(); ++i) {
    const auto& r = map.ranking[i];
    const std::string where = "/ranking/" + std::to_string(i);
    if (!map.files.contains(r.path)) fail(where, "unknown file '" + r.path + "'");
    if (i > 0) {
      const auto& prev = map.ranking[i - 1];
      // Totals within the 6-decimal export quantum may have been rounded
      // into a tie with their original path order reversed.
      const double gap = prev.total_attention - r.total_attention;
      const bool ordered = gap >= -1e-6;
      if (!ordered) fail(where, "ranking not sorted by (-total, path)");
    }
  }
  for (const auto& [path, file] : map.files) {
    const std::string where = "/files/" + path;
    if (file.line_count < 0) fail(where, "negative line_count");
    for (const auto& [line, rec] : file.lines) {
      if (line < 1 || line > file.line_count) {
        fail(where, "line " + std::to_string(line) + " outside 1.." +
                        std::to_string(file.line_count));
      }
      if (!(rec.mean_norm_hits >= 0.0)) fail(where, "negative mean_norm_hits");
      // A graded line may read 0 after 6-decimal rounding; None with a
      // positive mean never happens.
      if (rec.grade == AttentionGrade::kNone && rec.mean_norm_hits != 0.0) {
        fail(where, "grade None with a positive mean at line " + std::to_string(line));
      }
    }
  }
  for (const auto& [path, blocks] : map.blocks) {
    const std::string where = "/blocks/" + path;
    auto it = map.files.find(path);
    if (it == map.files.end()) fail(where, "unknown file '" + path + "'");
    std::int32_t last_end = 0;
    for (const auto& b : blocks) {
      if (b.start_line > b.end_line || b.start_line <= last_end) {
        fail(where, "blocks overlap or are unordered");
      }
      if (b.end_line > it->second.line_count) fail(where, "block beyond line count");
      if (b.grade == AttentionGrade::kNone) fail(where, "block with grade None");
      last_end = b.end_line;
    }
  }
}

}  // namespace gazemap
