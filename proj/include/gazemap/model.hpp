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

// Domain types shared by every stage of the pipeline.

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gazemap/error.hpp"

namespace gazemap {

/// Token key used when a gaze event carries no token: the whole line counts
/// as a single token.
inline constexpr std::string_view kLineToken = "‹line›";

struct GazeEvent {
  std::int64_t t_ms = 0;
  std::string file;
  std::int32_t line = 1;
  std::optional<std::int32_t> column;
  std::optional<std::string> token;
  bool valid = true;

  std::string_view token_key() const noexcept {
    return token ? std::string_view(*token) : kLineToken;
  }

  friend bool operator==(const GazeEvent&, const GazeEvent&) = default;
};

enum class Role { kExpert, kNovice };
enum class Group { kControl, kExperiment, kExpert };

std::string_view to_string(Role role) noexcept;
std::string_view to_string(Group group) noexcept;
std::optional<Role> parse_role(std::string_view text) noexcept;
std::optional<Group> parse_group(std::string_view text) noexcept;

struct Session {
  std::string participant_id;
  Role role = Role::kNovice;
  Group group = Group::kControl;
  std::string task_id;
  std::vector<GazeEvent> events;
  std::int64_t duration_ms = 0;

  friend bool operator==(const Session&, const Session&) = default;
};

/// A (file, line) coordinate. Ordered by path, then line.
struct LineKey {
  std::string file;
  std::int32_t line = 1;

  friend auto operator<=>(const LineKey&, const LineKey&) = default;
  friend bool operator==(const LineKey&, const LineKey&) = default;
};

/// Token hits of one participant on one line.
struct GazePrint {
  std::string file;
  std::int32_t line = 1;
  std::map<std::string, std::int64_t, std::less<>> token_hits;
};

/// LineHits of one participant (or a group) over the lines of one file.
struct GazeTrail {
  std::string file;
  std::map<std::int32_t, double> line_hits;
};

enum class AttentionGrade : std::uint8_t { kNone = 0, kL1, kL2, kL3, kL4, kL5 };

std::string_view to_string(AttentionGrade grade) noexcept;
std::optional<AttentionGrade> parse_grade(std::string_view text) noexcept;

struct LineRecord {
  double mean_norm_hits = 0.0;
  AttentionGrade grade = AttentionGrade::kNone;

  friend bool operator==(const LineRecord&, const LineRecord&) = default;
};

struct FileAttention {
  std::int64_t line_count = 0;
  std::map<std::int32_t, LineRecord> lines;

  friend bool operator==(const FileAttention&, const FileAttention&) = default;
};

struct RankedFile {
  std::string path;
  double total_attention = 0.0;

  friend bool operator==(const RankedFile&, const RankedFile&) = default;
};

struct Block {
  std::int32_t start_line = 1;
  std::int32_t end_line = 1;
  AttentionGrade grade = AttentionGrade::kNone;

  friend bool operator==(const Block&, const Block&) = default;
};

/// Which binning the grader applied. Recorded in exports so consumers know the
/// grade boundaries are a configurable stand-in.
struct GradingInfo {
  std::string method = "none";  // none | constant | equal-width | quantile
  double skew_threshold = 1.0;
  double skewness = 0.0;
  std::vector<double> boundaries;

  friend bool operator==(const GradingInfo&, const GradingInfo&) = default;
};

struct GazeMap {
  std::string project_id;
  std::map<std::string, FileAttention> files;
  std::vector<RankedFile> ranking;
  std::map<std::string, std::vector<Block>> blocks;
  std::int32_t top_n = 10;
  GradingInfo grading;

  friend bool operator==(const GazeMap&, const GazeMap&) = default;
};

/// Throws SchemaError naming the violated invariant.
void validate_gaze_map(const GazeMap& map);

enum class RuleKind { kAnnotation, kFolder };

struct ModuleRule {
  RuleKind kind = RuleKind::kAnnotation;
  std::string pattern;
  char label = 'O';

  friend bool operator==(const ModuleRule&, const ModuleRule&) = default;
};

inline constexpr char kFallbackModule = 'O';

struct ModuleMap {
  std::map<std::string, char, std::less<>> entries;
  std::vector<ModuleRule> rules;

  /// Labels the rules can produce, plus the fallback.
  std::string alphabet() const;
  std::optional<char> label_of(std::string_view path) const;
};

struct StatResult {
  std::string method;
  double statistic = 0.0;
  double p_value = 1.0;
  std::optional<double> effect_size;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  std::string notes;
};

/// Canonical form of a relative path: forward slashes, no empty or "."
/// segments. Throws BadPath for absolute paths, ".." segments and empty paths.
std::string normalize_path(std::string_view path);

/// Returns `s` unchanged when every invariant holds. Invalid-flagged events are
/// retained.
Session validate_session(Session s);

}  // namespace gazemap
