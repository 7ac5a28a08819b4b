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

// Readers for gaze logs, questionnaire data and source trees, plus the
// annotation/folder module classifier.

#pragma once

#include <array>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gazemap/model.hpp"

namespace gazemap {

/// Session metadata supplied by the caller. Fields left empty are filled from
/// the log's metadata line when it has one.
struct SessionMeta {
  std::string participant_id;
  std::optional<Role> role;
  std::optional<Group> group;
  std::string task_id;
  std::optional<std::int64_t> duration_ms;
};

/// One JSON object per line: t, file, line and optional col, token, valid.
/// An optional final `{"meta":{...}}` line carries duration_ms and, for
/// session files written by `to_jsonl`, participant/role/group/task.
Session parse_gaze_jsonl(std::istream& in, const SessionMeta& meta = {});

/// Header `t_ms,file,line,col,token,valid`; RFC 4180 quoting, LF or CRLF.
Session parse_gaze_csv(std::istream& in, const SessionMeta& meta = {});

/// Canonical JSONL session file, metadata line last.
std::string to_jsonl(const Session& s);
std::string to_csv(const Session& s);

struct SourceFile {
  std::int64_t line_count = 0;
  std::string language;

  friend bool operator==(const SourceFile&, const SourceFile&) = default;
};

struct FileInventory {
  std::filesystem::path root;
  std::map<std::string, SourceFile, std::less<>> files;
};

/// Newline-delimited line count; a trailing unterminated line counts as one.
std::int64_t count_lines(std::string_view text) noexcept;
std::string language_from_extension(std::string_view path);

/// Globs use fnmatch semantics against the relative path (`*` crosses `/`).
/// An empty include list matches everything.
FileInventory scan_source_tree(const std::filesystem::path& root,
                               const std::vector<std::string>& include_globs = {},
                               const std::vector<std::string>& exclude_globs = {});

std::vector<ModuleRule> default_module_rules();

/// Parses the rules file: a JSON array of {kind, pattern, label}.
std::vector<ModuleRule> parse_module_rules(std::string_view json_text);
std::string module_rules_to_json(const std::vector<ModuleRule>& rules);

/// Source text with comments and string/char literals blanked out. Newlines
/// are preserved so offsets keep their line.
std::string strip_comments_and_strings(std::string_view content);

/// Annotation names (`@Name`, qualified names reduced to their last segment)
/// outside comments and literals, in order of appearance.
std::vector<std::string> scan_annotations(std::string_view content);

/// Annotation rules are tried before folder rules, each in declared order;
/// the first match wins, else the fallback 'O'.
char classify_module(std::string_view path, std::string_view content,
                     const std::vector<ModuleRule>& rules);

/// Classifies every file in the inventory, reading contents from its root.
ModuleMap build_module_map(const FileInventory& inventory, std::vector<ModuleRule> rules);

struct TlxRecord {
  std::string participant;
  std::string task;
  /// mental, physical, temporal, performance, effort, frustration
  std::array<double, 6> ratings{};
  std::array<std::int64_t, 6> weights{};
};

/// Header `participant,task,md,pd,td,pf,ef,fr,w_md,w_pd,w_td,w_pf,w_ef,w_fr`.
/// Ratings must lie in [0,20], weights be non-negative integers; the weight
/// sum is checked by nasa_tlx.
std::vector<TlxRecord> parse_tlx_csv(std::istream& in);

/// Splits one CSV record on commas honouring double-quoted fields.
std::vector<std::string> split_csv_record(std::string_view record);

}  // namespace gazemap
