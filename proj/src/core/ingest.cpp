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

#include "gazemap/ingest.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include "json.hpp"
#include <sstream>
#include <system_error>

namespace gazemap {
namespace {

using nlohmann::json;

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

Error bad_value(std::int64_t lineno, const std::string& field, const std::string& why) {
  return Error(ErrorCode::kBadValue,
               "line " + std::to_string(lineno) + ": field '" + field + "' " + why, lineno,
               field);
}

template <typename Int>
std::optional<Int> parse_int(std::string_view text) {
  Int value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return value;
}

std::optional<double> parse_real(std::string_view text) {
  if (text.empty()) return std::nullopt;
  // from_chars for double is available in libstdc++ 11.
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

void apply_meta(Session& s, const SessionMeta& meta) {
  if (!meta.participant_id.empty()) s.participant_id = meta.participant_id;
  if (!meta.task_id.empty()) s.task_id = meta.task_id;
  if (meta.role) s.role = *meta.role;
  if (meta.group) s.group = *meta.group;
}

void finish_session(Session& s, const SessionMeta& meta, std::optional<std::int64_t> logged) {
  apply_meta(s, meta);
  if (meta.duration_ms) {
    s.duration_ms = *meta.duration_ms;
  } else if (logged) {
    s.duration_ms = *logged;
  } else {
    std::int64_t max_t = 0;
    for (const auto& e : s.events) max_t = std::max(max_t, e.t_ms);
    s.duration_ms = max_t + 1;
  }
}

std::string checked_path(std::string_view raw, std::int64_t lineno) {
  try {
    return normalize_path(raw);
  } catch (const Error& e) {
    throw bad_value(lineno, "file", std::string("is not a relative path (") + e.what() + ")");
  }
}

GazeEvent event_from_json(const json& obj, std::int64_t lineno) {
  auto require = [&](const char* key) -> const json& {
    auto it = obj.find(key);
    if (it == obj.end()) {
      throw Error(ErrorCode::kMissingField,
                  "line " + std::to_string(lineno) + ": missing field '" + key + "'", lineno,
                  key);
    }
    return *it;
  };
  GazeEvent e;
  const json& t = require("t");
  if (!t.is_number_integer() || t.get<std::int64_t>() < 0) {
    throw bad_value(lineno, "t", "must be a non-negative integer");
  }
  e.t_ms = t.get<std::int64_t>();
  const json& file = require("file");
  if (!file.is_string()) throw bad_value(lineno, "file", "must be a string");
  e.file = checked_path(file.get<std::string>(), lineno);
  const json& line = require("line");
  if (!line.is_number_integer() || line.get<std::int64_t>() < 1 ||
      line.get<std::int64_t>() > INT32_MAX) {
    throw bad_value(lineno, "line", "must be a 1-based integer");
  }
  e.line = static_cast<std::int32_t>(line.get<std::int64_t>());
  if (auto it = obj.find("col"); it != obj.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 1 ||
        it->get<std::int64_t>() > INT32_MAX) {
      throw bad_value(lineno, "col", "must be a 1-based integer");
    }
    e.column = static_cast<std::int32_t>(it->get<std::int64_t>());
  }
  if (auto it = obj.find("token"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) throw bad_value(lineno, "token", "must be a string");
    e.token = it->get<std::string>();
  }
  if (auto it = obj.find("valid"); it != obj.end() && !it->is_null()) {
    if (!it->is_boolean()) throw bad_value(lineno, "valid", "must be a boolean");
    e.valid = it->get<bool>();
  }
  return e;
}

}  // namespace

Session parse_gaze_jsonl(std::istream& in, const SessionMeta& meta) {
  Session s;
  std::optional<std::int64_t> logged_duration;
  bool meta_seen = false;
  std::string raw;
  std::int64_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto line = trim_cr(raw);
    if (is_blank(line)) continue;
    json obj = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(lineno) + ": not a JSON object", lineno);
    }
    if (meta_seen) {
      throw Error(ErrorCode::kBadValue,
                  "line " + std::to_string(lineno) + ": record after metadata line", lineno,
                  "meta");
    }
    if (auto m = obj.find("meta"); m != obj.end()) {
      meta_seen = true;
      if (!m->is_object()) throw bad_value(lineno, "meta", "must be an object");
      if (auto d = m->find("duration_ms"); d != m->end()) {
        if (!d->is_number_integer()) throw bad_value(lineno, "duration_ms", "must be an integer");
        logged_duration = d->get<std::int64_t>();
      }
      auto text = [&](const char* key) -> std::optional<std::string> {
        auto it = m->find(key);
        if (it == m->end()) return std::nullopt;
        if (!it->is_string()) throw bad_value(lineno, key, "must be a string");
        return it->get<std::string>();
      };
      if (auto v = text("participant")) s.participant_id = *v;
      if (auto v = text("task")) s.task_id = *v;
      if (auto v = text("role")) {
        auto role = parse_role(*v);
        if (!role) throw bad_value(lineno, "role", "must be expert|novice");
        s.role = *role;
      }
      if (auto v = text("group")) {
        auto group = parse_group(*v);
        if (!group) throw bad_value(lineno, "group", "must be control|experiment|expert");
        s.group = *group;
      }
      continue;
    }
    s.events.push_back(event_from_json(obj, lineno));
  }
  finish_session(s, meta, logged_duration);
  return validate_session(std::move(s));
}

std::vector<std::string> split_csv_record(std::string_view record) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < record.size(); ++i) {
    char c = record[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < record.size() && record[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

Session parse_gaze_csv(std::istream& in, const SessionMeta& meta) {
  static constexpr std::string_view kHeader = "t_ms,file,line,col,token,valid";
  Session s;
  std::string raw;
  std::int64_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++lineno;
    auto line = trim_cr(raw);
    if (!header_seen) {
      if (lineno == 1 && line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") {
        line.remove_prefix(3);
      }
      if (line != kHeader) {
        throw Error(ErrorCode::kMissingHeader,
                    "expected header '" + std::string(kHeader) + "'", lineno);
      }
      header_seen = true;
      continue;
    }
    if (is_blank(line)) continue;
    auto fields = split_csv_record(line);
    if (fields.size() != 6) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(lineno) + ": expected 6 fields, got " +
                      std::to_string(fields.size()),
                  lineno);
    }
    GazeEvent e;
    auto t = parse_int<std::int64_t>(fields[0]);
    if (!t || *t < 0) throw bad_value(lineno, "t_ms", "must be a non-negative integer");
    e.t_ms = *t;
    if (fields[1].empty()) {
      throw Error(ErrorCode::kMissingField,
                  "line " + std::to_string(lineno) + ": missing field 'file'", lineno, "file");
    }
    e.file = checked_path(fields[1], lineno);
    auto ln = parse_int<std::int32_t>(fields[2]);
    if (!ln || *ln < 1) throw bad_value(lineno, "line", "must be a 1-based integer");
    e.line = *ln;
    if (!fields[3].empty()) {
      auto col = parse_int<std::int32_t>(fields[3]);
      if (!col || *col < 1) throw bad_value(lineno, "col", "must be a 1-based integer");
      e.column = *col;
    }
    if (!fields[4].empty()) e.token = fields[4];
    const auto& valid = fields[5];
    if (valid.empty() || valid == "true" || valid == "1") {
      e.valid = true;
    } else if (valid == "false" || valid == "0") {
      e.valid = false;
    } else {
      throw bad_value(lineno, "valid", "must be true|false");
    }
    s.events.push_back(std::move(e));
  }
  if (!header_seen) {
    throw Error(ErrorCode::kMissingHeader, "empty input, expected header", 1);
  }
  finish_session(s, meta, std::nullopt);
  return validate_session(std::move(s));
}

std::string to_jsonl(const Session& s) {
  std::string out;
  for (const auto& e : s.events) {
    json obj = {{"t", e.t_ms}, {"file", e.file}, {"line", e.line}};
    if (e.column) obj["col"] = *e.column;
    if (e.token) obj["token"] = *e.token;
    if (!e.valid) obj["valid"] = false;
    out += obj.dump();
    out += '\n';
  }
  json meta = {{"duration_ms", s.duration_ms},
               {"participant", s.participant_id},
               {"role", to_string(s.role)},
               {"group", to_string(s.group)},
               {"task", s.task_id}};
  out += json{{"meta", meta}}.dump();
  out += '\n';
  return out;
}

namespace {
std::string csv_field(std::string_view v) {
  if (v.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(v);
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}
}  // namespace

std::string to_csv(const Session& s) {
  std::string out = "t_ms,file,line,col,token,valid\n";
  for (const auto& e : s.events) {
    out += std::to_string(e.t_ms) + ',' + csv_field(e.file) + ',' + std::to_string(e.line) + ',';
    if (e.column) out += std::to_string(*e.column);
    out += ',';
    if (e.token) out += csv_field(*e.token);
    out += e.valid ? ",true\n" : ",false\n";
  }
  return out;
}

std::int64_t count_lines(std::string_view text) noexcept {
  auto n = static_cast<std::int64_t>(std::count(text.begin(), text.end(), '\n'));
  if (!text.empty() && text.back() != '\n') ++n;
  return n;
}

std::string language_from_extension(std::string_view path) {
  auto slash = path.rfind('/');
  auto name = slash == std::string_view::npos ? path : path.substr(slash + 1);
  auto dot = name.rfind('.');
  if (dot == std::string_view::npos || dot == 0) return "text";
  std::string ext(name.substr(dot + 1));
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  static const std::map<std::string, std::string, std::less<>> kLanguages = {
      {"java", "java"},   {"kt", "kotlin"},     {"html", "html"},      {"htm", "html"},
      {"jsp", "jsp"},     {"js", "javascript"}, {"ts", "typescript"},  {"css", "css"},
      {"xml", "xml"},     {"json", "json"},     {"yml", "yaml"},       {"yaml", "yaml"},
      {"properties", "properties"}, {"sql", "sql"}, {"md", "markdown"}, {"py", "python"},
      {"c", "c"},         {"h", "c"},           {"cpp", "cpp"},        {"hpp", "cpp"},
  };
  auto it = kLanguages.find(ext);
  return it == kLanguages.end() ? ext : it->second;
}

FileInventory scan_source_tree(const std::filesystem::path& root,
                               const std::vector<std::string>& include_globs,
                               const std::vector<std::string>& exclude_globs) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorCode::kRootNotFound, "source root '" + root.string() + "' not found",
                std::nullopt, root.string());
  }
  auto matches = [](const std::vector<std::string>& globs, const std::string& rel) {
    return std::any_of(globs.begin(), globs.end(), [&](const std::string& g) {
      return ::fnmatch(g.c_str(), rel.c_str(), 0) == 0;
    });
  };
  FileInventory inv;
  inv.root = root;
  fs::recursive_directory_iterator it(root, fs::directory_options::none, ec);
  if (ec) throw Error(ErrorCode::kIoError, ec.message(), std::nullopt, root.string());
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) throw Error(ErrorCode::kIoError, ec.message(), std::nullopt, root.string());
    if (!it->is_regular_file(ec)) continue;
    std::string rel = normalize_path(fs::relative(it->path(), root).generic_string());
    if (!include_globs.empty() && !matches(include_globs, rel)) continue;
    if (matches(exclude_globs, rel)) continue;
    std::ifstream file(it->path(), std::ios::binary);
    if (!file) throw Error(ErrorCode::kIoError, "cannot read '" + rel + "'", std::nullopt, rel);
    std::ostringstream buf;
    buf << file.rdbuf();
    inv.files[rel] = SourceFile{count_lines(buf.str()), language_from_extension(rel)};
  }
  return inv;
}

std::vector<ModuleRule> default_module_rules() {
  using K = RuleKind;
  return {
      {K::kAnnotation, "Controller", 'C'},  {K::kAnnotation, "RestController", 'C'},
      {K::kAnnotation, "Service", 'S'},     {K::kAnnotation, "Repository", 'R'},
      {K::kAnnotation, "Entity", 'E'},      {K::kAnnotation, "Configuration", 'F'},
      {K::kFolder, "controller", 'C'},      {K::kFolder, "service", 'S'},
      {K::kFolder, "dao", 'R'},             {K::kFolder, "repository", 'R'},
      {K::kFolder, "entity", 'E'},          {K::kFolder, "model", 'E'},
      {K::kFolder, "templates", 'V'},       {K::kFolder, "views", 'V'},
      {K::kFolder, "webapp", 'V'},
  };
}

std::vector<ModuleRule> parse_module_rules(std::string_view json_text) {
  json doc = json::parse(json_text.begin(), json_text.end(), nullptr, false);
  auto schema = [](const std::string& where, const std::string& what) {
    return Error(ErrorCode::kSchemaError, where + ": " + what, std::nullopt, where);
  };
  if (doc.is_discarded()) throw schema("", "module rules are not valid JSON");
  if (!doc.is_array()) throw schema("", "module rules must be a JSON array");
  std::vector<ModuleRule> rules;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& r = doc[i];
    const std::string where = "/" + std::to_string(i);
    if (!r.is_object()) throw schema(where, "rule must be an object");
    auto kind = r.value("kind", json()), pattern = r.value("pattern", json()),
         label = r.value("label", json());
    if (!kind.is_string() || (kind != "annotation" && kind != "folder")) {
      throw schema(where + "/kind", "must be \"annotation\" or \"folder\"");
    }
    if (!pattern.is_string() || pattern.get<std::string>().empty()) {
      throw schema(where + "/pattern", "must be a non-empty string");
    }
    if (!label.is_string() || label.get<std::string>().size() != 1) {
      throw schema(where + "/label", "must be a single character");
    }
    std::string p = pattern.get<std::string>();
    if (!p.empty() && p.front() == '@') p.erase(0, 1);
    rules.push_back({kind == "annotation" ? RuleKind::kAnnotation : RuleKind::kFolder, p,
                     label.get<std::string>()[0]});
  }
  return rules;
}

std::string module_rules_to_json(const std::vector<ModuleRule>& rules) {
  json doc = json::array();
  for (const auto& r : rules) {
    doc.push_back({{"kind", r.kind == RuleKind::kAnnotation ? "annotation" : "folder"},
                   {"pattern", r.pattern},
                   {"label", std::string(1, r.label)}});
  }
  return doc.dump();
}

std::string strip_comments_and_strings(std::string_view content) {
  std::string out(content);
  enum class State { kCode, kLineComment, kBlockComment, kString, kChar };
  State state = State::kCode;
  auto blank = [&](std::size_t i) {
    if (out[i] != '\n') out[i] = ' ';
  };
  for (std::size_t i = 0; i < content.size(); ++i) {
    char c = content[i];
    char next = i + 1 < content.size() ? content[i + 1] : '\0';
    switch (state) {
      case State::kCode:
        if (c == '/' && next == '/') {
          state = State::kLineComment;
          blank(i);
        } else if (c == '/' && next == '*') {
          state = State::kBlockComment;
          blank(i);
          blank(++i);
        } else if (c == '"') {
          state = State::kString;
          blank(i);
        } else if (c == '\'') {
          state = State::kChar;
          blank(i);
        }
        break;
      case State::kLineComment:
        if (c == '\n') state = State::kCode;
        blank(i);
        break;
      case State::kBlockComment:
        blank(i);
        if (c == '*' && next == '/') {
          blank(++i);
          state = State::kCode;
        }
        break;
      case State::kString:
      case State::kChar: {
        char quote = state == State::kString ? '"' : '\'';
        blank(i);
        if (c == '\\' && i + 1 < content.size()) {
          blank(++i);
        } else if (c == quote) {
          state = State::kCode;
        }
        break;
      }
    }
  }
  return out;
}

std::vector<std::string> scan_annotations(std::string_view content) {
  const std::string code = strip_comments_and_strings(content);
  auto ident_start = [](unsigned char c) { return std::isalpha(c) || c == '_' || c == '$'; };
  auto ident_char = [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '$'; };
  std::vector<std::string> names;
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (code[i] != '@') continue;
    std::size_t j = i + 1;
    while (j < code.size() && (code[j] == ' ' || code[j] == '\t')) ++j;
    if (j >= code.size() || !ident_start(static_cast<unsigned char>(code[j]))) continue;
    std::size_t seg_begin = j;
    std::size_t end = j;
    while (end < code.size()) {
      if (ident_char(static_cast<unsigned char>(code[end]))) {
        ++end;
      } else if (code[end] == '.' && end + 1 < code.size() &&
                 ident_start(static_cast<unsigned char>(code[end + 1]))) {
        seg_begin = ++end;
      } else {
        break;
      }
    }
    // `@interface` declares an annotation type rather than using one.
    std::string name = code.substr(seg_begin, end - seg_begin);
    if (name != "interface") names.push_back(std::move(name));
    i = end - 1;
  }
  return names;
}

namespace {
bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
           return std::tolower(x) == std::tolower(y);
         });
}
}  // namespace

char classify_module(std::string_view path, std::string_view content,
                     const std::vector<ModuleRule>& rules) {
  bool has_annotation_rule = std::any_of(rules.begin(), rules.end(), [](const ModuleRule& r) {
    return r.kind == RuleKind::kAnnotation;
  });
  if (has_annotation_rule) {
    const auto names = scan_annotations(content);
    for (const auto& rule : rules) {
      if (rule.kind != RuleKind::kAnnotation) continue;
      if (std::find(names.begin(), names.end(), rule.pattern) != names.end()) return rule.label;
    }
  }
  std::vector<std::string_view> dirs;
  for (std::size_t pos = 0;;) {
    auto slash = path.find('/', pos);
    if (slash == std::string_view::npos) break;
    dirs.push_back(path.substr(pos, slash - pos));
    pos = slash + 1;
  }
  for (const auto& rule : rules) {
    if (rule.kind != RuleKind::kFolder) continue;
    for (auto dir : dirs) {
      if (iequals(dir, rule.pattern)) return rule.label;
    }
  }
  return kFallbackModule;
}

ModuleMap build_module_map(const FileInventory& inventory, std::vector<ModuleRule> rules) {
  if (rules.empty()) throw Error(ErrorCode::kInvalidArgument, "module rule list is empty");
  ModuleMap map;
  map.rules = std::move(rules);
  for (const auto& [path, info] : inventory.files) {
    std::ifstream file(inventory.root / path, std::ios::binary);
    if (!file) throw Error(ErrorCode::kIoError, "cannot read '" + path + "'", std::nullopt, path);
    std::ostringstream buf;
    buf << file.rdbuf();
    map.entries[path] = classify_module(path, buf.str(), map.rules);
  }
  return map;
}

std::vector<TlxRecord> parse_tlx_csv(std::istream& in) {
  static constexpr std::string_view kHeader =
      "participant,task,md,pd,td,pf,ef,fr,w_md,w_pd,w_td,w_pf,w_ef,w_fr";
  static const char* kFields[] = {"md", "pd", "td", "pf", "ef", "fr",
                                  "w_md", "w_pd", "w_td", "w_pf", "w_ef", "w_fr"};
  std::vector<TlxRecord> records;
  std::string raw;
  std::int64_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++lineno;
    auto line = trim_cr(raw);
    if (!header_seen) {
      if (line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
      if (line != kHeader) {
        throw Error(ErrorCode::kMissingHeader,
                    "expected header '" + std::string(kHeader) + "'", lineno);
      }
      header_seen = true;
      continue;
    }
    if (is_blank(line)) continue;
    auto fields = split_csv_record(line);
    if (fields.size() != 14) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(lineno) + ": expected 14 fields", lineno);
    }
    TlxRecord r;
    r.participant = fields[0];
    r.task = fields[1];
    for (int i = 0; i < 6; ++i) {
      auto v = parse_real(fields[2 + i]);
      if (!v || !(*v >= 0.0 && *v <= 20.0)) {
        throw bad_value(lineno, kFields[i], "rating must lie in [0,20]");
      }
      r.ratings[i] = *v;
    }
    for (int i = 0; i < 6; ++i) {
      auto w = parse_int<std::int64_t>(fields[8 + i]);
      if (!w || *w < 0) throw bad_value(lineno, kFields[6 + i], "weight must be a non-negative integer");
      r.weights[i] = *w;
    }
    records.push_back(std::move(r));
  }
  if (!header_seen) throw Error(ErrorCode::kMissingHeader, "empty input, expected header", 1);
  return records;
}

}  // namespace gazemap
