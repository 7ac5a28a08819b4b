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

#include "gazemap/export.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gazemap {
namespace {

using nlohmann::json;

void write_fixed(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 6);
  std::string_view text(buf, static_cast<std::size_t>(ptr - buf));
  if (text == "-0.000000") text = "0.000000";
  out += text;
}

void dump_into(std::string& out, const json& v, int depth) {
  const std::string pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
  const std::string close_pad(static_cast<std::size_t>(depth) * 2, ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += json(key).dump(-1, ' ', false, json::error_handler_t::replace);
        out += ": ";
        dump_into(out, item, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_into(out, v[i], depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case json::value_t::number_float:
      write_fixed(out, v.get<double>());
      return;
    default:
      out += v.dump(-1, ' ', false, json::error_handler_t::replace);
      return;
  }
}

[[noreturn]] void schema_error(const std::string& pointer, const std::string& what) {
  throw Error(ErrorCode::kSchemaError, (pointer.empty() ? "/" : pointer) + ": " + what,
              std::nullopt, pointer.empty() ? "/" : pointer);
}

std::string escape_pointer(std::string_view token) {
  std::string out;
  for (char c : token) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

const json& member(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing '") + key + "'");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) schema_error(where, "expected a number");
  return v.get<double>();
}

std::int64_t integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) schema_error(where, "expected an integer");
  return v.get<std::int64_t>();
}

std::string text(const json& v, const std::string& where) {
  if (!v.is_string()) schema_error(where, "expected a string");
  return v.get<std::string>();
}

AttentionGrade grade_of(const json& v, const std::string& where) {
  auto g = parse_grade(text(v, where));
  if (!g) schema_error(where, "unknown grade");
  return *g;
}

json grading_to_json(const GradingInfo& g) {
  return {{"method", g.method},
          {"skew_threshold", g.skew_threshold},
          {"skewness", g.skewness},
          {"boundaries", g.boundaries},
          {"note", "five-level binning is a configurable stand-in: quantile bins when skewness "
                   "exceeds the threshold, equal-width bins otherwise"}};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return {};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& p, std::string_view data) {
  std::error_code ec;
  std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + p.string() + "'", std::nullopt, p.string());
}

}  // namespace

std::string canonical_dump(const json& doc) {
  std::string out;
  dump_into(out, doc, 0);
  out += '\n';
  return out;
}

json gaze_map_to_json(const GazeMap& map) {
  json files = json::object();
  for (const auto& [path, file] : map.files) {
    json lines = json::array();
    for (const auto& [line, rec] : file.lines) {
      lines.push_back({{"line", line},
                       {"mean_norm_hits", rec.mean_norm_hits},
                       {"grade", to_string(rec.grade)}});
    }
    files[path] = {{"line_count", file.line_count}, {"lines", std::move(lines)}};
  }
  json ranking = json::array();
  for (const auto& r : map.ranking) {
    ranking.push_back({{"path", r.path}, {"total_attention", r.total_attention}});
  }
  json blocks = json::object();
  for (const auto& [path, list] : map.blocks) {
    json arr = json::array();
    for (const auto& b : list) {
      arr.push_back({{"start", b.start_line}, {"end", b.end_line}, {"grade", to_string(b.grade)}});
    }
    blocks[path] = std::move(arr);
  }
  return {{"format_version", kFormatVersion},
          {"project_id", map.project_id},
          {"top_n", map.top_n},
          {"unit", "hits_per_second"},
          {"grading", grading_to_json(map.grading)},
          {"files", std::move(files)},
          {"ranking", std::move(ranking)},
          {"blocks", std::move(blocks)}};
}

GazeMap gaze_map_from_json(const json& doc) {
  if (!doc.is_object()) schema_error("", "document must be an object");
  const auto& version = member(doc, "format_version", "");
  if (!version.is_string() || version.get<std::string>() != kFormatVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "format_version " + version.dump() + " is not supported (expected \"1\")",
                std::nullopt, "/format_version");
  }
  GazeMap map;
  map.project_id = text(member(doc, "project_id", ""), "/project_id");
  map.top_n = static_cast<std::int32_t>(integer(member(doc, "top_n", ""), "/top_n"));

  const auto& grading = member(doc, "grading", "");
  if (!grading.is_object()) schema_error("/grading", "expected an object");
  map.grading.method = text(member(grading, "method", "/grading"), "/grading/method");
  map.grading.skew_threshold =
      number(member(grading, "skew_threshold", "/grading"), "/grading/skew_threshold");
  map.grading.skewness = number(member(grading, "skewness", "/grading"), "/grading/skewness");
  const auto& bounds = member(grading, "boundaries", "/grading");
  if (!bounds.is_array()) schema_error("/grading/boundaries", "expected an array");
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    map.grading.boundaries.push_back(number(bounds[i], "/grading/boundaries/" + std::to_string(i)));
  }

  const auto& files = member(doc, "files", "");
  if (!files.is_object()) schema_error("/files", "expected an object");
  for (const auto& [path, file] : files.items()) {
    const std::string where = "/files/" + escape_pointer(path);
    if (!file.is_object()) schema_error(where, "expected an object");
    FileAttention fa;
    fa.line_count = integer(member(file, "line_count", where), where + "/line_count");
    const auto& lines = member(file, "lines", where);
    if (!lines.is_array()) schema_error(where + "/lines", "expected an array");
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::string lw = where + "/lines/" + std::to_string(i);
      const auto& rec = lines[i];
      if (!rec.is_object()) schema_error(lw, "expected an object");
      const auto line = integer(member(rec, "line", lw), lw + "/line");
      if (line < 1 || line > INT32_MAX) schema_error(lw + "/line", "line out of range");
      LineRecord lr{number(member(rec, "mean_norm_hits", lw), lw + "/mean_norm_hits"),
                    grade_of(member(rec, "grade", lw), lw + "/grade")};
      if (!fa.lines.emplace(static_cast<std::int32_t>(line), lr).second) {
        schema_error(lw, "duplicate line " + std::to_string(line));
      }
    }
    map.files.emplace(path, std::move(fa));
  }

  const auto& ranking = member(doc, "ranking", "");
  if (!ranking.is_array()) schema_error("/ranking", "expected an array");
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const std::string where = "/ranking/" + std::to_string(i);
    const auto& r = ranking[i];
    if (!r.is_object()) schema_error(where, "expected an object");
    map.ranking.push_back({text(member(r, "path", where), where + "/path"),
                           number(member(r, "total_attention", where), where + "/total_attention")});
  }

  const auto& blocks = member(doc, "blocks", "");
  if (!blocks.is_object()) schema_error("/blocks", "expected an object");
  for (const auto& [path, list] : blocks.items()) {
    const std::string where = "/blocks/" + escape_pointer(path);
    if (!list.is_array()) schema_error(where, "expected an array");
    auto& out = map.blocks[path];
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string bw = where + "/" + std::to_string(i);
      const auto& b = list[i];
      if (!b.is_object()) schema_error(bw, "expected an object");
      out.push_back({static_cast<std::int32_t>(integer(member(b, "start", bw), bw + "/start")),
                     static_cast<std::int32_t>(integer(member(b, "end", bw), bw + "/end")),
                     grade_of(member(b, "grade", bw), bw + "/grade")});
    }
  }
  validate_gaze_map(map);
  return map;
}

std::string export_gazemap_json(const GazeMap& map) { return canonical_dump(gaze_map_to_json(map)); }

GazeMap import_gazemap_json(std::string_view text_in) {
  json doc = json::parse(text_in.begin(), text_in.end(), nullptr, false);
  if (doc.is_discarded()) schema_error("", "not valid JSON");
  return gaze_map_from_json(doc);
}

json module_map_to_json(const ModuleMap& modules) {
  json entries = json::object();
  for (const auto& [path, label] : modules.entries) entries[path] = std::string(1, label);
  json rules = json::array();
  for (const auto& r : modules.rules) {
    rules.push_back({{"kind", r.kind == RuleKind::kAnnotation ? "annotation" : "folder"},
                     {"pattern", r.pattern},
                     {"label", std::string(1, r.label)}});
  }
  return {{"alphabet", modules.alphabet()}, {"entries", std::move(entries)}, {"rules", std::move(rules)}};
}

json stat_result_to_json(const StatResult& r) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return {{"method", r.method},         {"statistic", r.statistic}, {"p_value", r.p_value},
          {"effect_size", opt(r.effect_size)}, {"ci_low", opt(r.ci_low)}, {"ci_high", opt(r.ci_high)},
          {"n1", r.n1},                 {"n2", r.n2},               {"notes", r.notes}};
}

std::string stat_results_to_csv(const std::vector<StatResult>& results) {
  auto num = [](double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
  };
  auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : std::string(); };
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  };
  std::string out = "method,statistic,p_value,effect_size,ci_low,ci_high,n1,n2,notes\n";
  for (const auto& r : results) {
    out += quote(r.method) + ',' + num(r.statistic) + ',' + num(r.p_value) + ',' + opt(r.effect_size) +
           ',' + opt(r.ci_low) + ',' + opt(r.ci_high) + ',' + std::to_string(r.n1) + ',' +
           std::to_string(r.n2) + ',' + quote(r.notes) + '\n';
  }
  return out;
}

json overlap_report_to_json(const OverlapReport& report) {
  return {{"per_file", report.per_file},
          {"zero_overlap_count", report.zero_overlap_count},
          {"full_overlap_count", report.full_overlap_count},
          {"aggregate",
           {{"jaccard", report.aggregate},
            {"both_empty", report.aggregate_both_empty},
            {"label", "Jaccard index over the union of all viewed (file, line) pairs"}}},
          {"per_file_mean",
           {{"jaccard", report.per_file_mean},
            {"label", "unweighted mean of per-file Jaccard over files viewed by either group"}}}};
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIoError, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

json manifest_to_json(const std::vector<ManifestEntry>& entries) {
  json files = json::array();
  for (const auto& e : entries) {
    files.push_back({{"path", e.path}, {"bytes", e.bytes}, {"sha256", e.sha256}});
  }
  return {{"format_version", kFormatVersion}, {"files", std::move(files)}};
}

std::vector<ManifestEntry> export_viewer_bundle(const GazeMap& map, const FileInventory& inventory,
                                                const ModuleMap& modules,
                                                const std::filesystem::path& out_dir,
                                                const BundleProvenance& provenance) {
  validate_gaze_map(map);
  std::map<std::string, std::string> sources;
  for (const auto& [path, info] : inventory.files) {
    std::error_code ec;
    const auto full = inventory.root / path;
    if (!std::filesystem::is_regular_file(full, ec)) {
      throw Error(ErrorCode::kUnknownFile, "source file '" + path + "' is missing", std::nullopt, path);
    }
    sources.emplace(path, read_file(full));
  }
  for (const auto& [path, file] : map.files) {
    auto it = sources.find(path);
    if (it == sources.end()) {
      throw Error(ErrorCode::kUnknownFile, "gaze map file '" + path + "' has no source text",
                  std::nullopt, path);
    }
    const auto lines = count_lines(it->second);
    if (!file.lines.empty() && file.lines.rbegin()->first > lines) {
      throw Error(ErrorCode::kLineOutOfRange, "'" + path + "' has grades beyond its " +
                                                  std::to_string(lines) + " lines",
                  std::nullopt, path);
    }
  }

  json source_files = json::object();
  for (const auto& [path, text_body] : sources) source_files[path] = text_body;
  json bundle = {
      {"format_version", kFormatVersion},
      {"gaze_map", gaze_map_to_json(map)},
      {"module_map", module_map_to_json(modules)},
      {"source_files", std::move(source_files)},
      {"provenance",
       {{"tool", "gazemap"},
        {"tool_version", kToolVersion},
        {"grading", grading_to_json(map.grading)},
        {"top_n", map.top_n},
        {"session_ids", provenance.session_ids},
        {"reference_sequence", provenance.reference_sequence},
        {"min_dwell_ms", provenance.min_dwell_ms},
        {"notes",
         {"line values are group means of per-token maximum hits normalized by session duration "
          "(hits per second)",
          "reference_sequence concatenates member file sequences in participant-id order, then "
          "collapses repeats"}}}}};

  std::vector<ManifestEntry> manifest;
  const std::string bundle_text = canonical_dump(bundle);
  write_file(out_dir / "bundle.json", bundle_text);
  manifest.push_back({"bundle.json", bundle_text.size(), sha256_hex(bundle_text)});
  for (const auto& [path, body] : sources) {
    write_file(out_dir / "files" / path, body);
    manifest.push_back({"files/" + path, body.size(), sha256_hex(body)});
  }
  std::sort(manifest.begin(), manifest.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
  write_file(out_dir / "manifest.json", canonical_dump(manifest_to_json(manifest)));
  return manifest;
}

}  // namespace gazemap
