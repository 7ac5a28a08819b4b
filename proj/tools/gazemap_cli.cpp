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

// gazemap command-line front end. Talks to the library only through the C
// interface in gazemap.h.

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gazemap/gazemap.h"
#include "json.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Deleter {
  void operator()(gzm_session* p) const { gzm_session_free(p); }
  void operator()(gzm_inventory* p) const { gzm_inventory_free(p); }
  void operator()(gzm_module_map* p) const { gzm_module_map_free(p); }
  void operator()(gzm_gaze_map* p) const { gzm_gaze_map_free(p); }
  void operator()(char* p) const { gzm_string_free(p); }
};
template <typename T>
using Handle = std::unique_ptr<T, Deleter>;

// Thrown to unwind to main with an exit code; the message is already final.
struct Failure {
  int exit_code;
  std::string message;
};

bool use_color() {
  return std::getenv("GAZEMAP_NO_COLOR") == nullptr && ::isatty(STDERR_FILENO) != 0;
}

void print_error(const std::string& message) {
  if (use_color()) {
    std::cerr << "\x1b[31merror:\x1b[0m " << message << "\n";
  } else {
    std::cerr << "error: " << message << "\n";
  }
}

// Converts a library status into a Failure; `where` is the input file, if any.
void check(gzm_status status, const std::string& where = {}) {
  if (status == GZM_OK) return;
  std::string message = gzm_last_error();
  const auto index = gzm_last_error_index();
  const bool line_numbered = status == GZM_E_MALFORMED_LINE || status == GZM_E_MISSING_FIELD ||
                             status == GZM_E_MISSING_HEADER || status == GZM_E_BAD_VALUE;
  std::string prefix;
  if (!where.empty()) {
    prefix = where;
    if (line_numbered && index > 0) prefix += ":" + std::to_string(index);
    prefix += ": ";
  }
  throw Failure{status == GZM_E_INVALID_ARGUMENT ? kExitUsage : kExitData, prefix + message};
}

std::string take(char* raw) {
  Handle<char> owned(raw);
  return raw ? std::string(raw) : std::string();
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitData, path + ": cannot open file"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json read_json(const std::string& path) {
  json doc = json::parse(read_text(path), nullptr, false);
  if (doc.is_discarded()) throw Failure{kExitData, path + ": not valid JSON"};
  return doc;
}

std::string extension_of(const std::string& path) { return fs::path(path).extension().string(); }

gzm_log_format log_format_for(const std::string& path, const std::string& forced) {
  if (forced == "csv") return GZM_LOG_CSV;
  if (forced == "jsonl") return GZM_LOG_JSONL;
  return extension_of(path) == ".csv" ? GZM_LOG_CSV : GZM_LOG_JSONL;
}

struct MetaFlags {
  std::string participant, role, group, task;
  std::int64_t duration_ms = 0;
};

Handle<gzm_session> load_session(const std::string& path, const MetaFlags& flags = {},
                                 const std::string& forced_format = {}) {
  const std::string text = read_text(path);
  gzm_session_meta meta{flags.participant.c_str(), flags.role.c_str(), flags.group.c_str(),
                        flags.task.c_str(), flags.duration_ms};
  gzm_session* raw = nullptr;
  check(gzm_session_parse(text.data(), text.size(), log_format_for(path, forced_format), &meta, &raw),
        path);
  return Handle<gzm_session>(raw);
}

Handle<gzm_inventory> load_inventory(const std::string& root, const std::vector<std::string>& include,
                                     const std::vector<std::string>& exclude) {
  std::vector<const char*> inc, exc;
  for (const auto& g : include) inc.push_back(g.c_str());
  for (const auto& g : exclude) exc.push_back(g.c_str());
  gzm_inventory* raw = nullptr;
  check(gzm_inventory_scan(root.c_str(), inc.data(), inc.size(), exc.data(), exc.size(), &raw), root);
  return Handle<gzm_inventory>(raw);
}

Handle<gzm_module_map> load_modules(const gzm_inventory* inv, const std::string& rules_path) {
  std::string rules;
  if (!rules_path.empty()) rules = read_text(rules_path);
  gzm_module_map* raw = nullptr;
  check(gzm_module_map_build(inv, rules_path.empty() ? nullptr : rules.c_str(), &raw), rules_path);
  return Handle<gzm_module_map>(raw);
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void emit_json(const json& doc) { std::cout << doc.dump(2) << "\n"; }

// ---- configuration -------------------------------------------------------

struct Settings {
  std::string format = "json";
  std::int32_t top_n = 10;
  double skew_threshold = 1.0;
  std::int64_t min_dwell = 0;
  bool include_invalid = false;
  std::int32_t mwu_exact_cutoff = 14;
  std::int32_t wilcoxon_exact_cutoff = 12;
  std::uint32_t resamples = 10000;
  std::uint64_t seed = 42;
  double level = 0.95;
  std::uint32_t threads = 1;
};

// Values from ./gazemap.json (or --config) become defaults that flags override.
void merge_config(Settings& s, const std::string& path, bool required) {
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    if (required) throw Failure{kExitUsage, path + ": config file not found"};
    return;
  }
  json cfg = read_json(path);
  if (!cfg.is_object()) throw Failure{kExitData, path + ": config must be a JSON object"};
  try {
    s.format = cfg.value("format", s.format);
    s.top_n = cfg.value("top_n", s.top_n);
    s.skew_threshold = cfg.value("skew_threshold", s.skew_threshold);
    s.min_dwell = cfg.value("min_dwell", s.min_dwell);
    s.include_invalid = cfg.value("include_invalid", s.include_invalid);
    if (cfg.contains("exact_cutoff")) {
      s.mwu_exact_cutoff = s.wilcoxon_exact_cutoff = cfg["exact_cutoff"].get<std::int32_t>();
    }
    s.resamples = cfg.value("resamples", s.resamples);
    s.seed = cfg.value("seed", s.seed);
    s.level = cfg.value("level", s.level);
    s.threads = cfg.value("threads", s.threads);
  } catch (const json::exception& e) {
    throw Failure{kExitData, path + ": " + e.what()};
  }
}

std::string config_path_from(int argc, char** argv, bool& explicit_path) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      explicit_path = true;
      return argv[i + 1];
    }
  }
  explicit_path = false;
  return "gazemap.json";
}

// ---- sequences -----------------------------------------------------------

struct LoadedSequence {
  std::string source;
  json sequence;      // FileSequence object
  std::string modules;  // set when the input file carries literal module labels
  bool has_modules = false;
};

LoadedSequence load_sequence(const std::string& path, const Settings& s) {
  LoadedSequence out;
  out.source = path;
  if (extension_of(path) == ".json") {
    json doc = read_json(path);
    if (doc.is_object() && doc.contains("modules")) {
      if (!doc["modules"].is_string()) throw Failure{kExitData, path + ": \"modules\" must be a string"};
      out.modules = doc["modules"].get<std::string>();
      out.has_modules = true;
      out.sequence = {{"items", json::array()},
                      {"participant_id", doc.value("participant_id", std::string())},
                      {"task_id", doc.value("task_id", std::string())}};
      return out;
    }
    if (doc.is_array()) doc = {{"items", doc}, {"participant_id", ""}, {"task_id", ""}};
    if (!doc.is_object() || !doc.contains("items") || !doc["items"].is_array()) {
      throw Failure{kExitData, path + ": expected an array of paths or an object with \"items\""};
    }
    for (const auto& item : doc["items"]) {
      if (!item.is_string()) throw Failure{kExitData, path + ": sequence items must be strings"};
    }
    out.sequence = doc;
    return out;
  }
  auto session = load_session(path);
  char* raw = nullptr;
  check(gzm_session_file_sequence(session.get(), s.min_dwell, s.include_invalid, &raw), path);
  out.sequence = json::parse(take(raw));
  return out;
}

std::vector<std::string> items_of(const json& seq) { return seq["items"].get<std::vector<std::string>>(); }

json combine(const std::vector<LoadedSequence>& parts) {
  if (parts.size() == 1) return parts.front().sequence;
  json arr = json::array();
  for (const auto& p : parts) arr.push_back(p.sequence);
  char* raw = nullptr;
  check(gzm_group_sequence(arr.dump().c_str(), &raw));
  return json::parse(take(raw));
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

// ---- subcommands ---------------------------------------------------------

int run_ingest(const std::string& input, const MetaFlags& meta, const std::string& in_format,
               const std::string& out_format, const std::string& out_path) {
  auto session = load_session(input, meta, in_format);
  char* raw = nullptr;
  check(gzm_session_serialize(session.get(), out_format == "csv" ? GZM_LOG_CSV : GZM_LOG_JSONL, &raw));
  const std::string text = take(raw);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw Failure{kExitData, out_path + ": cannot write"};
    std::cerr << "wrote " << gzm_session_event_count(session.get()) << " events to " << out_path << "\n";
  }
  return 0;
}

struct MapFlags {
  std::vector<std::string> sessions;
  std::string source_root;
  std::vector<std::string> include, exclude;
  std::string project_id;
  std::string module_rules;
  std::string out_dir;
  bool bundle = false;
};

int run_map(const MapFlags& f, const Settings& s) {
  if (f.bundle && f.out_dir.empty()) throw Failure{kExitUsage, "--bundle requires --out-dir"};
  auto inventory = load_inventory(f.source_root, f.include, f.exclude);
  std::vector<Handle<gzm_session>> sessions;
  std::vector<const gzm_session*> views;
  json sequences = json::array();
  std::vector<std::string> ids;
  for (const auto& path : f.sessions) {
    sessions.push_back(load_session(path));
    views.push_back(sessions.back().get());
    ids.emplace_back(gzm_session_participant(sessions.back().get()));
    char* raw = nullptr;
    check(gzm_session_file_sequence(sessions.back().get(), s.min_dwell, s.include_invalid, &raw), path);
    sequences.push_back(json::parse(take(raw)));
  }
  gzm_map_options opts;
  gzm_map_options_init(&opts);
  opts.top_n = s.top_n;
  opts.skew_threshold = s.skew_threshold;
  opts.project_id = f.project_id.c_str();
  opts.threads = s.threads;
  gzm_gaze_map* raw_map = nullptr;
  check(gzm_gaze_map_build(views.data(), views.size(), inventory.get(), &opts, &raw_map));
  Handle<gzm_gaze_map> map(raw_map);
  char* raw = nullptr;
  check(gzm_gaze_map_export(map.get(), &raw));
  const std::string map_json = take(raw);
  if (f.out_dir.empty()) {
    std::cout << map_json;
    return 0;
  }
  std::error_code ec;
  fs::create_directories(f.out_dir, ec);
  {
    std::ofstream out(fs::path(f.out_dir) / "gazemap.json", std::ios::binary | std::ios::trunc);
    out << map_json;
    if (!out) throw Failure{kExitData, f.out_dir + ": cannot write gazemap.json"};
  }
  json summary = {{"gaze_map", (fs::path(f.out_dir) / "gazemap.json").generic_string()},
                  {"ranking", json::array()}};
  for (std::size_t i = 0; i < gzm_gaze_map_ranking_size(map.get()); ++i) {
    summary["ranking"].push_back(gzm_gaze_map_ranked_path(map.get(), i));
  }
  if (f.bundle) {
    auto modules = load_modules(inventory.get(), f.module_rules);
    char* reference = nullptr;
    check(gzm_group_sequence(sequences.dump().c_str(), &reference));
    const std::string reference_json = take(reference);
    auto id_ptrs = c_strings(ids);
    char* manifest = nullptr;
    check(gzm_export_bundle(map.get(), inventory.get(), modules.get(), f.out_dir.c_str(), id_ptrs.data(),
                            id_ptrs.size(), reference_json.c_str(), s.min_dwell, &manifest));
    summary["manifest"] = json::parse(take(manifest));
  }
  emit_json(summary);
  return 0;
}

struct SeqFlags {
  std::vector<std::string> references;
  std::vector<std::string> inputs;
  bool group = false;
  std::string module_rules;
  std::string source_root;
};

int run_dtw(const SeqFlags& f, const Settings& s) {
  std::vector<LoadedSequence> refs, inputs;
  for (const auto& r : f.references) refs.push_back(load_sequence(r, s));
  for (const auto& in : f.inputs) inputs.push_back(load_sequence(in, s));
  const json reference = combine(refs);
  const auto ref_items = items_of(reference);
  const auto ref_ptrs = c_strings(ref_items);
  std::vector<LoadedSequence> cohort = inputs;
  if (f.group && inputs.size() > 1) cohort = {LoadedSequence{"group", combine(inputs), {}, false}};
  json rows = json::array();
  std::string csv = "input,participant_id,distance\n";
  for (const auto& in : cohort) {
    const auto items = items_of(in.sequence);
    const auto ptrs = c_strings(items);
    double distance = 0.0;
    check(gzm_dtw_distance(ptrs.data(), ptrs.size(), ref_ptrs.data(), ref_ptrs.size(), &distance),
          in.source);
    const std::string pid = in.sequence.value("participant_id", std::string());
    rows.push_back({{"input", in.source}, {"participant_id", pid}, {"distance", distance}});
    csv += in.source + "," + pid + "," + fixed6(distance) + "\n";
  }
  if (s.format == "csv") {
    std::cout << csv;
  } else {
    emit_json({{"metric", "dtw_unit_cost"},
               {"reference", reference},
               {"distances", rows},
               {"group_convention", "multiple references (or --group inputs) are concatenated in "
                                    "participant-id order, then repeats collapsed"}});
  }
  return 0;
}

int run_nw(const SeqFlags& f, const Settings& s) {
  std::vector<LoadedSequence> refs, inputs;
  for (const auto& r : f.references) refs.push_back(load_sequence(r, s));
  for (const auto& in : f.inputs) inputs.push_back(load_sequence(in, s));

  Handle<gzm_inventory> inventory;
  Handle<gzm_module_map> modules;
  auto labels_of = [&](const std::vector<LoadedSequence>& parts, bool as_group) -> std::vector<std::pair<std::string, std::string>> {
    std::vector<std::pair<std::string, std::string>> out;
    bool literal = !parts.empty() && std::all_of(parts.begin(), parts.end(),
                                                 [](const LoadedSequence& p) { return p.has_modules; });
    if (literal) {
      if (as_group) {
        std::string joined;
        for (const auto& p : parts) joined += p.modules;
        joined.erase(std::unique(joined.begin(), joined.end()), joined.end());
        out.emplace_back("group", joined);
      } else {
        for (const auto& p : parts) out.emplace_back(p.source, p.modules);
      }
      return out;
    }
    if (!modules) {
      if (f.source_root.empty()) {
        throw Failure{kExitUsage, "file sequences need --source-root to classify modules"};
      }
      inventory = load_inventory(f.source_root, {}, {});
      modules = load_modules(inventory.get(), f.module_rules);
    }
    auto classify = [&](const json& seq, const std::string& source) {
      const auto items = items_of(seq);
      const auto ptrs = c_strings(items);
      char* raw = nullptr;
      check(gzm_module_sequence(modules.get(), ptrs.data(), ptrs.size(), &raw), source);
      return take(raw);
    };
    if (as_group) {
      out.emplace_back("group", classify(combine(parts), "group"));
    } else {
      for (const auto& p : parts) out.emplace_back(p.source, classify(p.sequence, p.source));
    }
    return out;
  };

  const auto reference = labels_of(refs, true).front().second;
  const auto cohort = labels_of(inputs, f.group);
  json rows = json::array();
  std::string csv = "input,modules,reference_modules,similarity,distance\n";
  for (const auto& [source, labels] : cohort) {
    double similarity = 0.0, distance = 0.0;
    check(gzm_nw_similarity(labels.c_str(), reference.c_str(), &similarity, &distance), source);
    rows.push_back({{"input", source}, {"modules", labels}, {"similarity", similarity}, {"distance", distance}});
    csv += source + "," + labels + "," + reference + "," + fixed6(similarity) + "," + fixed6(distance) + "\n";
  }
  if (s.format == "csv") {
    std::cout << csv;
  } else {
    emit_json({{"metric", "needleman_wunsch_normalized"},
               {"scoring", {{"match", 1}, {"mismatch", 0}, {"gap", 0}}},
               {"reference_modules", reference},
               {"comparisons", rows},
               {"group_convention", "group sequences concatenate member sequences in participant-id "
                                    "order, then collapse repeats"}});
  }
  return 0;
}

int run_overlap(const std::string& a_path, const std::string& b_path, const std::string& root) {
  auto load_map = [](const std::string& path) {
    const std::string text = read_text(path);
    gzm_gaze_map* raw = nullptr;
    check(gzm_gaze_map_import(text.data(), text.size(), &raw), path);
    return Handle<gzm_gaze_map>(raw);
  };
  auto a = load_map(a_path);
  auto b = load_map(b_path);
  Handle<gzm_inventory> inventory;
  if (!root.empty()) inventory = load_inventory(root, {}, {});
  char* raw = nullptr;
  check(gzm_overlap(a.get(), b.get(), inventory.get(), &raw));
  std::cout << take(raw);
  return 0;
}

struct StatsFlags {
  std::string test;
  std::string input;
  std::vector<double> summary;
  std::int64_t m = 0;
  double alpha = 0.05;
};

// Two numeric columns under a header; blank cells end a column early.
std::pair<std::vector<double>, std::vector<double>> read_columns(const std::string& path) {
  std::istringstream in(read_text(path));
  std::string line;
  std::vector<double> x, y;
  int lineno = 0;
  auto parse_cell = [&](std::string cell, std::vector<double>& into) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(0, 1);
    if (cell.empty()) return;
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0') {
      throw Failure{kExitData, path + ":" + std::to_string(lineno) + ": '" + cell + "' is not a number"};
    }
    into.push_back(v);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1) continue;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    parse_cell(line.substr(0, comma), x);
    if (comma != std::string::npos) parse_cell(line.substr(comma + 1), y);
  }
  return {x, y};
}

int run_stats(const StatsFlags& f, const Settings& s) {
  gzm_stats_options opts;
  gzm_stats_options_init(&opts);
  opts.mwu_exact_cutoff = s.mwu_exact_cutoff;
  opts.wilcoxon_exact_cutoff = s.wilcoxon_exact_cutoff;
  opts.resamples = s.resamples;
  opts.seed = s.seed;
  opts.level = s.level;
  opts.threads = s.threads;

  auto print_result = [&](const gzm_stat_result& r) {
    char* raw = nullptr;
    check(gzm_stat_result_format(&r, s.format.c_str(), &raw));
    std::cout << take(raw);
  };

  const bool summary_mode = !f.summary.empty();
  if (summary_mode && f.summary.size() != 6) {
    throw Failure{kExitUsage, "--summary takes m1,s1,n1,m2,s2,n2"};
  }
  if (summary_mode) {
    const auto& v = f.summary;
    const auto n1 = static_cast<std::int64_t>(v[2]);
    const auto n2 = static_cast<std::int64_t>(v[5]);
    gzm_stat_result r{};
    if (f.test == "ttest") {
      check(gzm_students_t_summary(v[0], v[1], n1, v[3], v[4], n2, &r));
    } else if (f.test == "cohen-d") {
      double d = 0.0;
      check(gzm_cohen_d_summary(v[0], v[1], n1, v[3], v[4], n2, &d));
      std::snprintf(r.method, sizeof r.method, "cohen_d");
      r.statistic = d;
      r.p_value = 1.0;
      r.has_effect_size = 1;
      r.effect_size = d;
      r.n1 = n1;
      r.n2 = n2;
      std::snprintf(r.notes, sizeof r.notes, "from summary statistics; no p-value");
    } else {
      throw Failure{kExitUsage, "--summary is only supported by ttest and cohen-d"};
    }
    print_result(r);
    return 0;
  }

  if (f.test == "bonferroni" && f.input.empty()) {
    if (f.m < 1) throw Failure{kExitUsage, "bonferroni needs --m >= 1"};
    double threshold = 0.0;
    check(gzm_bonferroni_alpha(f.alpha, f.m, &threshold));
    emit_json({{"alpha", f.alpha}, {"m", f.m}, {"threshold", threshold}});
    return 0;
  }
  if (f.input.empty()) throw Failure{kExitUsage, "stats " + f.test + " needs an input CSV"};
  auto [x, y] = read_columns(f.input);

  if (f.test == "bonferroni") {
    std::vector<double> adjusted(x.size());
    const std::int64_t m = f.m >= 1 ? f.m : static_cast<std::int64_t>(x.size());
    check(gzm_bonferroni(x.data(), x.size(), m, adjusted.data()), f.input);
    double threshold = 0.0;
    check(gzm_bonferroni_alpha(f.alpha, m, &threshold));
    if (s.format == "csv") {
      std::cout << "p_value,adjusted\n";
      for (std::size_t i = 0; i < x.size(); ++i) std::cout << x[i] << "," << adjusted[i] << "\n";
    } else {
      emit_json({{"m", m}, {"alpha", f.alpha}, {"threshold", threshold}, {"p_values", x}, {"adjusted", adjusted}});
    }
    return 0;
  }

  gzm_stat_result r{};
  if (f.test == "mwu") {
    check(gzm_mann_whitney_u(x.data(), x.size(), y.data(), y.size(), &opts, &r), f.input);
  } else if (f.test == "wilcoxon") {
    if (x.size() != y.size()) throw Failure{kExitData, f.input + ": paired columns differ in length"};
    check(gzm_wilcoxon_signed_rank(x.data(), y.data(), x.size(), &opts, &r), f.input);
  } else if (f.test == "ttest") {
    check(gzm_students_t(x.data(), x.size(), y.data(), y.size(), &r), f.input);
  } else if (f.test == "bartlett") {
    check(gzm_bartlett(x.data(), x.size(), y.data(), y.size(), &r), f.input);
  } else if (f.test == "cohen-d") {
    double d = 0.0;
    check(gzm_cohen_d(x.data(), x.size(), y.data(), y.size(), &d), f.input);
    std::snprintf(r.method, sizeof r.method, "cohen_d");
    r.statistic = d;
    r.p_value = 1.0;
    r.has_effect_size = 1;
    r.effect_size = d;
    r.n1 = static_cast<std::int64_t>(x.size());
    r.n2 = static_cast<std::int64_t>(y.size());
    std::snprintf(r.notes, sizeof r.notes, "pooled standard deviation; no p-value");
  } else if (f.test == "cliff") {
    check(gzm_cliffs_delta(x.data(), x.size(), y.data(), y.size(), &opts, &r), f.input);
  } else if (f.test == "bootstrap") {
    check(gzm_bootstrap_mean_diff(x.data(), x.size(), y.data(), y.size(), &opts, &r), f.input);
  } else {
    throw Failure{kExitUsage, "unknown test '" + f.test + "'"};
  }
  print_result(r);
  return 0;
}

int run_tlx(const std::string& input, const Settings& s) {
  const std::string text = read_text(input);
  char* raw = nullptr;
  check(gzm_tlx_score_csv(text.data(), text.size(), s.format.c_str(), &raw), input);
  std::cout << take(raw);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Settings settings;
  try {
    bool explicit_config = false;
    const std::string config = config_path_from(argc, argv, explicit_config);
    merge_config(settings, config, explicit_config);
  } catch (const Failure& f) {
    print_error(f.message);
    return f.exit_code;
  }

  CLI::App app{"gazemap: aggregate eye-tracking logs over a codebase into gaze maps and compare "
               "reading strategies"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string config_flag;
  app.add_option("--config", config_flag, "JSON config merged under flags (default ./gazemap.json)");
  app.add_option("--format", settings.format, "Output format for tabular results")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", settings.threads, "Worker threads (results do not depend on it)");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Parse a gaze log into a validated session file");
  std::string ingest_input, ingest_in_format, ingest_out_format = "jsonl", ingest_out;
  MetaFlags meta;
  ingest->add_option("log", ingest_input, "Gaze log (.jsonl or .csv)")->required();
  ingest->add_option("--input-format", ingest_in_format, "Force input format")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  ingest->add_option("--as", ingest_out_format, "Session file format")->check(CLI::IsMember({"jsonl", "csv"}));
  ingest->add_option("--participant", meta.participant, "Participant id");
  ingest->add_option("--role", meta.role, "expert|novice")->check(CLI::IsMember({"expert", "novice"}));
  ingest->add_option("--group", meta.group, "control|experiment|expert")
      ->check(CLI::IsMember({"control", "experiment", "expert"}));
  ingest->add_option("--task", meta.task, "Task id");
  ingest->add_option("--duration-ms", meta.duration_ms, "Session duration; default from the log");
  ingest->add_option("-o,--out", ingest_out, "Output file (default stdout)");

  // map
  auto* map = app.add_subcommand("map", "Aggregate sessions over a source tree into a gaze map");
  MapFlags map_flags;
  map->add_option("sessions", map_flags.sessions, "Session files")->required();
  map->add_option("--source-root", map_flags.source_root, "Root of the codebase")->required();
  map->add_option("--include", map_flags.include, "Glob of files to include (repeatable)");
  map->add_option("--exclude", map_flags.exclude, "Glob of files to exclude (repeatable)");
  map->add_option("--top-n", settings.top_n, "Files in the ranking");
  map->add_option("--skew-threshold", settings.skew_threshold, "Skewness above which grades use quantiles");
  map->add_option("--min-dwell", settings.min_dwell, "Minimum visit dwell (ms) for the reference sequence");
  map->add_flag("--include-invalid", settings.include_invalid, "Keep invalid samples in sequences");
  map->add_option("--project-id", map_flags.project_id, "Project id recorded in the map");
  map->add_option("--module-rules", map_flags.module_rules, "Module rules JSON for the bundle");
  map->add_option("--out-dir", map_flags.out_dir, "Directory for gazemap.json and the bundle");
  map->add_flag("--bundle", map_flags.bundle, "Also write the viewer bundle");

  // seq
  auto* seq = app.add_subcommand("seq", "Compare reading orders");
  seq->require_subcommand(1, 1);
  SeqFlags seq_flags;
  auto add_seq_options = [&](CLI::App* cmd) {
    cmd->add_option("inputs", seq_flags.inputs, "Sequence files (.json) or session logs")->required();
    cmd->add_option("--reference", seq_flags.references, "Reference sequence (repeat to pool a group)")
        ->required();
    cmd->add_flag("--group", seq_flags.group, "Pool all inputs into one group sequence");
    cmd->add_option("--min-dwell", settings.min_dwell, "Minimum visit dwell in ms");
    cmd->add_flag("--include-invalid", settings.include_invalid, "Keep invalid samples");
  };
  auto* dtw = seq->add_subcommand("dtw", "Dynamic time warping distance of file sequences");
  add_seq_options(dtw);
  auto* nw = seq->add_subcommand("nw", "Normalized Needleman-Wunsch similarity of module sequences");
  add_seq_options(nw);
  nw->add_option("--module-rules", seq_flags.module_rules, "Module rules JSON");
  nw->add_option("--source-root", seq_flags.source_root, "Root used to classify files into modules");

  // overlap
  auto* overlap = app.add_subcommand("overlap", "Jaccard line overlap between two gaze maps");
  std::string overlap_a, overlap_b, overlap_root;
  overlap->add_option("group_a", overlap_a, "Gaze map JSON of the first group")->required();
  overlap->add_option("group_b", overlap_b, "Gaze map JSON of the second group")->required();
  overlap->add_option("--source-root", overlap_root, "Check files against this source tree");

  // stats
  auto* stats = app.add_subcommand("stats", "Statistical tests on two-column CSV input");
  StatsFlags stats_flags;
  stats->add_option("test", stats_flags.test, "mwu|wilcoxon|ttest|bartlett|cohen-d|cliff|bootstrap|bonferroni")
      ->required()
      ->check(CLI::IsMember({"mwu", "wilcoxon", "ttest", "bartlett", "cohen-d", "cliff", "bootstrap",
                             "bonferroni"}));
  stats->add_option("input", stats_flags.input, "CSV with a header and columns x,y");
  stats->add_option("--summary", stats_flags.summary, "m1,s1,n1,m2,s2,n2 (ttest, cohen-d)")->delimiter(',');
  auto* cutoff = stats->add_option("--exact-cutoff", settings.mwu_exact_cutoff, "Largest n for exact rank tests");
  stats->add_option("--resamples", settings.resamples, "Bootstrap resamples");
  stats->add_option("--seed", settings.seed, "Bootstrap seed");
  stats->add_option("--level", settings.level, "Confidence level");
  stats->add_option("--m", stats_flags.m, "Number of comparisons (bonferroni)");
  stats->add_option("--alpha", stats_flags.alpha, "Family-wise alpha (bonferroni)");

  // tlx
  auto* tlx = app.add_subcommand("tlx", "Weighted NASA-TLX scores from a questionnaire CSV");
  std::string tlx_input;
  tlx->add_option("input", tlx_input, "TLX CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(e.what());
    std::cerr << app.help("", CLI::AppFormatMode::Normal);
    return kExitUsage;
  }
  if (cutoff->count() > 0) settings.wilcoxon_exact_cutoff = settings.mwu_exact_cutoff;

  try {
    if (*ingest) return run_ingest(ingest_input, meta, ingest_in_format, ingest_out_format, ingest_out);
    if (*map) return run_map(map_flags, settings);
    if (*dtw) return run_dtw(seq_flags, settings);
    if (*nw) return run_nw(seq_flags, settings);
    if (*overlap) return run_overlap(overlap_a, overlap_b, overlap_root);
    if (*stats) return run_stats(stats_flags, settings);
    if (*tlx) return run_tlx(tlx_input, settings);
  } catch (const Failure& f) {
    print_error(f.message);
    return f.exit_code;
  } catch (const json::exception& e) {
    print_error(e.what());
    return kExitData;
  }
  return kExitUsage;
}
