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

#include "gazemap/gazemap.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "gazemap/aggregate.hpp"
#include "gazemap/export.hpp"
#include "gazemap/ingest.hpp"
#include "gazemap/overlap.hpp"
#include "gazemap/sequences.hpp"
#include "gazemap/stats.hpp"

struct gzm_session {
  gazemap::Session value;
};
struct gzm_inventory {
  gazemap::FileInventory value;
};
struct gzm_module_map {
  gazemap::ModuleMap value;
};
struct gzm_gaze_map {
  gazemap::GazeMap value;
};

namespace {

using nlohmann::json;

thread_local std::string t_last_error;
thread_local std::int64_t t_last_index = -1;

template <typename Fn>
gzm_status guard(Fn&& fn) noexcept {
  t_last_error.clear();
  t_last_index = -1;
  try {
    fn();
    return GZM_OK;
  } catch (const gazemap::Error& e) {
    t_last_error = e.what();
    t_last_index = e.index().value_or(-1);
    return static_cast<gzm_status>(static_cast<int>(e.code()));
  } catch (const json::exception& e) {
    t_last_error = std::string("SchemaError: ") + e.what();
    return GZM_E_SCHEMA;
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return GZM_E_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return GZM_E_INTERNAL;
  } catch (...) {
    t_last_error = "unknown failure";
    return GZM_E_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw gazemap::Error(gazemap::ErrorCode::kInvalidArgument, what);
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

std::span<const double> span_of(const double* p, std::size_t n) {
  require(p != nullptr || n == 0, "null sample pointer");
  return {p, n};
}

std::vector<std::string> strings_of(const char* const* items, std::size_t n) {
  require(items != nullptr || n == 0, "null string array");
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(items[i] != nullptr, "null string in array");
    out.emplace_back(items[i]);
  }
  return out;
}

gazemap::StatsOptions stats_options_of(const gzm_stats_options* o) {
  gazemap::StatsOptions opts;
  if (!o) return opts;
  opts.mwu_exact_cutoff = o->mwu_exact_cutoff;
  opts.wilcoxon_exact_cutoff = o->wilcoxon_exact_cutoff;
  opts.resamples = o->resamples;
  opts.seed = o->seed;
  opts.level = o->level;
  opts.threads = o->threads;
  return opts;
}

void copy_truncated(char* dst, std::size_t cap, const std::string& src) {
  const std::size_t n = std::min(cap - 1, src.size());
  std::memcpy(dst, src.data(), n);
  dst[n] = '\0';
}

void fill_result(const gazemap::StatResult& r, gzm_stat_result* out) {
  require(out != nullptr, "null result pointer");
  std::memset(out, 0, sizeof *out);
  copy_truncated(out->method, sizeof out->method, r.method);
  copy_truncated(out->notes, sizeof out->notes, r.notes);
  out->statistic = r.statistic;
  out->p_value = r.p_value;
  out->has_effect_size = r.effect_size.has_value();
  out->effect_size = r.effect_size.value_or(0.0);
  out->has_ci = r.ci_low.has_value() && r.ci_high.has_value();
  out->ci_low = r.ci_low.value_or(0.0);
  out->ci_high = r.ci_high.value_or(0.0);
  out->n1 = r.n1;
  out->n2 = r.n2;
}

gazemap::StatResult result_of(const gzm_stat_result& r) {
  gazemap::StatResult out;
  out.method = r.method;
  out.statistic = r.statistic;
  out.p_value = r.p_value;
  if (r.has_effect_size) out.effect_size = r.effect_size;
  if (r.has_ci) {
    out.ci_low = r.ci_low;
    out.ci_high = r.ci_high;
  }
  out.n1 = r.n1;
  out.n2 = r.n2;
  out.notes = r.notes;
  return out;
}

json sequence_to_json(const gazemap::FileSequence& f) {
  return {{"items", f.items}, {"participant_id", f.participant_id}, {"task_id", f.task_id}};
}

gazemap::FileSequence sequence_from_json(const json& doc) {
  gazemap::FileSequence f;
  if (doc.is_array()) {
    f.items = doc.get<std::vector<std::string>>();
    return f;
  }
  if (!doc.is_object() || !doc.contains("items")) {
    throw gazemap::Error(gazemap::ErrorCode::kSchemaError,
                         "a sequence is an array of paths or an object with \"items\"");
  }
  f.items = doc.at("items").get<std::vector<std::string>>();
  f.participant_id = doc.value("participant_id", std::string());
  f.task_id = doc.value("task_id", std::string());
  return f;
}

}  // namespace

extern "C" {

const char* gzm_version(void) { return gazemap::kToolVersion.data(); }

const char* gzm_status_name(gzm_status status) {
  if (status == GZM_OK) return "Ok";
  if (status == GZM_E_INTERNAL) return "Internal";
  return gazemap::error_code_name(static_cast<gazemap::ErrorCode>(status)).data();
}

const char* gzm_last_error(void) { return t_last_error.c_str(); }
int64_t gzm_last_error_index(void) { return t_last_index; }
void gzm_string_free(char* s) { std::free(s); }

gzm_status gzm_session_parse(const char* data, size_t len, gzm_log_format format,
                             const gzm_session_meta* meta, gzm_session** out) {
  return guard([&] {
    require(out != nullptr && (data != nullptr || len == 0), "null argument");
    *out = nullptr;
    gazemap::SessionMeta m;
    if (meta) {
      if (meta->participant_id) m.participant_id = meta->participant_id;
      if (meta->task_id) m.task_id = meta->task_id;
      if (meta->role && *meta->role) {
        m.role = gazemap::parse_role(meta->role);
        require(m.role.has_value(), "role must be expert|novice");
      }
      if (meta->group && *meta->group) {
        m.group = gazemap::parse_group(meta->group);
        require(m.group.has_value(), "group must be control|experiment|expert");
      }
      if (meta->duration_ms > 0) m.duration_ms = meta->duration_ms;
    }
    std::istringstream in(std::string(data ? data : "", len));
    auto session = format == GZM_LOG_CSV ? gazemap::parse_gaze_csv(in, m)
                                         : gazemap::parse_gaze_jsonl(in, m);
    *out = new gzm_session{std::move(session)};
  });
}

void gzm_session_free(gzm_session* s) { delete s; }

gzm_status gzm_session_serialize(const gzm_session* s, gzm_log_format format, char** out) {
  return guard([&] {
    require(s != nullptr && out != nullptr, "null argument");
    *out = dup_string(format == GZM_LOG_CSV ? gazemap::to_csv(s->value) : gazemap::to_jsonl(s->value));
  });
}

const char* gzm_session_participant(const gzm_session* s) {
  return s ? s->value.participant_id.c_str() : "";
}

size_t gzm_session_event_count(const gzm_session* s) { return s ? s->value.events.size() : 0; }

gzm_status gzm_session_file_sequence(const gzm_session* s, int64_t min_dwell_ms,
                                     int include_invalid, char** out_json) {
  return guard([&] {
    require(s != nullptr && out_json != nullptr, "null argument");
    gazemap::SequenceOptions opts{min_dwell_ms, include_invalid != 0};
    *out_json = dup_string(sequence_to_json(gazemap::file_sequence(s->value, opts)).dump());
  });
}

gzm_status gzm_inventory_scan(const char* root, const char* const* include_globs, size_t n_include,
                              const char* const* exclude_globs, size_t n_exclude,
                              gzm_inventory** out) {
  return guard([&] {
    require(root != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto inv = gazemap::scan_source_tree(root, strings_of(include_globs, n_include),
                                         strings_of(exclude_globs, n_exclude));
    *out = new gzm_inventory{std::move(inv)};
  });
}

void gzm_inventory_free(gzm_inventory* inv) { delete inv; }
size_t gzm_inventory_size(const gzm_inventory* inv) { return inv ? inv->value.files.size() : 0; }

gzm_status gzm_module_map_build(const gzm_inventory* inv, const char* rules_json,
                                gzm_module_map** out) {
  return guard([&] {
    require(inv != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto rules = rules_json ? gazemap::parse_module_rules(rules_json) : gazemap::default_module_rules();
    *out = new gzm_module_map{gazemap::build_module_map(inv->value, std::move(rules))};
  });
}

void gzm_module_map_free(gzm_module_map* m) { delete m; }

gzm_status gzm_module_map_to_json(const gzm_module_map* m, char** out) {
  return guard([&] {
    require(m != nullptr && out != nullptr, "null argument");
    *out = dup_string(gazemap::canonical_dump(gazemap::module_map_to_json(m->value)));
  });
}

gzm_status gzm_classify_module(const char* path, const char* content, const char* rules_json,
                               char* out_label) {
  return guard([&] {
    require(path != nullptr && out_label != nullptr, "null argument");
    auto rules = rules_json ? gazemap::parse_module_rules(rules_json) : gazemap::default_module_rules();
    require(!rules.empty(), "module rule list is empty");
    *out_label = gazemap::classify_module(path, content ? content : "", rules);
  });
}

gzm_status gzm_module_sequence(const gzm_module_map* m, const char* const* paths, size_t n,
                               char** out_labels) {
  return guard([&] {
    require(m != nullptr && out_labels != nullptr, "null argument");
    gazemap::FileSequence f;
    f.items = strings_of(paths, n);
    *out_labels = dup_string(gazemap::module_sequence(f, m->value).items);
  });
}

gzm_status gzm_dtw_distance(const char* const* a, size_t na, const char* const* b, size_t nb,
                            double* out) {
  return guard([&] {
    require(out != nullptr, "null argument");
    *out = gazemap::dtw_distance(strings_of(a, na), strings_of(b, nb));
  });
}

gzm_status gzm_nw_similarity(const char* a, const char* b, double* similarity, double* distance) {
  return guard([&] {
    require(a != nullptr && b != nullptr, "null argument");
    auto s = gazemap::nw_similarity(a, b);
    if (similarity) *similarity = s.similarity;
    if (distance) *distance = s.distance;
  });
}

gzm_status gzm_group_sequence(const char* sequences_json, char** out_json) {
  return guard([&] {
    require(sequences_json != nullptr && out_json != nullptr, "null argument");
    json doc = json::parse(sequences_json);
    require(doc.is_array(), "expected an array of sequences");
    std::vector<gazemap::FileSequence> members;
    for (const auto& item : doc) members.push_back(sequence_from_json(item));
    *out_json = dup_string(sequence_to_json(gazemap::group_sequence(members)).dump());
  });
}

void gzm_map_options_init(gzm_map_options* options) {
  if (!options) return;
  options->top_n = 10;
  options->skew_threshold = gazemap::kDefaultSkewThreshold;
  options->project_id = nullptr;
  options->threads = 1;
}

gzm_status gzm_gaze_map_build(const gzm_session* const* sessions, size_t n, const gzm_inventory* inv,
                              const gzm_map_options* options, gzm_gaze_map** out) {
  return guard([&] {
    require(inv != nullptr && out != nullptr && (sessions != nullptr || n == 0), "null argument");
    *out = nullptr;
    std::vector<gazemap::Session> list;
    list.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      require(sessions[i] != nullptr, "null session");
      list.push_back(sessions[i]->value);
    }
    gazemap::MapOptions opts;
    if (options) {
      opts.top_n = options->top_n;
      opts.skew_threshold = options->skew_threshold;
      if (options->project_id) opts.project_id = options->project_id;
      opts.threads = options->threads;
    }
    *out = new gzm_gaze_map{gazemap::build_gaze_map(list, inv->value, opts)};
  });
}

void gzm_gaze_map_free(gzm_gaze_map* g) { delete g; }

gzm_status gzm_gaze_map_export(const gzm_gaze_map* g, char** out) {
  return guard([&] {
    require(g != nullptr && out != nullptr, "null argument");
    *out = dup_string(gazemap::export_gazemap_json(g->value));
  });
}

gzm_status gzm_gaze_map_import(const char* data, size_t len, gzm_gaze_map** out) {
  return guard([&] {
    require(data != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    *out = new gzm_gaze_map{gazemap::import_gazemap_json(std::string_view(data, len))};
  });
}

size_t gzm_gaze_map_ranking_size(const gzm_gaze_map* g) { return g ? g->value.ranking.size() : 0; }

const char* gzm_gaze_map_ranked_path(const gzm_gaze_map* g, size_t i) {
  if (!g || i >= g->value.ranking.size()) return nullptr;
  return g->value.ranking[i].path.c_str();
}

gzm_status gzm_export_bundle(const gzm_gaze_map* g, const gzm_inventory* inv, const gzm_module_map* m,
                             const char* out_dir, const char* const* session_ids, size_t n_sessions,
                             const char* reference_json, int64_t min_dwell_ms, char** out_manifest) {
  return guard([&] {
    require(g != nullptr && inv != nullptr && m != nullptr && out_dir != nullptr, "null argument");
    gazemap::BundleProvenance prov;
    prov.session_ids = strings_of(session_ids, n_sessions);
    if (reference_json) prov.reference_sequence = sequence_from_json(json::parse(reference_json)).items;
    prov.min_dwell_ms = min_dwell_ms;
    auto manifest = gazemap::export_viewer_bundle(g->value, inv->value, m->value, out_dir, prov);
    if (out_manifest) *out_manifest = dup_string(gazemap::canonical_dump(gazemap::manifest_to_json(manifest)));
  });
}

gzm_status gzm_overlap(const gzm_gaze_map* a, const gzm_gaze_map* b, const gzm_inventory* inv,
                       char** out_json) {
  return guard([&] {
    require(a != nullptr && b != nullptr && out_json != nullptr, "null argument");
    auto report = gazemap::per_file_overlap(gazemap::means_of(a->value), gazemap::means_of(b->value),
                                            inv ? &inv->value : nullptr);
    *out_json = dup_string(gazemap::canonical_dump(gazemap::overlap_report_to_json(report)));
  });
}

void gzm_stats_options_init(gzm_stats_options* options) {
  if (!options) return;
  gazemap::StatsOptions d;
  options->mwu_exact_cutoff = d.mwu_exact_cutoff;
  options->wilcoxon_exact_cutoff = d.wilcoxon_exact_cutoff;
  options->resamples = d.resamples;
  options->seed = d.seed;
  options->level = d.level;
  options->threads = d.threads;
}

gzm_status gzm_mann_whitney_u(const double* x, size_t nx, const double* y, size_t ny,
                              const gzm_stats_options* options, gzm_stat_result* out) {
  return guard([&] {
    fill_result(gazemap::mann_whitney_u(span_of(x, nx), span_of(y, ny), stats_options_of(options)), out);
  });
}

gzm_status gzm_wilcoxon_signed_rank(const double* x, const double* y, size_t n,
                                    const gzm_stats_options* options, gzm_stat_result* out) {
  return guard([&] {
    fill_result(gazemap::wilcoxon_signed_rank(span_of(x, n), span_of(y, n), stats_options_of(options)),
                out);
  });
}

gzm_status gzm_students_t(const double* x, size_t nx, const double* y, size_t ny, gzm_stat_result* out) {
  return guard([&] { fill_result(gazemap::students_t(span_of(x, nx), span_of(y, ny)), out); });
}

gzm_status gzm_students_t_summary(double m1, double s1, int64_t n1, double m2, double s2, int64_t n2,
                                  gzm_stat_result* out) {
  return guard([&] { fill_result(gazemap::students_t_summary({m1, s1, n1}, {m2, s2, n2}), out); });
}

gzm_status gzm_bartlett(const double* x, size_t nx, const double* y, size_t ny, gzm_stat_result* out) {
  return guard([&] { fill_result(gazemap::bartlett(span_of(x, nx), span_of(y, ny)), out); });
}

gzm_status gzm_cohen_d(const double* x, size_t nx, const double* y, size_t ny, double* out) {
  return guard([&] {
    require(out != nullptr, "null argument");
    *out = gazemap::cohen_d(span_of(x, nx), span_of(y, ny));
  });
}

gzm_status gzm_cohen_d_summary(double m1, double s1, int64_t n1, double m2, double s2, int64_t n2,
                               double* out) {
  return guard([&] {
    require(out != nullptr, "null argument");
    *out = gazemap::cohen_d_summary({m1, s1, n1}, {m2, s2, n2});
  });
}

gzm_status gzm_cliffs_delta(const double* x, size_t nx, const double* y, size_t ny,
                            const gzm_stats_options* options, gzm_stat_result* out) {
  return guard([&] {
    fill_result(gazemap::cliffs_delta(span_of(x, nx), span_of(y, ny), stats_options_of(options)), out);
  });
}

gzm_status gzm_bootstrap_mean_diff(const double* x, size_t nx, const double* y, size_t ny,
                                   const gzm_stats_options* options, gzm_stat_result* out) {
  return guard([&] {
    const auto o = stats_options_of(options);
    auto ci = gazemap::bootstrap_ci_mean_diff(span_of(x, nx), span_of(y, ny), o.level, o.resamples,
                                              o.seed, o.threads);
    gazemap::StatResult r;
    r.method = "bootstrap_mean_diff";
    r.statistic = ci.mean_diff;
    r.effect_size = ci.mean_diff;
    r.p_value = ci.p_value;
    r.ci_low = ci.low;
    r.ci_high = ci.high;
    r.n1 = static_cast<std::int64_t>(nx);
    r.n2 = static_cast<std::int64_t>(ny);
    r.notes = "percentile bootstrap (" + std::to_string(o.resamples) + " resamples, seed " +
              std::to_string(o.seed) + ", level " + std::to_string(o.level).substr(0, 4) + ")";
    fill_result(r, out);
  });
}

gzm_status gzm_bonferroni(const double* p, size_t n, int64_t m, double* out) {
  return guard([&] {
    require(out != nullptr || n == 0, "null argument");
    auto adjusted = gazemap::bonferroni(span_of(p, n), m);
    std::copy(adjusted.begin(), adjusted.end(), out);
  });
}

gzm_status gzm_bonferroni_alpha(double alpha, int64_t m, double* out) {
  return guard([&] {
    require(out != nullptr, "null argument");
    *out = gazemap::bonferroni_alpha(alpha, m);
  });
}

gzm_status gzm_stat_result_format(const gzm_stat_result* r, const char* format, char** out) {
  return guard([&] {
    require(r != nullptr && out != nullptr, "null argument");
    const std::string fmt = format ? format : "json";
    require(fmt == "json" || fmt == "csv", "format must be json or csv");
    const auto result = result_of(*r);
    *out = dup_string(fmt == "csv" ? gazemap::stat_results_to_csv({result})
                                   : gazemap::stat_result_to_json(result).dump(2) + "\n");
  });
}

gzm_status gzm_nasa_tlx(const double* ratings, const int64_t* weights, double* out) {
  return guard([&] {
    require(ratings != nullptr && weights != nullptr && out != nullptr, "null argument");
    gazemap::TlxRecord r;
    std::copy(ratings, ratings + 6, r.ratings.begin());
    std::copy(weights, weights + 6, r.weights.begin());
    *out = gazemap::nasa_tlx(r);
  });
}

gzm_status gzm_tlx_score_csv(const char* data, size_t len, const char* format, char** out) {
  return guard([&] {
    require(data != nullptr && out != nullptr, "null argument");
    const std::string fmt = format ? format : "csv";
    require(fmt == "json" || fmt == "csv", "format must be json or csv");
    std::istringstream in(std::string(data, len));
    const auto records = gazemap::parse_tlx_csv(in);
    json rows = json::array();
    std::string csv = "participant,task,score\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
      double score = 0.0;
      try {
        score = gazemap::nasa_tlx(records[i]);
      } catch (const gazemap::Error& e) {
        throw gazemap::Error(e.code(), "record " + std::to_string(i + 1) + ": " + e.what(),
                             static_cast<std::int64_t>(i + 1));
      }
      rows.push_back({{"participant", records[i].participant}, {"task", records[i].task}, {"score", score}});
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f", score);
      csv += records[i].participant + "," + records[i].task + "," + buf + "\n";
    }
    *out = dup_string(fmt == "json" ? rows.dump(2) + "\n" : csv);
  });
}

}  // extern "C"
