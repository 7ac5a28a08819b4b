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

/*
 * C interface to the gazemap library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a gzm_status; on
 * failure gzm_last_error() describes the problem for the calling thread until
 * that thread's next call. Strings returned through `char**` are allocated by
 * the library and released with gzm_string_free.
 */

#ifndef GAZEMAP_GAZEMAP_H_
#define GAZEMAP_GAZEMAP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GAZEMAP_BUILDING_LIBRARY)
#    define GZM_API __declspec(dllexport)
#  else
#    define GZM_API __declspec(dllimport)
#  endif
#else
#  define GZM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gzm_status {
  GZM_OK = 0,
  GZM_E_INVALID_ARGUMENT = 1,
  GZM_E_IO = 2,
  GZM_E_UNSORTED_EVENTS = 3,
  GZM_E_NON_POSITIVE_DURATION = 4,
  GZM_E_DURATION_BEFORE_LAST_EVENT = 5,
  GZM_E_BAD_PATH = 6,
  GZM_E_MALFORMED_LINE = 7,
  GZM_E_MISSING_FIELD = 8,
  GZM_E_MISSING_HEADER = 9,
  GZM_E_BAD_VALUE = 10,
  GZM_E_ROOT_NOT_FOUND = 11,
  GZM_E_UNKNOWN_FILE = 12,
  GZM_E_LINE_OUT_OF_RANGE = 13,
  GZM_E_EMPTY_GROUP = 14,
  GZM_E_EMPTY_INPUT = 15,
  GZM_E_EMPTY_SEQUENCE = 16,
  GZM_E_UNCLASSIFIED_PATH = 17,
  GZM_E_BOTH_EMPTY = 18,
  GZM_E_EMPTY_SAMPLE = 19,
  GZM_E_ALL_ZERO_DIFFERENCES = 20,
  GZM_E_DEGENERATE_VARIANCE = 21,
  GZM_E_BAD_M = 22,
  GZM_E_WEIGHT_SUM_INVALID = 23,
  GZM_E_RATING_OUT_OF_RANGE = 24,
  GZM_E_UNSUPPORTED_VERSION = 25,
  GZM_E_SCHEMA = 26,
  GZM_E_INTERNAL = 99
} gzm_status;

typedef struct gzm_session gzm_session;
typedef struct gzm_inventory gzm_inventory;
typedef struct gzm_module_map gzm_module_map;
typedef struct gzm_gaze_map gzm_gaze_map;

GZM_API const char* gzm_version(void);
GZM_API const char* gzm_status_name(gzm_status status);
/* Message of the calling thread's last failure; "" after a success. */
GZM_API const char* gzm_last_error(void);
/* Line number or event index attached to the last failure, or -1. */
GZM_API int64_t gzm_last_error_index(void);
GZM_API void gzm_string_free(char* s);

/* ---- sessions ---------------------------------------------------------- */

typedef enum gzm_log_format { GZM_LOG_JSONL = 0, GZM_LOG_CSV = 1 } gzm_log_format;

/* NULL or empty strings leave a field to the log's metadata line. role is
 * "expert"|"novice", group "control"|"experiment"|"expert";
 * duration_ms <= 0 derives it from the log. */
typedef struct gzm_session_meta {
  const char* participant_id;
  const char* role;
  const char* group;
  const char* task_id;
  int64_t duration_ms;
} gzm_session_meta;

GZM_API gzm_status gzm_session_parse(const char* data, size_t len, gzm_log_format format,
                                     const gzm_session_meta* meta, gzm_session** out);
GZM_API void gzm_session_free(gzm_session* s);
/* Canonical JSONL (format GZM_LOG_JSONL) or CSV serialization. */
GZM_API gzm_status gzm_session_serialize(const gzm_session* s, gzm_log_format format, char** out);
GZM_API const char* gzm_session_participant(const gzm_session* s);
GZM_API size_t gzm_session_event_count(const gzm_session* s);

/* JSON object {"items":[paths...],"participant_id":...,"task_id":...}. */
GZM_API gzm_status gzm_session_file_sequence(const gzm_session* s, int64_t min_dwell_ms,
                                             int include_invalid, char** out_json);

/* ---- source tree and modules ------------------------------------------ */

GZM_API gzm_status gzm_inventory_scan(const char* root, const char* const* include_globs,
                                      size_t n_include, const char* const* exclude_globs,
                                      size_t n_exclude, gzm_inventory** out);
GZM_API void gzm_inventory_free(gzm_inventory* inv);
GZM_API size_t gzm_inventory_size(const gzm_inventory* inv);

/* rules_json: JSON array of {kind, pattern, label}; NULL selects the
 * default table. */
GZM_API gzm_status gzm_module_map_build(const gzm_inventory* inv, const char* rules_json,
                                        gzm_module_map** out);
GZM_API void gzm_module_map_free(gzm_module_map* m);
GZM_API gzm_status gzm_module_map_to_json(const gzm_module_map* m, char** out);
GZM_API gzm_status gzm_classify_module(const char* path, const char* content,
                                       const char* rules_json, char* out_label);
/* Labels of `paths` under `m`, consecutive repeats collapsed. */
GZM_API gzm_status gzm_module_sequence(const gzm_module_map* m, const char* const* paths,
                                       size_t n, char** out_labels);

/* ---- sequences ---------------------------------------------------------- */

GZM_API gzm_status gzm_dtw_distance(const char* const* a, size_t na, const char* const* b,
                                    size_t nb, double* out);
GZM_API gzm_status gzm_nw_similarity(const char* a, const char* b, double* similarity,
                                     double* distance);
/* sequences_json: array of FileSequence objects (as produced by
 * gzm_session_file_sequence). Output: the concatenated group sequence. */
GZM_API gzm_status gzm_group_sequence(const char* sequences_json, char** out_json);

/* ---- gaze maps ---------------------------------------------------------- */

typedef struct gzm_map_options {
  int32_t top_n;         /* default 10 */
  double skew_threshold; /* default 1.0 */
  const char* project_id;
  uint32_t threads;      /* 0 = hardware concurrency */
} gzm_map_options;

GZM_API void gzm_map_options_init(gzm_map_options* options);
GZM_API gzm_status gzm_gaze_map_build(const gzm_session* const* sessions, size_t n,
                                      const gzm_inventory* inv, const gzm_map_options* options,
                                      gzm_gaze_map** out);
GZM_API void gzm_gaze_map_free(gzm_gaze_map* g);
/* Canonical, byte-stable JSON. */
GZM_API gzm_status gzm_gaze_map_export(const gzm_gaze_map* g, char** out);
GZM_API gzm_status gzm_gaze_map_import(const char* data, size_t len, gzm_gaze_map** out);
GZM_API size_t gzm_gaze_map_ranking_size(const gzm_gaze_map* g);
GZM_API const char* gzm_gaze_map_ranked_path(const gzm_gaze_map* g, size_t i);

/* Writes bundle.json, files/ and manifest.json under out_dir; returns the
 * manifest JSON. reference_json may be NULL or a FileSequence object. */
GZM_API gzm_status gzm_export_bundle(const gzm_gaze_map* g, const gzm_inventory* inv,
                                     const gzm_module_map* m, const char* out_dir,
                                     const char* const* session_ids, size_t n_sessions,
                                     const char* reference_json, int64_t min_dwell_ms,
                                     char** out_manifest);

/* Jaccard report between the line sets of two gaze maps; inv may be NULL. */
GZM_API gzm_status gzm_overlap(const gzm_gaze_map* a, const gzm_gaze_map* b,
                               const gzm_inventory* inv, char** out_json);

/* ---- statistics --------------------------------------------------------- */

typedef struct gzm_stats_options {
  int32_t mwu_exact_cutoff;      /* default 14 */
  int32_t wilcoxon_exact_cutoff; /* default 12 */
  uint32_t resamples;            /* default 10000 */
  uint64_t seed;                 /* default 42 */
  double level;                  /* default 0.95 */
  uint32_t threads;              /* default 1 */
} gzm_stats_options;

typedef struct gzm_stat_result {
  char method[48];
  double statistic;
  double p_value;
  int has_effect_size;
  double effect_size;
  int has_ci;
  double ci_low;
  double ci_high;
  int64_t n1;
  int64_t n2;
  char notes[256];
} gzm_stat_result;

GZM_API void gzm_stats_options_init(gzm_stats_options* options);

/* options may be NULL for defaults. */
GZM_API gzm_status gzm_mann_whitney_u(const double* x, size_t nx, const double* y, size_t ny,
                                      const gzm_stats_options* options, gzm_stat_result* out);
GZM_API gzm_status gzm_wilcoxon_signed_rank(const double* x, const double* y, size_t n,
                                            const gzm_stats_options* options,
                                            gzm_stat_result* out);
GZM_API gzm_status gzm_students_t(const double* x, size_t nx, const double* y, size_t ny,
                                  gzm_stat_result* out);
GZM_API gzm_status gzm_students_t_summary(double m1, double s1, int64_t n1, double m2,
                                          double s2, int64_t n2, gzm_stat_result* out);
GZM_API gzm_status gzm_bartlett(const double* x, size_t nx, const double* y, size_t ny,
                                gzm_stat_result* out);
GZM_API gzm_status gzm_cohen_d(const double* x, size_t nx, const double* y, size_t ny,
                               double* out);
GZM_API gzm_status gzm_cohen_d_summary(double m1, double s1, int64_t n1, double m2, double s2,
                                       int64_t n2, double* out);
GZM_API gzm_status gzm_cliffs_delta(const double* x, size_t nx, const double* y, size_t ny,
                                    const gzm_stats_options* options, gzm_stat_result* out);
/* Result: statistic = mean difference, ci = percentile bootstrap interval,
 * p = two-sided bootstrap p. */
GZM_API gzm_status gzm_bootstrap_mean_diff(const double* x, size_t nx, const double* y,
                                           size_t ny, const gzm_stats_options* options,
                                           gzm_stat_result* out);
GZM_API gzm_status gzm_bonferroni(const double* p, size_t n, int64_t m, double* out);
GZM_API gzm_status gzm_bonferroni_alpha(double alpha, int64_t m, double* out);
/* format: "json" or "csv" (one header line plus one row). */
GZM_API gzm_status gzm_stat_result_format(const gzm_stat_result* r, const char* format,
                                          char** out);

/* ratings[6] and weights[6] in the order mental, physical, temporal,
 * performance, effort, frustration. */
GZM_API gzm_status gzm_nasa_tlx(const double* ratings, const int64_t* weights, double* out);
/* Scores every row of a TLX CSV; format "json" or "csv". */
GZM_API gzm_status gzm_tlx_score_csv(const char* data, size_t len, const char* format,
                                     char** out);

#ifdef __cplusplus
}
#endif

#endif /* GAZEMAP_GAZEMAP_H_ */
