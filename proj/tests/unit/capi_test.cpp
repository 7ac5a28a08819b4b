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

#include <gtest/gtest.h>

#include <unistd.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>

#include "gazemap/gazemap.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  gzm_string_free(s);
  return out;
}

gzm_session* parse_jsonl(const std::string& text, const char* participant, int64_t duration) {
  gzm_session_meta meta{participant, "expert", "expert", "T1", duration};
  gzm_session* s = nullptr;
  EXPECT_EQ(gzm_session_parse(text.data(), text.size(), GZM_LOG_JSONL, &meta, &s), GZM_OK)
      << gzm_last_error();
  return s;
}

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STREQ(gzm_version(), "0.1.0");
  EXPECT_STREQ(gzm_status_name(GZM_OK), "Ok");
  EXPECT_STREQ(gzm_status_name(GZM_E_EMPTY_SEQUENCE), "EmptySequence");
  gzm_string_free(nullptr);
}

TEST(CApi, LastErrorIsPerCallAndPerThread) {
  const char* a[] = {"A"};
  double d = 0;
  EXPECT_EQ(gzm_dtw_distance(a, 0, a, 1, &d), GZM_E_EMPTY_SEQUENCE);
  EXPECT_STRNE(gzm_last_error(), "");
  std::thread([] { EXPECT_STREQ(gzm_last_error(), ""); }).join();
  EXPECT_EQ(gzm_dtw_distance(a, 1, a, 1, &d), GZM_OK);
  EXPECT_EQ(d, 0.0);
  EXPECT_STREQ(gzm_last_error(), "");
  EXPECT_EQ(gzm_last_error_index(), -1);
}

TEST(CApi, NullArgumentsAreRejected) {
  double d = 0;
  EXPECT_EQ(gzm_dtw_distance(nullptr, 1, nullptr, 1, &d), GZM_E_INVALID_ARGUMENT);
  EXPECT_EQ(gzm_nw_similarity(nullptr, "B", &d, &d), GZM_E_INVALID_ARGUMENT);
  EXPECT_EQ(gzm_session_parse(nullptr, 0, GZM_LOG_JSONL, nullptr, nullptr), GZM_E_INVALID_ARGUMENT);
}

TEST(CApi, SessionParseReportsLine) {
  const std::string text = "{\"t\":0,\"file\":\"A.java\",\"line\":1}\n{\"t\":5,\"file\":\"A.java\"}\n";
  gzm_session_meta meta{"P1", nullptr, nullptr, nullptr, 100};
  gzm_session* s = nullptr;
  EXPECT_EQ(gzm_session_parse(text.data(), text.size(), GZM_LOG_JSONL, &meta, &s),
            GZM_E_MISSING_FIELD);
  EXPECT_EQ(s, nullptr);
  EXPECT_EQ(gzm_last_error_index(), 2);
}

TEST(CApi, SessionRoundTripAndSequence) {
  auto* s = parse_jsonl(
      "{\"t\":0,\"file\":\"A.java\",\"line\":1}\n"
      "{\"t\":10,\"file\":\"B.java\",\"line\":2}\n"
      "{\"t\":20,\"file\":\"A.java\",\"line\":1}\n",
      "P1", 40);
  ASSERT_NE(s, nullptr);
  EXPECT_STREQ(gzm_session_participant(s), "P1");
  EXPECT_EQ(gzm_session_event_count(s), 3u);
  char* out = nullptr;
  ASSERT_EQ(gzm_session_serialize(s, GZM_LOG_JSONL, &out), GZM_OK);
  const std::string jsonl = take(out);
  gzm_session* again = nullptr;
  ASSERT_EQ(gzm_session_parse(jsonl.data(), jsonl.size(), GZM_LOG_JSONL, nullptr, &again), GZM_OK)
      << gzm_last_error();
  ASSERT_EQ(gzm_session_serialize(again, GZM_LOG_JSONL, &out), GZM_OK);
  EXPECT_EQ(take(out), jsonl);
  gzm_session_free(again);

  ASSERT_EQ(gzm_session_file_sequence(s, 0, 0, &out), GZM_OK);
  const std::string seq = take(out);
  EXPECT_NE(seq.find("[\"A.java\",\"B.java\",\"A.java\"]"), std::string::npos) << seq;
  gzm_session_free(s);
}

TEST(CApi, Sequences) {
  const char* a[] = {"A", "B", "C"};
  const char* b[] = {"A", "C"};
  double d = -1;
  ASSERT_EQ(gzm_dtw_distance(a, 3, b, 2, &d), GZM_OK);
  EXPECT_EQ(d, 1.0);
  double sim = 0, dist = 0;
  ASSERT_EQ(gzm_nw_similarity("CSE", "CE", &sim, &dist), GZM_OK);
  EXPECT_NEAR(sim, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(sim + dist, 1.0, 1e-12);
  EXPECT_EQ(gzm_nw_similarity("", "", &sim, &dist), GZM_E_BOTH_EMPTY);

  char* out = nullptr;
  ASSERT_EQ(gzm_group_sequence(
                "[{\"items\":[\"B\",\"C\"],\"participant_id\":\"P2\",\"task_id\":\"T\"},"
                "{\"items\":[\"A\",\"B\"],\"participant_id\":\"P1\",\"task_id\":\"T\"}]",
                &out),
            GZM_OK)
      << gzm_last_error();
  const std::string g = take(out);
  EXPECT_NE(g.find("[\"A\",\"B\",\"C\"]"), std::string::npos) << g;
  EXPECT_EQ(gzm_group_sequence("not json", &out), GZM_E_SCHEMA);
}

TEST(CApi, ClassifyModule) {
  char label = 0;
  ASSERT_EQ(gzm_classify_module("a/Web.java", "@RestController\nclass Web {}\n", nullptr, &label),
            GZM_OK);
  EXPECT_EQ(label, 'C');
  ASSERT_EQ(gzm_classify_module("a/X.java", "class X {}\n", nullptr, &label), GZM_OK);
  EXPECT_EQ(label, 'O');
}

TEST(CApi, Stats) {
  const double x[] = {1, 2, 3};
  const double y[] = {4, 5, 6};
  gzm_stat_result r{};
  ASSERT_EQ(gzm_mann_whitney_u(x, 3, y, 3, nullptr, &r), GZM_OK);
  EXPECT_STREQ(r.method, "mann_whitney_u");
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_NEAR(r.p_value, 0.1, 1e-12);
  EXPECT_EQ(r.n1, 3);
  EXPECT_EQ(gzm_mann_whitney_u(x, 0, y, 3, nullptr, &r), GZM_E_EMPTY_SAMPLE);

  double d = 0;
  ASSERT_EQ(gzm_cohen_d_summary(0.8, 0.20, 8, 0.6, 0.30, 8, &d), GZM_OK);
  EXPECT_GT(d, 0.0);

  double p[] = {0.01, 0.5};
  double adj[2];
  ASSERT_EQ(gzm_bonferroni(p, 2, 16, adj), GZM_OK);
  EXPECT_EQ(adj[0], 0.16);
  EXPECT_EQ(adj[1], 1.0);
  double alpha = 0;
  ASSERT_EQ(gzm_bonferroni_alpha(0.05, 16, &alpha), GZM_OK);
  EXPECT_EQ(alpha, 0.003125);
  EXPECT_EQ(gzm_bonferroni_alpha(0.05, 0, &alpha), GZM_E_BAD_M);

  gzm_stats_options opt;
  gzm_stats_options_init(&opt);
  EXPECT_EQ(opt.mwu_exact_cutoff, 14);
  EXPECT_EQ(opt.wilcoxon_exact_cutoff, 12);
  EXPECT_EQ(opt.resamples, 10000u);
  opt.resamples = 500;
  ASSERT_EQ(gzm_bootstrap_mean_diff(x, 3, y, 3, &opt, &r), GZM_OK);
  EXPECT_EQ(r.has_ci, 1);
  EXPECT_LE(r.ci_low, r.ci_high);

  char* out = nullptr;
  ASSERT_EQ(gzm_stat_result_format(&r, "csv", &out), GZM_OK);
  EXPECT_EQ(take(out).rfind("method,statistic,", 0), 0u);
  EXPECT_EQ(gzm_stat_result_format(&r, "xml", &out), GZM_E_INVALID_ARGUMENT);
}

TEST(CApi, Tlx) {
  const double ratings[] = {10, 10, 10, 10, 10, 10};
  const int64_t weights[] = {5, 4, 3, 2, 1, 0};
  double score = 0;
  ASSERT_EQ(gzm_nasa_tlx(ratings, weights, &score), GZM_OK);
  EXPECT_DOUBLE_EQ(score, 10.0);
  const int64_t bad[] = {5, 5, 5, 5, 0, 0};
  EXPECT_EQ(gzm_nasa_tlx(ratings, bad, &score), GZM_E_WEIGHT_SUM_INVALID);
  const double high[] = {21, 10, 10, 10, 10, 10};
  EXPECT_EQ(gzm_nasa_tlx(high, weights, &score), GZM_E_RATING_OUT_OF_RANGE);
}

TEST(CApi, MapBuildExportImport) {
  auto* s = parse_jsonl(
      "{\"t\":0,\"file\":\"A.java\",\"line\":1}\n"
      "{\"t\":10,\"file\":\"A.java\",\"line\":2}\n",
      "P1", 1000);
  ASSERT_NE(s, nullptr);
  const auto root = std::filesystem::temp_directory_path() / ("gazemap_capi_" + std::to_string(::getpid()));
  std::filesystem::create_directories(root);
  std::ofstream(root / "A.java") << "class A {\n}\n";
  gzm_inventory* inv = nullptr;
  ASSERT_EQ(gzm_inventory_scan(root.c_str(), nullptr, 0, nullptr, 0, &inv), GZM_OK) << gzm_last_error();
  EXPECT_EQ(gzm_inventory_size(inv), 1u);
  gzm_map_options opt;
  gzm_map_options_init(&opt);
  EXPECT_EQ(opt.top_n, 10);
  EXPECT_EQ(opt.skew_threshold, 1.0);
  gzm_gaze_map* g = nullptr;
  const gzm_session* sessions[] = {s};
  ASSERT_EQ(gzm_gaze_map_build(sessions, 1, nullptr, &opt, &g), GZM_E_INVALID_ARGUMENT);
  ASSERT_EQ(gzm_gaze_map_build(sessions, 1, inv, &opt, &g), GZM_OK) << gzm_last_error();
  EXPECT_EQ(gzm_gaze_map_ranking_size(g), 1u);
  EXPECT_STREQ(gzm_gaze_map_ranked_path(g, 0), "A.java");
  EXPECT_EQ(gzm_gaze_map_ranked_path(g, 5), nullptr);

  char* out = nullptr;
  ASSERT_EQ(gzm_gaze_map_export(g, &out), GZM_OK);
  const std::string text = take(out);
  gzm_gaze_map* back = nullptr;
  ASSERT_EQ(gzm_gaze_map_import(text.data(), text.size(), &back), GZM_OK) << gzm_last_error();
  ASSERT_EQ(gzm_gaze_map_export(back, &out), GZM_OK);
  EXPECT_EQ(take(out), text);

  ASSERT_EQ(gzm_overlap(g, back, nullptr, &out), GZM_OK);
  EXPECT_NE(take(out).find("\"aggregate\""), std::string::npos);

  const std::string bad = "{\"format_version\":\"999\"}";
  gzm_gaze_map* none = nullptr;
  EXPECT_EQ(gzm_gaze_map_import(bad.data(), bad.size(), &none), GZM_E_UNSUPPORTED_VERSION);
  EXPECT_EQ(none, nullptr);

  gzm_gaze_map_free(back);
  gzm_gaze_map_free(g);
  gzm_session_free(s);
  gzm_inventory_free(inv);
  std::filesystem::remove_all(root);
  gzm_gaze_map_free(nullptr);
  gzm_session_free(nullptr);
}

}  // namespace
