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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gazemap/aggregate.hpp"
#include "gazemap/export.hpp"
#include "gazemap/ingest.hpp"
#include "oracles.hpp"

namespace gazemap {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path temp_dir(const std::string& tag) {
  auto p = fs::temp_directory_path() / ("gazemap_export_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TEST(CanonicalDump, Format) {
  json doc = {{"b", 1.5}, {"a", {{"z", -0.0}, {"y", json::array()}}}, {"c", "é"}, {"d", 1e-7}};
  EXPECT_EQ(canonical_dump(doc),
            "{\n"
            "  \"a\": {\n"
            "    \"y\": [],\n"
            "    \"z\": 0.000000\n"
            "  },\n"
            "  \"b\": 1.500000,\n"
            "  \"c\": \"é\",\n"
            "  \"d\": 0.000000\n"
            "}\n");
  EXPECT_EQ(canonical_dump(json::array({1, true, nullptr})), "[\n  1,\n  true,\n  null\n]\n");
  EXPECT_EQ(canonical_dump(json::object()), "{}\n");
}

TEST(CanonicalDump, InvalidUtf8IsReplaced) {
  json doc = {{"k", std::string("a\xff")}};
  EXPECT_EQ(canonical_dump(doc), "{\n  \"k\": \"a\xEF\xBF\xBD\"\n}\n");
}

TEST(GazeMapJson, EmptyMap) {
  GazeMap g;
  const auto text = export_gazemap_json(g);
  auto doc = json::parse(text);
  EXPECT_TRUE(doc["files"].empty());
  EXPECT_TRUE(doc["ranking"].empty());
  EXPECT_EQ(doc["format_version"], "1");
  EXPECT_EQ(import_gazemap_json(text), g);
}

TEST(GazeMapJson, RoundTripIsByteStable) {
  std::mt19937_64 rng(61);
  for (int iter = 0; iter < 100; ++iter) {
    auto c = oracle::random_corpus(rng);
    auto g = build_gaze_map(c.sessions, c.inventory);
    const auto once = export_gazemap_json(g);
    const auto twice = export_gazemap_json(import_gazemap_json(once));
    EXPECT_EQ(once, twice);
    EXPECT_EQ(once.find('\r'), std::string::npos);
    EXPECT_EQ(once.back(), '\n');
  }
}

TEST(GazeMapJson, ImportReconstructsQuantizedMap) {
  GazeMap g;
  g.project_id = "p";
  g.top_n = 3;
  g.files["A.java"] = {5, {{2, {0.25, AttentionGrade::kL3}}, {3, {0.5, AttentionGrade::kL5}}}};
  g.ranking = {{"A.java", 0.75}};
  g.blocks["A.java"] = {{2, 3, AttentionGrade::kL5}};
  g.grading = {"constant", 1.0, 0.0, {}};
  EXPECT_EQ(import_gazemap_json(export_gazemap_json(g)), g);
}

TEST(GazeMapJson, ImportErrors) {
  GazeMap g;
  g.files["A.java"] = {5, {{2, {0.25, AttentionGrade::kL3}}}};
  g.ranking = {{"A.java", 0.25}};
  json doc = gaze_map_to_json(g);

  json bad = doc;
  bad["format_version"] = "999";
  try {
    gaze_map_from_json(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedVersion);
  }

  bad = doc;
  bad["ranking"][0]["path"] = "Missing.java";
  try {
    gaze_map_from_json(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaError);
    EXPECT_EQ(e.subject(), "/ranking/0");
  }

  bad = doc;
  bad["files"]["A.java"]["lines"][0]["grade"] = "L9";
  try {
    gaze_map_from_json(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaError);
    EXPECT_EQ(e.subject(), "/files/A.java/lines/0/grade");
  }

  bad = doc;
  bad.erase("top_n");
  EXPECT_THROW(gaze_map_from_json(bad), Error);
  EXPECT_THROW(import_gazemap_json("{"), Error);
}

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(StatResult, Serialization) {
  StatResult r;
  r.method = "students_t";
  r.statistic = 2.5;
  r.p_value = 0.02;
  r.effect_size = 0.8;
  r.n1 = 3;
  r.n2 = 4;
  r.notes = "a, b";
  auto j = stat_result_to_json(r);
  EXPECT_EQ(j["ci_low"], nullptr);
  EXPECT_EQ(j["effect_size"], 0.8);
  EXPECT_EQ(stat_results_to_csv({r}),
            "method,statistic,p_value,effect_size,ci_low,ci_high,n1,n2,notes\n"
            "students_t,2.5,0.02,0.8,,,3,4,\"a, b\"\n");
}

TEST(Overlap, JsonLabelsBothScores) {
  OverlapReport r;
  r.per_file = {{"f", 0.5}};
  r.aggregate = 0.5;
  r.per_file_mean = 0.5;
  auto j = overlap_report_to_json(r);
  EXPECT_TRUE(j["aggregate"].contains("label"));
  EXPECT_TRUE(j["per_file_mean"].contains("label"));
}

class BundleTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = temp_dir("src");
    out_ = temp_dir("out");
    fs::create_directories(root_ / "web");
    std::ofstream(root_ / "web/Home.java") << "@Controller\nclass Home {\n}\n";
    std::ofstream(root_ / "web/page.html") << "<p>\n";
    inventory_ = scan_source_tree(root_);
    modules_ = build_module_map(inventory_, default_module_rules());
    Session s;
    s.participant_id = "E1";
    s.duration_ms = 2000;
    GazeEvent e;
    e.file = "web/Home.java";
    e.line = 2;
    s.events = {e};
    map_ = build_gaze_map(std::vector<Session>{s}, inventory_);
  }
  void TearDown() override {
    fs::remove_all(root_);
    fs::remove_all(out_);
  }
  fs::path root_, out_;
  FileInventory inventory_;
  ModuleMap modules_;
  GazeMap map_;
};

TEST_F(BundleTest, WritesAssetsAndStableManifest) {
  BundleProvenance prov{{"E1"}, {"web/Home.java"}, 0};
  auto manifest = export_viewer_bundle(map_, inventory_, modules_, out_, prov);
  ASSERT_EQ(manifest.size(), 3u);
  EXPECT_EQ(manifest[0].path, "bundle.json");
  EXPECT_EQ(manifest[1].path, "files/web/Home.java");
  EXPECT_EQ(slurp(out_ / "files/web/Home.java"), slurp(root_ / "web/Home.java"));
  EXPECT_EQ(manifest[1].sha256, sha256_hex(slurp(root_ / "web/Home.java")));
  EXPECT_EQ(manifest[0].bytes, fs::file_size(out_ / "bundle.json"));

  auto bundle = json::parse(slurp(out_ / "bundle.json"));
  EXPECT_EQ(bundle["format_version"], "1");
  EXPECT_EQ(bundle["module_map"]["entries"]["web/Home.java"], "C");
  EXPECT_EQ(bundle["source_files"]["web/page.html"], "<p>\n");
  EXPECT_EQ(bundle["provenance"]["session_ids"], json::array({"E1"}));
  EXPECT_EQ(gaze_map_from_json(bundle["gaze_map"]), import_gazemap_json(export_gazemap_json(map_)));

  const auto first = slurp(out_ / "manifest.json");
  export_viewer_bundle(map_, inventory_, modules_, out_, prov);
  EXPECT_EQ(slurp(out_ / "manifest.json"), first);
}

TEST_F(BundleTest, MissingSourceIsUnknownFile) {
  fs::remove(root_ / "web/Home.java");
  try {
    export_viewer_bundle(map_, inventory_, modules_, out_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownFile);
  }
}

TEST_F(BundleTest, MapFileOutsideInventory) {
  auto inv = inventory_;
  inv.files.erase("web/Home.java");
  EXPECT_THROW(export_viewer_bundle(map_, inv, modules_, out_), Error);
}

}  // namespace
}  // namespace gazemap
