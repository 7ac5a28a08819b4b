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

#include <random>

#include "gazemap/sequences.hpp"
#include "oracles.hpp"

namespace gazemap {
namespace {

using Seq = std::vector<std::string>;

GazeEvent ev(std::int64_t t, std::string file, bool valid = true) {
  GazeEvent e;
  e.t_ms = t;
  e.file = std::move(file);
  e.valid = valid;
  return e;
}

Session session_of(std::vector<GazeEvent> events, std::int64_t duration, std::string id = "P") {
  Session s;
  s.participant_id = std::move(id);
  s.task_id = "T";
  s.events = std::move(events);
  s.duration_ms = duration;
  return s;
}

FileSequence seq_of(Seq items, std::string id = "") {
  FileSequence f;
  f.items = std::move(items);
  f.participant_id = std::move(id);
  return f;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(FileSequence, Collapses) {
  auto s = session_of({ev(0, "A"), ev(10, "A"), ev(20, "B"), ev(30, "A")}, 40);
  EXPECT_EQ(file_sequence(s).items, (Seq{"A", "B", "A"}));
  EXPECT_EQ(file_sequence(s).participant_id, "P");
  EXPECT_TRUE(file_sequence(session_of({}, 10)).items.empty());
}

TEST(FileSequence, MinDwellDropsShortVisits) {
  auto s = session_of({ev(0, "A"), ev(2000, "B"), ev(2100, "A")}, 4100);
  SequenceOptions opt;
  opt.min_dwell_ms = 500;
  EXPECT_EQ(file_sequence(s, opt).items, (Seq{"A"}));
  opt.min_dwell_ms = 100;
  EXPECT_EQ(file_sequence(s, opt).items, (Seq{"A", "B", "A"}));
  // The last visit lasts until the end of the session.
  auto tail = session_of({ev(0, "A"), ev(1000, "B")}, 1200);
  opt.min_dwell_ms = 300;
  EXPECT_EQ(file_sequence(tail, opt).items, (Seq{"A"}));
  opt.min_dwell_ms = -1;
  EXPECT_EQ(code_of([&] { file_sequence(s, opt); }), ErrorCode::kInvalidArgument);
}

TEST(FileSequence, InvalidSamples) {
  auto s = session_of({ev(0, "A"), ev(10, "B", false), ev(20, "A")}, 30);
  EXPECT_EQ(file_sequence(s).items, (Seq{"A"}));
  SequenceOptions opt;
  opt.include_invalid = true;
  EXPECT_EQ(file_sequence(s, opt).items, (Seq{"A", "B", "A"}));
}

TEST(Dtw, Examples) {
  EXPECT_EQ(dtw_distance(Seq{"A", "B"}, Seq{"A", "B"}), 0.0);
  EXPECT_EQ(dtw_distance(Seq{"A", "B", "C"}, Seq{"A", "C"}), 1.0);
  EXPECT_EQ(code_of([] { dtw_distance(Seq{}, Seq{"A"}); }), ErrorCode::kEmptySequence);
  EXPECT_EQ(dtw_distance(seq_of({"x"}), seq_of({"y", "y"})), 2.0);
}

TEST(Dtw, MatchesBruteForceAndIsSymmetric) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> len(1, 6), sym(0, 2);
  for (int iter = 0; iter < 500; ++iter) {
    Seq a(len(rng)), b(len(rng));
    for (auto& x : a) x = std::string(1, static_cast<char>('A' + sym(rng)));
    for (auto& x : b) x = std::string(1, static_cast<char>('A' + sym(rng)));
    const double d = dtw_distance(a, b);
    EXPECT_EQ(d, oracle::dtw_brute(a, b));
    EXPECT_EQ(d, dtw_distance(b, a));
    EXPECT_EQ(dtw_distance(a, a), 0.0);
    EXPECT_EQ(d, std::floor(d));
    EXPECT_GE(d, 0.0);
  }
}

TEST(ModuleSequence, MapsAndCollapses) {
  ModuleMap m;
  m.entries = {{"ctrlA", 'C'}, {"ctrlB", 'C'}, {"svc", 'S'}};
  auto f = seq_of({"ctrlA", "ctrlB", "svc"}, "P1");
  auto ms = module_sequence(f, m);
  EXPECT_EQ(ms.items, "CS");
  EXPECT_LE(ms.items.size(), f.items.size());
  EXPECT_EQ(module_sequence(seq_of({}), m).items, "");
  EXPECT_EQ(code_of([&] { module_sequence(seq_of({"other"}), m); }), ErrorCode::kUnclassifiedPath);
}

TEST(NwSimilarity, Examples) {
  auto s = nw_similarity("ABC", "ABC");
  EXPECT_EQ(s.similarity, 1.0);
  EXPECT_EQ(s.distance, 0.0);
  s = nw_similarity("CSE", "CE");
  EXPECT_NEAR(s.similarity, 2.0 / 3.0, 1e-15);
  s = nw_similarity("AB", "CD");
  EXPECT_EQ(s.similarity, 0.0);
  EXPECT_EQ(s.distance, 1.0);
  EXPECT_EQ(nw_similarity("", "A").similarity, 0.0);
  EXPECT_EQ(code_of([] { nw_similarity("", ""); }), ErrorCode::kBothEmpty);
}

TEST(NwSimilarity, ScoreIsLcs) {
  std::mt19937_64 rng(32);
  std::uniform_int_distribution<int> len(0, 10), sym(0, 3);
  for (int iter = 0; iter < 300; ++iter) {
    std::string a(len(rng), 'A'), b(len(rng), 'A');
    for (auto& c : a) c = static_cast<char>('A' + sym(rng));
    for (auto& c : b) c = static_cast<char>('A' + sym(rng));
    EXPECT_EQ(needleman_wunsch_score(a, b), static_cast<double>(oracle::lcs_brute(a, b)));
    if (!a.empty() || !b.empty()) {
      auto s = nw_similarity(a, b);
      EXPECT_NEAR(s.similarity + s.distance, 1.0, 1e-12);
      EXPECT_GE(s.similarity, 0.0);
      EXPECT_LE(s.similarity, 1.0);
    }
  }
}

TEST(NwScore, OtherScoring) {
  // Mismatch -1, gap -2: aligning "AB" with "AC" as match + mismatch beats gaps.
  EXPECT_EQ(needleman_wunsch_score("AB", "AC", {1.0, -1.0, -2.0}), 0.0);
  EXPECT_EQ(needleman_wunsch_score("A", "", {1.0, -1.0, -2.0}), -2.0);
}

TEST(GroupDtw, Examples) {
  auto ref = seq_of({"A", "C"});
  std::vector<FileSequence> same = {seq_of({"A", "C"}), seq_of({"A", "C"})};
  EXPECT_EQ(group_dtw_distribution(same, ref), (std::vector<double>{0, 0}));
  std::vector<FileSequence> one = {seq_of({"A", "B", "C"})};
  EXPECT_EQ(group_dtw_distribution(one, ref), (std::vector<double>{1}));
  EXPECT_TRUE(group_dtw_distribution({}, ref).empty());
  EXPECT_EQ(code_of([&] { group_dtw_distribution(one, seq_of({})); }), ErrorCode::kEmptySequence);
}

TEST(GroupSequence, ConcatenatesInParticipantOrder) {
  std::vector<FileSequence> members = {seq_of({"B", "C"}, "P2"), seq_of({"A", "B"}, "P1")};
  auto g = group_sequence(members);
  EXPECT_EQ(g.items, (Seq{"A", "B", "C"}));
  EXPECT_EQ(g.participant_id, "group");
  std::swap(members[0], members[1]);
  EXPECT_EQ(group_sequence(members).items, g.items);
}

}  // namespace
}  // namespace gazemap
