// Copyright 2026 The dsteval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dsteval/core.hpp"
#include "support/reference.hpp"

namespace dsteval {
namespace {

SlotRef S(const char* domain, const char* slot) { return SlotRef(domain, slot); }

TEST(NormalizeValue, CanonicalizesWhitespaceAndCase) {
  EXPECT_EQ(normalize_value("  Indian "), "indian");
  EXPECT_EQ(normalize_value("London\t Kings   CROSS"), "london kings cross");
  EXPECT_EQ(normalize_value("17:30"), "17:30");
}

TEST(NormalizeValue, AbsentSentinels) {
  EXPECT_FALSE(normalize_value("none"));
  EXPECT_FALSE(normalize_value(" NONE "));
  EXPECT_FALSE(normalize_value(""));
  EXPECT_FALSE(normalize_value("   "));
  EXPECT_FALSE(normalize_value("Not  Mentioned"));
}

TEST(NormalizeValue, DontcareIsAValue) {
  EXPECT_EQ(normalize_value("dontcare"), "dontcare");
  EXPECT_EQ(normalize_value("DontCare "), "dontcare");
}

TEST(NormalizeValue, Idempotent) {
  std::mt19937 rng(7);
  const std::string alphabet = "aB \tz:-N";
  for (int i = 0; i < 2000; ++i) {
    std::string raw;
    const int len = static_cast<int>(rng() % 12);
    for (int j = 0; j < len; ++j) raw.push_back(alphabet[rng() % alphabet.size()]);
    if (auto once = normalize_value(raw)) {
      EXPECT_EQ(normalize_value(*once), once) << "raw='" << raw << "'";
    }
  }
}

TEST(SlotRef, NormalizesAndRejectsEmpty) {
  EXPECT_EQ(S(" Restaurant", "Book  Day"), S("restaurant", "book day"));
  EXPECT_EQ(S("restaurant", "book day").str(), "restaurant-book day");
  EXPECT_THROW(S("", "food"), ValidationError);
  EXPECT_THROW(S("restaurant", "  "), ValidationError);
}

TEST(BeliefState, DropsSentinelsKeepsDontcare) {
  BeliefState s{{"restaurant", "food", "none"},
                {"restaurant", "area", "dontcare"},
                {"hotel", "name", "not mentioned"}};
  EXPECT_EQ(s.size(), 1u);
  ASSERT_NE(s.find(S("restaurant", "area")), nullptr);
  EXPECT_EQ(*s.find(S("restaurant", "area")), "dontcare");
}

TEST(BeliefState, SettingSentinelErases) {
  BeliefState s{{"restaurant", "food", "indian"}};
  EXPECT_FALSE(s.set(S("restaurant", "food"), "none"));
  EXPECT_TRUE(s.empty());
}

TEST(SlotSchema, RejectsDuplicatesAndEmpty) {
  EXPECT_THROW(SlotSchema(std::vector<SlotRef>{}), ValidationError);
  EXPECT_THROW(SlotSchema({S("a", "b"), S("A", " b")}), ValidationError);
  SlotSchema schema({S("taxi", "leaveat"), S("hotel", "area"), S("hotel", "name")});
  EXPECT_EQ(schema.size(), 3u);
  EXPECT_EQ(schema.domains(), (std::vector<std::string>{"hotel", "taxi"}));
  EXPECT_EQ(schema.count_in_domain("hotel"), 2u);
}

TEST(SlotSchema, FingerprintIgnoresOrder) {
  SlotSchema a({S("taxi", "leaveat"), S("hotel", "area")});
  SlotSchema b({S("hotel", "area"), S("taxi", "leaveat")});
  SlotSchema c({S("hotel", "area"), S("taxi", "arriveby")});
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  EXPECT_NE(a.fingerprint(), c.fingerprint());
  EXPECT_EQ(a.fingerprint().size(), 16u);
}

TEST(Dialogue, ValidateChecksIndices) {
  Dialogue d{"d1", {{"d1", 0, {}, {}}, {"d1", 2, {}, {}}}};
  EXPECT_THROW(d.validate(), ValidationError);
  d.turns[1].turn_index = 1;
  EXPECT_NO_THROW(d.validate());
  EXPECT_THROW((Dialogue{"d2", {}}).validate(), ValidationError);
}

// Extra-slot example, model A.
TEST(DiffStates, ModelA) {
  BeliefState pred{{"restaurant", "area", "centre"},
                   {"restaurant", "food", "chinese"},
                   {"attraction", "area", "centre"}};
  BeliefState gold{{"restaurant", "area", "centre"},
                   {"restaurant", "food", "indian"},
                   {"restaurant", "people", "2"}};
  TurnDiff d = diff_states(pred, gold);
  EXPECT_EQ(d.correct, (std::vector<SlotRef>{S("restaurant", "area")}));
  EXPECT_EQ(d.missed, (std::vector<SlotRef>{S("restaurant", "food"),
                                            S("restaurant", "people")}));
  EXPECT_EQ(d.wrong, (std::vector<SlotRef>{S("attraction", "area")}));
  EXPECT_EQ(d.union_size, 4u);
}

// Extra-slot example, model B.
TEST(DiffStates, ModelB) {
  BeliefState pred{{"restaurant", "area", "centre"},
                   {"restaurant", "food", "chinese"},
                   {"restaurant", "name", "nusha"},
                   {"attraction", "area", "centre"},
                   {"attraction", "pricerange", "cheap"}};
  BeliefState gold{{"restaurant", "area", "centre"},
                   {"restaurant", "food", "indian"},
                   {"restaurant", "people", "2"}};
  TurnDiff d = diff_states(pred, gold);
  EXPECT_EQ(d.n_missed(), 2u);
  EXPECT_EQ(d.n_wrong(), 3u);
  EXPECT_EQ(d.union_size, 6u);
}

TEST(DiffStates, EmptyPair) {
  TurnDiff d = diff_states({}, {});
  EXPECT_TRUE(d.correct.empty());
  EXPECT_TRUE(d.missed.empty());
  EXPECT_TRUE(d.wrong.empty());
  EXPECT_EQ(d.union_size, 0u);
}

TEST(DiffStates, WrongValueCountsOnceInMissed) {
  TurnDiff d = diff_states({{"train", "day", "tuesday"}}, {{"train", "day", "saturday"}});
  EXPECT_EQ(d.n_missed(), 1u);
  EXPECT_EQ(d.n_wrong(), 0u);
  EXPECT_EQ(d.union_size, 1u);
}

// Random states over a small universe; checked against the naive scan.
class DiffProperties : public ::testing::Test {
 protected:
  static constexpr int kIterations = 3000;

  BeliefState random_state(std::mt19937& rng, testing::RefState* ref) {
    static const char* kDomains[] = {"hotel", "train", "taxi"};
    static const char* kSlots[] = {"area", "day", "name"};
    static const char* kValues[] = {"a", "b", "dontcare"};
    BeliefState s;
    for (const char* d : kDomains) {
      for (const char* sl : kSlots) {
        if (rng() % 3 != 0) continue;
        const char* v = kValues[rng() % 3];
        s.set(SlotRef(d, sl), v);
        ref->emplace_back(std::string(d) + "-" + sl, v);
      }
    }
    return s;
  }
};

TEST_F(DiffProperties, PartitionMatchesNaiveScan) {
  std::mt19937 rng(12345);
  for (int i = 0; i < kIterations; ++i) {
    testing::RefState rp, rg;
    BeliefState p = random_state(rng, &rp);
    BeliefState g = random_state(rng, &rg);
    TurnDiff d = diff_states(p, g);
    auto ref = testing::reference_scores(rp, rg, 9);
    ASSERT_EQ(static_cast<int>(d.n_correct()), ref.correct);
    ASSERT_EQ(static_cast<int>(d.n_missed()), ref.missed);
    ASSERT_EQ(static_cast<int>(d.n_wrong()), ref.wrong);
    ASSERT_EQ(static_cast<int>(d.union_size), ref.union_size);
    ASSERT_EQ(d.n_correct() + d.n_missed(), g.size());
    ASSERT_EQ(d.n_correct() + d.n_missed() + d.n_wrong(), d.union_size);
  }
}

TEST_F(DiffProperties, SelfDiffIsPerfect) {
  std::mt19937 rng(99);
  for (int i = 0; i < kIterations; ++i) {
    testing::RefState unused;
    BeliefState s = random_state(rng, &unused);
    TurnDiff d = diff_states(s, s);
    ASSERT_TRUE(d.missed.empty());
    ASSERT_TRUE(d.wrong.empty());
    ASSERT_EQ(d.n_correct(), s.size());
    ASSERT_EQ(d.union_size, s.size());
  }
}

TEST_F(DiffProperties, UnionSizeSymmetric) {
  std::mt19937 rng(2024);
  for (int i = 0; i < kIterations; ++i) {
    testing::RefState unused;
    BeliefState a = random_state(rng, &unused);
    BeliefState b = random_state(rng, &unused);
    TurnDiff ab = diff_states(a, b), ba = diff_states(b, a);
    ASSERT_EQ(ab.union_size, ba.union_size);
    ASSERT_EQ(ab.n_correct(), ba.n_correct());
    // Slots present on one side only swap between W and M.
    ASSERT_EQ(ab.n_wrong() + ab.n_missed(), ba.n_wrong() + ba.n_missed());
  }
}

}  // namespace
}  // namespace dsteval
