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

#ifndef DSTEVAL_TESTS_REFERENCE_HPP_
#define DSTEVAL_TESTS_REFERENCE_HPP_

// Naive reference scorer for tests. States are unsorted vectors of
// (slot-name, value) pairs; every count is recomputed by scanning both lists,
// and each metric is evaluated straight from its textbook formula. Nothing
// here touches dsteval's diff.

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dsteval::testing {

using RefState = std::vector<std::pair<std::string, std::string>>;

struct RefScores {
  int correct = 0;
  int missed = 0;
  int wrong = 0;
  int union_size = 0;
  int jga = 0;
  double slot_acc = 0;
  double rsa = 0;
  std::optional<double> aga;
  double f1 = 0;
};

inline const std::string* ref_lookup(const RefState& s, const std::string& slot) {
  for (const auto& [k, v] : s) {
    if (k == slot) return &v;
  }
  return nullptr;
}

inline RefScores reference_scores(const RefState& predicted, const RefState& gold,
                                  int schema_size) {
  RefScores r;
  for (const auto& [slot, value] : gold) {
    const std::string* p = ref_lookup(predicted, slot);
    if (p != nullptr && *p == value) {
      ++r.correct;
    } else {
      ++r.missed;
    }
  }
  for (const auto& [slot, value] : predicted) {
    if (ref_lookup(gold, slot) == nullptr) ++r.wrong;
  }
  std::vector<std::string> seen;
  for (const auto* s : {&predicted, &gold}) {
    for (const auto& [slot, value] : *s) {
      bool dup = false;
      for (const auto& x : seen) dup = dup || x == slot;
      if (!dup) seen.push_back(slot);
    }
  }
  r.union_size = static_cast<int>(seen.size());

  // Joint goal: every pair of one side appears in the other.
  bool same = predicted.size() == gold.size();
  for (const auto& [slot, value] : gold) {
    const std::string* p = ref_lookup(predicted, slot);
    same = same && p != nullptr && *p == value;
  }
  r.jga = same ? 1 : 0;

  const double T = schema_size;
  r.slot_acc = (T - r.missed - r.wrong) / T;
  r.rsa = r.union_size == 0
              ? 0.0
              : (double(r.union_size) - r.missed - r.wrong) / r.union_size;
  if (!gold.empty()) r.aga = double(r.correct) / double(gold.size());

  if (predicted.empty() && gold.empty()) {
    r.f1 = 1.0;
  } else if (predicted.empty() || gold.empty()) {
    r.f1 = 0.0;
  } else {
    const double precision = double(r.correct) / double(predicted.size());
    const double recall = double(r.correct) / double(gold.size());
    r.f1 = precision + recall == 0.0
               ? 0.0
               : 2 * precision * recall / (precision + recall);
  }
  return r;
}

}  // namespace dsteval::testing

#endif  // DSTEVAL_TESTS_REFERENCE_HPP_
