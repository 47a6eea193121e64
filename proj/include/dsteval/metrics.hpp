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

#ifndef DSTEVAL_METRICS_HPP_
#define DSTEVAL_METRICS_HPP_

// Per-turn belief-state metrics and corpus aggregation.
//
//   JGA  1 iff predicted state == gold state
//   SA   (T - M - W) / T,      T  = schema size
//   RSA  (T* - M - W) / T*,    T* = |slots(pred) U slots(gold)|, 0 if T* = 0
//   AGA  correct / |gold|,     undefined for an empty gold state
//   F1   slot-level F1 over (slot, value) pairs
//
// Corpus means are micro-averages over turns.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "dsteval/core.hpp"

namespace dsteval {

inline int jga_turn(const TurnDiff& diff) { return diff.exact_match() ? 1 : 0; }

// Returns the first slot of `diff` that the schema does not define.
inline const SlotRef* first_unknown_slot(const TurnDiff& diff,
                                         const SlotSchema& schema) {
  for (const auto* list : {&diff.correct, &diff.missed, &diff.wrong}) {
    for (const auto& s : *list) {
      if (!schema.contains(s)) return &s;
    }
  }
  return nullptr;
}

inline double slot_accuracy_turn(const TurnDiff& diff,
                                 const SlotSchema& schema) {
  if (const SlotRef* bad = first_unknown_slot(diff, schema)) {
    throw SchemaViolation("slot '" + bad->str() + "' is not in the schema");
  }
  const auto t = static_cast<double>(schema.size());
  return (t - static_cast<double>(diff.n_missed() + diff.n_wrong())) / t;
}

inline double relative_slot_accuracy_turn(const TurnDiff& diff) {
  if (diff.union_size == 0) return 0.0;
  const auto t_star = static_cast<double>(diff.union_size);
  return (t_star - static_cast<double>(diff.n_missed() + diff.n_wrong())) /
         t_star;
}

inline std::optional<double> average_goal_accuracy_turn(const TurnDiff& diff) {
  const std::size_t gold = diff.n_correct() + diff.n_missed();
  if (gold == 0) return std::nullopt;
  return static_cast<double>(diff.n_correct()) / static_cast<double>(gold);
}

// 2PR/(P+R) reduces to 2TP/(|pred| + |gold|). Both states empty scores 1,
// exactly one empty scores 0.
inline double f1_turn(const TurnDiff& diff) {
  if (diff.predicted_size == 0 && diff.gold_size == 0) return 1.0;
  if (diff.predicted_size == 0 || diff.gold_size == 0) return 0.0;
  if (diff.n_correct() == 0) return 0.0;
  return 2.0 * static_cast<double>(diff.n_correct()) /
         static_cast<double>(diff.predicted_size + diff.gold_size);
}

struct TurnMetrics {
  int jga = 0;
  std::optional<double> slot_acc;  // unset when the turn leaves the schema
  double rsa = 0.0;
  std::optional<double> aga;       // unset when gold is empty
  double f1 = 0.0;
  std::size_t t_star = 0;
  std::size_t n_missed = 0;
  std::size_t n_wrong = 0;

  friend bool operator==(const TurnMetrics&, const TurnMetrics&) = default;
};

// Computes every per-turn metric. With `strict`, a slot outside the schema
// throws SchemaViolation; otherwise slot_acc is left unset for the turn.
inline TurnMetrics score_turn(const TurnDiff& diff, const SlotSchema& schema,
                              bool strict = true) {
  TurnMetrics m;
  m.jga = jga_turn(diff);
  if (strict || first_unknown_slot(diff, schema) == nullptr) {
    m.slot_acc = slot_accuracy_turn(diff, schema);
  }
  m.rsa = relative_slot_accuracy_turn(diff);
  m.aga = average_goal_accuracy_turn(diff);
  m.f1 = f1_turn(diff);
  m.t_star = diff.union_size;
  m.n_missed = diff.n_missed();
  m.n_wrong = diff.n_wrong();
  return m;
}

struct TurnRow {
  std::string dialogue_id;
  std::size_t turn_index = 0;
  TurnMetrics metrics;

  friend bool operator==(const TurnRow&, const TurnRow&) = default;
};

struct CorpusSummary {
  std::size_t n_turns = 0;
  std::size_t n_aga_turns = 0;
  double mean_jga = 0.0;
  std::optional<double> mean_slot_acc;  // unset if any turn lacks SA
  double mean_rsa = 0.0;
  std::optional<double> mean_aga;       // unset if n_aga_turns == 0
  double mean_f1 = 0.0;

  friend bool operator==(const CorpusSummary&, const CorpusSummary&) = default;
};

struct CorpusEvaluation {
  std::vector<TurnRow> rows;  // ordered by (dialogue_id, turn_index)
  CorpusSummary summary;
};

struct EvalOptions {
  bool strict = true;
  // Worker threads for per-dialogue scoring; results do not depend on it.
  unsigned threads = 1;
};

// Unweighted means in row order.
inline CorpusSummary summarize(std::span<const TurnRow> rows) {
  CorpusSummary s;
  s.n_turns = rows.size();
  if (rows.empty()) return s;

  double jga = 0, sa = 0, rsa = 0, aga = 0, f1 = 0;
  bool sa_complete = true;
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    jga += m.jga;
    if (m.slot_acc) {
      sa += *m.slot_acc;
    } else {
      sa_complete = false;
    }
    rsa += m.rsa;
    if (m.aga) {
      aga += *m.aga;
      ++s.n_aga_turns;
    }
    f1 += m.f1;
  }
  const auto n = static_cast<double>(rows.size());
  s.mean_jga = jga / n;
  if (sa_complete) s.mean_slot_acc = sa / n;
  s.mean_rsa = rsa / n;
  if (s.n_aga_turns > 0) s.mean_aga = aga / static_cast<double>(s.n_aga_turns);
  s.mean_f1 = f1 / n;
  return s;
}

namespace detail {

inline std::vector<TurnRow> score_dialogue(const Dialogue& dialogue,
                                           const SlotSchema& schema,
                                           bool strict) {
  std::vector<TurnRow> rows;
  rows.reserve(dialogue.turns.size());
  for (const auto& turn : dialogue.turns) {
    TurnDiff diff = diff_states(turn.predicted, turn.gold);
    try {
      rows.push_back({turn.dialogue_id, turn.turn_index,
                      score_turn(diff, schema, strict)});
    } catch (const SchemaViolation& e) {
      throw SchemaViolation("dialogue '" + turn.dialogue_id + "' turn " +
                            std::to_string(turn.turn_index) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace detail

inline CorpusEvaluation evaluate_corpus(std::span<const Dialogue> dialogues,
                                        const SlotSchema& schema,
                                        const EvalOptions& options = {}) {
  std::vector<std::size_t> order(dialogues.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dialogues[a].dialogue_id < dialogues[b].dialogue_id;
  });

  std::vector<std::vector<TurnRow>> per_dialogue(dialogues.size());
  std::vector<std::exception_ptr> errors(dialogues.size());
  auto score = [&](std::size_t i) {
    try {
      per_dialogue[i] =
          detail::score_dialogue(dialogues[i], schema, options.strict);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.threads,
                                      static_cast<unsigned>(dialogues.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < dialogues.size(); ++i) score(i);
  } else {
    // Strided partition; each worker owns disjoint slots of the outputs.
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < dialogues.size(); i += workers) score(i);
      });
    }
  }

  // Report the error of the first dialogue in output order, whatever the
  // thread count.
  for (std::size_t i : order) {
    if (errors[i]) std::rethrow_exception(errors[i]);
  }

  CorpusEvaluation out;
  for (std::size_t i : order) {
    for (auto& row : per_dialogue[i]) out.rows.push_back(std::move(row));
  }
  out.summary = summarize(out.rows);
  return out;
}

}  // namespace dsteval

#endif  // DSTEVAL_METRICS_HPP_
