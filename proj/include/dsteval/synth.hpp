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

#ifndef DSTEVAL_SYNTH_HPP_
#define DSTEVAL_SYNTH_HPP_

// Controlled-error synthetic predictions, for exercising the metrics without
// trained trackers.
//
// Randomness comes from SplitMix64 and is converted to uniforms and Poisson
// counts by hand, so outputs are bit-identical across compilers and standard
// libraries (std::*_distribution makes no such promise).
//
// Every turn gets its own generator, seeded from the run seed, a stable hash
// of the dialogue id and the turn index. Within a turn the draws are made in
// a fixed order over the gold slots in sorted order:
//
//   1. one uniform per gold slot: dropped if u < p_miss
//   2. two uniforms per gold slot: if kept and u < p_wrong_value, the value
//      is replaced by a pool value chosen with the second uniform
//   3. a Poisson(p_hallucinate) count, capped by the number of schema slots
//      outside gold, then that many distinct such slots (partial
//      Fisher-Yates over the sorted candidates), each with a pool value
//
// Steps 1 and 2 draw the same number of uniforms whatever the probabilities,
// so changing p_hallucinate never moves a miss or a corruption, and runs that
// differ only in p_miss are coupled slot by slot.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsteval/core.hpp"

namespace dsteval {

// SplitMix64 (Steele, Lea, Flood 2014).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform index in [0, n), n > 0.
  std::size_t index(std::size_t n) {
    auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

  // Poisson(lambda) by Knuth's product-of-uniforms method, truncated at `cap`.
  std::size_t poisson(double lambda, std::size_t cap) {
    const double limit = std::exp(-lambda);
    double product = 1.0;
    std::size_t k = 0;
    while (k < cap) {
      product *= uniform();
      if (product <= limit) break;
      ++k;
    }
    return k;
  }

 private:
  std::uint64_t state_;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) { return SplitMix64(x).next(); }

inline std::uint64_t dialogue_seed(std::uint64_t seed, std::string_view id) {
  return seed ^ fnv1a64(id);
}

inline std::uint64_t turn_seed(std::uint64_t seed, std::string_view id,
                               std::size_t turn_index) {
  return mix64(dialogue_seed(seed, id) ^
               mix64(static_cast<std::uint64_t>(turn_index)));
}

}  // namespace detail

// Replacement values for corrupted and hallucinated slots.
inline constexpr std::array<std::string_view, 10> kSynthValuePool = {
    "synthval0", "synthval1", "synthval2", "synthval3", "synthval4",
    "synthval5", "synthval6", "synthval7", "synthval8", "synthval9"};

struct PerturbationSpec {
  std::uint64_t seed = 0;
  double p_miss = 0.0;         // probability a gold slot is dropped
  double p_wrong_value = 0.0;  // probability a kept slot's value is replaced
  double p_hallucinate = 0.0;  // mean number of extra slots per turn

  void validate() const {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(p_miss)) throw ValidationError("p_miss must lie in [0, 1]");
    if (!prob(p_wrong_value)) {
      throw ValidationError("p_wrong_value must lie in [0, 1]");
    }
    if (!(p_hallucinate >= 0.0 && std::isfinite(p_hallucinate))) {
      throw ValidationError("p_hallucinate must be finite and >= 0");
    }
  }
};

// Predicted state for one gold state, following the draw order above.
inline BeliefState perturb_state(const BeliefState& gold,
                                 const SlotSchema& schema,
                                 const PerturbationSpec& spec,
                                 std::string_view dialogue_id,
                                 std::size_t turn_index) {
  SplitMix64 rng(detail::turn_seed(spec.seed, dialogue_id, turn_index));

  std::vector<bool> dropped;
  dropped.reserve(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    dropped.push_back(rng.uniform() < spec.p_miss);
  }

  BeliefState predicted;
  std::size_t i = 0;
  for (const auto& [slot, value] : gold) {
    const double u_corrupt = rng.uniform();
    const double u_value = rng.uniform();
    if (dropped[i++]) continue;
    if (u_corrupt < spec.p_wrong_value) {
      std::vector<std::string_view> pool;
      for (auto v : kSynthValuePool) {
        if (v != value) pool.push_back(v);
      }
      auto k = static_cast<std::size_t>(u_value * static_cast<double>(pool.size()));
      predicted.set(slot, pool[std::min(k, pool.size() - 1)]);
    } else {
      predicted.set(slot, value);
    }
  }

  std::vector<SlotRef> candidates;
  for (const auto& s : schema.slots()) {
    if (!gold.contains(s)) candidates.push_back(s);
  }
  const std::size_t count = rng.poisson(spec.p_hallucinate, candidates.size());
  for (std::size_t j = 0; j < count; ++j) {
    std::swap(candidates[j], candidates[j + rng.index(candidates.size() - j)]);
    predicted.set(candidates[j], kSynthValuePool[rng.index(kSynthValuePool.size())]);
  }
  return predicted;
}

// Replaces every turn's prediction with a perturbation of its gold state.
inline std::vector<Dialogue> perturb(std::span<const Dialogue> gold_corpus,
                                     const SlotSchema& schema,
                                     const PerturbationSpec& spec) {
  spec.validate();
  std::vector<Dialogue> out(gold_corpus.begin(), gold_corpus.end());
  for (auto& dialogue : out) {
    for (auto& turn : dialogue.turns) {
      turn.predicted = perturb_state(turn.gold, schema, spec,
                                     turn.dialogue_id, turn.turn_index);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic gold corpora

// Shape of a synthetic accumulated-state corpus. Each dialogue touches
// between 1 and max_domains schema domains; on every turn, with probability
// p_new_slot, one not-yet-used slot of those domains joins the gold state
// and stays for the rest of the dialogue.
struct GoldCorpusSpec {
  std::uint64_t seed = 1;
  std::size_t n_dialogues = 200;
  std::size_t min_turns = 2;
  std::size_t max_turns = 12;
  std::size_t max_domains = 2;
  double p_new_slot = 0.45;
  double p_dontcare = 0.05;  // chance a new slot's value is "dontcare"

  void validate() const {
    if (min_turns == 0 || min_turns > max_turns) {
      throw ValidationError("need 1 <= min_turns <= max_turns");
    }
    if (max_domains == 0) throw ValidationError("max_domains must be >= 1");
    if (!(p_new_slot >= 0.0 && p_new_slot <= 1.0) ||
        !(p_dontcare >= 0.0 && p_dontcare <= 1.0)) {
      throw ValidationError("probabilities must lie in [0, 1]");
    }
  }
};

// Gold values are "gold0".."gold7" (or "dontcare"), disjoint from the
// perturbation pool. Predicted states are copies of gold.
inline std::vector<Dialogue> generate_gold_corpus(const SlotSchema& schema,
                                                  const GoldCorpusSpec& spec) {
  spec.validate();
  SplitMix64 rng(detail::mix64(spec.seed));
  const std::vector<std::string> all_domains = schema.domains();
  const std::size_t id_width = std::to_string(spec.n_dialogues).size();

  std::vector<Dialogue> out;
  out.reserve(spec.n_dialogues);
  for (std::size_t n = 0; n < spec.n_dialogues; ++n) {
    std::string id = std::to_string(n);
    id = "SYN" + std::string(id_width - id.size(), '0') + id;

    std::vector<std::string> domains = all_domains;
    const std::size_t n_domains =
        1 + rng.index(std::min(spec.max_domains, domains.size()));
    for (std::size_t j = 0; j < n_domains; ++j) {
      std::swap(domains[j], domains[j + rng.index(domains.size() - j)]);
    }
    std::vector<SlotRef> unused;
    for (const auto& s : schema.slots()) {
      if (std::find(domains.begin(), domains.begin() +
                                          static_cast<std::ptrdiff_t>(n_domains),
                    s.domain()) != domains.begin() +
                                       static_cast<std::ptrdiff_t>(n_domains)) {
        unused.push_back(s);
      }
    }

    const std::size_t n_turns =
        spec.min_turns + rng.index(spec.max_turns - spec.min_turns + 1);
    Dialogue d;
    d.dialogue_id = id;
    BeliefState state;
    for (std::size_t t = 0; t < n_turns; ++t) {
      const double u_new = rng.uniform();
      const double u_dontcare = rng.uniform();
      const std::size_t value_idx = rng.index(8);
      if (u_new < spec.p_new_slot && !unused.empty()) {
        const std::size_t k = rng.index(unused.size());
        const std::string value = u_dontcare < spec.p_dontcare
                                      ? std::string("dontcare")
                                      : "gold" + std::to_string(value_idx);
        state.set(unused[k], value);
        unused.erase(unused.begin() + static_cast<std::ptrdiff_t>(k));
      }
      d.turns.push_back({id, t, state, state});
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace dsteval

#endif  // DSTEVAL_SYNTH_HPP_
