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

#ifndef DSTEVAL_ANALYSIS_HPP_
#define DSTEVAL_ANALYSIS_HPP_

// Corpus diagnostics built on top of the per-turn metrics:
//
//  - where in a dialogue JGA first drops to zero (error accumulation),
//  - how many gold slots each dialogue actually uses,
//  - per-domain JGA / SA / RSA,
//  - Pearson correlation between per-turn metrics,
//  - mean / population std of corpus summaries across models.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsteval/core.hpp"
#include "dsteval/metrics.hpp"

namespace dsteval {

// ---------------------------------------------------------------------------
// Error-accumulation position

// Relative position i/(n-1) of the first turn with JGA 0, where n is the
// number of turns. Returns nullopt when the last turn has JGA 1 (the dialogue
// ends correct and is left out of the population). A single-turn dialogue
// that fails maps to 0.
inline std::optional<double> first_zero_position(std::span<const int> turn_jga) {
  if (turn_jga.empty()) {
    throw ValidationError("first_zero_position needs at least one turn");
  }
  if (turn_jga.back() != 0) return std::nullopt;
  const auto first = static_cast<std::size_t>(
      std::find(turn_jga.begin(), turn_jga.end(), 0) - turn_jga.begin());
  if (turn_jga.size() == 1) return 0.0;
  return static_cast<double>(first) / static_cast<double>(turn_jga.size() - 1);
}

struct PositionHistogram {
  double bin_width = 0.1;
  std::vector<std::size_t> counts;
  std::size_t n_dialogues_considered = 0;
  std::size_t n_dialogues_skipped = 0;

  std::size_t bins() const noexcept { return counts.size(); }
  double bin_start(std::size_t k) const {
    return static_cast<double>(k) / static_cast<double>(counts.size());
  }
  double bin_end(std::size_t k) const {
    return static_cast<double>(k + 1) / static_cast<double>(counts.size());
  }
};

// Bins are [k*w, (k+1)*w) with the last one closed on the right. 1/w must be
// a whole number.
inline PositionHistogram position_histogram(std::span<const double> positions,
                                            double bin_width = 0.1) {
  if (!(bin_width > 0.0 && bin_width <= 1.0)) {
    throw ValidationError("bin width must lie in (0, 1]");
  }
  const double inverse = 1.0 / bin_width;
  const double n_bins_real = std::round(inverse);
  if (std::abs(inverse - n_bins_real) > 1e-9 * n_bins_real) {
    throw ValidationError("1 / bin width must be an integer");
  }
  const auto n_bins = static_cast<std::size_t>(n_bins_real);

  PositionHistogram h;
  h.bin_width = bin_width;
  h.counts.assign(n_bins, 0);
  for (double p : positions) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ValidationError("position outside [0, 1]: " + std::to_string(p));
    }
    // Scale by the bin count rather than divide by the width: 0.3 / 0.1 is
    // 2.9999999999999996 in binary floating point, 0.3 * 10 is 3.
    auto k = static_cast<std::size_t>(std::floor(p * n_bins_real + 1e-9));
    h.counts[std::min(k, n_bins - 1)]++;
  }
  h.n_dialogues_considered = positions.size();
  return h;
}

struct DialoguePosition {
  std::string dialogue_id;
  std::size_t n_turns = 0;
  std::optional<std::size_t> first_zero_index;  // unset when excluded
  std::optional<double> position;
};

// Groups per-turn rows by dialogue (rows must be ordered by dialogue, then
// turn) and applies first_zero_position to each JGA sequence.
inline std::vector<DialoguePosition> dialogue_positions(
    std::span<const TurnRow> rows) {
  std::vector<DialoguePosition> out;
  std::vector<int> jga;
  auto flush = [&](const std::string& id) {
    DialoguePosition d;
    d.dialogue_id = id;
    d.n_turns = jga.size();
    d.position = first_zero_position(jga);
    if (d.position) {
      d.first_zero_index = static_cast<std::size_t>(
          std::find(jga.begin(), jga.end(), 0) - jga.begin());
    }
    out.push_back(std::move(d));
    jga.clear();
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].dialogue_id != rows[i - 1].dialogue_id) {
      flush(rows[i - 1].dialogue_id);
    }
    jga.push_back(rows[i].metrics.jga);
  }
  if (!rows.empty()) flush(rows.back().dialogue_id);
  return out;
}

inline PositionHistogram position_histogram(
    std::span<const DialoguePosition> dialogues, double bin_width = 0.1) {
  std::vector<double> positions;
  std::size_t skipped = 0;
  for (const auto& d : dialogues) {
    if (d.position) {
      positions.push_back(*d.position);
    } else {
      ++skipped;
    }
  }
  PositionHistogram h = position_histogram(positions, bin_width);
  h.n_dialogues_skipped = skipped;
  return h;
}

// ---------------------------------------------------------------------------
// Slot usage

// Number of distinct gold slots used anywhere in the dialogue.
inline std::size_t slot_usage_per_dialogue(const Dialogue& dialogue) {
  std::set<SlotRef> used;
  for (const auto& turn : dialogue.turns) {
    for (const auto& [slot, value] : turn.gold) used.insert(slot);
  }
  return used.size();
}

// slot count -> number of dialogues using exactly that many gold slots.
inline std::map<std::size_t, std::size_t> slot_usage_frequency(
    std::span<const Dialogue> dialogues) {
  std::map<std::size_t, std::size_t> freq;
  for (const auto& d : dialogues) ++freq[slot_usage_per_dialogue(d)];
  return freq;
}

// ---------------------------------------------------------------------------
// Per-domain metrics

struct DomainMetrics {
  std::string domain;
  std::size_t n_turns = 0;  // turns whose restricted union is non-empty
  std::optional<double> jga;
  std::optional<double> slot_acc;
  std::optional<double> rsa;
};

// Restricts predicted and gold to one domain and averages JGA, SA and RSA over
// the turns where the restricted union is non-empty. SA uses T = the number
// of schema slots in the domain. All three are unset when no turn qualifies;
// slot_acc is also unset in lenient mode if a considered turn holds a slot
// the schema does not define.
inline DomainMetrics per_domain_metrics(std::span<const Dialogue> dialogues,
                                        const SlotSchema& schema,
                                        std::string_view domain,
                                        bool strict = true) {
  DomainMetrics out;
  out.domain = detail::canonical_token(domain);
  if (!schema.has_domain(out.domain)) {
    throw ValidationError("unknown domain: '" + std::string(domain) + "'");
  }
  std::vector<SlotRef> domain_slots;
  for (const auto& s : schema.slots()) {
    if (s.domain() == out.domain) domain_slots.push_back(s);
  }
  const SlotSchema domain_schema(std::move(domain_slots));

  double jga = 0, sa = 0, rsa = 0;
  bool sa_complete = true;
  for (const auto& dialogue : dialogues) {
    for (const auto& turn : dialogue.turns) {
      TurnDiff diff = diff_states(turn.predicted.restricted_to(out.domain),
                                  turn.gold.restricted_to(out.domain));
      if (diff.union_size == 0) continue;
      ++out.n_turns;
      jga += jga_turn(diff);
      rsa += relative_slot_accuracy_turn(diff);
      if (const SlotRef* bad = first_unknown_slot(diff, domain_schema)) {
        if (strict) {
          throw SchemaViolation("dialogue '" + turn.dialogue_id + "' turn " +
                                std::to_string(turn.turn_index) + ": slot '" +
                                bad->str() + "' is not in the schema");
        }
        sa_complete = false;
      } else {
        sa += slot_accuracy_turn(diff, domain_schema);
      }
    }
  }
  if (out.n_turns == 0) return out;
  const auto n = static_cast<double>(out.n_turns);
  out.jga = jga / n;
  out.rsa = rsa / n;
  if (sa_complete) out.slot_acc = sa / n;
  return out;
}

// ---------------------------------------------------------------------------
// Metric correlation

enum class Metric { kJga, kSlotAcc, kRsa, kAga, kF1 };

inline constexpr std::array<Metric, 5> kAllMetrics = {
    Metric::kJga, Metric::kSlotAcc, Metric::kRsa, Metric::kAga, Metric::kF1};

inline std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kJga: return "jga";
    case Metric::kSlotAcc: return "slot_acc";
    case Metric::kRsa: return "rsa";
    case Metric::kAga: return "aga";
    case Metric::kF1: return "f1";
  }
  return "?";
}

inline Metric parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  throw ValidationError("unknown metric: '" + std::string(name) + "'");
}

inline std::optional<double> metric_value(const TurnMetrics& t, Metric m) {
  switch (m) {
    case Metric::kJga: return static_cast<double>(t.jga);
    case Metric::kSlotAcc: return t.slot_acc;
    case Metric::kRsa: return t.rsa;
    case Metric::kAga: return t.aga;
    case Metric::kF1: return t.f1;
  }
  return std::nullopt;
}

// Pearson coefficient of paired samples, or nullopt when fewer than two
// pairs remain or either side has zero variance.
inline std::optional<double> pearson(std::span<const double> x,
                                     std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return std::nullopt;
  // Test constancy directly; a centred sum of squares over equal values can
  // come out as a tiny positive number.
  auto constant = [n](std::span<const double> v) {
    return std::all_of(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n),
                       [&](double a) { return a == v[0]; });
  };
  if (constant(x) || constant(y)) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

struct CorrelationMatrix {
  std::vector<std::string> metric_names;
  // Row-major, dimension x dimension. NaN marks an undefined coefficient.
  std::vector<double> values;
  // Per metric: true when the metric has zero variance (or fewer than two
  // defined values) over the turns, which leaves its row and column undefined.
  std::vector<bool> degenerate;

  std::size_t dimension() const noexcept { return metric_names.size(); }
  double at(std::size_t i, std::size_t j) const {
    return values[i * dimension() + j];
  }
  bool defined(std::size_t i, std::size_t j) const {
    return !std::isnan(at(i, j));
  }
};

// Pairwise-complete Pearson correlation: for each pair, only turns where both
// metrics are defined (AGA needs non-empty gold) contribute.
inline CorrelationMatrix metric_correlation(std::span<const TurnRow> rows,
                                            std::span<const Metric> metrics) {
  if (rows.size() < 2) {
    throw ValidationError("correlation needs at least two turns");
  }
  if (metrics.empty()) throw ValidationError("no metrics requested");

  const std::size_t k = metrics.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CorrelationMatrix c;
  c.values.assign(k * k, nan);
  c.degenerate.assign(k, false);
  for (Metric m : metrics) c.metric_names.emplace_back(metric_name(m));

  std::vector<std::vector<std::optional<double>>> columns(k);
  for (std::size_t i = 0; i < k; ++i) {
    columns[i].reserve(rows.size());
    for (const auto& r : rows) columns[i].push_back(metric_value(r.metrics, metrics[i]));
  }

  auto paired = [&](std::size_t i, std::size_t j) {
    std::vector<double> x, y;
    for (std::size_t t = 0; t < rows.size(); ++t) {
      if (columns[i][t] && columns[j][t]) {
        x.push_back(*columns[i][t]);
        y.push_back(*columns[j][t]);
      }
    }
    return pearson(x, y);
  };

  for (std::size_t i = 0; i < k; ++i) {
    c.degenerate[i] = !paired(i, i).has_value();
    if (!c.degenerate[i]) c.values[i * k + i] = 1.0;
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (c.degenerate[i] || c.degenerate[j]) continue;
      if (auto r = paired(i, j)) {
        c.values[i * k + j] = *r;
        c.values[j * k + i] = *r;
      }
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Cross-model statistics

struct NamedSummary {
  std::string name;
  CorpusSummary summary;
};

struct ColumnStats {
  std::size_t n = 0;  // models contributing a value
  double mean = 0.0;
  double stddev = 0.0;  // population (divide by n)
  double min = 0.0;
  double max = 0.0;

  double spread() const noexcept { return max - min; }
};

inline std::optional<double> summary_value(const CorpusSummary& s, Metric m) {
  switch (m) {
    case Metric::kJga: return s.mean_jga;
    case Metric::kSlotAcc: return s.mean_slot_acc;
    case Metric::kRsa: return s.mean_rsa;
    case Metric::kAga: return s.mean_aga;
    case Metric::kF1: return s.mean_f1;
  }
  return std::nullopt;
}

struct ModelComparison {
  std::vector<NamedSummary> models;
  // Indexed like kAllMetrics; unset when no model reports the metric.
  std::array<std::optional<ColumnStats>, kAllMetrics.size()> stats;

  const std::optional<ColumnStats>& column(Metric m) const {
    return stats[static_cast<std::size_t>(m)];
  }
};

inline std::optional<ColumnStats> column_stats(std::span<const double> v) {
  if (v.empty()) return std::nullopt;
  ColumnStats s;
  s.n = v.size();
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(s.n);
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  s.min = *lo;
  s.max = *hi;
  // Rounding in the mean can step just outside [min, max] for equal values.
  s.mean = std::clamp(s.mean, s.min, s.max);
  double ss = 0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(s.n));
  return s;
}

inline ModelComparison cross_model_stats(std::span<const NamedSummary> models) {
  if (models.empty()) throw ValidationError("no model summaries to compare");
  ModelComparison out;
  out.models.assign(models.begin(), models.end());
  for (Metric m : kAllMetrics) {
    std::vector<double> column;
    for (const auto& model : models) {
      if (auto v = summary_value(model.summary, m)) column.push_back(*v);
    }
    out.stats[static_cast<std::size_t>(m)] = column_stats(column);
  }
  return out;
}

}  // namespace dsteval

#endif  // DSTEVAL_ANALYSIS_HPP_
