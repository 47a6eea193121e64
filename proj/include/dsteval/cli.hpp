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

#ifndef DSTEVAL_CLI_HPP_
#define DSTEVAL_CLI_HPP_

// The evaluate / analyze / compare / synth / generate commands, independent
// of argument parsing so they can be driven from tests.
//
// Exit codes: 0 success, 1 I/O error, 2 parse or validation error,
// 3 schema violation (strict mode) or schema mismatch between reports.

#include <exception>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsteval/analysis.hpp"
#include "dsteval/core.hpp"
#include "dsteval/ingest.hpp"
#include "dsteval/metrics.hpp"
#include "dsteval/report.hpp"
#include "dsteval/synth.hpp"

namespace dsteval::cli {

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kInvalidInput = 2,
  kSchemaError = 3,
};

// Runs `fn`, translating library exceptions into an exit code and a one-line
// diagnostic on `err`.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const SchemaViolation& e) {
    err << "schema error: " << e.what() << '\n';
    return kSchemaError;
  } catch (const ParseError& e) {
    err << "parse error (line " << e.line() << "): " << e.what() << '\n';
    return kInvalidInput;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
  std::string corpus{};
  std::string schema{};
  std::string out{};              // summary JSON
  std::string per_turn{};         // optional CSV
  std::string per_domain{};       // optional CSV
  bool lenient = false;
  unsigned threads = 1;
};

inline int run_evaluate(const EvaluateOptions& o, std::ostream& out,
                        std::ostream& err) {
  return guarded(err, [&] {
    const SlotSchema schema = load_schema(o.schema);
    const auto dialogues = load_corpus(o.corpus, schema, {.strict = !o.lenient});
    const CorpusEvaluation eval =
        evaluate_corpus(dialogues, schema, {.strict = !o.lenient, .threads = o.threads});

    EvalReport report;
    report.schema = {o.schema, schema.size(), schema.fingerprint()};
    report.corpus = {o.corpus, dialogues.size(), eval.rows.size()};
    report.strict = !o.lenient;
    report.summary = eval.summary;
    if (!o.per_domain.empty()) {
      for (const auto& domain : schema.domains()) {
        report.per_domain.push_back(
            per_domain_metrics(dialogues, schema, domain, !o.lenient));
      }
      write_file(o.per_domain, domain_table_csv(report.per_domain));
    }
    if (!o.per_turn.empty()) write_file(o.per_turn, turn_table_csv(eval.rows));
    write_file(o.out, report_to_json(report));

    const NamedSummary row{std::filesystem::path(o.corpus).stem().string(),
                           eval.summary};
    out << render_grid(std::span(&row, 1));
    if (!eval.summary.mean_slot_acc) {
      out << "slot_acc unavailable: corpus uses slots outside the schema\n";
    }
    out << "aga defined on " << eval.summary.n_aga_turns << " of "
        << eval.summary.n_turns << " turns\n";
    return kOk;
  });
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOptions {
  std::string which{};     // positions | slot-usage | correlation | per-domain
  std::string corpus{};    // corpus input (needs schema)
  std::string schema{};
  std::string per_turn{};  // alternative input for positions / correlation
  std::string out{};
  std::string detail_out{};  // optional per-dialogue table
  bool lenient = false;
  double bin_width = 0.1;
  std::vector<std::string> metrics = {"jga", "slot_acc", "rsa", "aga", "f1"};
  std::vector<std::string> domains{};  // per-domain: default all schema domains
};

namespace detail {

inline std::vector<TurnRow> turn_rows_for(const AnalyzeOptions& o) {
  if (!o.per_turn.empty()) {
    return parse_turn_table_csv(read_file(o.per_turn), o.per_turn);
  }
  if (o.corpus.empty() || o.schema.empty()) {
    throw ValidationError("analyze needs --corpus and --schema, or --per-turn");
  }
  const SlotSchema schema = load_schema(o.schema);
  const auto dialogues = load_corpus(o.corpus, schema, {.strict = !o.lenient});
  return evaluate_corpus(dialogues, schema, {.strict = !o.lenient}).rows;
}

}  // namespace detail

inline int run_analyze(const AnalyzeOptions& o, std::ostream& out,
                       std::ostream& err) {
  return guarded(err, [&] {
    if (o.which == "positions") {
      const auto rows = detail::turn_rows_for(o);
      const auto positions = dialogue_positions(rows);
      const PositionHistogram h = position_histogram(positions, o.bin_width);
      write_file(o.out, histogram_csv(h));
      if (!o.detail_out.empty()) write_file(o.detail_out, positions_csv(positions));
      nlohmann::ordered_json j;
      j["considered"] = h.n_dialogues_considered;
      j["excluded"] = h.n_dialogues_skipped;
      out << j.dump() << '\n';
      return kOk;
    }
    if (o.which == "correlation") {
      const auto rows = detail::turn_rows_for(o);
      std::vector<Metric> metrics;
      for (const auto& name : o.metrics) metrics.push_back(parse_metric(name));
      const CorrelationMatrix c = metric_correlation(rows, metrics);
      write_file(o.out, correlation_csv(c));
      for (std::size_t i = 0; i < c.dimension(); ++i) {
        if (c.degenerate[i]) {
          out << "warning: " << c.metric_names[i]
              << " has zero variance; its correlations are undefined\n";
        }
      }
      return kOk;
    }
    if (o.which != "slot-usage" && o.which != "per-domain") {
      throw ValidationError("unknown analysis '" + o.which + "'");
    }
    if (o.corpus.empty() || o.schema.empty()) {
      throw ValidationError(o.which + " needs --corpus and --schema");
    }
    const SlotSchema schema = load_schema(o.schema);
    const auto dialogues = load_corpus(o.corpus, schema, {.strict = !o.lenient});
    if (o.which == "slot-usage") {
      std::string freq = "n_gold_slots,n_dialogues\n";
      for (const auto& [n_slots, n] : slot_usage_frequency(dialogues)) {
        freq += std::to_string(n_slots) + ',' + std::to_string(n) + '\n';
      }
      write_file(o.out, freq);
      if (!o.detail_out.empty()) {
        std::string per = "dialogue_id,n_gold_slots\n";
        for (const auto& d : dialogues) {
          per += dsteval::detail::csv_escape(d.dialogue_id) + ',' +
                 std::to_string(slot_usage_per_dialogue(d)) + '\n';
        }
        write_file(o.detail_out, per);
      }
      return kOk;
    }
    std::vector<DomainMetrics> table;
    for (const auto& domain : o.domains.empty() ? schema.domains() : o.domains) {
      table.push_back(per_domain_metrics(dialogues, schema, domain, !o.lenient));
    }
    write_file(o.out, domain_table_csv(table));
    return kOk;
  });
}

// ---------------------------------------------------------------------------
// compare

struct CompareOptions {
  std::vector<std::string> reports{};
  std::string out{};
};

inline int run_compare(const CompareOptions& o, std::ostream& out,
                       std::ostream& err) {
  return guarded(err, [&] {
    if (o.reports.empty()) throw ValidationError("compare needs at least one report");
    std::vector<NamedSummary> models;
    std::optional<SchemaIdentity> identity;
    for (const auto& path : o.reports) {
      const EvalReport r = report_from_json(read_file(path), path);
      if (identity && !identity->same_ontology(r.schema)) {
        throw SchemaViolation("report '" + path + "' was evaluated against a "
                              "different schema (T=" + std::to_string(r.schema.size) +
                              ", " + r.schema.fingerprint + ") than '" +
                              o.reports.front() + "' (T=" +
                              std::to_string(identity->size) + ", " +
                              identity->fingerprint + ")");
      }
      identity = r.schema;
      models.push_back({std::filesystem::path(path).stem().string(), r.summary});
    }
    const ModelComparison cmp = cross_model_stats(models);
    write_file(o.out, comparison_csv(cmp));
    out << render_grid(cmp.models, &cmp);
    return kOk;
  });
}

// ---------------------------------------------------------------------------
// synth / generate

struct SynthOptions {
  std::string gold{};
  std::string schema{};
  std::string out{};
  PerturbationSpec spec{};
};

inline int run_synth(const SynthOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    o.spec.validate();
    const SlotSchema schema = load_schema(o.schema);
    const auto gold = load_corpus(o.gold, schema);
    const auto synthetic = perturb(gold, schema, o.spec);
    write_file(o.out, serialize_corpus(synthetic));
    nlohmann::ordered_json j;
    j["seed"] = o.spec.seed;
    j["p_miss"] = o.spec.p_miss;
    j["p_wrong_value"] = o.spec.p_wrong_value;
    j["p_hallucinate"] = o.spec.p_hallucinate;
    j["gold"] = o.gold;
    j["schema"] = o.schema;
    j["out"] = o.out;
    out << j.dump() << '\n';
    return kOk;
  });
}

struct GenerateOptions {
  std::string schema{};
  std::string out{};
  GoldCorpusSpec spec{};
};

inline int run_generate(const GenerateOptions& o, std::ostream& out,
                        std::ostream& err) {
  return guarded(err, [&] {
    const SlotSchema schema = load_schema(o.schema);
    const auto corpus = generate_gold_corpus(schema, o.spec);
    write_file(o.out, serialize_corpus(corpus));
    std::size_t turns = 0;
    for (const auto& d : corpus) turns += d.turns.size();
    out << "wrote " << corpus.size() << " dialogues, " << turns << " turns to "
        << o.out << '\n';
    return kOk;
  });
}

}  // namespace dsteval::cli

#endif  // DSTEVAL_CLI_HPP_
