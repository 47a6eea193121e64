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

// dsteval: belief-state evaluation from the command line.
//
//   dsteval evaluate --corpus C --schema S --out report.json
//            [--per-turn turns.csv] [--per-domain domains.csv] [--lenient]
//   dsteval analyze --which {positions|slot-usage|correlation|per-domain}
//            (--corpus C --schema S | --per-turn turns.csv) --out OUT
//   dsteval compare R1.json R2.json ... --out grid.csv
//   dsteval synth --gold G --schema S --seed N --p-miss X --p-wrong Y
//            --p-halluc Z --out OUT
//   dsteval generate --schema S --seed N --dialogues N --out OUT

#include <iostream>

#include "CLI11.hpp"
#include "dsteval/cli.hpp"

int main(int argc, char** argv) {
  using namespace dsteval;

  CLI::App app{"Belief-state evaluation for dialogue state tracking"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  cli::EvaluateOptions eval;
  auto* evaluate = app.add_subcommand("evaluate", "Score a corpus and write reports");
  evaluate->add_option("--corpus", eval.corpus, "Corpus (JSON lines)")->required();
  evaluate->add_option("--schema", eval.schema, "Schema (JSON array)")->required();
  evaluate->add_option("--out", eval.out, "Summary report (JSON)")->required();
  evaluate->add_option("--per-turn", eval.per_turn, "Per-turn metrics (CSV)");
  evaluate->add_option("--per-domain", eval.per_domain, "Per-domain metrics (CSV)");
  evaluate->add_flag("--lenient", eval.lenient,
                     "Keep out-of-schema slots; slot accuracy becomes unavailable");
  evaluate->add_option("--threads", eval.threads, "Scoring threads")
      ->check(CLI::Range(1u, 256u));

  cli::AnalyzeOptions an;
  auto* analyze = app.add_subcommand("analyze", "Corpus diagnostics");
  analyze->add_option("--which", an.which, "Analysis to run")
      ->required()
      ->check(CLI::IsMember({"positions", "slot-usage", "correlation", "per-domain"}));
  analyze->add_option("--corpus", an.corpus, "Corpus (JSON lines)");
  analyze->add_option("--schema", an.schema, "Schema (JSON array)");
  analyze->add_option("--per-turn", an.per_turn,
                      "Per-turn CSV from evaluate (positions, correlation)");
  analyze->add_option("--out", an.out, "Output CSV")->required();
  analyze->add_option("--detail-out", an.detail_out,
                      "Per-dialogue CSV (positions, slot-usage)");
  analyze->add_flag("--lenient", an.lenient, "Keep out-of-schema slots");
  analyze->add_option("--bin-width", an.bin_width, "Histogram bin width (positions)");
  analyze->add_option("--metrics", an.metrics, "Metrics to correlate")->delimiter(',');
  analyze->add_option("--domain", an.domains, "Domains for per-domain (repeatable)");

  cli::CompareOptions cmp;
  auto* compare = app.add_subcommand("compare", "Cross-model grid with mean/std");
  compare->add_option("reports", cmp.reports, "Summary reports from evaluate")
      ->required();
  compare->add_option("--out", cmp.out, "Output CSV")->required();

  cli::SynthOptions syn;
  auto* synth = app.add_subcommand("synth", "Perturb gold states into predictions");
  synth->add_option("--gold", syn.gold, "Gold corpus (JSON lines)")->required();
  synth->add_option("--schema", syn.schema, "Schema (JSON array)")->required();
  synth->add_option("--seed", syn.spec.seed, "Random seed")->required();
  synth->add_option("--p-miss", syn.spec.p_miss, "Drop probability per gold slot");
  synth->add_option("--p-wrong", syn.spec.p_wrong_value,
                    "Value-corruption probability per kept slot");
  synth->add_option("--p-halluc", syn.spec.p_hallucinate,
                    "Mean extra slots per turn");
  synth->add_option("--out", syn.out, "Output corpus")->required();

  cli::GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic gold corpus");
  generate->add_option("--schema", gen.schema, "Schema (JSON array)")->required();
  generate->add_option("--seed", gen.spec.seed, "Random seed");
  generate->add_option("--dialogues", gen.spec.n_dialogues, "Number of dialogues");
  generate->add_option("--min-turns", gen.spec.min_turns, "Shortest dialogue");
  generate->add_option("--max-turns", gen.spec.max_turns, "Longest dialogue");
  generate->add_option("--max-domains", gen.spec.max_domains, "Domains per dialogue");
  generate->add_option("--p-new-slot", gen.spec.p_new_slot,
                       "Chance a turn adds a gold slot");
  generate->add_option("--out", gen.out, "Output corpus")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kInvalidInput;
  }

  if (*evaluate) return cli::run_evaluate(eval, std::cout, std::cerr);
  if (*analyze) return cli::run_analyze(an, std::cout, std::cerr);
  if (*compare) return cli::run_compare(cmp, std::cout, std::cerr);
  if (*synth) return cli::run_synth(syn, std::cout, std::cerr);
  if (*generate) return cli::run_generate(gen, std::cout, std::cerr);
  return cli::kInvalidInput;
}
