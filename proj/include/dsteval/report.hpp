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

#ifndef DSTEVAL_REPORT_HPP_
#define DSTEVAL_REPORT_HPP_

// Report files: summary JSON, per-turn / per-domain / comparison CSVs and
// fixed-width text tables.
//
// Machine formats carry full precision (shortest round-trip decimal); human
// tables use 4 decimals. Undefined values are `null` in JSON and an empty
// cell in CSV.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <iomanip>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsteval/analysis.hpp"
#include "dsteval/core.hpp"
#include "dsteval/ingest.hpp"
#include "dsteval/metrics.hpp"

namespace dsteval {

inline constexpr std::string_view kToolName = "dsteval";
inline constexpr std::string_view kToolVersion = "1.0.0";

// Shortest decimal that round-trips to the same double.
inline std::string format_full(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline std::string format_fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

inline std::string format_cell(const std::optional<double>& v) {
  return v ? format_full(*v) : std::string();
}

namespace detail {

inline nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

inline std::optional<double> optional_from_json(const nlohmann::json& v) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw ValidationError("expected a number or null");
  return v.get<double>();
}

// Splits one CSV line. Fields never contain commas or quotes in the formats
// written here, apart from dialogue ids, which are quoted when needed.
inline std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back().push_back(c);
    }
  }
  return out;
}

inline std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Evaluation report (summary JSON)

struct SchemaIdentity {
  std::string path;
  std::size_t size = 0;
  std::string fingerprint;

  // Path is informational; two reports are comparable when the slot sets
  // agree.
  bool same_ontology(const SchemaIdentity& o) const {
    return size == o.size && fingerprint == o.fingerprint;
  }
};

struct CorpusIdentity {
  std::string path;
  std::size_t n_dialogues = 0;
  std::size_t n_turns = 0;
};

struct EvalReport {
  std::string tool_version = std::string(kToolVersion);
  SchemaIdentity schema;
  CorpusIdentity corpus;
  bool strict = true;
  CorpusSummary summary;
  std::vector<DomainMetrics> per_domain;  // empty unless requested
};

inline nlohmann::ordered_json summary_to_json(const CorpusSummary& s) {
  nlohmann::ordered_json j;
  j["n_turns"] = s.n_turns;
  j["n_aga_turns"] = s.n_aga_turns;
  j["mean_jga"] = s.mean_jga;
  j["mean_slot_acc"] = detail::optional_json(s.mean_slot_acc);
  j["mean_rsa"] = s.mean_rsa;
  j["mean_aga"] = detail::optional_json(s.mean_aga);
  j["mean_f1"] = s.mean_f1;
  return j;
}

inline CorpusSummary summary_from_json(const nlohmann::json& j) {
  CorpusSummary s;
  s.n_turns = j.at("n_turns").get<std::size_t>();
  s.n_aga_turns = j.at("n_aga_turns").get<std::size_t>();
  s.mean_jga = j.at("mean_jga").get<double>();
  s.mean_slot_acc = detail::optional_from_json(j.at("mean_slot_acc"));
  s.mean_rsa = j.at("mean_rsa").get<double>();
  s.mean_aga = detail::optional_from_json(j.at("mean_aga"));
  s.mean_f1 = j.at("mean_f1").get<double>();
  return s;
}

inline std::string report_to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = r.tool_version;
  j["schema"] = {{"path", r.schema.path},
                 {"size", r.schema.size},
                 {"fingerprint", r.schema.fingerprint}};
  j["corpus"] = {{"path", r.corpus.path},
                 {"format", kCorpusFormat},
                 {"n_dialogues", r.corpus.n_dialogues},
                 {"n_turns", r.corpus.n_turns}};
  j["mode"] = r.strict ? "strict" : "lenient";
  j["summary"] = summary_to_json(r.summary);
  if (!r.per_domain.empty()) {
    auto& arr = j["per_domain"] = nlohmann::ordered_json::array();
    for (const auto& d : r.per_domain) {
      arr.push_back({{"domain", d.domain},
                     {"n_turns", d.n_turns},
                     {"jga", detail::optional_json(d.jga)},
                     {"slot_acc", detail::optional_json(d.slot_acc)},
                     {"rsa", detail::optional_json(d.rsa)}});
    }
  }
  return j.dump(2) + "\n";
}

inline EvalReport report_from_json(std::string_view text,
                                   const std::string& source = "report") {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    EvalReport r;
    r.tool_version = j.at("version").get<std::string>();
    r.schema.path = j.at("schema").at("path").get<std::string>();
    r.schema.size = j.at("schema").at("size").get<std::size_t>();
    r.schema.fingerprint = j.at("schema").at("fingerprint").get<std::string>();
    r.corpus.path = j.at("corpus").at("path").get<std::string>();
    r.corpus.n_dialogues = j.at("corpus").at("n_dialogues").get<std::size_t>();
    r.corpus.n_turns = j.at("corpus").at("n_turns").get<std::size_t>();
    r.strict = j.at("mode").get<std::string>() != "lenient";
    r.summary = summary_from_json(j.at("summary"));
    if (auto it = j.find("per_domain"); it != j.end()) {
      for (const auto& d : *it) {
        DomainMetrics m;
        m.domain = d.at("domain").get<std::string>();
        m.n_turns = d.at("n_turns").get<std::size_t>();
        m.jga = detail::optional_from_json(d.at("jga"));
        m.slot_acc = detail::optional_from_json(d.at("slot_acc"));
        m.rsa = detail::optional_from_json(d.at("rsa"));
        r.per_domain.push_back(std::move(m));
      }
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(source + ": malformed report: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Per-turn table

inline constexpr std::string_view kTurnCsvHeader =
    "dialogue_id,turn_index,jga,slot_acc,rsa,aga,f1,t_star,n_missed,n_wrong";

inline std::string turn_table_csv(std::span<const TurnRow> rows) {
  std::string out(kTurnCsvHeader);
  out.push_back('\n');
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    out += detail::csv_escape(r.dialogue_id) + ',' +
           std::to_string(r.turn_index) + ',' + std::to_string(m.jga) + ',' +
           format_cell(m.slot_acc) + ',' + format_full(m.rsa) + ',' +
           format_cell(m.aga) + ',' + format_full(m.f1) + ',' +
           std::to_string(m.t_star) + ',' + std::to_string(m.n_missed) + ',' +
           std::to_string(m.n_wrong) + '\n';
  }
  return out;
}

// Reads a table written by turn_table_csv. Columns are located by header
// name, so extra columns are tolerated.
inline std::vector<TurnRow> parse_turn_table_csv(std::string_view text,
                                                 const std::string& source = "per-turn table") {
  std::vector<TurnRow> rows;
  std::map<std::string, std::size_t> col;
  std::size_t line_no = 0, pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    ++line_no;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    const std::size_t line_start = pos;
    pos = end + 1;
    if (line.empty() || line == "\r") continue;

    const auto cells = detail::split_csv(line);
    if (!header_seen) {
      for (std::size_t i = 0; i < cells.size(); ++i) col[cells[i]] = i;
      for (const char* need : {"dialogue_id", "turn_index", "jga", "slot_acc",
                               "rsa", "aga", "f1"}) {
        if (!col.contains(need)) {
          throw ParseError(source + ": header lacks column '" + need + "'",
                           line_no, line_start);
        }
      }
      header_seen = true;
      continue;
    }
    auto cell = [&](const char* name) -> const std::string& {
      const std::size_t i = col.at(name);
      if (i >= cells.size()) {
        throw ParseError(source + ":" + std::to_string(line_no) +
                             ": missing column '" + name + "'",
                         line_no, line_start);
      }
      return cells[i];
    };
    auto number = [&](const char* name) {
      const std::string& s = cell(name);
      double v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size()) {
        throw ParseError(source + ":" + std::to_string(line_no) + ": bad " +
                             name + " value '" + s + "'",
                         line_no, line_start);
      }
      return v;
    };
    auto optional_number = [&](const char* name) -> std::optional<double> {
      if (cell(name).empty()) return std::nullopt;
      return number(name);
    };
    auto count = [&](const char* name) -> std::size_t {
      if (!col.contains(name)) return 0;
      return static_cast<std::size_t>(number(name));
    };

    TurnRow r;
    r.dialogue_id = cell("dialogue_id");
    r.turn_index = static_cast<std::size_t>(number("turn_index"));
    r.metrics.jga = static_cast<int>(number("jga"));
    r.metrics.slot_acc = optional_number("slot_acc");
    r.metrics.rsa = number("rsa");
    r.metrics.aga = optional_number("aga");
    r.metrics.f1 = number("f1");
    r.metrics.t_star = count("t_star");
    r.metrics.n_missed = count("n_missed");
    r.metrics.n_wrong = count("n_wrong");
    rows.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError(source + ": empty table", 1, 0);
  std::stable_sort(rows.begin(), rows.end(), [](const TurnRow& a, const TurnRow& b) {
    return std::tie(a.dialogue_id, a.turn_index) <
           std::tie(b.dialogue_id, b.turn_index);
  });
  return rows;
}

// ---------------------------------------------------------------------------
// Analysis tables

inline std::string domain_table_csv(std::span<const DomainMetrics> domains) {
  std::string out = "domain,n_turns,jga,slot_acc,rsa\n";
  for (const auto& d : domains) {
    out += d.domain + ',' + std::to_string(d.n_turns) + ',' + format_cell(d.jga) +
           ',' + format_cell(d.slot_acc) + ',' + format_cell(d.rsa) + '\n';
  }
  return out;
}

inline std::string histogram_csv(const PositionHistogram& h) {
  std::string out = "bin_start,bin_end,count\n";
  for (std::size_t k = 0; k < h.bins(); ++k) {
    out += format_full(h.bin_start(k)) + ',' + format_full(h.bin_end(k)) + ',' +
           std::to_string(h.counts[k]) + '\n';
  }
  return out;
}

inline std::string positions_csv(std::span<const DialoguePosition> positions) {
  std::string out = "dialogue_id,n_turns,first_zero_index,position\n";
  for (const auto& p : positions) {
    out += detail::csv_escape(p.dialogue_id) + ',' + std::to_string(p.n_turns) +
           ',' +
           (p.first_zero_index ? std::to_string(*p.first_zero_index) : "") +
           ',' + format_cell(p.position) + '\n';
  }
  return out;
}

inline std::string correlation_csv(const CorrelationMatrix& c) {
  std::string out = "metric";
  for (const auto& n : c.metric_names) out += ',' + n;
  out.push_back('\n');
  for (std::size_t i = 0; i < c.dimension(); ++i) {
    out += c.metric_names[i];
    for (std::size_t j = 0; j < c.dimension(); ++j) {
      out += ',';
      if (c.defined(i, j)) out += format_full(c.at(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

// ---------------------------------------------------------------------------
// Model grids

// Column order follows the usual results-table layout.
inline constexpr std::array<Metric, 5> kGridMetrics = {
    Metric::kJga, Metric::kSlotAcc, Metric::kF1, Metric::kRsa, Metric::kAga};

inline std::string comparison_csv(const ModelComparison& cmp) {
  std::string out = "model";
  for (Metric m : kGridMetrics) out += ',' + std::string(metric_name(m));
  out.push_back('\n');
  for (const auto& model : cmp.models) {
    out += detail::csv_escape(model.name);
    for (Metric m : kGridMetrics) {
      out += ',' + format_cell(summary_value(model.summary, m));
    }
    out.push_back('\n');
  }
  for (const char* row : {"mean", "std"}) {
    out += row;
    for (Metric m : kGridMetrics) {
      out += ',';
      if (const auto& s = cmp.column(m)) {
        out += format_full(std::string_view(row) == "mean" ? s->mean : s->stddev);
      }
    }
    out.push_back('\n');
  }
  return out;
}

// Fixed-width table, 4 decimals. Undefined cells print as "-".
inline std::string render_grid(std::span<const NamedSummary> models,
                               const ModelComparison* footer = nullptr) {
  std::size_t name_w = 5;
  for (const auto& m : models) name_w = std::max(name_w, m.name.size());
  std::ostringstream out;
  auto cell = [&](const std::optional<double>& v) {
    out << std::setw(10) << (v ? format_fixed4(*v) : std::string("-"));
  };
  out << std::left << std::setw(static_cast<int>(name_w)) << "model" << std::right;
  for (Metric m : kGridMetrics) out << std::setw(10) << metric_name(m);
  out << std::setw(8) << "turns" << '\n';
  for (const auto& m : models) {
    out << std::left << std::setw(static_cast<int>(name_w)) << m.name << std::right;
    for (Metric metric : kGridMetrics) cell(summary_value(m.summary, metric));
    out << std::setw(8) << m.summary.n_turns << '\n';
  }
  if (footer != nullptr) {
    for (const char* row : {"mean", "std"}) {
      out << std::left << std::setw(static_cast<int>(name_w)) << row << std::right;
      for (Metric metric : kGridMetrics) {
        const auto& s = footer->column(metric);
        if (!s) {
          cell(std::nullopt);
        } else {
          cell(std::string_view(row) == "mean" ? s->mean : s->stddev);
        }
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace dsteval

#endif  // DSTEVAL_REPORT_HPP_
