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

#ifndef DSTEVAL_INGEST_HPP_
#define DSTEVAL_INGEST_HPP_

// Reading and writing schemas and corpora.
//
// Schema file: a JSON array of {"domain": str, "slot": str} objects.
//
// Corpus file: UTF-8, one JSON object per line,
//
//   {"dialogue_id": str, "turn_index": int,
//    "predicted": [{"domain": str, "slot": str, "value": str}, ...],
//    "gold": [...]}
//
// Blank lines are ignored, as are unknown fields. Values go through
// normalize_value; entries whose value is an absent sentinel are dropped.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <iterator>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsteval/core.hpp"

namespace dsteval {

// Tag identifying the line format above; written into reports.
inline constexpr std::string_view kCorpusFormat = "dst-corpus-jsonl/1";

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return text;
}

inline void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("error while writing '" + path + "'");
}

namespace detail {

// Line (1-based) containing byte `offset` of `text`.
inline std::size_t line_of(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() +
                                              static_cast<std::ptrdiff_t>(offset),
                            '\n'));
}

inline const nlohmann::json& require_field(const nlohmann::json& obj,
                                           const char* name,
                                           const std::string& where) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw ValidationError(where + ": missing field \"" + name + "\"");
  }
  return *it;
}

inline const std::string& require_string(const nlohmann::json& obj,
                                         const char* name,
                                         const std::string& where) {
  const auto& v = require_field(obj, name, where);
  if (!v.is_string()) {
    throw ValidationError(where + ": field \"" + name + "\" must be a string");
  }
  return v.get_ref<const std::string&>();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Schema

inline SlotSchema parse_schema(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError("schema: " + std::string(e.what()),
                     detail::line_of(text, offset), offset);
  }
  if (!doc.is_array()) {
    throw ValidationError("schema: top level must be a JSON array");
  }
  std::vector<SlotRef> slots;
  std::set<SlotRef> seen;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string where = "schema entry " + std::to_string(i);
    if (!doc[i].is_object()) throw ValidationError(where + ": expected an object");
    SlotRef ref(detail::require_string(doc[i], "domain", where),
                detail::require_string(doc[i], "slot", where));
    if (!seen.insert(ref).second) {
      throw ValidationError("duplicate slot in schema: " + ref.str());
    }
    slots.push_back(std::move(ref));
  }
  return SlotSchema(std::move(slots));
}

inline SlotSchema load_schema(const std::string& path) {
  return parse_schema(read_file(path));
}

inline std::string serialize_schema(const SlotSchema& schema) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& s : schema.slots()) {
    doc.push_back({{"domain", s.domain()}, {"slot", s.slot()}});
  }
  return doc.dump(2) + "\n";
}

// The five-domain MultiWOZ 2.1 ontology (hotel, train, restaurant, attraction,
// taxi): 30 domain-slot pairs.
inline SlotSchema multiwoz21_schema() {
  static const char* const kSlots[][2] = {
      {"hotel", "pricerange"},      {"hotel", "type"},
      {"hotel", "parking"},         {"hotel", "book stay"},
      {"hotel", "book day"},        {"hotel", "book people"},
      {"hotel", "area"},            {"hotel", "stars"},
      {"hotel", "internet"},        {"hotel", "name"},
      {"train", "destination"},     {"train", "day"},
      {"train", "departure"},       {"train", "arriveby"},
      {"train", "book people"},     {"train", "leaveat"},
      {"attraction", "area"},       {"attraction", "name"},
      {"attraction", "type"},       {"restaurant", "food"},
      {"restaurant", "pricerange"}, {"restaurant", "area"},
      {"restaurant", "name"},       {"restaurant", "book time"},
      {"restaurant", "book day"},   {"restaurant", "book people"},
      {"taxi", "leaveat"},          {"taxi", "destination"},
      {"taxi", "departure"},        {"taxi", "arriveby"},
  };
  std::vector<SlotRef> slots;
  for (const auto& s : kSlots) slots.emplace_back(s[0], s[1]);
  return SlotSchema(std::move(slots));
}

// ---------------------------------------------------------------------------
// Corpus

struct CorpusOptions {
  // Abort on slots outside the schema. When false they are kept and SA is
  // reported as unavailable for the affected turns.
  bool strict = true;
};

namespace detail {

inline BeliefState parse_state(const nlohmann::json& line_doc, const char* field,
                               const SlotSchema& schema, bool strict,
                               const std::string& where) {
  const auto& arr = require_field(line_doc, field, where);
  if (!arr.is_array()) {
    throw ValidationError(where + ": \"" + field + "\" must be an array");
  }
  BeliefState state;
  std::set<SlotRef> seen;
  for (const auto& entry : arr) {
    if (!entry.is_object()) {
      throw ValidationError(where + ": \"" + field +
                            "\" entries must be objects");
    }
    SlotRef ref(require_string(entry, "domain", where),
                require_string(entry, "slot", where));
    const std::string& value = require_string(entry, "value", where);
    if (!seen.insert(ref).second) {
      throw ValidationError(where + ": slot '" + ref.str() +
                            "' appears twice in \"" + field + "\"");
    }
    if (strict && !schema.contains(ref)) {
      throw SchemaViolation(where + ": slot '" + ref.str() +
                            "' is not in the schema");
    }
    state.set(ref, value);
  }
  return state;
}

}  // namespace detail

// Parses corpus text into dialogues sorted by id, each with turns sorted by
// index. `source` names the input in diagnostics.
inline std::vector<Dialogue> parse_corpus(std::string_view text,
                                          const SlotSchema& schema,
                                          const CorpusOptions& options = {},
                                          const std::string& source = "corpus") {
  std::map<std::string, std::map<std::size_t, TurnRecord>> grouped;
  std::map<std::pair<std::string, std::size_t>, std::size_t> line_of_turn;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    ++line_no;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    const std::size_t line_start = pos;
    pos = end + 1;

    if (std::all_of(line.begin(), line.end(), detail::is_space)) continue;

    const std::string where = source + ":" + std::to_string(line_no);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      const std::size_t offset = line_start + (e.byte > 0 ? e.byte - 1 : 0);
      throw ParseError(where + ": " + e.what() + " (byte offset " +
                           std::to_string(offset) + ")",
                       line_no, offset);
    }

    TurnRecord rec;
    try {
      if (!doc.is_object()) throw ValidationError(where + ": expected an object");
      rec.dialogue_id = detail::require_string(doc, "dialogue_id", where);
      const auto& idx = detail::require_field(doc, "turn_index", where);
      if (!idx.is_number_integer() ||
          (!idx.is_number_unsigned() && idx.get<long long>() < 0)) {
        throw ValidationError(where +
                              ": \"turn_index\" must be a non-negative integer");
      }
      rec.turn_index = idx.get<std::size_t>();
      rec.predicted = detail::parse_state(doc, "predicted", schema,
                                          options.strict, where);
      rec.gold = detail::parse_state(doc, "gold", schema, options.strict, where);
    } catch (const SchemaViolation&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no, line_start);
    }

    const auto key = std::make_pair(rec.dialogue_id, rec.turn_index);
    if (auto it = line_of_turn.find(key); it != line_of_turn.end()) {
      throw ParseError(where + ": duplicate turn (dialogue '" + rec.dialogue_id +
                           "', turn_index " + std::to_string(rec.turn_index) +
                           ") first seen on line " + std::to_string(it->second),
                       line_no, line_start);
    }
    line_of_turn.emplace(key, line_no);
    auto& turns = grouped[rec.dialogue_id];
    turns.emplace(rec.turn_index, std::move(rec));
  }

  std::vector<Dialogue> out;
  out.reserve(grouped.size());
  for (auto& [id, turns] : grouped) {
    Dialogue d;
    d.dialogue_id = id;
    for (auto& [index, rec] : turns) d.turns.push_back(std::move(rec));
    try {
      d.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(source + ": " + e.what() +
                            " (turn indices must be consecutive from 0)");
    }
    out.push_back(std::move(d));
  }
  return out;
}

inline std::vector<Dialogue> load_corpus(const std::string& path,
                                         const SlotSchema& schema,
                                         const CorpusOptions& options = {}) {
  return parse_corpus(read_file(path), schema, options, path);
}

namespace detail {

inline nlohmann::ordered_json state_to_json(const BeliefState& state) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& [slot, value] : state) {
    arr.push_back(
        {{"domain", slot.domain()}, {"slot", slot.slot()}, {"value", value}});
  }
  return arr;
}

}  // namespace detail

// Canonical line for one turn: fields in the documented order, entries sorted
// by (domain, slot).
inline std::string serialize_turn(const TurnRecord& turn) {
  nlohmann::ordered_json doc;
  doc["dialogue_id"] = turn.dialogue_id;
  doc["turn_index"] = turn.turn_index;
  doc["predicted"] = detail::state_to_json(turn.predicted);
  doc["gold"] = detail::state_to_json(turn.gold);
  return doc.dump();
}

// Dialogues in id order, turns in index order.
inline void write_corpus(std::ostream& out, std::span<const Dialogue> dialogues) {
  std::vector<const Dialogue*> sorted;
  for (const auto& d : dialogues) sorted.push_back(&d);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Dialogue* a, const Dialogue* b) {
                     return a->dialogue_id < b->dialogue_id;
                   });
  for (const Dialogue* d : sorted) {
    for (const auto& turn : d->turns) out << serialize_turn(turn) << '\n';
  }
}

inline std::string serialize_corpus(std::span<const Dialogue> dialogues) {
  std::ostringstream out;
  write_corpus(out, dialogues);
  return out.str();
}

}  // namespace dsteval

#endif  // DSTEVAL_INGEST_HPP_
