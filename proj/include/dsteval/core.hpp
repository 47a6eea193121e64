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

#ifndef DSTEVAL_CORE_HPP_
#define DSTEVAL_CORE_HPP_

// Domain types for belief-state evaluation and the diff that every metric
// is computed from.
//
// A belief state is a set of domain-slot-value triples. States are stored in
// normalized form: values are lowercased, trimmed and whitespace-collapsed,
// and absent-value sentinels ("", "none", "not mentioned") never appear as
// stored values. "dontcare" is an ordinary value.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace dsteval {

// Errors. The CLI maps these onto exit codes: IoError -> 1,
// ParseError / ValidationError -> 2, SchemaViolation -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t byte_offset)
      : ValidationError(what), line_(line), byte_offset_(byte_offset) {}

  // 1-based line number and 0-based byte offset into the input.
  std::size_t line() const noexcept { return line_; }
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t line_;
  std::size_t byte_offset_;
};

class SchemaViolation : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

// Lowercase (ASCII), trim, and collapse internal whitespace runs to one space.
inline std::string canonical_token(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(ascii_lower(c));
  }
  return out;
}

// 64-bit FNV-1a. Used wherever a stable (platform-independent) hash is needed.
inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

// Returns the canonical form of a slot value, or nullopt when the value is
// one of the absent sentinels.
inline std::optional<std::string> normalize_value(std::string_view raw) {
  std::string v = detail::canonical_token(raw);
  if (v.empty() || v == "none" || v == "not mentioned") return std::nullopt;
  return v;
}

// A (domain, slot) pair such as ("restaurant", "book day").
class SlotRef {
 public:
  SlotRef() = default;

  // Normalizes both tokens; throws ValidationError if either ends up empty.
  SlotRef(std::string_view domain, std::string_view slot)
      : domain_(detail::canonical_token(domain)),
        slot_(detail::canonical_token(slot)) {
    if (domain_.empty() || slot_.empty()) {
      throw ValidationError("slot reference needs a non-empty domain and slot"
                            " (got '" + std::string(domain) + "', '" +
                            std::string(slot) + "')");
    }
  }

  const std::string& domain() const noexcept { return domain_; }
  const std::string& slot() const noexcept { return slot_; }

  // "domain-slot", the rendering used in tables and diagnostics.
  std::string str() const { return domain_ + "-" + slot_; }

  friend bool operator==(const SlotRef&, const SlotRef&) = default;
  friend auto operator<=>(const SlotRef&, const SlotRef&) = default;

 private:
  std::string domain_;
  std::string slot_;
};

// One turn's accumulated state: SlotRef -> normalized value.
class BeliefState {
 public:
  using Map = std::map<SlotRef, std::string>;
  using const_iterator = Map::const_iterator;

  struct Triple {
    std::string_view domain;
    std::string_view slot;
    std::string_view value;
  };

  BeliefState() = default;
  BeliefState(std::initializer_list<Triple> triples) {
    for (const auto& t : triples) set(SlotRef(t.domain, t.slot), t.value);
  }

  // Stores the normalized value, or erases the slot when the value is an
  // absent sentinel. Returns true if a value was stored.
  bool set(const SlotRef& slot, std::string_view raw_value) {
    auto v = normalize_value(raw_value);
    if (!v) {
      entries_.erase(slot);
      return false;
    }
    entries_.insert_or_assign(slot, std::move(*v));
    return true;
  }

  bool erase(const SlotRef& slot) { return entries_.erase(slot) > 0; }

  const std::string* find(const SlotRef& slot) const {
    auto it = entries_.find(slot);
    return it == entries_.end() ? nullptr : &it->second;
  }
  bool contains(const SlotRef& slot) const { return entries_.contains(slot); }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const_iterator begin() const noexcept { return entries_.begin(); }
  const_iterator end() const noexcept { return entries_.end(); }
  const Map& entries() const noexcept { return entries_; }

  // Entries whose domain equals `domain`.
  BeliefState restricted_to(std::string_view domain) const {
    BeliefState out;
    for (const auto& [slot, value] : entries_) {
      if (slot.domain() == domain) out.entries_.emplace(slot, value);
    }
    return out;
  }

  friend bool operator==(const BeliefState&, const BeliefState&) = default;

 private:
  Map entries_;
};

struct TurnRecord {
  std::string dialogue_id;
  std::size_t turn_index = 0;
  BeliefState predicted;
  BeliefState gold;

  friend bool operator==(const TurnRecord&, const TurnRecord&) = default;
};

struct Dialogue {
  std::string dialogue_id;
  std::vector<TurnRecord> turns;

  // Throws ValidationError unless turns is non-empty, every turn carries this
  // dialogue's id, and turn indices run 0..n-1 in order.
  void validate() const {
    if (turns.empty()) {
      throw ValidationError("dialogue '" + dialogue_id + "' has no turns");
    }
    for (std::size_t i = 0; i < turns.size(); ++i) {
      if (turns[i].dialogue_id != dialogue_id) {
        throw ValidationError("dialogue '" + dialogue_id +
                              "' contains a turn of dialogue '" +
                              turns[i].dialogue_id + "'");
      }
      if (turns[i].turn_index != i) {
        throw ValidationError("dialogue '" + dialogue_id +
                              "': expected turn_index " + std::to_string(i) +
                              ", found " + std::to_string(turns[i].turn_index));
      }
    }
  }

  friend bool operator==(const Dialogue&, const Dialogue&) = default;
};

// The predefined ontology. size() is the T of slot accuracy.
class SlotSchema {
 public:
  SlotSchema() = default;

  explicit SlotSchema(std::vector<SlotRef> slots) : slots_(std::move(slots)) {
    if (slots_.empty()) throw ValidationError("schema has no slots");
    std::sort(slots_.begin(), slots_.end());
    auto dup = std::adjacent_find(slots_.begin(), slots_.end());
    if (dup != slots_.end()) {
      throw ValidationError("duplicate slot in schema: " + dup->str());
    }
  }

  std::size_t size() const noexcept { return slots_.size(); }
  const std::vector<SlotRef>& slots() const noexcept { return slots_; }

  bool contains(const SlotRef& slot) const {
    return std::binary_search(slots_.begin(), slots_.end(), slot);
  }

  bool has_domain(std::string_view domain) const {
    return count_in_domain(domain) > 0;
  }

  std::size_t count_in_domain(std::string_view domain) const {
    return static_cast<std::size_t>(
        std::count_if(slots_.begin(), slots_.end(), [&](const SlotRef& s) {
          return s.domain() == domain;
        }));
  }

  // Sorted, unique.
  std::vector<std::string> domains() const {
    std::vector<std::string> out;
    for (const auto& s : slots_) {
      if (out.empty() || out.back() != s.domain()) out.push_back(s.domain());
    }
    return out;
  }

  // Stable content hash over the sorted slot list, rendered as 16 hex digits.
  // Two schemas with the same slots have the same fingerprint regardless of
  // file path or entry order.
  std::string fingerprint() const {
    std::uint64_t h = detail::fnv1a64("");
    for (const auto& s : slots_) {
      h = detail::fnv1a64(s.domain(), h);
      h = detail::fnv1a64("\x1f", h);
      h = detail::fnv1a64(s.slot(), h);
      h = detail::fnv1a64("\x1e", h);
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[i] = kHex[h & 0xf];
    return out;
  }

  friend bool operator==(const SlotSchema&, const SlotSchema&) = default;

 private:
  std::vector<SlotRef> slots_;
};

// The decomposition of a (predicted, gold) pair that every per-turn metric is
// computed from. All three slot lists are sorted and pairwise disjoint.
//
//   correct  gold slots predicted with the gold value
//   missed   gold slots absent from the prediction or predicted with another
//            value (M)
//   wrong    predicted slots that are not in gold (W)
//
// union_size is T*, the number of distinct slots across both states.
struct TurnDiff {
  std::vector<SlotRef> correct;
  std::vector<SlotRef> missed;
  std::vector<SlotRef> wrong;
  std::size_t union_size = 0;
  std::size_t predicted_size = 0;
  std::size_t gold_size = 0;

  std::size_t n_correct() const noexcept { return correct.size(); }
  std::size_t n_missed() const noexcept { return missed.size(); }
  std::size_t n_wrong() const noexcept { return wrong.size(); }

  bool exact_match() const noexcept { return missed.empty() && wrong.empty(); }

  friend bool operator==(const TurnDiff&, const TurnDiff&) = default;
};

// Merge-walk over both (sorted) states.
inline TurnDiff diff_states(const BeliefState& predicted,
                            const BeliefState& gold) {
  TurnDiff d;
  d.predicted_size = predicted.size();
  d.gold_size = gold.size();

  auto p = predicted.begin();
  auto g = gold.begin();
  while (p != predicted.end() || g != gold.end()) {
    if (g == gold.end() || (p != predicted.end() && p->first < g->first)) {
      d.wrong.push_back(p->first);
      ++p;
    } else if (p == predicted.end() || g->first < p->first) {
      d.missed.push_back(g->first);
      ++g;
    } else {
      (p->second == g->second ? d.correct : d.missed).push_back(g->first);
      ++p;
      ++g;
    }
    ++d.union_size;
  }
  return d;
}

}  // namespace dsteval

#endif  // DSTEVAL_CORE_HPP_
