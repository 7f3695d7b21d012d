// Copyright 2026 The chq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "chq/errors.hpp"
#include "chq/rational.hpp"
#include "chq/state_space.hpp"
#include "chq/subset.hpp"

namespace chq {

/// A capacity: a set function on the full subset lattice of a finite state
/// space with value 0 at the empty set, 1 at the full set, and monotone along
/// inclusion. Stored as a dense table indexed by subset mask.
class Capacity {
 public:
  const StateSpace& space() const { return space_; }
  const Rational& value(Mask subset) const { return values_[subset]; }
  const std::vector<Rational>& values() const { return values_; }

  friend Capacity make_capacity(StateSpace space, std::vector<Rational> values);

 private:
  Capacity(StateSpace space, std::vector<Rational> values)
      : space_(std::move(space)), values_(std::move(values)) {}

  StateSpace space_;
  std::vector<Rational> values_;  // index = subset mask
};

/// Validates normalization and monotonicity and returns the capacity.
/// Monotonicity is checked on covering pairs (S, S+{t}), which spans the
/// whole lattice; a violation reports such a witness pair.
inline Capacity make_capacity(StateSpace space, std::vector<Rational> values) {
  if (values.size() != space.subset_count())
    throw MissingSubset("capacity table has " + std::to_string(values.size()) +
                        " entries, expected " + std::to_string(space.subset_count()));
  if (values[0] != 0)
    throw NormalizationViolation("capacity of the empty set is " + format_rational(values[0]) +
                                 ", expected 0");
  const Mask full = space.full_mask();
  for (Mask s = 0; s <= full; ++s) {
    for (int t = 0; t < static_cast<int>(space.size()); ++t) {
      const Mask bit = Mask{1} << t;
      if (s & bit) continue;
      const Mask sup = s | bit;
      if (values[s] > values[sup])
        throw MonotonicityViolation("capacity decreases from " + space.subset_label(s) + " (" +
                                        format_rational(values[s]) + ") to " +
                                        space.subset_label(sup) + " (" +
                                        format_rational(values[sup]) + ")",
                                    s, sup);
    }
  }
  if (values[full] != 1)
    throw NormalizationViolation("capacity of the full set is " +
                                 format_rational(values[full]) + ", expected 1");
  return Capacity(std::move(space), std::move(values));
}

/// Convenience constructor from subset labels, e.g. {{"{}", 0}, {"{l}", r}, ...}.
inline Capacity make_capacity(const StateSpace& space,
                              const std::vector<std::pair<std::string, Rational>>& entries) {
  std::vector<Rational> values(space.subset_count());
  std::vector<bool> seen(space.subset_count(), false);
  for (const auto& [label, v] : entries) {
    const Mask m = space.parse_subset(label);
    if (seen[m]) throw MissingSubset("subset " + label + " listed twice");
    seen[m] = true;
    values[m] = v;
  }
  for (Mask m = 0; m < space.subset_count(); ++m)
    if (!seen[m]) throw MissingSubset("subset " + space.subset_label(m) + " missing");
  return make_capacity(space, std::move(values));
}

/// The Choquet integral of an act. States with equal payoff are merged into
/// one level cell, then the sum runs over the distinct values in strictly
/// decreasing order with weights given by consecutive cumulative-set values.
inline Rational choquet_integral(const Capacity& cap, const SimpleAct& act) {
  require_same_space(cap.space(), act.space(), "choquet_integral");
  // Distinct payoff values, descending, with the mask of states attaining each.
  std::map<Rational, Mask, std::greater<Rational>> levels;
  for (std::size_t s = 0; s < act.space().size(); ++s)
    levels[act.payoff(static_cast<int>(s))] |= Mask{1} << s;
  Rational total = 0;
  Mask cumulative = 0;
  Rational previous = 0;  // capacity of the cumulative set so far
  for (const auto& [value, mask] : levels) {
    cumulative |= mask;
    const Rational& current = cap.value(cumulative);
    total += value * (current - previous);
    previous = current;
  }
  return total;
}

/// Whether the event is believed: the capacity of (complement ∪ F) equals the
/// capacity of F for every F inside the event. Believed events have capacity 1
/// and their complements are null for every act comparison.
inline bool is_believed(const Capacity& cap, const EventSet& event) {
  require_same_space(cap.space(), event.space(), "is_believed");
  const Mask comp = event.complement();
  bool ok = true;
  for_each_submask(event.mask(), [&](Mask f) {
    if (cap.value(comp | f) != cap.value(f)) ok = false;
  });
  return ok;
}

/// Whether the capacity is additively separable across the event: every F
/// splits exactly into its parts inside and outside the event.
inline bool is_unambiguous(const Capacity& cap, const EventSet& event) {
  require_same_space(cap.space(), event.space(), "is_unambiguous");
  const Mask e = event.mask();
  const Mask full = cap.space().full_mask();
  for (Mask f = 0; f <= full; ++f)
    if (cap.value(f) != cap.value(f & e) + cap.value(f & ~e & full)) return false;
  return true;
}

/// Ambiguity-attitude classification of a capacity.
struct AttitudeClass {
  bool convex = false;   // supermodular
  bool concave = false;  // submodular
  bool additive() const { return convex && concave; }

  enum class Tag { Additive, Convex, Concave, Neither };
  Tag tag() const {
    if (additive()) return Tag::Additive;
    if (convex) return Tag::Convex;
    if (concave) return Tag::Concave;
    return Tag::Neither;
  }

  std::string to_string() const {
    switch (tag()) {
      case Tag::Additive: return "additive";
      case Tag::Convex: return "convex";
      case Tag::Concave: return "concave";
      case Tag::Neither: return "neither";
    }
    return "?";
  }
};

/// Checks the pairwise modularity inequalities over all subset pairs.
/// Additive capacities report as both convex and concave.
inline AttitudeClass classify_attitude(const Capacity& cap) {
  const Mask full = cap.space().full_mask();
  AttitudeClass out;
  out.convex = true;
  out.concave = true;
  for (Mask e = 0; e <= full; ++e) {
    for (Mask f = e; f <= full; ++f) {
      const Rational lhs = cap.value(e) + cap.value(f);
      const Rational rhs = cap.value(e | f) + cap.value(e & f);
      if (lhs > rhs) out.convex = false;
      if (lhs < rhs) out.concave = false;
      if (!out.convex && !out.concave) return out;
    }
  }
  return out;
}

/// Some disjoint pair (E, F) with value(E) + value(F) != value(E ∪ F), or
/// nothing if the capacity is additive. Pairs are scanned in canonical order.
inline std::optional<std::pair<EventSet, EventSet>> nonadditivity_witness(const Capacity& cap) {
  const Mask full = cap.space().full_mask();
  for (Mask e = 1; e <= full; ++e) {
    for (Mask f = e + 1; f <= full; ++f) {
      if (e & f) continue;
      if (cap.value(e) + cap.value(f) != cap.value(e | f))
        return std::make_pair(EventSet(cap.space(), e), EventSet(cap.space(), f));
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Capacity text format: one record per subset, "{labels}: p/q", subsets in
// canonical order. The parser rejects missing and duplicate subsets.
// ---------------------------------------------------------------------------

inline std::string format_capacity(const Capacity& cap) {
  std::ostringstream out;
  for (Mask m = 0; m < cap.space().subset_count(); ++m)
    out << cap.space().subset_label(m) << ": " << format_rational(cap.value(m)) << "\n";
  return out.str();
}

namespace detail {

inline std::pair<std::string, Rational> split_capacity_record(const std::string& line) {
  const std::size_t colon = line.rfind(':');
  if (colon == std::string::npos) throw ParseError("capacity record needs ':': '" + line + "'");
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t");
    const auto b = s.find_last_not_of(" \t");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  return {trim(line.substr(0, colon)), parse_rational(trim(line.substr(colon + 1)))};
}

}  // namespace detail

/// Parses capacity records over a known state space. Every subset must appear
/// exactly once, in canonical order.
inline Capacity parse_capacity(const StateSpace& space, const std::vector<std::string>& lines) {
  if (lines.size() != space.subset_count())
    throw MissingSubset("expected " + std::to_string(space.subset_count()) +
                        " capacity records, got " + std::to_string(lines.size()));
  std::vector<Rational> values(space.subset_count());
  for (Mask m = 0; m < space.subset_count(); ++m) {
    auto [label, v] = detail::split_capacity_record(lines[m]);
    if (space.parse_subset(label) != m)
      throw ParseError("capacity record " + std::to_string(m) + " is " + label + ", expected " +
                       space.subset_label(m) + " (canonical order)");
    values[m] = v;
  }
  return make_capacity(space, std::move(values));
}

/// Parses a standalone capacity text. The element order is recovered from the
/// singleton records, which sit at the power-of-two positions of the canonical
/// listing.
inline Capacity parse_capacity(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (lines.empty() || (lines.size() & (lines.size() - 1)) != 0)
    throw MissingSubset("capacity text must list a power-of-two number of subsets, got " +
                        std::to_string(lines.size()));
  std::vector<std::string> elements;
  for (std::size_t pos = 1; pos < lines.size(); pos <<= 1) {
    auto [label, v] = detail::split_capacity_record(lines[pos]);
    (void)v;
    if (label.size() < 2 || label.front() != '{' || label.back() != '}')
      throw ParseError("bad subset label '" + label + "'");
    elements.push_back(label.substr(1, label.size() - 2));
  }
  try {
    return parse_capacity(StateSpace(std::move(elements)), lines);
  } catch (const Malformed& e) {
    throw ParseError(std::string("capacity text: ") + e.what());
  }
}

}  // namespace chq
