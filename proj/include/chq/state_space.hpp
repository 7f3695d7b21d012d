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
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chq/errors.hpp"
#include "chq/rational.hpp"
#include "chq/subset.hpp"

namespace chq {

// Dense subset tables are 2^n entries; this bounds n for every state space.
inline constexpr int kMaxStateSpaceSize = 16;

/// A finite ordered list of distinct state labels. The element order is fixed
/// at construction and defines the canonical subset encoding everywhere.
class StateSpace {
 public:
  explicit StateSpace(std::vector<std::string> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw Malformed("state space must have at least one element");
    if (elements_.size() > kMaxStateSpaceSize)
      throw SizeCap("state space of size " + std::to_string(elements_.size()) + " exceeds cap " +
                    std::to_string(kMaxStateSpaceSize));
    std::set<std::string> seen;
    for (const auto& e : elements_) {
      if (e.empty()) throw Malformed("empty state label");
      if (!seen.insert(e).second) throw Malformed("duplicate state label '" + e + "'");
    }
  }

  std::size_t size() const { return elements_.size(); }
  std::size_t subset_count() const { return std::size_t{1} << elements_.size(); }
  Mask full_mask() const { return static_cast<Mask>(subset_count() - 1); }
  const std::string& label(int i) const { return elements_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::string>& labels() const { return elements_; }

  int index_of(std::string_view label) const {
    for (std::size_t i = 0; i < elements_.size(); ++i)
      if (elements_[i] == label) return static_cast<int>(i);
    throw Malformed("unknown state label '" + std::string(label) + "'");
  }

  /// "{a,c}" for the subset containing elements a and c; "{}" for the empty set.
  std::string subset_label(Mask m) const {
    std::string out = "{";
    bool first = true;
    for (int b : bits_of(m)) {
      if (!first) out += ",";
      out += label(b);
      first = false;
    }
    out += "}";
    return out;
  }

  /// Inverse of subset_label. Rejects unknown or repeated members.
  Mask parse_subset(std::string_view text) const {
    std::string_view t = text;
    if (t.size() < 2 || t.front() != '{' || t.back() != '}')
      throw ParseError("subset must be brace-delimited: '" + std::string(text) + "'");
    t = t.substr(1, t.size() - 2);
    Mask m = 0;
    std::size_t start = 0;
    while (start <= t.size()) {
      if (t.empty()) break;
      std::size_t comma = t.find(',', start);
      std::string_view piece = t.substr(start, comma == std::string_view::npos ? comma : comma - start);
      if (piece.empty()) throw ParseError("empty member in subset '" + std::string(text) + "'");
      const int idx = index_of(piece);
      const Mask bit = Mask{1} << idx;
      if (m & bit) throw ParseError("repeated member '" + std::string(piece) + "' in subset");
      m |= bit;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return m;
  }

  friend bool operator==(const StateSpace& a, const StateSpace& b) {
    return a.elements_ == b.elements_;
  }
  friend bool operator!=(const StateSpace& a, const StateSpace& b) { return !(a == b); }

 private:
  std::vector<std::string> elements_;
};

inline void require_same_space(const StateSpace& a, const StateSpace& b, const char* where) {
  if (a != b) throw SpaceMismatch(std::string(where) + ": state spaces differ");
}

/// An event: a subset of a specific state space.
class EventSet {
 public:
  EventSet(StateSpace space, Mask members) : space_(std::move(space)), mask_(members) {
    if (!subset_of(members, space_.full_mask()))
      throw Malformed("event mask has bits outside its state space");
  }

  static EventSet of(const StateSpace& space, const std::vector<std::string>& members) {
    Mask m = 0;
    for (const auto& e : members) m |= Mask{1} << space.index_of(e);
    return EventSet(space, m);
  }

  const StateSpace& space() const { return space_; }
  Mask mask() const { return mask_; }
  Mask complement() const { return space_.full_mask() & ~mask_; }

 private:
  StateSpace space_;
  Mask mask_;
};

/// A simple act: an exact utility for every state. Utilities are already
/// applied; acts map states straight to payoffs.
class SimpleAct {
 public:
  SimpleAct(StateSpace space, std::vector<Rational> payoff)
      : space_(std::move(space)), payoff_(std::move(payoff)) {
    if (payoff_.size() != space_.size())
      throw Malformed("act must assign a payoff to every state");
  }

  static SimpleAct constant(const StateSpace& space, const Rational& value) {
    return SimpleAct(space, std::vector<Rational>(space.size(), value));
  }

  const StateSpace& space() const { return space_; }
  const Rational& payoff(int state) const { return payoff_.at(static_cast<std::size_t>(state)); }
  const std::vector<Rational>& payoffs() const { return payoff_; }

 private:
  StateSpace space_;
  std::vector<Rational> payoff_;
};

}  // namespace chq
