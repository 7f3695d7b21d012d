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

#include <cctype>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chq/capacity.hpp"
#include "chq/errors.hpp"
#include "chq/rational.hpp"
#include "chq/state_space.hpp"

namespace chq {

namespace detail {

inline bool valid_label(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace detail

/// A finite strategic-form game: ordered players, per-player ordered action
/// lists, and an exact rational payoff for every player at every full action
/// profile. Profiles are ranked lexicographically with player 0 most
/// significant; that fixed order defines every derived state space.
class StrategicGame {
 public:
  StrategicGame(std::vector<std::string> players, std::vector<std::vector<std::string>> actions,
                std::vector<std::vector<Rational>> payoffs)
      : players_(std::move(players)), actions_(std::move(actions)), payoffs_(std::move(payoffs)) {
    if (players_.size() < 2) throw Malformed("a game needs at least two players");
    if (actions_.size() != players_.size()) throw Malformed("one action list per player required");
    std::set<std::string> pseen;
    for (const auto& p : players_) {
      if (!detail::valid_label(p)) throw Malformed("bad player name '" + p + "'");
      if (!pseen.insert(p).second) throw Malformed("duplicate player '" + p + "'");
    }
    for (const auto& list : actions_) {
      if (list.empty()) throw Malformed("every player needs at least one action");
      if (list.size() > kMaxStateSpaceSize)
        throw SizeCap("a player with " + std::to_string(list.size()) +
                      " actions exceeds the per-player cap of " +
                      std::to_string(kMaxStateSpaceSize));
      std::set<std::string> aseen;
      for (const auto& a : list) {
        if (!detail::valid_label(a)) throw Malformed("bad action label '" + a + "'");
        if (!aseen.insert(a).second) throw Malformed("duplicate action '" + a + "'");
      }
    }
    std::size_t count = 1;
    for (const auto& list : actions_) count *= list.size();
    if (payoffs_.size() != players_.size()) throw ArityError("one payoff table per player required");
    for (const auto& table : payoffs_)
      if (table.size() != count)
        throw ArityError("payoff table has " + std::to_string(table.size()) +
                         " entries, expected " + std::to_string(count));
  }

  std::size_t player_count() const { return players_.size(); }
  const std::string& player_name(std::size_t i) const { return players_.at(i); }
  const std::vector<std::string>& player_names() const { return players_; }

  std::size_t action_count(std::size_t i) const { return actions_.at(i).size(); }
  const std::vector<std::string>& action_labels(std::size_t i) const { return actions_.at(i); }
  const std::string& action_label(std::size_t i, int a) const {
    return actions_.at(i).at(static_cast<std::size_t>(a));
  }
  int action_index(std::size_t i, std::string_view label) const {
    const auto& list = actions_.at(i);
    for (std::size_t a = 0; a < list.size(); ++a)
      if (list[a] == label) return static_cast<int>(a);
    throw UnknownAction("player " + players_[i] + " has no action '" + std::string(label) + "'");
  }

  std::size_t profile_count() const { return payoffs_.at(0).size(); }

  std::size_t profile_rank(const std::vector<int>& profile) const {
    std::size_t rank = 0;
    for (std::size_t p = 0; p < players_.size(); ++p)
      rank = rank * actions_[p].size() + static_cast<std::size_t>(profile[p]);
    return rank;
  }

  std::vector<int> profile_of_rank(std::size_t rank) const {
    std::vector<int> profile(players_.size());
    for (std::size_t p = players_.size(); p-- > 0;) {
      profile[p] = static_cast<int>(rank % actions_[p].size());
      rank /= actions_[p].size();
    }
    return profile;
  }

  const Rational& payoff(std::size_t player, std::size_t profile_rank) const {
    return payoffs_.at(player).at(profile_rank);
  }
  const Rational& payoff(std::size_t player, const std::vector<int>& profile) const {
    return payoffs_.at(player).at(this->profile_rank(profile));
  }

  // --- opponent-profile view for player i -------------------------------

  std::size_t opponent_profile_count(std::size_t i) const {
    std::size_t count = 1;
    for (std::size_t p = 0; p < players_.size(); ++p)
      if (p != i) count *= actions_[p].size();
    return count;
  }

  /// Decodes an opponent-profile index into one action per opponent,
  /// opponents in ascending player order, earlier opponents most significant.
  std::vector<int> opponent_profile(std::size_t i, std::size_t index) const {
    std::vector<int> out;
    out.reserve(players_.size() - 1);
    std::vector<std::size_t> radices;
    for (std::size_t p = 0; p < players_.size(); ++p)
      if (p != i) radices.push_back(actions_[p].size());
    out.resize(radices.size());
    for (std::size_t k = radices.size(); k-- > 0;) {
      out[k] = static_cast<int>(index % radices[k]);
      index /= radices[k];
    }
    return out;
  }

  std::size_t full_rank(std::size_t i, int own_action, std::size_t opponent_index) const {
    const std::vector<int> opp = opponent_profile(i, opponent_index);
    std::vector<int> profile(players_.size());
    std::size_t k = 0;
    for (std::size_t p = 0; p < players_.size(); ++p)
      profile[p] = (p == i) ? own_action : opp[k++];
    return profile_rank(profile);
  }

  /// State space of opponents' action profiles in canonical product order.
  /// Tuple labels join the opponents' action labels with '.'; with a single
  /// opponent the label is just the action label.
  StateSpace opponent_space(std::size_t i) const {
    const std::size_t count = opponent_profile_count(i);
    if (count > kMaxStateSpaceSize)
      throw SizeCap("opponent profile space of size " + std::to_string(count) +
                    " exceeds the capacity cap");
    std::vector<std::string> labels;
    labels.reserve(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      const std::vector<int> opp = opponent_profile(i, idx);
      std::string label;
      std::size_t k = 0;
      for (std::size_t p = 0; p < players_.size(); ++p) {
        if (p == i) continue;
        if (!label.empty()) label += ".";
        label += actions_[p][static_cast<std::size_t>(opp[k++])];
      }
      labels.push_back(std::move(label));
    }
    return StateSpace(std::move(labels));
  }

 private:
  std::vector<std::string> players_;
  std::vector<std::vector<std::string>> actions_;
  std::vector<std::vector<Rational>> payoffs_;
};

/// The act induced by playing own action a: the payoff over every opponent
/// profile, on the canonical opponent state space.
inline SimpleAct act_of(const StrategicGame& game, std::size_t i, int a) {
  if (a < 0 || static_cast<std::size_t>(a) >= game.action_count(i))
    throw UnknownAction("action index out of range");
  const std::size_t count = game.opponent_profile_count(i);
  std::vector<Rational> payoff(count);
  for (std::size_t idx = 0; idx < count; ++idx)
    payoff[idx] = game.payoff(i, game.full_rank(i, a, idx));
  return SimpleAct(game.opponent_space(i), std::move(payoff));
}

/// The argmax set of the Choquet integral over own actions; never empty.
inline std::vector<int> choquet_best_responses(const StrategicGame& game, std::size_t i,
                                               const Capacity& conjecture) {
  require_same_space(conjecture.space(), game.opponent_space(i), "choquet_best_responses");
  std::vector<int> best;
  Rational top;
  for (int a = 0; a < static_cast<int>(game.action_count(i)); ++a) {
    const Rational v = choquet_integral(conjecture, act_of(game, i, a));
    if (best.empty() || v > top) {
      best.assign(1, a);
      top = v;
    } else if (v == top) {
      best.push_back(a);
    }
  }
  return best;
}

/// A base-game restriction for player i: a nonempty set of own actions and a
/// nonempty set of opponent profiles.
struct Restriction {
  std::size_t player = 0;
  Mask own = 0;        // over the player's action list
  Mask opponents = 0;  // over the canonical opponent profiles
};

// ---------------------------------------------------------------------------
// Game file format.
//
//   players: Rowena Colin
//   actions Rowena: u d m
//   actions Colin: l r
//   payoffs:
//   u l: 4 0
//   u r: 0 4
//   ...
//
// Payoff lines cover every full action profile in lexicographic order; each
// carries the per-player payoffs in player order.
// ---------------------------------------------------------------------------

inline std::string serialize_game(const StrategicGame& game) {
  std::ostringstream out;
  out << "players:";
  for (const auto& p : game.player_names()) out << " " << p;
  out << "\n";
  for (std::size_t i = 0; i < game.player_count(); ++i) {
    out << "actions " << game.player_name(i) << ":";
    for (const auto& a : game.action_labels(i)) out << " " << a;
    out << "\n";
  }
  out << "payoffs:\n";
  for (std::size_t rank = 0; rank < game.profile_count(); ++rank) {
    const std::vector<int> profile = game.profile_of_rank(rank);
    bool first = true;
    for (std::size_t p = 0; p < game.player_count(); ++p) {
      out << (first ? "" : " ") << game.action_label(p, profile[p]);
      first = false;
    }
    out << ":";
    for (std::size_t p = 0; p < game.player_count(); ++p)
      out << " " << format_rational(game.payoff(p, rank));
    out << "\n";
  }
  return out.str();
}

inline StrategicGame parse_game(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ParseError("game line " + std::to_string(lineno) + ": " + msg);
  };

  std::vector<std::string> lines;
  while (std::getline(in, raw)) {
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    lines.push_back(raw);
  }

  std::size_t pos = 0;
  auto next_line = [&]() -> std::optional<std::string> {
    while (pos < lines.size()) {
      const std::string& l = lines[pos];
      ++pos;
      lineno = pos;
      if (l.find_first_not_of(" \t") == std::string::npos) continue;
      if (l[l.find_first_not_of(" \t")] == '#') continue;
      return l;
    }
    return std::nullopt;
  };

  auto header = next_line();
  if (!header || header->rfind("players:", 0) != 0) fail("expected 'players:' header");
  std::vector<std::string> players = detail::split_ws(header->substr(8));
  if (players.size() < 2) fail("need at least two players");

  std::vector<std::vector<std::string>> actions;
  for (const auto& p : players) {
    auto line = next_line();
    const std::string prefix = "actions " + p + ":";
    if (!line || line->rfind(prefix, 0) != 0) fail("expected '" + prefix + "'");
    actions.push_back(detail::split_ws(line->substr(prefix.size())));
    if (actions.back().empty()) fail("player " + p + " has no actions");
  }

  auto marker = next_line();
  if (!marker || *marker != "payoffs:") fail("expected 'payoffs:' marker");

  std::size_t count = 1;
  for (const auto& list : actions) count *= list.size();
  std::vector<std::vector<Rational>> payoffs(players.size(), std::vector<Rational>(count));

  // Index actions once for the profile-label check.
  std::vector<std::vector<std::string>> expect_labels;
  for (std::size_t rank = 0; rank < count; ++rank) {
    std::size_t r = rank;
    std::vector<std::string> labels(players.size());
    for (std::size_t p = players.size(); p-- > 0;) {
      labels[p] = actions[p][r % actions[p].size()];
      r /= actions[p].size();
    }
    expect_labels.push_back(std::move(labels));
  }

  for (std::size_t rank = 0; rank < count; ++rank) {
    auto line = next_line();
    if (!line) throw ArityError("payoff tensor is ragged: only " + std::to_string(rank) + " of " +
                                std::to_string(count) + " profiles listed");
    const std::size_t colon = line->find(':');
    if (colon == std::string::npos) fail("payoff line needs ':'");
    const std::vector<std::string> labels = detail::split_ws(line->substr(0, colon));
    if (labels != expect_labels[rank]) {
      std::string want;
      for (const auto& l : expect_labels[rank]) want += (want.empty() ? "" : " ") + l;
      fail("expected profile '" + want + "' (lexicographic order)");
    }
    const std::vector<std::string> cells = detail::split_ws(line->substr(colon + 1));
    if (cells.size() != players.size())
      throw ArityError("game line " + std::to_string(lineno) + ": expected " +
                       std::to_string(players.size()) + " payoffs, got " +
                       std::to_string(cells.size()));
    for (std::size_t p = 0; p < players.size(); ++p) {
      try {
        payoffs[p][rank] = parse_rational(cells[p]);
      } catch (const ParseError& e) {
        fail(e.what());
      }
    }
  }
  if (next_line()) fail("trailing content after payoff tensor");

  return StrategicGame(std::move(players), std::move(actions), std::move(payoffs));
}

}  // namespace chq
