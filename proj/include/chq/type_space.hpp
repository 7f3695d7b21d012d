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
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chq/capacity.hpp"
#include "chq/errors.hpp"
#include "chq/game.hpp"
#include "chq/solver.hpp"
#include "chq/state_space.hpp"

namespace chq {

/// A finite capacity type space over a game: per player a finite list of
/// types, the action each type plays, and each type's capacity over the
/// opponents' type profiles. The strategy map is bookkeeping, not a choice.
class CapacityTypeSpace {
 public:
  CapacityTypeSpace(StrategicGame game, std::vector<std::vector<std::string>> types,
                    std::vector<std::vector<int>> strategy, std::vector<std::vector<Capacity>> belief)
      : game_(std::move(game)),
        types_(std::move(types)),
        strategy_(std::move(strategy)),
        belief_(std::move(belief)) {
    const std::size_t players = game_.player_count();
    if (types_.size() != players || strategy_.size() != players || belief_.size() != players)
      throw Malformed("type space needs one block per player");
    for (std::size_t i = 0; i < players; ++i) {
      if (types_[i].empty()) throw Malformed("every player needs at least one type");
      std::set<std::string> seen;
      for (const auto& t : types_[i]) {
        if (!detail::valid_label(t)) throw Malformed("bad type label '" + t + "'");
        if (!seen.insert(t).second) throw Malformed("duplicate type '" + t + "'");
      }
      if (strategy_[i].size() != types_[i].size() || belief_[i].size() != types_[i].size())
        throw Malformed("strategy and belief maps must cover every type");
      for (int a : strategy_[i])
        if (a < 0 || static_cast<std::size_t>(a) >= game_.action_count(i))
          throw UnknownAction("strategy map points at a missing action");
      const StateSpace expected = opponent_type_space(i);
      for (const auto& cap : belief_[i])
        require_same_space(cap.space(), expected, "type belief");
    }
  }

  const StrategicGame& game() const { return game_; }
  std::size_t type_count(std::size_t i) const { return types_[i].size(); }
  const std::vector<std::string>& type_labels(std::size_t i) const { return types_[i]; }
  const std::string& type_label(std::size_t i, int t) const {
    return types_[i].at(static_cast<std::size_t>(t));
  }
  int type_index(std::size_t i, std::string_view label) const {
    for (std::size_t t = 0; t < types_[i].size(); ++t)
      if (types_[i][t] == label) return static_cast<int>(t);
    throw UnknownType("player " + game_.player_name(i) + " has no type '" + std::string(label) +
                      "'");
  }
  int played_action(std::size_t i, int t) const {
    return strategy_[i].at(static_cast<std::size_t>(t));
  }
  const Capacity& belief(std::size_t i, int t) const {
    return belief_[i].at(static_cast<std::size_t>(t));
  }

  std::size_t opponent_tuple_count(std::size_t i) const {
    std::size_t count = 1;
    for (std::size_t j = 0; j < types_.size(); ++j)
      if (j != i) count *= types_[j].size();
    return count;
  }

  std::vector<int> opponent_tuple(std::size_t i, std::size_t index) const {
    std::vector<std::size_t> radices;
    for (std::size_t j = 0; j < types_.size(); ++j)
      if (j != i) radices.push_back(types_[j].size());
    std::vector<int> out(radices.size());
    for (std::size_t k = radices.size(); k-- > 0;) {
      out[k] = static_cast<int>(index % radices[k]);
      index /= radices[k];
    }
    return out;
  }

  /// Canonical state space of opponents' type profiles, '.'-joined labels.
  StateSpace opponent_type_space(std::size_t i) const {
    const std::size_t count = opponent_tuple_count(i);
    if (count > kMaxStateSpaceSize)
      throw SizeCap("opponent type space of size " + std::to_string(count) + " exceeds the cap");
    std::vector<std::string> labels;
    for (std::size_t idx = 0; idx < count; ++idx) {
      const std::vector<int> tuple = opponent_tuple(i, idx);
      std::string label;
      std::size_t k = 0;
      for (std::size_t j = 0; j < types_.size(); ++j) {
        if (j == i) continue;
        if (!label.empty()) label += ".";
        label += types_[j][static_cast<std::size_t>(tuple[k++])];
      }
      labels.push_back(std::move(label));
    }
    return StateSpace(std::move(labels));
  }

  /// The opponent action profile a type tuple plays.
  std::size_t tuple_action_profile(std::size_t i, std::size_t index) const {
    const std::vector<int> tuple = opponent_tuple(i, index);
    std::size_t rank = 0;
    std::size_t k = 0;
    for (std::size_t j = 0; j < types_.size(); ++j) {
      if (j == i) continue;
      rank = rank * game_.action_count(j) +
             static_cast<std::size_t>(strategy_[j][static_cast<std::size_t>(tuple[k])]);
      ++k;
    }
    return rank;
  }

 private:
  StrategicGame game_;
  std::vector<std::vector<std::string>> types_;
  std::vector<std::vector<int>> strategy_;
  std::vector<std::vector<Capacity>> belief_;
};

/// Whether the type believes the event of opponent type profiles.
inline bool type_believes(const CapacityTypeSpace& space, std::size_t i, int t, Mask event) {
  if (t < 0 || static_cast<std::size_t>(t) >= space.type_count(i))
    throw UnknownType("type index out of range");
  return is_believed(space.belief(i, t), EventSet(space.belief(i, t).space(), event));
}

/// The pushforward of a type's capacity onto opponents' action profiles:
/// the conjecture the type holds about play. Normalization and monotonicity
/// carry over through preimages.
inline Capacity conjecture(const CapacityTypeSpace& space, std::size_t i, int t) {
  const Capacity& tau = space.belief(i, t);
  const StateSpace action_space = space.game().opponent_space(i);
  const std::size_t tuples = space.opponent_tuple_count(i);
  std::vector<Rational> values(action_space.subset_count());
  for (Mask e = 0; e < static_cast<Mask>(values.size()); ++e) {
    Mask preimage = 0;
    for (std::size_t idx = 0; idx < tuples; ++idx)
      if ((e >> space.tuple_action_profile(i, idx)) & 1) preimage |= Mask{1} << idx;
    values[e] = tau.value(preimage);
  }
  return make_capacity(action_space, std::move(values));
}

/// Per-level type sets of the rationality-and-belief iteration, their limit,
/// and the actions they play.
struct EpistemicReport {
  std::vector<std::vector<Mask>> levels;  // levels[k-1][player] = type masks
  std::vector<Mask> common;               // the intersection (stabilized) sets
  std::vector<std::vector<Mask>> projected_actions;  // parallel to levels

  Mask level_types(std::size_t k, std::size_t i) const { return levels.at(k - 1).at(i); }
};

/// Level 1 keeps the types whose action best-responds to their conjecture;
/// each later level keeps the types believing the opponents' surviving type
/// sets. Stops when stable; on finite spaces that is the intersection.
inline EpistemicReport bkcr_fixpoint(const CapacityTypeSpace& space) {
  const StrategicGame& game = space.game();
  const std::size_t players = game.player_count();
  EpistemicReport report;

  std::vector<Mask> current(players, 0);
  for (std::size_t i = 0; i < players; ++i) {
    for (int t = 0; t < static_cast<int>(space.type_count(i)); ++t) {
      const std::vector<int> best = choquet_best_responses(game, i, conjecture(space, i, t));
      if (std::find(best.begin(), best.end(), space.played_action(i, t)) != best.end())
        current[i] |= Mask{1} << t;
    }
  }

  auto record = [&](const std::vector<Mask>& sets) {
    report.levels.push_back(sets);
    std::vector<Mask> played(players, 0);
    for (std::size_t i = 0; i < players; ++i)
      for (int t : bits_of(sets[i])) played[i] |= Mask{1} << space.played_action(i, t);
    report.projected_actions.push_back(std::move(played));
  };
  record(current);

  while (true) {
    std::vector<Mask> next(players, 0);
    for (std::size_t i = 0; i < players; ++i) {
      // The believed event: opponent tuples whose every component survived.
      Mask event = 0;
      for (std::size_t idx = 0; idx < space.opponent_tuple_count(i); ++idx) {
        const std::vector<int> tuple = space.opponent_tuple(i, idx);
        bool alive = true;
        std::size_t k = 0;
        for (std::size_t j = 0; j < players && alive; ++j) {
          if (j == i) continue;
          alive = (current[j] >> tuple[k++]) & 1;
        }
        if (alive) event |= Mask{1} << idx;
      }
      for (int t : bits_of(current[i]))
        if (type_believes(space, i, t, event)) next[i] |= Mask{1} << t;
    }
    if (next == current) break;
    current = next;
    record(current);
  }
  report.common = current;
  return report;
}

/// Builds the canonical finite space realizing the solver's limit: one type
/// per surviving action playing that action, believing through the action's
/// limit witness capacity. Belief in the survivors makes the witness ignore
/// everything outside them, so each type's conjecture reproduces the witness
/// integrals exactly; the construction checks that and the resulting space
/// keeps every type through the full iteration.
inline CapacityTypeSpace build_witness_space(const StrategicGame& game,
                                             const SolveReport& report) {
  const std::size_t players = game.player_count();
  std::vector<std::vector<std::string>> types(players);
  std::vector<std::vector<int>> strategy(players);
  for (std::size_t i = 0; i < players; ++i) {
    if (report.limit(i) == 0)
      throw EmptySurvivorSet("witness spaces need nonempty limit sets");
    for (int a : bits_of(report.limit(i))) {
      types[i].push_back(game.action_label(i, a));
      strategy[i].push_back(a);
    }
  }

  std::vector<std::vector<Capacity>> belief(players);
  for (std::size_t i = 0; i < players; ++i) {
    // Tuple index -> the game's opponent-profile index it plays.
    std::vector<std::size_t> radices;
    for (std::size_t j = 0; j < players; ++j)
      if (j != i) radices.push_back(types[j].size());
    std::size_t tuple_count = 1;
    for (std::size_t r : radices) tuple_count *= r;
    std::vector<std::size_t> plays(tuple_count);
    for (std::size_t idx = 0; idx < tuple_count; ++idx) {
      std::size_t rest = idx;
      std::vector<int> tuple(radices.size());
      for (std::size_t k = radices.size(); k-- > 0;) {
        tuple[k] = static_cast<int>(rest % radices[k]);
        rest /= radices[k];
      }
      std::size_t rank = 0;
      std::size_t k = 0;
      for (std::size_t j = 0; j < players; ++j) {
        if (j == i) continue;
        rank = rank * game.action_count(j) +
               static_cast<std::size_t>(strategy[j][static_cast<std::size_t>(tuple[k++])]);
      }
      plays[idx] = rank;
    }

    std::vector<std::string> labels;
    for (std::size_t idx = 0; idx < tuple_count; ++idx) {
      std::size_t rest = idx;
      std::string label;
      std::vector<int> tuple(radices.size());
      for (std::size_t k = radices.size(); k-- > 0;) {
        tuple[k] = static_cast<int>(rest % radices[k]);
        rest /= radices[k];
      }
      std::size_t k = 0;
      for (std::size_t j = 0; j < players; ++j) {
        if (j == i) continue;
        if (!label.empty()) label += ".";
        label += types[j][static_cast<std::size_t>(tuple[k++])];
      }
      labels.push_back(std::move(label));
    }
    const StateSpace tuple_space(labels);

    for (int a : bits_of(report.limit(i))) {
      const Capacity& witness = report.limit_witness(i, a);
      std::vector<Rational> values(tuple_space.subset_count());
      for (Mask s = 0; s < static_cast<Mask>(values.size()); ++s) {
        Mask action_mask = 0;
        for (std::size_t idx = 0; idx < tuple_count; ++idx)
          if ((s >> idx) & 1) action_mask |= Mask{1} << plays[idx];
        values[s] = witness.value(action_mask);
      }
      belief[i].push_back(make_capacity(tuple_space, std::move(values)));
    }
  }

  CapacityTypeSpace space(game, std::move(types), std::move(strategy), std::move(belief));

  // Belief in the survivors makes the witness blind outside them, so the
  // pushforward must reproduce every integral exactly.
  for (std::size_t i = 0; i < players; ++i) {
    for (int t = 0; t < static_cast<int>(space.type_count(i)); ++t) {
      const Capacity conj = conjecture(space, i, t);
      const Capacity& witness = report.limit_witness(i, space.played_action(i, t));
      for (int a = 0; a < static_cast<int>(game.action_count(i)); ++a) {
        const SimpleAct act = act_of(game, i, a);
        if (choquet_integral(conj, act) != choquet_integral(witness, act))
          throw InternalError("witness-space conjecture drifted from the solver witness");
      }
    }
  }
  return space;
}

// ---------------------------------------------------------------------------
// Type-space file format.
//
//   players: Rowena Colin
//   types Rowena: ta tb
//   types Colin: tx
//   play Rowena ta: u
//   play Rowena tb: d
//   play Colin tx: l
//   belief Rowena ta:
//   {}: 0
//   {tx}: 1
//   ...
//
// Play lines cover every type in order; each belief block lists the full
// capacity over the opponents' type profiles in the capacity text format.
// ---------------------------------------------------------------------------

inline std::string serialize_type_space(const CapacityTypeSpace& space) {
  const StrategicGame& game = space.game();
  std::ostringstream out;
  out << "players:";
  for (const auto& p : game.player_names()) out << " " << p;
  out << "\n";
  for (std::size_t i = 0; i < game.player_count(); ++i) {
    out << "types " << game.player_name(i) << ":";
    for (const auto& t : space.type_labels(i)) out << " " << t;
    out << "\n";
  }
  for (std::size_t i = 0; i < game.player_count(); ++i)
    for (int t = 0; t < static_cast<int>(space.type_count(i)); ++t)
      out << "play " << game.player_name(i) << " " << space.type_label(i, t) << ": "
          << game.action_label(i, space.played_action(i, t)) << "\n";
  for (std::size_t i = 0; i < game.player_count(); ++i)
    for (int t = 0; t < static_cast<int>(space.type_count(i)); ++t)
      out << "belief " << game.player_name(i) << " " << space.type_label(i, t) << ":\n"
          << format_capacity(space.belief(i, t));
  return out.str();
}

inline CapacityTypeSpace parse_type_space(const std::string& text, const StrategicGame& game) {
  std::istringstream in(text);
  std::vector<std::string> lines;
  std::string raw;
  while (std::getline(in, raw)) {
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.find_first_not_of(" \t") == std::string::npos) continue;
    lines.push_back(raw);
  }
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) {
    throw ParseError("type space line " + std::to_string(pos) + ": " + msg);
  };
  auto next = [&]() -> const std::string& {
    if (pos >= lines.size()) throw ParseError("type space: unexpected end of input");
    return lines[pos++];
  };

  {
    const std::string& header = next();
    if (header.rfind("players:", 0) != 0) fail("expected 'players:' header");
    const auto listed = detail::split_ws(header.substr(8));
    if (listed != game.player_names()) fail("player list does not match the game");
  }

  const std::size_t players = game.player_count();
  std::vector<std::vector<std::string>> types;
  for (std::size_t i = 0; i < players; ++i) {
    const std::string prefix = "types " + game.player_name(i) + ":";
    const std::string& line = next();
    if (line.rfind(prefix, 0) != 0) fail("expected '" + prefix + "'");
    types.push_back(detail::split_ws(line.substr(prefix.size())));
    if (types.back().empty()) fail("empty type list");
  }

  std::vector<std::vector<int>> strategy(players);
  for (std::size_t i = 0; i < players; ++i) {
    for (const auto& t : types[i]) {
      const std::string prefix = "play " + game.player_name(i) + " " + t + ":";
      const std::string& line = next();
      if (line.rfind(prefix, 0) != 0) fail("expected '" + prefix + "'");
      const auto tokens = detail::split_ws(line.substr(prefix.size()));
      if (tokens.size() != 1) fail("play lines name exactly one action");
      strategy[i].push_back(game.action_index(i, tokens[0]));
    }
  }

  std::vector<std::vector<Capacity>> belief(players);
  for (std::size_t i = 0; i < players; ++i) {
    std::size_t tuples = 1;
    for (std::size_t j = 0; j < players; ++j)
      if (j != i) tuples *= types[j].size();
    for (const auto& t : types[i]) {
      const std::string prefix = "belief " + game.player_name(i) + " " + t + ":";
      const std::string& line = next();
      if (line.rfind(prefix, 0) != 0) fail("expected '" + prefix + "'");
      std::vector<std::string> block;
      for (std::size_t k = 0; k < (std::size_t{1} << tuples); ++k) block.push_back(next());
      // Element order is pinned by the declared type lists.
      std::vector<std::string> labels;
      for (std::size_t idx = 0; idx < tuples; ++idx) {
        std::size_t rest = idx;
        std::vector<std::size_t> radices;
        for (std::size_t j = 0; j < players; ++j)
          if (j != i) radices.push_back(types[j].size());
        std::vector<int> tuple(radices.size());
        for (std::size_t k = radices.size(); k-- > 0;) {
          tuple[k] = static_cast<int>(rest % radices[k]);
          rest /= radices[k];
        }
        std::string label;
        std::size_t k = 0;
        for (std::size_t j = 0; j < players; ++j) {
          if (j == i) continue;
          if (!label.empty()) label += ".";
          label += types[j][static_cast<std::size_t>(tuple[k++])];
        }
        labels.push_back(std::move(label));
      }
      belief[i].push_back(parse_capacity(StateSpace(std::move(labels)), block));
    }
  }
  if (pos != lines.size()) fail("trailing content");
  return CapacityTypeSpace(game, std::move(types), std::move(strategy), std::move(belief));
}

}  // namespace chq
