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
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "chq/errors.hpp"
#include "chq/game.hpp"
#include "chq/lp.hpp"
#include "chq/rational.hpp"
#include "chq/subset.hpp"

namespace chq {

inline constexpr std::size_t kDefaultExtendedActionCap = 10;

/// The auxiliary game whose actions are nonempty subsets of base actions and
/// whose payoffs are worst cases over the chosen subsets. A technical device:
/// strict dominance here decides best-response existence in the base game
/// without evaluating a single integral.
///
/// Player i's own extended actions are the nonempty subset masks over A_i in
/// canonical order. The opponent side is a tuple of nonempty subsets, one per
/// opponent, indexed mixed-radix with earlier opponents most significant;
/// with a single opponent that is just a subset of its action list.
class ExtendedGame {
 public:
  explicit ExtendedGame(StrategicGame base_game,
                        std::size_t action_cap = kDefaultExtendedActionCap)
      : base_(std::move(base_game)) {
    const std::size_t players = base_.player_count();
    for (std::size_t i = 0; i < players; ++i)
      if (base_.action_count(i) > action_cap)
        throw SizeCap("player " + base_.player_name(i) + " has " +
                      std::to_string(base_.action_count(i)) + " actions; extended cap is " +
                      std::to_string(action_cap));
    util_.resize(players);
    opp_radices_.resize(players);
    for (std::size_t i = 0; i < players; ++i) {
      const std::size_t own = (std::size_t{1} << base_.action_count(i)) - 1;
      std::size_t tuples = 1;
      for (std::size_t j = 0; j < players; ++j) {
        if (j == i) continue;
        opp_radices_[i].push_back((std::size_t{1} << base_.action_count(j)) - 1);
        tuples *= opp_radices_[i].back();
      }
      if (own * tuples > (std::size_t{1} << 21))
        throw SizeCap("extended game table for player " + base_.player_name(i) + " would need " +
                      std::to_string(own * tuples) + " cells");
      util_[i].assign(own, std::vector<Rational>(tuples));
      fill_tables(i);
    }
  }

  const StrategicGame& base() const { return base_; }

  std::size_t own_subset_count(std::size_t i) const { return util_[i].size(); }
  std::size_t opponent_tuple_count(std::size_t i) const { return util_[i].empty() ? 0 : util_[i][0].size(); }

  /// Worst-case payoff of own subset `own` against the opponent tuple.
  const Rational& utility(std::size_t i, Mask own, std::size_t tuple) const {
    if (own == 0 || own > util_[i].size())
      throw Malformed("extended action mask out of range");
    return util_[i][own - 1][tuple];
  }

  /// Decodes a tuple index into one nonempty subset mask per opponent,
  /// opponents in ascending player order.
  std::vector<Mask> tuple_masks(std::size_t i, std::size_t tuple) const {
    const auto& radices = opp_radices_[i];
    std::vector<Mask> masks(radices.size());
    for (std::size_t k = radices.size(); k-- > 0;) {
      masks[k] = static_cast<Mask>(tuple % radices[k]) + 1;
      tuple /= radices[k];
    }
    return masks;
  }

  std::size_t tuple_index(std::size_t i, const std::vector<Mask>& masks) const {
    const auto& radices = opp_radices_[i];
    if (masks.size() != radices.size()) throw Malformed("opponent tuple arity mismatch");
    std::size_t tuple = 0;
    for (std::size_t k = 0; k < radices.size(); ++k) {
      if (masks[k] == 0 || masks[k] > radices[k]) throw Malformed("opponent subset out of range");
      tuple = tuple * radices[k] + (masks[k] - 1);
    }
    return tuple;
  }

  std::string own_subset_label(std::size_t i, Mask own) const {
    std::string out = "{";
    bool first = true;
    for (int b : bits_of(own)) {
      if (!first) out += ",";
      out += base_.action_label(i, b);
      first = false;
    }
    return out + "}";
  }

  std::string tuple_label(std::size_t i, std::size_t tuple) const {
    const std::vector<Mask> masks = tuple_masks(i, tuple);
    std::string out;
    std::size_t k = 0;
    for (std::size_t j = 0; j < base_.player_count(); ++j) {
      if (j == i) continue;
      if (!out.empty()) out += "x";
      out += own_subset_label(j, masks[k++]);
    }
    return out;
  }

 private:
  void fill_tables(std::size_t i) {
    const std::size_t players = base_.player_count();
    const std::size_t tuple_count = opponent_tuple_count_raw(i);

    // Singleton rows first: worst case over the tuple's profile product.
    for (int a = 0; a < static_cast<int>(base_.action_count(i)); ++a) {
      auto& row = util_[i][(std::size_t{1} << a) - 1];
      if (players == 2) {
        // Single opponent: worst cases over subsets by a lattice sweep.
        for (std::size_t tuple = 0; tuple < tuple_count; ++tuple) {
          const Mask o = static_cast<Mask>(tuple) + 1;
          const Mask low = o & (~o + 1);
          if (o == low) {
            row[tuple] = base_.payoff(i, base_.full_rank(i, a, std::countr_zero(o)));
          } else {
            const Rational& rest = row[(o & (o - 1)) - 1];
            const Rational& bit = row[low - 1];
            row[tuple] = std::min(rest, bit);
          }
        }
      } else {
        for (std::size_t tuple = 0; tuple < tuple_count; ++tuple) {
          const std::vector<Mask> masks = tuple_masks(i, tuple);
          std::optional<Rational> worst;
          enumerate_product(i, a, masks, 0, std::vector<int>(masks.size()), worst);
          row[tuple] = *worst;
        }
      }
    }
    // Larger own subsets: worst case over their members' rows.
    for (Mask own = 1; own <= static_cast<Mask>(util_[i].size()); ++own) {
      if ((own & (own - 1)) == 0) continue;  // singleton, already done
      const Mask low = own & (~own + 1);
      const auto& rest = util_[i][(own & (own - 1)) - 1];
      const auto& bit = util_[i][low - 1];
      auto& row = util_[i][own - 1];
      for (std::size_t tuple = 0; tuple < tuple_count; ++tuple)
        row[tuple] = std::min(rest[tuple], bit[tuple]);
    }
  }

  std::size_t opponent_tuple_count_raw(std::size_t i) const {
    std::size_t count = 1;
    for (std::size_t r : opp_radices_[i]) count *= r;
    return count;
  }

  void enumerate_product(std::size_t i, int a, const std::vector<Mask>& masks, std::size_t slot,
                         std::vector<int> choice, std::optional<Rational>& worst) const {
    if (slot == masks.size()) {
      std::vector<int> profile(base_.player_count());
      std::size_t k = 0;
      for (std::size_t p = 0; p < base_.player_count(); ++p)
        profile[p] = (p == i) ? a : choice[k++];
      const Rational& v = base_.payoff(i, profile);
      if (!worst || v < *worst) worst = v;
      return;
    }
    for (int b : bits_of(masks[slot])) {
      choice[slot] = b;
      enumerate_product(i, a, masks, slot + 1, choice, worst);
    }
  }

  StrategicGame base_;
  std::vector<std::vector<std::vector<Rational>>> util_;  // [player][own-1][tuple]
  std::vector<std::vector<std::size_t>> opp_radices_;
};

inline ExtendedGame build_extended(const StrategicGame& game,
                                   std::size_t action_cap = kDefaultExtendedActionCap) {
  return ExtendedGame(game, action_cap);
}

/// Player i's view of an extended restriction: the candidate own subsets and
/// the opponent tuples dominance must beat.
struct PlayerRestriction {
  std::vector<Mask> own;
  std::vector<std::size_t> opponents;
};

/// One player's surviving extended actions per player; the unit the
/// elimination operator maps to itself.
using ExtendedFamilies = std::vector<std::vector<Mask>>;

inline ExtendedFamilies full_families(const ExtendedGame& ext) {
  ExtendedFamilies f(ext.base().player_count());
  for (std::size_t i = 0; i < f.size(); ++i)
    for (Mask m = 1; m <= static_cast<Mask>(ext.own_subset_count(i)); ++m) f[i].push_back(m);
  return f;
}

/// The player-i view of a product restriction: opponent tuples are all
/// combinations of the opponents' surviving subsets.
inline PlayerRestriction restriction_view(const ExtendedGame& ext, const ExtendedFamilies& fam,
                                          std::size_t i) {
  PlayerRestriction view;
  view.own = fam[i];
  std::vector<std::size_t> slots;
  for (std::size_t j = 0; j < fam.size(); ++j)
    if (j != i) slots.push_back(j);
  std::vector<Mask> pick(slots.size());
  std::function<void(std::size_t)> spin = [&](std::size_t k) {
    if (k == slots.size()) {
      view.opponents.push_back(ext.tuple_index(i, pick));
      return;
    }
    for (Mask m : fam[slots[k]]) {
      pick[k] = m;
      spin(k + 1);
    }
  };
  spin(0);
  std::sort(view.opponents.begin(), view.opponents.end());
  return view;
}

/// The extended counterpart of a base restriction for player i: every
/// nonempty subset of the own set and of the opponent-profile set. Only
/// meaningful for two-player games, where opponent profiles are one player's
/// actions.
inline PlayerRestriction associated_restriction(const ExtendedGame& ext, std::size_t i,
                                                Mask own_actions, Mask opponent_profiles) {
  if (ext.base().player_count() != 2)
    throw Malformed("associated base restrictions require a two-player game");
  if (own_actions == 0 || opponent_profiles == 0)
    throw Malformed("restriction sides must be nonempty");
  PlayerRestriction view;
  for_each_submask(own_actions, [&](Mask m) {
    if (m != 0) view.own.push_back(m);
  });
  for_each_submask(opponent_profiles, [&](Mask m) {
    if (m != 0) view.opponents.push_back(static_cast<std::size_t>(m) - 1);
  });
  return view;
}

/// Evidence that a subset is strictly dominated: a member action and a
/// mixture of allowed singletons that strictly beats it against every
/// opponent tuple in the restriction, with the per-tuple margins.
struct DominanceCertificate {
  int member = -1;
  std::vector<Rational> mixture;  // over player i's base actions
  Rational slack;                 // the smallest margin; strictly positive
  std::vector<Rational> margins;  // parallel to the restriction's opponents
};

namespace detail {

/// Best strict margin of a singleton-mixture over action `a`, with the
/// mixture drawn from the restriction's surviving singletons. Dominance is
/// decided by the sign of the exact LP optimum; no epsilon anywhere.
inline std::optional<DominanceCertificate> element_dominance(const ExtendedGame& ext,
                                                             std::size_t i, int a,
                                                             const PlayerRestriction& restr) {
  std::vector<int> singles;
  for (Mask m : restr.own)
    if ((m & (m - 1)) == 0) singles.push_back(std::countr_zero(m));
  if (singles.empty()) return std::nullopt;

  lp::LinearProgram prog;
  for (int b : singles) prog.variables.push_back("w_" + ext.base().action_label(i, b));
  const std::size_t t_var = prog.add_variable("t");
  prog.objective.assign(prog.arity(), Rational(0));
  prog.objective[t_var] = 1;
  prog.bounds.resize(prog.arity());
  for (std::size_t k = 0; k < singles.size(); ++k) prog.bounds[k].lower = Rational(0);

  for (std::size_t tuple : restr.opponents) {
    std::vector<Rational> row(prog.arity(), Rational(0));
    for (std::size_t k = 0; k < singles.size(); ++k)
      row[k] = ext.utility(i, Mask{1} << singles[k], tuple);
    row[t_var] = -1;
    prog.add_constraint(std::move(row), lp::Relation::GreaterEq,
                        ext.utility(i, Mask{1} << a, tuple));
  }
  std::vector<Rational> simplex_row(prog.arity(), Rational(0));
  for (std::size_t k = 0; k < singles.size(); ++k) simplex_row[k] = 1;
  prog.add_constraint(std::move(simplex_row), lp::Relation::Equal, Rational(1));

  const lp::Result res = lp::solve(prog);
  if (res.status != lp::Status::Optimal)
    throw InternalError("dominance program must have a bounded optimum");
  if (res.objective_value <= 0) return std::nullopt;

  DominanceCertificate cert;
  cert.member = a;
  cert.mixture.assign(ext.base().action_count(i), Rational(0));
  for (std::size_t k = 0; k < singles.size(); ++k)
    cert.mixture[static_cast<std::size_t>(singles[k])] = res.solution[k];
  cert.slack = res.objective_value;
  for (std::size_t tuple : restr.opponents) {
    Rational margin = -ext.utility(i, Mask{1} << a, tuple);
    for (std::size_t k = 0; k < singles.size(); ++k)
      margin += res.solution[k] * ext.utility(i, Mask{1} << singles[k], tuple);
    cert.margins.push_back(std::move(margin));
  }
  return cert;
}

}  // namespace detail

/// Whether the candidate subset is strictly dominated in the restriction:
/// some member action is strictly beaten by a mixture of the restriction's
/// singletons against every opponent tuple. Members are tried in canonical
/// order, so certificates are deterministic.
inline std::optional<DominanceCertificate> is_strictly_dominated(const ExtendedGame& ext,
                                                                 std::size_t i, Mask candidate,
                                                                 const PlayerRestriction& restr) {
  if (std::find(restr.own.begin(), restr.own.end(), candidate) == restr.own.end())
    throw NotInRestriction("candidate subset is not in the restriction");
  if (restr.opponents.empty())
    throw EmptyOpponentRestriction("dominance needs a nonempty opponent restriction");
  for (int a : bits_of(candidate))
    if (auto cert = detail::element_dominance(ext, i, a, restr)) return cert;
  return std::nullopt;
}

/// How the elimination operator treats candidates outside the current
/// restriction. Member keeps only undominated members of the restriction,
/// which preserves levelwise shrinkage. Literal ranges candidates over all
/// extended actions, so anything outside the restriction is vacuously
/// undominated and reappears; kept for comparison runs.
enum class EliminationReading { Member, Literal };

struct EliminationRecord {
  std::size_t player;
  Mask subset;
  DominanceCertificate certificate;
};

struct EliminationTrace {
  std::vector<ExtendedFamilies> levels;                       // levels[k] = U^k
  std::vector<std::vector<EliminationRecord>> eliminations;   // [k] = removed going to U^{k+1}
  std::optional<std::size_t> fixed_point_level;               // first k with U^{k+1} = U^k
  std::optional<std::size_t> cycle_start;                     // literal reading only

  const ExtendedFamilies& final_families() const { return levels.back(); }
};

/// One simultaneous elimination round. Every player's survivors are computed
/// from the same input restriction, so the result does not depend on player
/// order.
inline ExtendedFamilies eliminate_step(const ExtendedGame& ext, const ExtendedFamilies& fam,
                                       EliminationReading reading = EliminationReading::Member,
                                       std::vector<EliminationRecord>* records = nullptr) {
  const std::size_t players = ext.base().player_count();
  ExtendedFamilies next(players);
  for (std::size_t i = 0; i < players; ++i) {
    const PlayerRestriction view = restriction_view(ext, fam, i);
    if (view.opponents.empty()) {
      // Nothing to dominate against; everything in scope survives.
      next[i] = (reading == EliminationReading::Member) ? fam[i] : full_families(ext)[i];
      continue;
    }
    // Dominance of a subset is witnessed through one of its members, so
    // member verdicts are shared across candidates.
    std::map<int, std::optional<DominanceCertificate>> member_cache;
    auto dominated = [&](Mask candidate) -> std::optional<DominanceCertificate> {
      for (int a : bits_of(candidate)) {
        auto it = member_cache.find(a);
        if (it == member_cache.end())
          it = member_cache.emplace(a, detail::element_dominance(ext, i, a, view)).first;
        if (it->second) return it->second;
      }
      return std::nullopt;
    };
    if (reading == EliminationReading::Member) {
      for (Mask m : fam[i]) {
        if (auto cert = dominated(m)) {
          if (records) records->push_back({i, m, *cert});
        } else {
          next[i].push_back(m);
        }
      }
    } else {
      for (Mask m = 1; m <= static_cast<Mask>(ext.own_subset_count(i)); ++m) {
        const bool inside = std::find(fam[i].begin(), fam[i].end(), m) != fam[i].end();
        if (!inside) {
          next[i].push_back(m);  // vacuously undominated under the literal reading
          continue;
        }
        if (auto cert = dominated(m)) {
          if (records) records->push_back({i, m, *cert});
        } else {
          next[i].push_back(m);
        }
      }
    }
  }
  return next;
}

/// Iterated elimination from the full extended game to its fixed point (or,
/// under the literal reading, to the first revisited state).
inline EliminationTrace iesda(const ExtendedGame& ext,
                              EliminationReading reading = EliminationReading::Member,
                              std::size_t max_levels = 1000) {
  EliminationTrace trace;
  trace.levels.push_back(full_families(ext));
  for (std::size_t k = 0; k < max_levels; ++k) {
    std::vector<EliminationRecord> records;
    ExtendedFamilies next = eliminate_step(ext, trace.levels.back(), reading, &records);
    if (next == trace.levels.back()) {
      trace.fixed_point_level = trace.levels.size() - 1;
      return trace;
    }
    for (std::size_t prev = 0; prev + 1 < trace.levels.size(); ++prev) {
      if (trace.levels[prev] == next) {
        trace.cycle_start = prev;
        trace.eliminations.push_back(std::move(records));
        trace.levels.push_back(std::move(next));
        return trace;
      }
    }
    trace.eliminations.push_back(std::move(records));
    trace.levels.push_back(std::move(next));
  }
  throw InternalError("elimination failed to settle within the level cap");
}

/// Surviving base actions at a level, plus any mismatches between projection
/// membership and singleton survival (there should never be any).
struct ActionProjection {
  std::vector<Mask> actions;                 // per player, over base actions
  std::vector<std::string> singleton_mismatches;
};

inline constexpr std::size_t kLimitLevel = static_cast<std::size_t>(-1);

inline ActionProjection project_to_actions(const ExtendedGame& ext, const EliminationTrace& trace,
                                           std::size_t level) {
  if (level == kLimitLevel) level = trace.levels.size() - 1;
  if (level >= trace.levels.size())
    throw LevelOutOfRange("trace has " + std::to_string(trace.levels.size()) + " levels");
  const ExtendedFamilies& fam = trace.levels[level];
  ActionProjection out;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    Mask actions = 0;
    for (Mask m : fam[i]) actions |= m;
    out.actions.push_back(actions);
    for (int a = 0; a < static_cast<int>(ext.base().action_count(i)); ++a) {
      const bool in_union = (actions >> a) & 1;
      const bool singleton_alive =
          std::find(fam[i].begin(), fam[i].end(), Mask{1} << a) != fam[i].end();
      if (in_union != singleton_alive)
        out.singleton_mismatches.push_back(
            "player " + ext.base().player_name(i) + " action " + ext.base().action_label(i, a) +
            (in_union ? " appears only inside larger subsets" : " survives only as a singleton") +
            " at level " + std::to_string(level));
    }
  }
  return out;
}

/// First level at which the member and literal readings of the elimination
/// operator disagree, if any.
inline std::optional<std::size_t> first_reading_disagreement(const ExtendedGame& ext,
                                                             std::size_t max_levels = 50) {
  const EliminationTrace member = iesda(ext, EliminationReading::Member, max_levels);
  const EliminationTrace literal = iesda(ext, EliminationReading::Literal, max_levels);
  const std::size_t upto = std::max(member.levels.size(), literal.levels.size());
  for (std::size_t k = 0; k < upto; ++k) {
    // Past its settle point each trace repeats its last state.
    const ExtendedFamilies& a =
        member.levels[std::min(k, member.levels.size() - 1)];
    const ExtendedFamilies& b =
        literal.levels[std::min(k, literal.levels.size() - 1)];
    if (a != b) return k;
  }
  return std::nullopt;
}

/// Structured text export of a trace, stable for regression diffs.
inline std::string format_trace(const ExtendedGame& ext, const EliminationTrace& trace) {
  std::ostringstream out;
  out << "route: extended\n";
  for (std::size_t k = 0; k < trace.levels.size(); ++k) {
    out << "level " << k << ":\n";
    for (std::size_t i = 0; i < trace.levels[k].size(); ++i) {
      out << "  " << ext.base().player_name(i) << ":";
      for (Mask m : trace.levels[k][i]) out << " " << ext.own_subset_label(i, m);
      out << "\n";
    }
    if (k < trace.eliminations.size()) {
      for (const auto& rec : trace.eliminations[k]) {
        out << "  eliminate " << ext.base().player_name(rec.player) << " "
            << ext.own_subset_label(rec.player, rec.subset) << ": member "
            << ext.base().action_label(rec.player, rec.certificate.member) << ", mixture";
        for (std::size_t a = 0; a < rec.certificate.mixture.size(); ++a)
          if (rec.certificate.mixture[a] != 0)
            out << " " << ext.base().action_label(rec.player, static_cast<int>(a)) << "="
                << format_rational(rec.certificate.mixture[a]);
        out << ", slack " << format_rational(rec.certificate.slack) << "\n";
      }
    }
  }
  if (trace.fixed_point_level)
    out << "fixed point: level " << *trace.fixed_point_level << "\n";
  if (trace.cycle_start) out << "cycle back to: level " << *trace.cycle_start << "\n";
  return out.str();
}

}  // namespace chq
