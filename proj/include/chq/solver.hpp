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
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "chq/capacity.hpp"
#include "chq/errors.hpp"
#include "chq/game.hpp"
#include "chq/lp.hpp"
#include "chq/polytope.hpp"
#include "chq/state_space.hpp"

namespace chq {

/// Per-player capacity restrictions: a shape and an optional non-additivity
/// requirement (genuine strategic ambiguity). Additive plus non-additive is
/// contradictory and rejected at parse.
struct AttitudeRestriction {
  std::vector<Shape> shapes;
  std::vector<bool> non_additive;

  static AttitudeRestriction uniform(Shape shape, bool na, std::size_t players) {
    if (shape == Shape::Additive && na)
      throw ParseError("additive capacities cannot be non-additive");
    return {std::vector<Shape>(players, shape), std::vector<bool>(players, na)};
  }

  /// Accepts "add", "conv", "conc", "none", optionally "+na" ("na" alone
  /// means unrestricted shape with non-additivity), or a comma-separated
  /// per-player list of such terms.
  static AttitudeRestriction parse(const std::string& text, std::size_t players) {
    std::vector<std::string> terms;
    std::string cur;
    for (char c : text) {
      if (c == ',') {
        terms.push_back(cur);
        cur.clear();
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        cur += c;
      }
    }
    terms.push_back(cur);
    if (terms.size() == 1) terms.assign(players, terms[0]);
    if (terms.size() != players)
      throw ParseError("restriction lists " + std::to_string(terms.size()) + " players, game has " +
                       std::to_string(players));
    AttitudeRestriction out;
    for (const std::string& term : terms) {
      std::string shape_text = term;
      bool na = false;
      if (const auto plus = term.find('+'); plus != std::string::npos) {
        shape_text = term.substr(0, plus);
        if (term.substr(plus + 1) != "na")
          throw ParseError("unknown qualifier in restriction '" + term + "'");
        na = true;
      }
      Shape shape;
      if (shape_text == "add") shape = Shape::Additive;
      else if (shape_text == "conv") shape = Shape::Convex;
      else if (shape_text == "conc") shape = Shape::Concave;
      else if (shape_text == "none" || shape_text == "unrestricted" || shape_text.empty())
        shape = Shape::Unrestricted;
      else if (shape_text == "na" && !na) {
        shape = Shape::Unrestricted;
        na = true;
      } else
        throw ParseError("unknown restriction '" + term + "'");
      if (shape == Shape::Additive && na)
        throw ParseError("restriction '" + term + "' demands additive and non-additive at once");
      out.shapes.push_back(shape);
      out.non_additive.push_back(na);
    }
    return out;
  }

  bool unrestricted() const {
    for (std::size_t i = 0; i < shapes.size(); ++i)
      if (shapes[i] != Shape::Unrestricted || non_additive[i]) return false;
    return true;
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      if (i) out += ",";
      out += shape_name(shapes[i]);
      if (non_additive[i]) out += "+na";
    }
    return out;
  }
};

namespace detail {

/// Disjoint nonempty subset pairs (E, F), E before F in canonical order.
inline std::vector<std::pair<Mask, Mask>> disjoint_pairs(Mask full) {
  std::vector<std::pair<Mask, Mask>> pairs;
  for (Mask e = 1; e <= full; ++e)
    for (Mask f = e + 1; f <= full; ++f)
      if ((e & f) == 0) pairs.emplace_back(e, f);
  return pairs;
}

}  // namespace detail

/// A capacity in the polytope making action a weakly best, or nothing.
///
/// Without the non-additivity requirement this is one exact feasibility
/// solve. With it, the additivity gap value(E) + value(F) - value(E ∪ F) is
/// maximized and minimized over the closed polytope for every disjoint pair;
/// a nonzero attained optimum is exact evidence, and all-zero optima prove
/// the feasible set lies inside the additive subspace.
inline std::optional<Capacity> exists_best_response_capacity(const StrategicGame& game,
                                                             std::size_t i, int a,
                                                             const CapacityPolytope& poly,
                                                             bool non_additive) {
  CapacityPolytope work = poly;
  add_best_response_rows(work, game, i, a);
  const std::size_t arity = work.program.arity();

  if (!non_additive) {
    auto feasible = optimize_over(work, std::vector<Rational>(arity, Rational(0)), true);
    if (!feasible) return std::nullopt;
    return std::move(feasible->second);
  }

  bool any_feasible = false;
  for (const auto& [e, f] : detail::disjoint_pairs(work.space.full_mask())) {
    std::vector<Rational> gap(arity, Rational(0));
    gap[e] += 1;
    gap[f] += 1;
    gap[e | f] -= 1;
    for (bool maximize : {true, false}) {
      auto opt = optimize_over(work, gap, maximize);
      if (!opt) return std::nullopt;  // polytope empty
      any_feasible = true;
      if (opt->first != 0) return std::move(opt->second);
    }
  }
  if (!any_feasible) return std::nullopt;
  return std::nullopt;  // feasible but entirely additive
}

/// The level-by-level survivor report of the direct route, with a witness
/// capacity per surviving action per level.
struct PlayerLevelReport {
  Mask survivors = 0;
  std::map<int, Capacity> witnesses;
};

struct SolveReport {
  AttitudeRestriction restriction;
  std::vector<std::vector<PlayerLevelReport>> levels;  // levels[k-1][player]
  std::size_t fixed_point_level = 0;                   // 1-based; survivors repeat from here on
  std::vector<std::optional<std::size_t>> emptied_at;  // per player, 1-based level

  Mask limit(std::size_t i) const { return levels.back()[i].survivors; }
  const Capacity& limit_witness(std::size_t i, int a) const {
    return levels.back()[i].witnesses.at(a);
  }
  bool any_empty() const {
    for (const auto& e : emptied_at)
      if (e) return true;
    return false;
  }
};

struct SolveOptions {
  std::size_t profile_cap = 5;  // opponent profiles per player for the direct route
  std::size_t level_cap = 1000;
};

/// Mask of opponent profiles whose every component survives.
inline Mask surviving_profile_mask(const StrategicGame& game, std::size_t i,
                                   const std::vector<Mask>& action_sets) {
  Mask out = 0;
  for (std::size_t idx = 0; idx < game.opponent_profile_count(i); ++idx) {
    const std::vector<int> opp = game.opponent_profile(i, idx);
    bool alive = true;
    std::size_t k = 0;
    for (std::size_t j = 0; j < game.player_count() && alive; ++j) {
      if (j == i) continue;
      alive = (action_sets[j] >> opp[k++]) & 1;
    }
    if (alive) out |= Mask{1} << idx;
  }
  return out;
}

/// The direct route: iterate per-level capacity polytopes with belief in the
/// previous survivors, keeping the actions that admit a best-response
/// witness. Stops at the first repeated survivor profile; belief constraints
/// depend only on survivor sets, so repetition is a fixed point. Once any
/// player's set is empty, belief in it is impossible and every set is empty
/// from the next level on (reachable only under non-additivity).
inline SolveReport choquet_rationalizable(const StrategicGame& game,
                                          const AttitudeRestriction& restriction,
                                          const SolveOptions& options = {}) {
  const std::size_t players = game.player_count();
  if (restriction.shapes.size() != players)
    throw Malformed("restriction arity does not match the game");
  for (std::size_t i = 0; i < players; ++i)
    if (game.opponent_profile_count(i) > options.profile_cap)
      throw SizeCap("player " + game.player_name(i) + " faces " +
                    std::to_string(game.opponent_profile_count(i)) +
                    " opponent profiles; the direct-route cap is " +
                    std::to_string(options.profile_cap));

  SolveReport report;
  report.restriction = restriction;
  report.emptied_at.assign(players, std::nullopt);

  std::vector<Mask> previous(players);
  for (std::size_t i = 0; i < players; ++i)
    previous[i] = static_cast<Mask>((std::size_t{1} << game.action_count(i)) - 1);

  for (std::size_t level = 1; level <= options.level_cap; ++level) {
    std::vector<PlayerLevelReport> row(players);
    for (std::size_t i = 0; i < players; ++i) {
      bool opponents_alive = true;
      for (std::size_t j = 0; j < players; ++j)
        if (j != i && previous[j] == 0) opponents_alive = false;
      if (!opponents_alive) {
        row[i].survivors = 0;
        continue;
      }
      const Mask believed = surviving_profile_mask(game, i, previous);
      const CapacityPolytope poly =
          build_polytope(game, i, restriction.shapes[i], believed);
      for (int a = 0; a < static_cast<int>(game.action_count(i)); ++a) {
        auto witness =
            exists_best_response_capacity(game, i, a, poly, restriction.non_additive[i]);
        if (witness) {
          row[i].survivors |= Mask{1} << a;
          row[i].witnesses.emplace(a, std::move(*witness));
        }
      }
    }
    std::vector<Mask> current(players);
    for (std::size_t i = 0; i < players; ++i) {
      current[i] = row[i].survivors;
      if (current[i] == 0 && !report.emptied_at[i]) report.emptied_at[i] = level;
    }
    report.levels.push_back(std::move(row));
    if (current == previous) {
      report.fixed_point_level = level - 1;
      return report;
    }
    previous = current;
  }
  throw InternalError("survivor sets failed to settle within the level cap");
}

/// Checks the defining property of the self-supporting action-set profile:
/// every member action has a witness capacity that believes the candidate
/// opponent sets and makes it best. Maximality additionally requires that no
/// proper product superset passes the property; the computed limit is the
/// largest such profile, so this is exhaustive on desk-scale games.
struct FixedPointCheck {
  bool property = false;
  bool maximal = false;
  bool ok() const { return property && maximal; }
};

namespace detail {

inline bool self_supporting(const StrategicGame& game, const std::vector<Mask>& candidate) {
  const std::size_t players = game.player_count();
  bool all_empty = true;
  for (Mask m : candidate) all_empty = all_empty && m == 0;
  if (all_empty) return true;  // vacuously
  for (std::size_t i = 0; i < players; ++i) {
    if (candidate[i] == 0) continue;
    bool opponents_alive = true;
    for (std::size_t j = 0; j < players; ++j)
      if (j != i && candidate[j] == 0) opponents_alive = false;
    if (!opponents_alive) return false;  // members cannot believe an empty set
    const Mask believed = surviving_profile_mask(game, i, candidate);
    const CapacityPolytope poly = build_polytope(game, i, Shape::Unrestricted, believed);
    for (int a : bits_of(candidate[i]))
      if (!exists_best_response_capacity(game, i, a, poly, false)) return false;
  }
  return true;
}

}  // namespace detail

inline FixedPointCheck verify_fixed_point(const StrategicGame& game,
                                          const std::vector<Mask>& candidate,
                                          std::size_t profile_cap = 5) {
  const std::size_t players = game.player_count();
  if (candidate.size() != players) throw Malformed("candidate arity mismatch");
  for (std::size_t i = 0; i < players; ++i)
    if (game.opponent_profile_count(i) > profile_cap)
      throw SizeCap("player " + game.player_name(i) + " faces " +
                    std::to_string(game.opponent_profile_count(i)) +
                    " opponent profiles; the verification cap is " +
                    std::to_string(profile_cap));
  FixedPointCheck check;
  check.property = detail::self_supporting(game, candidate);
  check.maximal = true;
  // Enumerate proper product supersets.
  std::vector<Mask> fulls(players);
  for (std::size_t i = 0; i < players; ++i)
    fulls[i] = static_cast<Mask>((std::size_t{1} << game.action_count(i)) - 1);
  std::vector<Mask> super(players);
  std::function<void(std::size_t)> spin = [&](std::size_t i) {
    if (!check.maximal) return;
    if (i == players) {
      if (super == candidate) return;
      if (detail::self_supporting(game, super)) check.maximal = false;
      return;
    }
    const Mask extra = fulls[i] & ~candidate[i];
    for_each_submask(extra, [&](Mask add) {
      super[i] = candidate[i] | add;
      spin(i + 1);
    });
  };
  spin(0);
  return check;
}

// ---------------------------------------------------------------------------
// Classical expected-utility route: iterated strict dominance by mixed
// actions in the base game. An independent cross-check for the additive
// restriction, sharing nothing with capacity polytopes.
// ---------------------------------------------------------------------------

struct ClassicalReport {
  std::vector<std::vector<Mask>> levels;  // levels[k-1][player]
  Mask limit(std::size_t i) const { return levels.back()[i]; }
};

namespace detail {

inline bool eu_dominated(const StrategicGame& game, std::size_t i, int a, Mask opponent_mask) {
  lp::LinearProgram prog;
  const std::size_t actions = game.action_count(i);
  for (std::size_t b = 0; b < actions; ++b) prog.variables.push_back("w" + std::to_string(b));
  const std::size_t t_var = prog.add_variable("t");
  prog.objective.assign(prog.arity(), Rational(0));
  prog.objective[t_var] = 1;
  prog.bounds.resize(prog.arity());
  for (std::size_t b = 0; b < actions; ++b) prog.bounds[b].lower = Rational(0);
  for (int idx : bits_of(opponent_mask)) {
    std::vector<Rational> row(prog.arity(), Rational(0));
    for (std::size_t b = 0; b < actions; ++b)
      row[b] = game.payoff(i, game.full_rank(i, static_cast<int>(b), idx));
    row[t_var] = -1;
    prog.add_constraint(std::move(row), lp::Relation::GreaterEq,
                        game.payoff(i, game.full_rank(i, a, idx)));
  }
  std::vector<Rational> simplex_row(prog.arity(), Rational(0));
  for (std::size_t b = 0; b < actions; ++b) simplex_row[b] = 1;
  prog.add_constraint(std::move(simplex_row), lp::Relation::Equal, Rational(1));
  const lp::Result res = lp::solve(prog);
  if (res.status != lp::Status::Optimal)
    throw InternalError("dominance program must have a bounded optimum");
  return res.objective_value > 0;
}

}  // namespace detail

inline ClassicalReport classical_rationalizable(const StrategicGame& game,
                                                std::size_t level_cap = 1000) {
  const std::size_t players = game.player_count();
  ClassicalReport report;
  std::vector<Mask> previous(players);
  for (std::size_t i = 0; i < players; ++i)
    previous[i] = static_cast<Mask>((std::size_t{1} << game.action_count(i)) - 1);
  for (std::size_t level = 1; level <= level_cap; ++level) {
    std::vector<Mask> current(players, 0);
    for (std::size_t i = 0; i < players; ++i) {
      const Mask opp = surviving_profile_mask(game, i, previous);
      for (int a = 0; a < static_cast<int>(game.action_count(i)); ++a)
        if (!detail::eu_dominated(game, i, a, opp)) current[i] |= Mask{1} << a;
    }
    report.levels.push_back(current);
    if (current == previous) return report;
    previous = current;
  }
  throw InternalError("classical elimination failed to settle");
}

/// Structured text export of a solve report, stable for regression diffs.
inline std::string format_report(const StrategicGame& game, const SolveReport& report) {
  std::ostringstream out;
  out << "route: direct\n";
  out << "restriction: " << report.restriction.to_string() << "\n";
  for (std::size_t k = 0; k < report.levels.size(); ++k) {
    out << "level " << (k + 1) << ":\n";
    for (std::size_t i = 0; i < report.levels[k].size(); ++i) {
      const auto& entry = report.levels[k][i];
      out << "  " << game.player_name(i) << ":";
      for (int a : bits_of(entry.survivors)) out << " " << game.action_label(i, a);
      if (entry.survivors == 0) out << " -";
      out << "\n";
      for (const auto& [a, witness] : entry.witnesses) {
        out << "  witness " << game.action_label(i, a) << ":\n";
        std::istringstream lines(format_capacity(witness));
        std::string line;
        while (std::getline(lines, line)) out << "    " << line << "\n";
      }
    }
  }
  out << "fixed point: level " << report.fixed_point_level << "\n";
  for (std::size_t i = 0; i < game.player_count(); ++i) {
    out << "limit " << game.player_name(i) << ":";
    for (int a : bits_of(report.limit(i))) out << " " << game.action_label(i, a);
    if (report.limit(i) == 0) out << " -";
    out << "\n";
  }
  return out.str();
}

}  // namespace chq
