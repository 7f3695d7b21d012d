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
#include <deque>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "chq/capacity.hpp"
#include "chq/extended_game.hpp"
#include "chq/game.hpp"
#include "chq/grid_oracle.hpp"
#include "chq/polytope.hpp"
#include "chq/random.hpp"
#include "chq/solver.hpp"
#include "chq/type_space.hpp"

namespace chq {

/// A random finite type space over a game: one to three types per player,
/// random strategies, and random capacities over opponents' type profiles.
inline CapacityTypeSpace random_type_space(const StrategicGame& game, Rng& rng,
                                           int max_types = 3) {
  const std::size_t players = game.player_count();
  std::vector<std::vector<std::string>> types(players);
  std::vector<std::vector<int>> strategy(players);
  for (std::size_t i = 0; i < players; ++i) {
    const int count = static_cast<int>(draw_int(rng, 1, max_types));
    for (int t = 0; t < count; ++t) {
      types[i].push_back("t" + std::to_string(i) + std::to_string(t));
      strategy[i].push_back(
          static_cast<int>(draw_int(rng, 0, static_cast<int>(game.action_count(i)) - 1)));
    }
  }
  std::vector<std::vector<Capacity>> belief(players);
  for (std::size_t i = 0; i < players; ++i) {
    std::vector<std::size_t> radices;
    for (std::size_t j = 0; j < players; ++j)
      if (j != i) radices.push_back(types[j].size());
    std::size_t tuples = 1;
    for (std::size_t r : radices) tuples *= r;
    std::vector<std::string> labels;
    for (std::size_t idx = 0; idx < tuples; ++idx) {
      std::size_t rest = idx;
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
    const StateSpace space(labels);
    for (std::size_t t = 0; t < types[i].size(); ++t)
      belief[i].push_back(random_capacity(space, rng));
  }
  return CapacityTypeSpace(game, std::move(types), std::move(strategy), std::move(belief));
}

/// Tallied outcome of one property over a corpus run.
struct PropertyOutcome {
  std::string name;
  long checks = 0;
  long failures = 0;
  std::string first_failure;

  void pass() { ++checks; }
  void fail(const std::string& description) {
    ++checks;
    if (failures == 0) first_failure = description;
    ++failures;
  }
  void check(bool ok, const std::string& description) {
    if (ok) pass();
    else fail(description);
  }
};

class PropertyLedger {
 public:
  // Stable references: callers hold on to outcomes across later insertions.
  PropertyOutcome& at(const std::string& name) {
    for (auto& o : outcomes_)
      if (o.name == name) return o;
    outcomes_.push_back({name});
    return outcomes_.back();
  }
  const std::deque<PropertyOutcome>& outcomes() const { return outcomes_; }
  bool all_passed() const {
    for (const auto& o : outcomes_)
      if (o.failures > 0) return false;
    return true;
  }

 private:
  std::deque<PropertyOutcome> outcomes_;
};

struct CorpusOptions {
  long games = 200;
  std::uint64_t seed = 42;
  GameParams game_params{};        // 2-player, 2..3 actions, payoffs in [-5, 5]
  bool check_fixed_point = true;   // exhaustive superset search per game
  int type_spaces_per_game = 1;
  long capacities = 1000;
  int capacity_max_states = 4;
  int oracle_denominator = 16;     // escalates fourfold on a coarse-grid miss
};

namespace detail {

inline std::string masks_to_text(const StrategicGame& game, const std::vector<Mask>& sets) {
  std::string out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (i) out += " | ";
    out += game.player_name(i) + ":";
    for (int a : bits_of(sets[i])) out += " " + game.action_label(i, a);
    if (sets[i] == 0) out += " -";
  }
  return out;
}

inline std::vector<Mask> report_level(const SolveReport& report, std::size_t k) {
  const auto& row = report.levels[std::min(k, report.levels.size() - 1)];
  std::vector<Mask> out(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) out[i] = row[i].survivors;
  return out;
}

}  // namespace detail

/// Runs the whole game-level invariant battery over seeded random games.
/// Every failure records the offending game, so counterexamples reproduce.
inline PropertyLedger run_game_corpus(const CorpusOptions& options) {
  PropertyLedger ledger;
  Rng rng(options.seed);

  for (long trial = 0; trial < options.games; ++trial) {
    const StrategicGame game = random_game(rng, options.game_params);
    const std::string tag = "game " + std::to_string(trial) + "\n" + serialize_game(game);
    const std::size_t players = game.player_count();

    const SolveReport none =
        choquet_rationalizable(game, AttitudeRestriction::uniform(Shape::Unrestricted, false, players));
    const SolveReport add =
        choquet_rationalizable(game, AttitudeRestriction::uniform(Shape::Additive, false, players));
    const SolveReport conv =
        choquet_rationalizable(game, AttitudeRestriction::uniform(Shape::Convex, false, players));
    const SolveReport conc =
        choquet_rationalizable(game, AttitudeRestriction::uniform(Shape::Concave, false, players));
    const ExtendedGame ext(game);
    const EliminationTrace trace = iesda(ext);

    // The two routes agree level by level through both fixed points.
    {
      auto& prop = ledger.at("direct and elimination routes agree levelwise");
      const std::size_t depth = std::max(none.levels.size() + 1, trace.levels.size());
      bool ok = true;
      for (std::size_t k = 1; k < depth && ok; ++k) {
        const std::vector<Mask> direct = detail::report_level(none, k - 1);
        const ActionProjection proj =
            project_to_actions(ext, trace, std::min(k, trace.levels.size() - 1));
        ok = direct == proj.actions;
      }
      prop.check(ok, tag);
    }

    // Unrestricted survivor sets are never empty.
    {
      auto& prop = ledger.at("unrestricted survivors exist at every level");
      bool ok = !none.any_empty();
      for (std::size_t i = 0; i < players; ++i) ok = ok && none.limit(i) != 0;
      prop.check(ok, tag);
    }

    // Survivor sets shrink weakly level over level, on every restriction.
    {
      auto& prop = ledger.at("direct levels shrink weakly");
      bool ok = true;
      for (const SolveReport* report : {&none, &add, &conv, &conc}) {
        for (std::size_t k = 0; k + 1 < report->levels.size(); ++k)
          for (std::size_t i = 0; i < players; ++i)
            ok = ok && subset_of(report->levels[k + 1][i].survivors,
                                 report->levels[k][i].survivors);
      }
      prop.check(ok, tag);
    }

    // Extended families shrink weakly and projections match singletons.
    {
      auto& prop = ledger.at("elimination levels shrink weakly");
      bool ok = true;
      for (std::size_t k = 0; k + 1 < trace.levels.size(); ++k)
        for (std::size_t i = 0; i < players; ++i)
          for (Mask m : trace.levels[k + 1][i])
            ok = ok && std::find(trace.levels[k][i].begin(), trace.levels[k][i].end(), m) !=
                           trace.levels[k][i].end();
      prop.check(ok, tag);

      auto& proj = ledger.at("projection membership equals singleton survival");
      bool proj_ok = true;
      for (std::size_t k = 0; k < trace.levels.size(); ++k)
        proj_ok = proj_ok && project_to_actions(ext, trace, k).singleton_mismatches.empty();
      proj.check(proj_ok, tag);
    }

    // Ambiguity love collapses to additivity; aversion can only widen.
    {
      auto& prop = ledger.at("concave equals additive inside convex at the limit");
      bool ok = true;
      for (std::size_t i = 0; i < players; ++i) {
        ok = ok && conc.limit(i) == add.limit(i);
        ok = ok && subset_of(add.limit(i), conv.limit(i));
      }
      prop.check(ok, tag);

      auto& level_prop = ledger.at("additive survivors sit inside both shaped runs levelwise");
      bool level_ok = true;
      const std::size_t depth =
          std::max({add.levels.size(), conv.levels.size(), conc.levels.size()});
      for (std::size_t k = 0; k < depth; ++k) {
        const auto a = detail::report_level(add, k);
        const auto v = detail::report_level(conv, k);
        const auto c = detail::report_level(conc, k);
        for (std::size_t i = 0; i < players; ++i)
          level_ok = level_ok && subset_of(a[i], v[i]) && subset_of(a[i], c[i]);
      }
      level_prop.check(level_ok, tag);
    }

    // The additive route reproduces the classical expected-utility route.
    {
      auto& prop = ledger.at("additive route matches classical elimination");
      const ClassicalReport classical = classical_rationalizable(game);
      bool ok = true;
      const std::size_t depth = std::max(add.levels.size(), classical.levels.size());
      for (std::size_t k = 0; k < depth; ++k) {
        const auto a = detail::report_level(add, k);
        const auto& c = classical.levels[std::min(k, classical.levels.size() - 1)];
        ok = ok && a == c;
      }
      prop.check(ok, tag);
    }

    // Witnesses really live in their polytopes and certify the argmax.
    {
      auto& prop = ledger.at("witness capacities validate and certify best responses");
      bool ok = true;
      for (const SolveReport* report : {&none, &add, &conv, &conc}) {
        std::vector<Mask> previous(players);
        for (std::size_t i = 0; i < players; ++i)
          previous[i] = static_cast<Mask>((std::size_t{1} << game.action_count(i)) - 1);
        for (std::size_t k = 0; k < report->levels.size() && ok; ++k) {
          for (std::size_t i = 0; i < players && ok; ++i) {
            const Mask believed = surviving_profile_mask(game, i, previous);
            for (const auto& [a, witness] : report->levels[k][i].witnesses) {
              ok = ok && is_believed(witness, EventSet(witness.space(), believed));
              const AttitudeClass cls = classify_attitude(witness);
              const Shape shape = report->restriction.shapes[i];
              if (shape == Shape::Convex) ok = ok && cls.convex;
              if (shape == Shape::Concave) ok = ok && cls.concave;
              if (shape == Shape::Additive) ok = ok && cls.additive();
              const std::vector<int> best = choquet_best_responses(game, i, witness);
              ok = ok && std::find(best.begin(), best.end(), a) != best.end();
            }
          }
          for (std::size_t i = 0; i < players; ++i)
            previous[i] = report->levels[k][i].survivors;
        }
      }
      prop.check(ok, tag);
    }

    // The unrestricted limit is the unique largest self-supporting profile.
    if (options.check_fixed_point) {
      auto& prop = ledger.at("the limit is the largest self-supporting product set");
      std::vector<Mask> limit(players);
      for (std::size_t i = 0; i < players; ++i) limit[i] = none.limit(i);
      const FixedPointCheck check = verify_fixed_point(game, limit);
      prop.check(check.ok(), tag);
    }

    // The constructed witness space realizes the limit exactly.
    {
      auto& prop = ledger.at("witness space realizes the limit");
      const CapacityTypeSpace space = build_witness_space(game, none);
      const EpistemicReport epi = bkcr_fixpoint(space);
      bool ok = true;
      for (std::size_t i = 0; i < players; ++i) {
        ok = ok && epi.common[i] == (Mask{1} << space.type_count(i)) - 1;
        Mask played = 0;
        for (int t : bits_of(epi.common[i])) played |= Mask{1} << space.played_action(i, t);
        ok = ok && played == none.limit(i);
      }
      prop.check(ok, tag);
    }

    // Rational play under common belief in it only produces survivors.
    {
      auto& prop = ledger.at("type-space projections stay inside the survivors");
      for (int s = 0; s < options.type_spaces_per_game; ++s) {
        const CapacityTypeSpace space = random_type_space(game, rng);
        const EpistemicReport epi = bkcr_fixpoint(space);
        bool ok = true;
        for (std::size_t k = 0; k < epi.levels.size(); ++k) {
          const std::vector<Mask> direct = detail::report_level(none, k);
          for (std::size_t i = 0; i < players; ++i)
            ok = ok && subset_of(epi.projected_actions[k][i], direct[i]);
        }
        prop.check(ok, tag + serialize_type_space(space));
      }
    }

    // On two-action games, sweep every base restriction: no best-response
    // capacity exists exactly when the singleton is strictly dominated.
    if (players == 2 && game.action_count(0) == 2 && game.action_count(1) == 2) {
      auto& prop = ledger.at("no-best-response coincides with singleton dominance");
      bool ok = true;
      std::string failure;
      for (std::size_t i = 0; i < 2 && ok; ++i) {
        for (Mask own = 1; own <= 3 && ok; ++own) {
          for (Mask opp = 1; opp <= 3 && ok; ++opp) {
            const PlayerRestriction assoc = associated_restriction(ext, i, own, opp);
            for (int a : bits_of(own)) {
              const bool dominated =
                  is_strictly_dominated(ext, i, Mask{1} << a, assoc).has_value();
              bool never =
                  grid_never_best_response(game, {i, own, opp}, a, options.oracle_denominator);
              if (never && !dominated)
                never = grid_never_best_response(game, {i, own, opp}, a,
                                                 options.oracle_denominator * 4);
              if (never != dominated) {
                ok = false;
                failure = tag + "player " + std::to_string(i) + " action " +
                          game.action_label(i, a);
                break;
              }
            }
          }
        }
      }
      prop.check(ok, failure);
    }
  }
  return ledger;
}

/// The capacity-level battery: the belief characterizations on random
/// capacities, and believed singletons forcing the degenerate measure.
inline PropertyLedger run_capacity_corpus(const CorpusOptions& options) {
  PropertyLedger ledger;
  Rng rng(options.seed + 1);

  auto& equiv = ledger.at("belief equals separability with full weight, both ways");
  auto& quant = ledger.at("belief quantified over all supersets agrees");
  auto& weight = ledger.at("believed events carry capacity one");
  for (long trial = 0; trial < options.capacities; ++trial) {
    const std::size_t n =
        static_cast<std::size_t>(draw_int(rng, 1, options.capacity_max_states));
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("s" + std::to_string(i));
    const StateSpace sp(labels);
    const Capacity cap = random_capacity(sp, rng);
    const Mask full = sp.full_mask();
    const std::string tag = "capacity\n" + format_capacity(cap);
    for (Mask e = 0; e <= full; ++e) {
      const bool believed = is_believed(cap, EventSet(sp, e));
      const bool unamb_one = is_unambiguous(cap, EventSet(sp, e)) && cap.value(e) == 1;
      const bool comp_zero =
          is_unambiguous(cap, EventSet(sp, full & ~e)) && cap.value(full & ~e) == 0;
      equiv.check(believed == unamb_one && believed == comp_zero, tag);
      bool quantified = true;
      for_each_submask(full & ~e, [&](Mask g) {
        if (!quantified) return;
        for (Mask f = 0; f <= full; ++f)
          if (cap.value(g | f) != cap.value(f)) {
            quantified = false;
            return;
          }
      });
      quant.check(believed == quantified, tag);
      if (believed) weight.check(cap.value(e) == 1, tag);
    }
  }

  auto& corner = ledger.at("believing a singleton forces the degenerate measure");
  // Exhaustive over a coarse grid on three states, then random sampling.
  {
    const StateSpace sp({"x", "y", "z"});
    std::vector<Rational> values(sp.subset_count());
    values[sp.full_mask()] = 1;
    std::function<void(Mask)> spin = [&](Mask m) {
      if (m == sp.full_mask()) {
        Capacity cap = make_capacity(sp, std::vector<Rational>(values));
        for (int s = 0; s < 3; ++s) {
          if (!is_believed(cap, EventSet(sp, Mask{1} << s))) continue;
          bool degenerate = classify_attitude(cap).additive();
          for (Mask e = 0; e <= sp.full_mask(); ++e)
            degenerate = degenerate && cap.value(e) == ((e >> s) & 1 ? 1 : 0);
          corner.check(degenerate, format_capacity(cap));
        }
        return;
      }
      Rational lo = 0;
      for (int b : bits_of(m)) {
        const Rational& below = values[m & ~(Mask{1} << b)];
        if (below > lo) lo = below;
      }
      for (int num = 0; num <= 2; ++num) {
        const Rational v(num, 2);
        if (v < lo) continue;
        values[m] = v;
        spin(m + 1);
      }
      values[m] = 0;
    };
    spin(1);
  }
  for (long trial = 0; trial < options.capacities; ++trial) {
    const StateSpace sp({"x", "y", "z"});
    const Capacity cap = random_capacity(sp, rng, 6);
    for (int s = 0; s < 3; ++s) {
      if (!is_believed(cap, EventSet(sp, Mask{1} << s))) continue;
      bool degenerate = classify_attitude(cap).additive();
      for (Mask e = 0; e <= sp.full_mask(); ++e)
        degenerate = degenerate && cap.value(e) == ((e >> s) & 1 ? 1 : 0);
      corner.check(degenerate, format_capacity(cap));
    }
  }
  return ledger;
}

inline std::string format_ledger(const PropertyLedger& ledger) {
  std::ostringstream out;
  for (const auto& o : ledger.outcomes()) {
    out << (o.failures == 0 ? "[pass] " : "[FAIL] ") << o.name << ": " << (o.checks - o.failures)
        << "/" << o.checks << "\n";
    if (o.failures > 0) out << "  first counterexample:\n" << o.first_failure << "\n";
  }
  return out.str();
}

}  // namespace chq
