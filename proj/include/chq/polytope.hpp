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

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "chq/capacity.hpp"
#include "chq/errors.hpp"
#include "chq/game.hpp"
#include "chq/lp.hpp"
#include "chq/state_space.hpp"
#include "chq/subset.hpp"

namespace chq {

/// Capacity shape restrictions. Convex capacities model ambiguity aversion,
/// concave ones ambiguity love, additive ones ambiguity neutrality.
enum class Shape { Unrestricted, Convex, Concave, Additive };

inline std::string shape_name(Shape s) {
  switch (s) {
    case Shape::Unrestricted: return "none";
    case Shape::Convex: return "conv";
    case Shape::Concave: return "conc";
    case Shape::Additive: return "add";
  }
  return "?";
}

/// The linear form of the Choquet integral of a fixed act over the subset
/// variables v(S). The act's level-set order depends only on its own payoffs,
/// so the cumulative-set coefficients are constants: best-response conditions
/// stay linear in the capacity.
inline std::vector<Rational> ceu_linear_form(const SimpleAct& act) {
  std::map<Rational, Mask, std::greater<Rational>> levels;
  for (std::size_t s = 0; s < act.space().size(); ++s)
    levels[act.payoff(static_cast<int>(s))] |= Mask{1} << s;
  std::vector<Rational> coeffs(act.space().subset_count(), Rational(0));
  Mask cumulative = 0;
  const Rational* previous_value = nullptr;
  Mask previous_mask = 0;
  for (const auto& [value, mask] : levels) {
    if (previous_value != nullptr) coeffs[previous_mask] += *previous_value - value;
    cumulative |= mask;
    previous_value = &value;
    previous_mask = cumulative;
  }
  if (previous_value != nullptr) coeffs[previous_mask] += *previous_value;
  return coeffs;
}

/// The linear system cutting out a set of capacities on the opponent-profile
/// space: normalization equalities, covering monotonicity inequalities,
/// belief equalities for the survivor set, and the shape inequalities.
/// Variable k of the program is the capacity value of subset mask k.
struct CapacityPolytope {
  StateSpace space;
  Mask survivors = 0;
  Shape shape = Shape::Unrestricted;
  lp::LinearProgram program;
};

inline CapacityPolytope build_polytope(const StateSpace& space, Shape shape, Mask survivors) {
  const Mask full = space.full_mask();
  if (survivors == 0) throw EmptySurvivorSet("no capacity can believe the empty set");
  if (!subset_of(survivors, full)) throw Malformed("survivor set outside the state space");

  CapacityPolytope poly{space, survivors, shape, {}};
  lp::LinearProgram& prog = poly.program;
  for (Mask m = 0; m <= full; ++m) {
    prog.variables.push_back("v" + space.subset_label(m));
    prog.bounds.push_back({Rational(0), Rational(1)});
  }
  const std::size_t arity = prog.arity();
  auto row = [&]() { return std::vector<Rational>(arity, Rational(0)); };

  {
    auto empty_row = row();
    empty_row[0] = 1;
    prog.add_constraint(std::move(empty_row), lp::Relation::Equal, Rational(0));
    auto full_row = row();
    full_row[full] = 1;
    prog.add_constraint(std::move(full_row), lp::Relation::Equal, Rational(1));
  }

  for (Mask s = 0; s <= full; ++s) {
    for (int t = 0; t < static_cast<int>(space.size()); ++t) {
      const Mask bit = Mask{1} << t;
      if (s & bit) continue;
      auto r = row();
      r[s | bit] = 1;
      r[s] = -1;
      prog.add_constraint(std::move(r), lp::Relation::GreaterEq, Rational(0));
    }
  }

  if (survivors != full) {
    const Mask comp = full & ~survivors;
    for_each_submask(survivors, [&](Mask f) {
      if ((comp | f) == f) return;
      auto r = row();
      r[comp | f] += 1;
      r[f] -= 1;
      prog.add_constraint(std::move(r), lp::Relation::Equal, Rational(0));
    });
  }

  if (shape == Shape::Convex || shape == Shape::Concave) {
    for (Mask e = 1; e < full; ++e) {
      for (Mask f = e + 1; f < full; ++f) {
        if (subset_of(e, f) || subset_of(f, e)) continue;  // trivially tight
        auto r = row();
        r[e | f] += 1;
        r[e & f] += 1;
        r[e] -= 1;
        r[f] -= 1;
        // value(E∪F) + value(E∩F) - value(E) - value(F), signed by shape.
        prog.add_constraint(std::move(r),
                            shape == Shape::Convex ? lp::Relation::GreaterEq : lp::Relation::LessEq,
                            Rational(0));
      }
    }
  } else if (shape == Shape::Additive) {
    for (Mask s = 0; s <= full; ++s) {
      if (popcount(s) < 2) continue;
      auto r = row();
      r[s] = 1;
      for (int b : bits_of(s)) r[Mask{1} << b] -= 1;
      prog.add_constraint(std::move(r), lp::Relation::Equal, Rational(0));
    }
  }
  return poly;
}

inline CapacityPolytope build_polytope(const StrategicGame& game, std::size_t i, Shape shape,
                                       Mask survivors) {
  return build_polytope(game.opponent_space(i), shape, survivors);
}

/// Appends the weak best-response rows for action a: its integral is at least
/// every rival's, expressed through the fixed level-set coefficients.
inline void add_best_response_rows(CapacityPolytope& poly, const StrategicGame& game,
                                   std::size_t i, int a) {
  const std::vector<Rational> own = ceu_linear_form(act_of(game, i, a));
  for (int b = 0; b < static_cast<int>(game.action_count(i)); ++b) {
    if (b == a) continue;
    std::vector<Rational> r = own;
    const std::vector<Rational> rival = ceu_linear_form(act_of(game, i, b));
    for (std::size_t m = 0; m < r.size(); ++m) r[m] -= rival[m];
    poly.program.add_constraint(std::move(r), lp::Relation::GreaterEq, Rational(0));
  }
}

/// Exact extremum of a linear objective over the polytope (with any rows the
/// caller added). Returns nothing when the polytope is empty.
inline std::optional<std::pair<Rational, Capacity>> optimize_over(const CapacityPolytope& poly,
                                                                  std::vector<Rational> objective,
                                                                  bool maximize) {
  lp::LinearProgram prog = poly.program;
  prog.objective = std::move(objective);
  prog.maximize = maximize;
  const lp::Result res = lp::solve(prog);
  if (res.status == lp::Status::Infeasible) return std::nullopt;
  if (res.status != lp::Status::Optimal)
    throw InternalError("capacity polytopes are bounded; the solve cannot be unbounded");
  return std::make_pair(res.objective_value,
                        make_capacity(poly.space, std::vector<Rational>(res.solution)));
}

}  // namespace chq
