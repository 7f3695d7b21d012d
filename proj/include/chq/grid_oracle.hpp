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

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chq/capacity.hpp"
#include "chq/errors.hpp"
#include "chq/game.hpp"
#include "chq/polytope.hpp"
#include "chq/state_space.hpp"
#include "chq/subset.hpp"

namespace chq {

/// A best-response witness search by exhaustive enumeration instead of linear
/// programming: the independent oracle the solver is checked against.
///
/// It enumerates every capacity whose subset values lie on the 1/denominator
/// grid, satisfies belief in the survivor set, the shape, and (optionally)
/// non-additivity by direct predicate checks, and tests best responses by
/// direct integral comparison. Belief in R forces value(S) = value(S ∩ R),
/// so the free values live on the sublattice of R; shape and non-additivity
/// reduce to the sublattice as well, which keeps the search exact.
struct GridQuery {
  std::size_t player = 0;
  int action = 0;
  Mask rivals = 0;     // own actions competed against; the action itself is implied
  Mask survivors = 0;  // opponent profiles that must be believed
  Shape shape = Shape::Unrestricted;
  bool non_additive = false;
  int denominator = 16;
};

namespace detail {

struct GridSearch {
  int r = 0;                 // sublattice ground-set size
  Mask full = 0;             // packed full mask
  std::int64_t denom = 16;
  Shape shape = Shape::Unrestricted;
  bool non_additive = false;
  // Per packed mask: covering submasks, and union-decompositions for shape
  // bounds (pairs E,F with E|F = m, E and F proper and incomparable).
  std::vector<std::vector<Mask>> covered;
  std::vector<std::vector<std::array<Mask, 3>>> decompositions;  // {e, f, e&f}
  std::vector<std::pair<Mask, Mask>> disjoint;
  // Integral forms: value numerators dotted with rational coefficients.
  std::vector<std::vector<Rational>> rival_forms;
  std::vector<Rational> own_form;
  std::vector<std::int64_t> num;  // value numerators over denom

  std::optional<std::vector<std::int64_t>> found;

  void prepare() {
    covered.assign(std::size_t{1} << r, {});
    decompositions.assign(std::size_t{1} << r, {});
    for (Mask m = 1; m <= full; ++m) {
      for (int b : bits_of(m)) covered[m].push_back(m & ~(Mask{1} << b));
      if (shape == Shape::Convex || shape == Shape::Concave) {
        for (Mask e = 1; e < m; ++e) {
          if (!subset_of(e, m)) continue;
          for (Mask f = e + 1; f < m; ++f) {
            if (!subset_of(f, m) || (e | f) != m) continue;
            if (subset_of(e, f) || subset_of(f, e)) continue;
            decompositions[m].push_back({e, f, static_cast<Mask>(e & f)});
          }
        }
      }
    }
    for (Mask e = 1; e <= full; ++e)
      for (Mask f = e + 1; f <= full; ++f)
        if ((e & f) == 0) disjoint.emplace_back(e, f);
    num.assign(std::size_t{1} << r, 0);
    num[full] = denom;
  }

  bool leaf_accepts() const {
    if (non_additive) {
      bool witnessed = false;
      for (const auto& [e, f] : disjoint) {
        if (num[e] + num[f] != num[e | f]) {
          witnessed = true;
          break;
        }
      }
      if (!witnessed) return false;
    }
    Rational own = 0;
    for (Mask m = 1; m <= full; ++m)
      if (own_form[m] != 0) own += own_form[m] * Rational(num[m], denom);
    for (const auto& rival : rival_forms) {
      Rational other = 0;
      for (Mask m = 1; m <= full; ++m)
        if (rival[m] != 0) other += rival[m] * Rational(num[m], denom);
      if (other > own) return false;
    }
    return true;
  }

  void search(Mask m) {
    if (found) return;
    std::int64_t lo = 0, hi = denom;
    for (Mask below : covered[m])
      if (num[below] > lo) lo = num[below];
    for (const auto& [e, f, meet] : decompositions[m]) {
      const std::int64_t bound = num[e] + num[f] - num[meet];
      if (shape == Shape::Convex && bound > lo) lo = bound;
      if (shape == Shape::Concave && bound < hi) hi = bound;
    }
    if (m == full) {  // pinned to 1; the bounds must still admit it
      if (lo <= denom && denom <= hi && leaf_accepts()) found = num;
      return;
    }
    for (std::int64_t v = lo; v <= hi && !found; ++v) {
      num[m] = v;
      search(m + 1);
    }
    num[m] = 0;
  }
};

}  // namespace detail

inline std::optional<Capacity> grid_oracle(const StrategicGame& game, const GridQuery& query) {
  if (query.shape == Shape::Additive && query.non_additive) return std::nullopt;
  const StateSpace space = game.opponent_space(query.player);
  const Mask survivors = query.survivors;
  if (survivors == 0) return std::nullopt;
  const std::vector<int> states = bits_of(survivors);
  const int r = static_cast<int>(states.size());
  const int cap = query.shape == Shape::Additive ? 6 : 3;
  if (r > cap)
    throw SizeCap("grid enumeration over " + std::to_string(r) +
                  " believed profiles exceeds the exhaustive cap of " + std::to_string(cap));

  // Restricted acts on the believed states, as integral forms over the
  // packed sublattice.
  std::vector<std::string> labels;
  for (int s : states) labels.push_back(space.label(s));
  const StateSpace packed(labels);
  auto restricted_form = [&](int a) {
    std::vector<Rational> payoff;
    for (int s : states)
      payoff.push_back(game.payoff(query.player, game.full_rank(query.player, a, s)));
    return ceu_linear_form(SimpleAct(packed, payoff));
  };

  auto unpack = [&](const std::vector<std::int64_t>& num) {
    std::vector<Rational> values(space.subset_count());
    for (Mask s = 0; s <= space.full_mask(); ++s) {
      Mask packed_mask = 0;
      for (int k = 0; k < r; ++k)
        if (s & (Mask{1} << states[k])) packed_mask |= Mask{1} << k;
      values[s] = Rational(num[packed_mask], query.denominator);
    }
    return make_capacity(space, std::move(values));
  };

  if (query.shape == Shape::Additive) {
    // Sweep singleton masses on the grid simplex, in canonical order.
    std::vector<Rational> own = restricted_form(query.action);
    std::vector<std::vector<Rational>> rivals;
    for (int b : bits_of(query.rivals))
      if (b != query.action) rivals.push_back(restricted_form(b));
    std::vector<std::int64_t> mass(r);
    std::vector<std::int64_t> num(std::size_t{1} << r);
    std::optional<Capacity> hit;
    std::function<void(int, std::int64_t)> sweep = [&](int k, std::int64_t used) {
      if (hit) return;
      if (k == r - 1) {
        mass[k] = query.denominator - used;
        for (Mask m = 0; m < (Mask{1} << r); ++m) {
          num[m] = 0;
          for (int j = 0; j < r; ++j)
            if (m & (Mask{1} << j)) num[m] += mass[j];
        }
        Rational mine = 0;
        for (Mask m = 1; m < (Mask{1} << r); ++m)
          if (own[m] != 0) mine += own[m] * Rational(num[m], query.denominator);
        for (const auto& rival : rivals) {
          Rational other = 0;
          for (Mask m = 1; m < (Mask{1} << r); ++m)
            if (rival[m] != 0) other += rival[m] * Rational(num[m], query.denominator);
          if (other > mine) return;
        }
        hit = unpack(num);
        return;
      }
      for (std::int64_t v = 0; v <= query.denominator - used && !hit; ++v) {
        mass[k] = v;
        sweep(k + 1, used + v);
      }
    };
    sweep(0, 0);
    return hit;
  }

  detail::GridSearch search;
  search.r = r;
  search.full = (Mask{1} << r) - 1;
  search.denom = query.denominator;
  search.shape = query.shape;
  search.non_additive = query.non_additive;
  search.prepare();
  search.own_form = restricted_form(query.action);
  for (int b : bits_of(query.rivals))
    if (b != query.action) search.rival_forms.push_back(restricted_form(b));
  search.search(1);
  if (!search.found) return std::nullopt;
  return unpack(*search.found);
}

/// Whether no grid capacity believing the opponent restriction makes the
/// action weakly best among the restriction's own actions.
inline bool grid_never_best_response(const StrategicGame& game, const Restriction& restr, int a,
                                     int denominator) {
  GridQuery query;
  query.player = restr.player;
  query.action = a;
  query.rivals = restr.own;
  query.survivors = restr.opponents;
  query.denominator = denominator;
  return !grid_oracle(game, query).has_value();
}

}  // namespace chq
