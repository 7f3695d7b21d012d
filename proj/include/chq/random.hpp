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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "chq/capacity.hpp"
#include "chq/game.hpp"
#include "chq/rational.hpp"
#include "chq/state_space.hpp"

namespace chq {

// Seeded mt19937_64 everywhere; draws go through the helpers below so runs
// are reproducible across platforms (std::uniform_int_distribution is not
// specified bit-for-bit).
using Rng = std::mt19937_64;

inline std::int64_t draw_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<std::int64_t>(rng() % span);
}

inline Rational draw_rational_01(Rng& rng, int denominator) {
  return Rational(draw_int(rng, 0, denominator), denominator);
}

/// A random capacity, mixing plain monotone sweeps with structured families
/// (additive, distorted-additive convex/concave, degenerate, unanimity, and
/// extensions that believe a random event) so belief and attitude predicates
/// see positive cases.
inline Capacity random_capacity(const StateSpace& space, Rng& rng, int denominator = 8) {
  const Mask full = space.full_mask();
  const std::size_t n = space.size();
  const int kind = static_cast<int>(draw_int(rng, 0, 5));

  auto additive_values = [&](Rng& r) {
    // Random singleton masses summing to 1.
    std::vector<std::int64_t> cuts{0, static_cast<std::int64_t>(denominator)};
    for (std::size_t i = 1; i < n; ++i) cuts.push_back(draw_int(r, 0, denominator));
    std::sort(cuts.begin(), cuts.end());
    std::vector<Rational> mass(n);
    for (std::size_t i = 0; i < n; ++i) mass[i] = Rational(cuts[i + 1] - cuts[i], denominator);
    std::vector<Rational> v(space.subset_count(), Rational(0));
    for (Mask m = 0; m <= full; ++m)
      for (int b : bits_of(m)) v[m] += mass[static_cast<std::size_t>(b)];
    return v;
  };

  std::vector<Rational> values(space.subset_count(), Rational(0));
  switch (kind) {
    case 0: {  // plain monotone sweep
      for (Mask m = 1; m <= full; ++m) {
        Rational lo = 0;
        for (int b : bits_of(m)) {
          const Rational& below = values[m & ~(Mask{1} << b)];
          if (below > lo) lo = below;
        }
        if (m == full) {
          values[m] = 1;
        } else {
          const Rational span = Rational(1) - lo;
          values[m] = lo + span * draw_rational_01(rng, denominator);
        }
      }
      break;
    }
    case 1: {  // additive
      values = additive_values(rng);
      break;
    }
    case 2: {  // convex distortion g(x) = x^2 of an additive capacity
      values = additive_values(rng);
      for (Mask m = 0; m <= full; ++m) values[m] *= values[m];
      break;
    }
    case 3: {  // concave distortion g(x) = 1 - (1-x)^2
      values = additive_values(rng);
      for (Mask m = 0; m <= full; ++m) {
        const Rational u = Rational(1) - values[m];
        values[m] = Rational(1) - u * u;
      }
      break;
    }
    case 4: {  // unanimity game on a random nonempty E
      const Mask e = static_cast<Mask>(draw_int(rng, 1, full));
      for (Mask m = 0; m <= full; ++m) values[m] = subset_of(e, m) ? 1 : 0;
      break;
    }
    case 5: {  // believes a random nonempty event: extend a capacity on it
      const Mask e = static_cast<Mask>(draw_int(rng, 1, full));
      std::vector<std::string> labels;
      for (int b : bits_of(e)) labels.push_back(space.label(b));
      const Capacity inner = random_capacity(StateSpace(labels), rng, denominator);
      const std::vector<int> bits = bits_of(e);
      for (Mask m = 0; m <= full; ++m) {
        Mask packed = 0;
        for (std::size_t k = 0; k < bits.size(); ++k)
          if (m & (Mask{1} << bits[k])) packed |= Mask{1} << k;
        values[m] = inner.value(packed);
      }
      break;
    }
  }
  return make_capacity(space, std::move(values));
}

struct GameParams {
  std::size_t players = 2;
  int min_actions = 2;
  int max_actions = 3;
  std::int64_t payoff_lo = -5;
  std::int64_t payoff_hi = 5;
};

/// A random strategic game with integer payoffs, players "P1", "P2", ... and
/// actions "a", "b", ... per player.
inline StrategicGame random_game(Rng& rng, const GameParams& params = {}) {
  std::vector<std::string> players;
  std::vector<std::vector<std::string>> actions;
  for (std::size_t p = 0; p < params.players; ++p) {
    players.push_back("P" + std::to_string(p + 1));
    const int k = static_cast<int>(draw_int(rng, params.min_actions, params.max_actions));
    std::vector<std::string> list;
    for (int a = 0; a < k; ++a) list.push_back(std::string(1, static_cast<char>('a' + a)));
    actions.push_back(std::move(list));
  }
  std::size_t count = 1;
  for (const auto& list : actions) count *= list.size();
  std::vector<std::vector<Rational>> payoffs(players.size(), std::vector<Rational>(count));
  for (auto& table : payoffs)
    for (auto& cell : table) cell = draw_int(rng, params.payoff_lo, params.payoff_hi);
  return StrategicGame(std::move(players), std::move(actions), std::move(payoffs));
}

}  // namespace chq
