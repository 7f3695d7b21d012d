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
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "chq/capacity.hpp"
#include "chq/game.hpp"
#include "chq/rational.hpp"
#include "chq/state_space.hpp"

namespace chqtest {

inline chq::Rational rat(const std::string& s) { return chq::parse_rational(s); }

inline chq::StateSpace two_states() { return chq::StateSpace({"l", "r"}); }

// Capacity with value 1/4 on each singleton of {l,r}: strictly convex.
inline chq::Capacity tight_corners() {
  return chq::make_capacity(two_states(), {rat("0"), rat("1/4"), rat("1/4"), rat("1")});
}

// Uniform probability on {l,r}.
inline chq::Capacity uniform_two() {
  return chq::make_capacity(two_states(), {rat("0"), rat("1/2"), rat("1/2"), rat("1")});
}

// Three-state capacity used across the integral and witness tests.
inline chq::Capacity skewed_three() {
  chq::StateSpace sp({"a", "b", "c"});
  // mask order: {}, {a}, {b}, {a,b}, {c}, {a,c}, {b,c}, {a,b,c}
  return chq::make_capacity(sp, {rat("0"), rat("1/2"), rat("0"), rat("1/2"), rat("0"), rat("3/4"),
                                 rat("1/4"), rat("1")});
}

// Three-state capacity that believes {l,r} but is not additive on it.
inline chq::Capacity believer_three() {
  chq::StateSpace sp({"l", "r", "x"});
  // mask order: {}, {l}, {r}, {l,r}, {x}, {l,x}, {r,x}, {l,r,x}
  return chq::make_capacity(sp, {rat("0"), rat("1/3"), rat("1/4"), rat("1"), rat("0"), rat("1/3"),
                                 rat("1/4"), rat("1")});
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline chq::StrategicGame load_game(const std::string& name) {
  return chq::parse_game(read_file(std::string(CHQ_GAMES_DIR) + "/" + name + ".game"));
}

// The three-row coordination games the worked examples use.
inline chq::StrategicGame coordination_mismatch() { return load_game("coordination_mismatch"); }
inline chq::StrategicGame safe_top() { return load_game("safe_top"); }
inline chq::StrategicGame hedged_middle() { return load_game("hedged_middle"); }
inline chq::StrategicGame prisoners_dilemma() { return load_game("prisoners_dilemma"); }

// Independent evaluation of the Choquet integral: sorts the act's level sets
// explicitly and accumulates the telescoping weights, with no shared code
// with the library path.
inline chq::Rational brute_choquet(const chq::Capacity& cap, const chq::SimpleAct& act) {
  std::vector<std::pair<chq::Rational, int>> byvalue;
  for (int s = 0; s < static_cast<int>(act.space().size()); ++s)
    byvalue.emplace_back(act.payoff(s), s);
  std::sort(byvalue.begin(), byvalue.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  chq::Rational total = 0;
  chq::Mask cum = 0;
  std::size_t i = 0;
  while (i < byvalue.size()) {
    const chq::Rational value = byvalue[i].first;
    chq::Mask prev = cum;
    while (i < byvalue.size() && byvalue[i].first == value) {
      cum |= chq::Mask{1} << byvalue[i].second;
      ++i;
    }
    total += value * (cap.value(cum) - cap.value(prev));
  }
  return total;
}

}  // namespace chqtest
