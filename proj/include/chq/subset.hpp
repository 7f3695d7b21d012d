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

#include <bit>
#include <cstdint>
#include <vector>

namespace chq {

// Subsets of a finite ordered ground set are encoded as bit patterns: bit i is
// element i in the fixed element order. The canonical order of subsets is the
// numeric order of their masks.
using Mask = std::uint32_t;

inline int popcount(Mask m) { return std::popcount(m); }

inline bool subset_of(Mask a, Mask b) { return (a & ~b) == 0; }

/// Calls f on every submask of m, in increasing numeric (canonical) order.
template <typename F>
void for_each_submask(Mask m, F&& f) {
  Mask sub = 0;
  while (true) {
    f(sub);
    if (sub == m) break;
    sub = (sub - m) & m;  // next submask in increasing order
  }
}

/// All submasks of m in canonical order (2^popcount(m) of them).
inline std::vector<Mask> submasks(Mask m) {
  std::vector<Mask> out;
  out.reserve(std::size_t{1} << popcount(m));
  for_each_submask(m, [&](Mask s) { out.push_back(s); });
  return out;
}

/// Indices of the set bits of m, ascending.
inline std::vector<int> bits_of(Mask m) {
  std::vector<int> out;
  for (Mask rest = m; rest != 0; rest &= rest - 1) out.push_back(std::countr_zero(rest));
  return out;
}

}  // namespace chq
