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

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

#include "chq/errors.hpp"

namespace chq {

// All arithmetic in the library is exact. Belief and dominance conditions are
// equalities and strict inequalities over the rationals; floating point would
// corrupt them.
using Rational = boost::multiprecision::mpq_rational;

/// Formats as "p/q", or just "p" when the denominator is 1.
inline std::string format_rational(const Rational& r) { return r.str(); }

/// Parses "p", "-p", "p/q" or "-p/q". Throws ParseError on anything else.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw ParseError("not a rational: '" + std::string(text) + "'"); };
  if (text.empty()) fail();
  std::size_t pos = 0;
  auto scan_integer = [&]() -> std::string {
    std::string out;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) out += text[pos++];
    std::size_t digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      out += text[pos++];
      ++digits;
    }
    if (digits == 0) fail();
    return out;
  };
  const std::string num = scan_integer();
  if (pos == text.size()) return Rational(boost::multiprecision::mpz_int(num));
  if (text[pos] != '/') fail();
  ++pos;
  const std::string den = scan_integer();
  if (pos != text.size()) fail();
  boost::multiprecision::mpz_int d(den);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return Rational(boost::multiprecision::mpz_int(num), d);
}

}  // namespace chq
