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

#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <vector>

#include "chq/capacity.hpp"
#include "chq/random.hpp"
#include "chq/state_space.hpp"
#include "test_support.hpp"

using namespace chq;
using chqtest::rat;

TEST_CASE("construction validates normalization and monotonicity") {
  const StateSpace sp = chqtest::two_states();

  CHECK_NOTHROW(make_capacity(sp, {rat("0"), rat("1/4"), rat("1/4"), rat("1")}));
  CHECK_NOTHROW(make_capacity(sp, {rat("0"), rat("1/2"), rat("1/2"), rat("1")}));

  CHECK_THROWS_AS(make_capacity(sp, {rat("1/8"), rat("1/4"), rat("1/4"), rat("1")}),
                  NormalizationViolation);
  CHECK_THROWS_AS(make_capacity(sp, {rat("0"), rat("1/4"), rat("1/4"), rat("2")}),
                  NormalizationViolation);

  try {
    make_capacity(sp, {rat("0"), rat("3/4"), rat("1/2"), rat("1/4")});
    FAIL("expected a monotonicity violation");
  } catch (const MonotonicityViolation& e) {
    CHECK(e.subset_mask == 0b01u);    // {l}
    CHECK(e.superset_mask == 0b11u);  // {l,r}
  }

  CHECK_THROWS_AS(make_capacity(sp, std::vector<Rational>{rat("0"), rat("1")}), MissingSubset);
  CHECK_THROWS_AS(
      make_capacity(sp, std::vector<std::pair<std::string, Rational>>{{"{}", rat("0")},
                                                                      {"{l}", rat("1/4")},
                                                                      {"{l}", rat("1/4")},
                                                                      {"{l,r}", rat("1")}}),
      MissingSubset);
}

TEST_CASE("choquet integral matches hand evaluations and the sort oracle") {
  const Capacity corners = chqtest::tight_corners();
  const Capacity uniform = chqtest::uniform_two();
  const Capacity skewed = chqtest::skewed_three();

  SECTION("constant acts integrate to their value") {
    CHECK(choquet_integral(corners, SimpleAct::constant(corners.space(), rat("7/3"))) ==
          rat("7/3"));
    CHECK(choquet_integral(skewed, SimpleAct::constant(skewed.space(), rat("-2"))) == rat("-2"));
  }

  SECTION("additive capacities reduce to expectations") {
    const SimpleAct act(chqtest::two_states(), {rat("4"), rat("0")});
    CHECK(choquet_integral(uniform, act) == rat("2"));
  }

  SECTION("skewed three-state evaluation") {
    const SimpleAct act(skewed.space(), {rat("3"), rat("1"), rat("2")});
    CHECK(choquet_integral(skewed, act) == rat("9/4"));
    CHECK(chqtest::brute_choquet(skewed, act) == rat("9/4"));
  }

  SECTION("ties merge into one level cell") {
    const SimpleAct act(skewed.space(), {rat("2"), rat("1"), rat("2")});
    CHECK(choquet_integral(skewed, act) == chqtest::brute_choquet(skewed, act));
  }

  SECTION("random agreement with the sort oracle") {
    Rng rng(7);
    const StateSpace sp({"w", "x", "y", "z"});
    for (int trial = 0; trial < 200; ++trial) {
      const Capacity cap = random_capacity(sp, rng);
      std::vector<Rational> payoff;
      for (std::size_t s = 0; s < sp.size(); ++s)
        payoff.push_back(Rational(draw_int(rng, -8, 8), draw_int(rng, 1, 3)));
      const SimpleAct act(sp, payoff);
      CHECK(choquet_integral(cap, act) == chqtest::brute_choquet(cap, act));
    }
  }

  SECTION("space mismatch is rejected") {
    CHECK_THROWS_AS(choquet_integral(corners, SimpleAct::constant(skewed.space(), rat("1"))),
                    SpaceMismatch);
  }
}

TEST_CASE("belief holds exactly when the complement is null") {
  const Capacity corners = chqtest::tight_corners();
  const Capacity believer = chqtest::believer_three();

  CHECK(is_believed(corners, EventSet(corners.space(), corners.space().full_mask())));
  CHECK(is_believed(believer, EventSet::of(believer.space(), {"l", "r"})));
  CHECK_FALSE(is_believed(corners, EventSet::of(corners.space(), {"l"})));
  CHECK_THROWS_AS(is_believed(corners, EventSet(believer.space(), 1)), SpaceMismatch);
}

TEST_CASE("additive separability across an event") {
  const Capacity corners = chqtest::tight_corners();
  const Capacity uniform = chqtest::uniform_two();

  CHECK(is_unambiguous(corners, EventSet(corners.space(), 0)));
  for (Mask e = 0; e <= uniform.space().full_mask(); ++e)
    CHECK(is_unambiguous(uniform, EventSet(uniform.space(), e)));
  CHECK_FALSE(is_unambiguous(corners, EventSet::of(corners.space(), {"l"})));
}

TEST_CASE("attitude classification") {
  const AttitudeClass corners = classify_attitude(chqtest::tight_corners());
  CHECK(corners.convex);
  CHECK_FALSE(corners.concave);
  CHECK_FALSE(corners.additive());

  const Capacity heavy =
      make_capacity(chqtest::two_states(), {rat("0"), rat("3/4"), rat("3/4"), rat("1")});
  const AttitudeClass heavy_class = classify_attitude(heavy);
  CHECK(heavy_class.concave);
  CHECK_FALSE(heavy_class.convex);

  const AttitudeClass uniform = classify_attitude(chqtest::uniform_two());
  CHECK(uniform.additive());
  CHECK(uniform.convex);
  CHECK(uniform.concave);
  CHECK(uniform.tag() == AttitudeClass::Tag::Additive);
}

TEST_CASE("nonadditivity witnesses scan disjoint pairs in canonical order") {
  CHECK_FALSE(nonadditivity_witness(chqtest::uniform_two()).has_value());

  const auto corners = nonadditivity_witness(chqtest::tight_corners());
  REQUIRE(corners.has_value());
  CHECK(corners->first.mask() == 0b01u);
  CHECK(corners->second.mask() == 0b10u);

  // The first disjoint pair with equal sum is skipped; the witness is the
  // first pair whose sum genuinely differs.
  const auto skewed = nonadditivity_witness(chqtest::skewed_three());
  REQUIRE(skewed.has_value());
  CHECK(skewed->first.mask() == 0b001u);   // {a}
  CHECK(skewed->second.mask() == 0b100u);  // {c}
}

TEST_CASE("belief, separability, and full weight coincide on random capacities") {
  Rng rng(42);
  int believed_seen = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = static_cast<std::size_t>(draw_int(rng, 1, 4));
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("s" + std::to_string(i));
    const StateSpace sp(labels);
    const Capacity cap = random_capacity(sp, rng);
    const Mask full = sp.full_mask();
    for (Mask e = 0; e <= full; ++e) {
      const EventSet event(sp, e);
      const EventSet complement(sp, full & ~e);
      const bool believed = is_believed(cap, event);
      believed_seen += believed ? 1 : 0;

      // Three equivalent characterizations.
      CHECK(believed == (is_unambiguous(cap, event) && cap.value(e) == 1));
      CHECK(believed == (is_unambiguous(cap, complement) && cap.value(full & ~e) == 0));

      // The complement-null form quantified over every F, not just F inside E.
      bool complement_null = true;
      for_each_submask(full & ~e, [&](Mask g) {
        for (Mask f = 0; f <= full && complement_null; ++f)
          if (cap.value(g | f) != cap.value(f)) complement_null = false;
      });
      CHECK(believed == complement_null);

      if (believed) CHECK(cap.value(e) == 1);
    }
  }
  CHECK(believed_seen > 50);  // the generator must produce real positive cases
}

TEST_CASE("belief operator properties: necessitation, monotonicity, conjunction") {
  Rng rng(11);
  const StateSpace sp({"p", "q", "r"});
  for (int trial = 0; trial < 150; ++trial) {
    const Capacity cap = random_capacity(sp, rng);
    const Mask full = sp.full_mask();
    CHECK(is_believed(cap, EventSet(sp, full)));
    for (Mask e = 0; e <= full; ++e) {
      if (!is_believed(cap, EventSet(sp, e))) continue;
      for (Mask e2 = 0; e2 <= full; ++e2) {
        if (subset_of(e, e2)) CHECK(is_believed(cap, EventSet(sp, e2)));
        if (is_believed(cap, EventSet(sp, e2)))
          CHECK(is_believed(cap, EventSet(sp, e & e2)));
      }
    }
  }
}

TEST_CASE("integral properties over random capacities") {
  Rng rng(3);
  const StateSpace sp({"w", "x", "y"});
  for (int trial = 0; trial < 150; ++trial) {
    const Capacity cap = random_capacity(sp, rng);
    std::vector<Rational> f, g;
    for (std::size_t s = 0; s < sp.size(); ++s) {
      f.push_back(Rational(draw_int(rng, -6, 6), 2));
      g.push_back(f.back() - Rational(draw_int(rng, 0, 4)));  // g <= f statewise
    }
    const SimpleAct fa(sp, f), ga(sp, g);

    // Statewise dominance is preserved.
    CHECK(choquet_integral(cap, fa) >= choquet_integral(cap, ga));

    // Positive affine transformations pass through.
    const Rational alpha(draw_int(rng, 1, 5), 2);
    const Rational shift(draw_int(rng, -4, 4));
    std::vector<Rational> h;
    for (const auto& v : f) h.push_back(alpha * v + shift);
    CHECK(choquet_integral(cap, SimpleAct(sp, h)) ==
          alpha * choquet_integral(cap, fa) + shift);
  }

  // Additive capacities integrate as dot products with singleton weights.
  for (int trial = 0; trial < 80; ++trial) {
    Capacity cap = random_capacity(sp, rng);
    if (!classify_attitude(cap).additive()) continue;
    std::vector<Rational> f;
    for (std::size_t s = 0; s < sp.size(); ++s) f.push_back(Rational(draw_int(rng, -5, 5)));
    Rational dot = 0;
    for (std::size_t s = 0; s < sp.size(); ++s) dot += f[s] * cap.value(Mask{1} << s);
    CHECK(choquet_integral(cap, SimpleAct(sp, f)) == dot);
  }

  // Acts that agree on a believed event integrate identically.
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Capacity cap = random_capacity(sp, rng);
    for (Mask e = 1; e < sp.full_mask(); ++e) {
      if (!is_believed(cap, EventSet(sp, e))) continue;
      std::vector<Rational> f, g;
      for (std::size_t s = 0; s < sp.size(); ++s) {
        f.push_back(Rational(draw_int(rng, -5, 5)));
        g.push_back((e >> s) & 1 ? f.back() : Rational(draw_int(rng, -5, 5)));
      }
      CHECK(choquet_integral(cap, SimpleAct(sp, f)) == choquet_integral(cap, SimpleAct(sp, g)));
      ++checked;
    }
  }
  CHECK(checked > 10);
}

TEST_CASE("additive classification agrees with witness absence") {
  Rng rng(19);
  const StateSpace sp({"w", "x", "y"});
  for (int trial = 0; trial < 200; ++trial) {
    const Capacity cap = random_capacity(sp, rng);
    CHECK(classify_attitude(cap).additive() == !nonadditivity_witness(cap).has_value());
  }
}

TEST_CASE("capacity text format round-trips and rejects malformed input") {
  const Capacity skewed = chqtest::skewed_three();
  const std::string text = format_capacity(skewed);
  const Capacity back = parse_capacity(text);
  CHECK(back.space() == skewed.space());
  CHECK(back.values() == skewed.values());
  CHECK(format_capacity(back) == text);

  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Capacity cap = random_capacity(StateSpace({"l", "r", "x"}), rng);
    CHECK(parse_capacity(format_capacity(cap)).values() == cap.values());
  }

  CHECK_THROWS_AS(parse_capacity("{}: 0\n{l}: 1/2\n{r}: 1/2\n"), MissingSubset);
  CHECK_THROWS_AS(parse_capacity("{}: 0\n{l}: 1/2\n{l}: 1/2\n{l,r}: 1\n"), ParseError);
  CHECK_THROWS_AS(parse_capacity("{}: 0\n{l}: 1/2\n{r}: x\n{l,r}: 1\n"), ParseError);
  // Records out of canonical order are rejected.
  CHECK_THROWS_AS(parse_capacity(chqtest::two_states(),
                                 {"{}: 0", "{r}: 1/2", "{l}: 1/2", "{l,r}: 1"}),
                  ParseError);
}

TEST_CASE("eventwise additivity does not imply separability: found by search") {
  // Searches the coarse grid for a capacity and a proper event E with
  // value(E) + value(complement) = 1 while E is still ambiguous.
  const StateSpace sp({"a", "b", "c"});
  const Mask full = sp.full_mask();
  bool found = false;
  Rng rng(23);
  for (int trial = 0; trial < 2000 && !found; ++trial) {
    const Capacity cap = random_capacity(sp, rng, 4);
    for (Mask e = 1; e < full && !found; ++e) {
      if (cap.value(e) + cap.value(full & ~e) != 1) continue;
      if (is_unambiguous(cap, EventSet(sp, e))) continue;
      found = true;
    }
  }
  CHECK(found);
}
