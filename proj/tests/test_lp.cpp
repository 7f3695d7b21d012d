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

#include <vector>

#include "chq/lp.hpp"
#include "chq/random.hpp"
#include "test_support.hpp"

using namespace chq;
using namespace chq::lp;
using chqtest::rat;

namespace {

LinearProgram box_program() {
  LinearProgram prog;
  prog.variables = {"x", "y"};
  prog.objective = {rat("1"), rat("1")};
  prog.maximize = true;
  prog.add_constraint({rat("1"), rat("1")}, Relation::LessEq, rat("3/2"));
  prog.bounds = {{rat("0"), rat("1")}, {rat("0"), rat("1")}};
  return prog;
}

}  // namespace

TEST_CASE("bounded maximization finds the exact optimum") {
  LinearProgram prog;
  prog.variables = {"x"};
  prog.objective = {rat("1")};
  prog.add_constraint({rat("1")}, Relation::LessEq, rat("1"));
  prog.add_constraint({rat("1")}, Relation::GreaterEq, rat("0"));

  const Result res = solve(prog);
  REQUIRE(res.status == Status::Optimal);
  CHECK(res.solution == std::vector<Rational>{rat("1")});
  CHECK(res.objective_value == rat("1"));
  CHECK(verify(prog, res));
}

TEST_CASE("infeasible systems produce a checkable certificate") {
  LinearProgram prog;
  prog.variables = {"x"};
  prog.add_constraint({rat("1")}, Relation::LessEq, rat("0"));
  prog.add_constraint({rat("1")}, Relation::GreaterEq, rat("1"));

  const Result res = solve(prog);
  REQUIRE(res.status == Status::Infeasible);
  CHECK(verify(prog, res));
}

TEST_CASE("box-constrained sum reaches the diagonal cut") {
  const LinearProgram prog = box_program();
  const Result res = solve(prog);
  REQUIRE(res.status == Status::Optimal);
  CHECK(res.objective_value == rat("3/2"));
  CHECK(verify(prog, res));
}

TEST_CASE("unbounded programs return a feasible point and an improving ray") {
  LinearProgram prog;
  prog.variables = {"x", "y"};
  prog.objective = {rat("1"), rat("0")};
  prog.add_constraint({rat("-1"), rat("1")}, Relation::LessEq, rat("2"));
  prog.bounds = {{rat("0"), std::nullopt}, {rat("0"), std::nullopt}};

  const Result res = solve(prog);
  REQUIRE(res.status == Status::Unbounded);
  CHECK(verify(prog, res));
}

TEST_CASE("equalities, minimization, and free variables") {
  // minimize x - y  s.t.  x + y = 2, x - y >= -3, x free, y free.
  LinearProgram prog;
  prog.variables = {"x", "y"};
  prog.objective = {rat("1"), rat("-1")};
  prog.maximize = false;
  prog.add_constraint({rat("1"), rat("1")}, Relation::Equal, rat("2"));
  prog.add_constraint({rat("1"), rat("-1")}, Relation::GreaterEq, rat("-3"));

  const Result res = solve(prog);
  REQUIRE(res.status == Status::Optimal);
  CHECK(res.objective_value == rat("-3"));
  CHECK(res.solution[0] + res.solution[1] == rat("2"));
  CHECK(verify(prog, res));
}

TEST_CASE("feasibility-only programs report a point or a certificate") {
  LinearProgram prog;
  prog.variables = {"x", "y"};
  prog.add_constraint({rat("2"), rat("1")}, Relation::Equal, rat("1"));
  prog.add_constraint({rat("1"), rat("1")}, Relation::GreaterEq, rat("1/3"));
  prog.bounds = {{rat("0"), rat("1")}, {rat("0"), rat("1")}};

  const Result res = solve(prog);
  REQUIRE(res.status == Status::Optimal);
  CHECK(verify(prog, res));

  prog.add_constraint({rat("1"), rat("0")}, Relation::GreaterEq, rat("2"));
  const Result bad = solve(prog);
  REQUIRE(bad.status == Status::Infeasible);
  CHECK(verify(prog, bad));
}

TEST_CASE("degenerate and redundant rows do not cycle") {
  // Multiple identical rows plus a zero row; Bland's rule must terminate.
  LinearProgram prog;
  prog.variables = {"x", "y", "z"};
  prog.objective = {rat("1"), rat("1"), rat("1")};
  for (int k = 0; k < 3; ++k)
    prog.add_constraint({rat("1"), rat("1"), rat("0")}, Relation::LessEq, rat("1"));
  prog.add_constraint({rat("0"), rat("0"), rat("0")}, Relation::LessEq, rat("0"));
  prog.add_constraint({rat("0"), rat("0"), rat("1")}, Relation::LessEq, rat("2"));
  prog.add_constraint({rat("1"), rat("1"), rat("1")}, Relation::GreaterEq, rat("0"));
  prog.bounds = {{rat("0"), std::nullopt}, {rat("0"), std::nullopt}, {rat("0"), std::nullopt}};

  const Result res = solve(prog);
  REQUIRE(res.status == Status::Optimal);
  CHECK(res.objective_value == rat("3"));
  CHECK(verify(prog, res));
}

TEST_CASE("identical programs yield identical results") {
  const LinearProgram prog = box_program();
  const Result a = solve(prog);
  const Result b = solve(prog);
  CHECK(a.status == b.status);
  CHECK(a.solution == b.solution);
  CHECK(a.objective_value == b.objective_value);
  CHECK(a.dual == b.dual);
}

TEST_CASE("arity mismatches are rejected") {
  LinearProgram prog;
  prog.variables = {"x", "y"};
  prog.add_constraint({rat("1")}, Relation::LessEq, rat("1"));
  CHECK_THROWS_AS(solve(prog), Malformed);

  LinearProgram empty;
  CHECK_THROWS_AS(solve(empty), Malformed);
}

TEST_CASE("random programs verify against brute-force vertex enumeration") {
  // Small bounded programs: enumerate candidate vertices by solving all
  // square subsystems of active constraints with exact Gaussian elimination,
  // then compare the best feasible vertex value with the solver's optimum.
  Rng rng(99);

  auto gauss_solve = [](std::vector<std::vector<Rational>> m,
                        std::vector<Rational> b) -> std::optional<std::vector<Rational>> {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t piv = col;
      while (piv < n && m[piv][col] == 0) ++piv;
      if (piv == n) return std::nullopt;
      std::swap(m[piv], m[col]);
      std::swap(b[piv], b[col]);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == col || m[r][col] == 0) continue;
        const Rational f = m[r][col] / m[col][col];
        for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
        b[r] -= f * b[col];
      }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / m[i][i];
    return x;
  };

  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = static_cast<std::size_t>(draw_int(rng, 1, 3));
    LinearProgram prog;
    for (std::size_t j = 0; j < n; ++j) {
      prog.variables.push_back("v" + std::to_string(j));
      prog.objective.push_back(Rational(draw_int(rng, -3, 3)));
    }
    // Box to keep everything bounded, plus a few random cuts.
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Rational> up(n, Rational(0)), down(n, Rational(0));
      up[j] = 1;
      down[j] = -1;
      rows.push_back(up);
      rhs.push_back(Rational(draw_int(rng, 1, 4)));
      rows.push_back(down);
      rhs.push_back(Rational(draw_int(rng, 0, 3)));
    }
    const int cuts = static_cast<int>(draw_int(rng, 0, 3));
    for (int k = 0; k < cuts; ++k) {
      std::vector<Rational> row(n);
      for (auto& c : row) c = Rational(draw_int(rng, -2, 2));
      rows.push_back(row);
      rhs.push_back(Rational(draw_int(rng, -2, 6)));
    }
    for (std::size_t r = 0; r < rows.size(); ++r)
      prog.add_constraint(rows[r], Relation::LessEq, rhs[r]);

    const Result res = solve(prog);
    CHECK(verify(prog, res));
    if (res.status != Status::Optimal) continue;

    // Enumerate all n-subsets of rows as candidate active sets.
    std::optional<Rational> best;
    std::vector<std::size_t> idx(rows.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::size_t> pick(n);
    auto consider = [&](const std::vector<std::size_t>& active) {
      std::vector<std::vector<Rational>> m;
      std::vector<Rational> b;
      for (std::size_t r : active) {
        m.push_back(rows[r]);
        b.push_back(rhs[r]);
      }
      const auto x = gauss_solve(m, b);
      if (!x) return;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        Rational lhs = 0;
        for (std::size_t j = 0; j < n; ++j) lhs += rows[r][j] * (*x)[j];
        if (lhs > rhs[r]) return;
      }
      Rational value = 0;
      for (std::size_t j = 0; j < n; ++j) value += prog.objective[j] * (*x)[j];
      if (!best || value > *best) best = value;
    };
    std::function<void(std::size_t, std::size_t)> comb = [&](std::size_t start, std::size_t k) {
      if (k == n) {
        consider(pick);
        return;
      }
      for (std::size_t r = start; r < rows.size(); ++r) {
        pick[k] = r;
        comb(r + 1, k + 1);
      }
    };
    comb(0, 0);
    REQUIRE(best.has_value());
    CHECK(res.objective_value == *best);
  }
}

TEST_CASE("mixed random programs always carry a valid certificate") {
  // Certificates prove their statuses outright: a verified Farkas vector
  // rules out feasibility, a verified dual pins the optimum, a verified ray
  // proves unboundedness. Passing verification on random mixes of
  // equalities, inequalities, bounds, and free variables therefore pins the
  // solver's verdicts, not just its bookkeeping.
  Rng rng(7777);
  int optimal = 0, infeasible = 0, unbounded = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = static_cast<std::size_t>(draw_int(rng, 1, 4));
    LinearProgram prog;
    prog.maximize = draw_int(rng, 0, 1) == 0;
    for (std::size_t j = 0; j < n; ++j) {
      prog.variables.push_back("v" + std::to_string(j));
      prog.objective.push_back(Rational(draw_int(rng, -3, 3)));
    }
    if (draw_int(rng, 0, 3) > 0) {
      prog.bounds.resize(n);
      for (std::size_t j = 0; j < n; ++j) {
        if (draw_int(rng, 0, 2) > 0) prog.bounds[j].lower = Rational(draw_int(rng, -3, 0));
        if (draw_int(rng, 0, 2) > 0) prog.bounds[j].upper = Rational(draw_int(rng, 0, 3));
      }
    }
    const int rows = static_cast<int>(draw_int(rng, 1, 5));
    for (int r = 0; r < rows; ++r) {
      std::vector<Rational> coeffs(n);
      for (auto& c : coeffs) c = Rational(draw_int(rng, -2, 2));
      const Relation rel = static_cast<Relation>(draw_int(rng, 0, 2));
      prog.add_constraint(std::move(coeffs), rel, Rational(draw_int(rng, -4, 4)));
    }
    const Result res = solve(prog);
    CHECK(verify(prog, res));
    optimal += res.status == Status::Optimal;
    infeasible += res.status == Status::Infeasible;
    unbounded += res.status == Status::Unbounded;
  }
  // The generator must exercise all three verdicts.
  CHECK(optimal > 30);
  CHECK(infeasible > 30);
  CHECK(unbounded > 30);
}
