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

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chq/errors.hpp"
#include "chq/rational.hpp"

namespace chq::lp {

enum class Relation { LessEq, Equal, GreaterEq };

struct Constraint {
  std::vector<Rational> coeffs;
  Relation rel = Relation::LessEq;
  Rational rhs;
};

struct VariableBounds {
  std::optional<Rational> lower;
  std::optional<Rational> upper;
};

/// An exact-rational linear program. An empty objective means feasibility
/// only. Bounds, when present, must have one entry per variable; variables
/// without bounds are free.
struct LinearProgram {
  std::vector<std::string> variables;
  std::vector<Rational> objective;
  bool maximize = true;
  std::vector<Constraint> constraints;
  std::vector<VariableBounds> bounds;

  std::size_t arity() const { return variables.size(); }

  std::size_t add_variable(std::string name) {
    variables.push_back(std::move(name));
    return variables.size() - 1;
  }
  void add_constraint(std::vector<Rational> coeffs, Relation rel, Rational rhs) {
    constraints.push_back({std::move(coeffs), rel, std::move(rhs)});
  }
};

enum class Status { Optimal, Infeasible, Unbounded };

/// Solver output. Every certificate re-verifies exactly against the raw
/// program data via verify().
///   Optimal:    solution + objective_value + dual (over standard-form rows).
///   Infeasible: farkas (nonnegative row combination proving 0 <= -1).
///   Unbounded:  solution (a feasible point) + ray (improving direction).
struct Result {
  Status status = Status::Infeasible;
  std::vector<Rational> solution;
  Rational objective_value;
  std::vector<Rational> dual;
  std::vector<Rational> farkas;
  std::vector<Rational> ray;
};

namespace detail {

// Internal standard form: maximize c.y subject to A y <= b, y >= 0.
struct StandardForm {
  std::size_t cols = 0;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  std::vector<Rational> c;
  Rational obj_offset;  // value of the (sign-adjusted) objective at y = 0
  bool negated = false;
  struct VarMap {
    int pos = -1;   // column of the nonnegative part
    int neg = -1;   // column of the negative part (-1 when shifted instead)
    Rational shift;
  };
  std::vector<VarMap> vmap;

  Rational original_value(const Rational& std_value) const {
    Rational v = std_value + obj_offset;
    return negated ? Rational(-v) : v;
  }
};

inline void validate(const LinearProgram& lp) {
  if (lp.variables.empty()) throw Malformed("linear program has no variables");
  const std::size_t n = lp.arity();
  if (!lp.objective.empty() && lp.objective.size() != n)
    throw Malformed("objective arity mismatch");
  if (!lp.bounds.empty() && lp.bounds.size() != n) throw Malformed("bounds arity mismatch");
  for (const auto& con : lp.constraints)
    if (con.coeffs.size() != n) throw Malformed("constraint arity mismatch");
}

inline StandardForm build_standard_form(const LinearProgram& lp) {
  validate(lp);
  const std::size_t n = lp.arity();
  StandardForm sf;
  sf.negated = !lp.maximize;
  std::vector<Rational> obj(n);
  for (std::size_t j = 0; j < lp.objective.size(); ++j)
    obj[j] = sf.negated ? Rational(-lp.objective[j]) : lp.objective[j];

  sf.vmap.resize(n);
  std::vector<std::pair<std::size_t, Rational>> upper_rows;  // (var, upper - shift)
  for (std::size_t j = 0; j < n; ++j) {
    const VariableBounds b = lp.bounds.empty() ? VariableBounds{} : lp.bounds[j];
    auto& vm = sf.vmap[j];
    if (b.lower) {
      vm.shift = *b.lower;
      vm.pos = static_cast<int>(sf.cols++);
      if (b.upper) upper_rows.emplace_back(j, *b.upper - *b.lower);
    } else {
      vm.pos = static_cast<int>(sf.cols++);
      vm.neg = static_cast<int>(sf.cols++);
      if (b.upper) upper_rows.emplace_back(j, *b.upper);
    }
    sf.obj_offset += obj[j] * vm.shift;
  }

  sf.c.assign(sf.cols, Rational(0));
  for (std::size_t j = 0; j < n; ++j) {
    sf.c[sf.vmap[j].pos] += obj[j];
    if (sf.vmap[j].neg >= 0) sf.c[sf.vmap[j].neg] -= obj[j];
  }

  auto emit = [&](const std::vector<Rational>& coeffs, const Rational& rhs, bool flip) {
    std::vector<Rational> row(sf.cols, Rational(0));
    Rational r = flip ? Rational(-rhs) : rhs;
    for (std::size_t j = 0; j < n; ++j) {
      Rational a = flip ? Rational(-coeffs[j]) : coeffs[j];
      if (a == 0) continue;
      row[sf.vmap[j].pos] += a;
      if (sf.vmap[j].neg >= 0) row[sf.vmap[j].neg] -= a;
      r -= a * sf.vmap[j].shift;
    }
    sf.rows.push_back(std::move(row));
    sf.rhs.push_back(std::move(r));
  };

  for (const auto& con : lp.constraints) {
    if (con.rel == Relation::LessEq || con.rel == Relation::Equal)
      emit(con.coeffs, con.rhs, /*flip=*/false);
    if (con.rel == Relation::GreaterEq || con.rel == Relation::Equal)
      emit(con.coeffs, con.rhs, /*flip=*/true);
  }
  for (const auto& [j, cap] : upper_rows) {
    std::vector<Rational> row(sf.cols, Rational(0));
    row[sf.vmap[j].pos] = 1;
    if (sf.vmap[j].neg >= 0) row[sf.vmap[j].neg] = -1;
    sf.rows.push_back(std::move(row));
    sf.rhs.push_back(cap);
  }
  return sf;
}

// Dense simplex tableau over exact rationals. Column layout:
//   [0, cols)            structural variables
//   [cols, cols+m)       slack variables
//   cols+m               the phase-1 artificial
//   cols+m+1             right-hand side
class Tableau {
 public:
  explicit Tableau(const StandardForm& sf)
      : n_(sf.cols), m_(sf.rows.size()), width_(n_ + m_ + 2), art_(n_ + m_), rhs_(n_ + m_ + 1) {
    t_.assign(m_, std::vector<Rational>(width_, Rational(0)));
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) t_[i][j] = sf.rows[i][j];
      t_[i][n_ + i] = 1;
      t_[i][art_] = -1;
      t_[i][rhs_] = sf.rhs[i];
      basis_[i] = static_cast<int>(n_ + i);
    }
  }

  /// Runs both phases. Returns the final status; fills primal/dual data.
  Status run(const StandardForm& sf) {
    if (m_ > 0) {
      std::size_t worst = 0;
      for (std::size_t i = 1; i < m_; ++i)
        if (t_[i][rhs_] < t_[worst][rhs_]) worst = i;
      if (t_[worst][rhs_] < 0) {
        // Phase 1: maximize -artificial, starting from the pivot that makes
        // every right-hand side nonnegative.
        obj_.assign(width_, Rational(0));
        obj_[art_] = 1;
        pivot(worst, art_);
        const bool bounded = iterate(/*allow_artificial=*/true);
        if (!bounded) throw InternalError("phase 1 cannot be unbounded");
        if (obj_[rhs_] < 0) return Status::Infeasible;
        drive_out_artificial();
      }
    }
    // Phase 2 on the real objective.
    obj_.assign(width_, Rational(0));
    for (std::size_t j = 0; j < n_; ++j) obj_[j] = -sf.c[j];
    reduce_objective();
    const bool bounded = iterate(/*allow_artificial=*/false);
    return bounded ? Status::Optimal : Status::Unbounded;
  }

  std::vector<Rational> primal() const {
    std::vector<Rational> y(n_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_) y[basis_[i]] = t_[i][rhs_];
    return y;
  }

  /// Row multipliers accumulated in the current objective row, one per
  /// standard row. At optimality these are the duals; at a phase-1 optimum
  /// with negative value they are a Farkas certificate.
  std::vector<Rational> row_multipliers() const {
    std::vector<Rational> y(m_);
    for (std::size_t i = 0; i < m_; ++i) y[i] = obj_[n_ + i];
    return y;
  }

  Rational objective_rhs() const { return obj_[rhs_]; }

  /// The improving ray recorded when phase 2 detected unboundedness.
  std::vector<Rational> ray() const {
    std::vector<Rational> d(n_, Rational(0));
    if (ray_column_ < 0) return d;
    if (static_cast<std::size_t>(ray_column_) < n_) d[ray_column_] = 1;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_)
        d[basis_[i]] = -t_[i][ray_column_];
    return d;
  }

 private:
  void pivot(std::size_t row, std::size_t col) {
    const Rational p = t_[row][col];
    for (std::size_t j = 0; j < width_; ++j) t_[row][j] /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row || t_[i][col] == 0) continue;
      const Rational f = t_[i][col];
      for (std::size_t j = 0; j < width_; ++j) t_[i][j] -= f * t_[row][j];
    }
    if (!obj_.empty() && obj_[col] != 0) {
      const Rational f = obj_[col];
      for (std::size_t j = 0; j < width_; ++j) obj_[j] -= f * t_[row][j];
    }
    basis_[row] = static_cast<int>(col);
  }

  void reduce_objective() {
    for (std::size_t i = 0; i < m_; ++i) {
      const int b = basis_[i];
      if (b >= 0 && obj_[b] != 0) {
        const Rational f = obj_[b];
        for (std::size_t j = 0; j < width_; ++j) obj_[j] -= f * t_[i][j];
      }
    }
  }

  // Bland's rule: entering column is the lowest-index one with a negative
  // entry in the objective row; the leaving row minimizes the ratio with ties
  // broken by the lowest basic index. Deterministic and cycle-free.
  bool iterate(bool allow_artificial) {
    while (true) {
      int enter = -1;
      const std::size_t limit = allow_artificial ? n_ + m_ + 1 : n_ + m_;
      for (std::size_t j = 0; j < limit; ++j) {
        if (obj_[j] < 0) {
          enter = static_cast<int>(j);
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      for (std::size_t i = 0; i < m_; ++i) {
        if (t_[i][enter] <= 0) continue;
        if (leave < 0) {
          leave = static_cast<int>(i);
          continue;
        }
        const Rational cur = t_[i][rhs_] * t_[leave][enter];
        const Rational best = t_[leave][rhs_] * t_[i][enter];
        if (cur < best || (cur == best && basis_[i] < basis_[leave]))
          leave = static_cast<int>(i);
      }
      if (leave < 0) {
        ray_column_ = enter;
        return false;
      }
      pivot(static_cast<std::size_t>(leave), static_cast<std::size_t>(enter));
    }
  }

  void drive_out_artificial() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] != static_cast<int>(art_)) continue;
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (t_[i][j] != 0) {
          pivot(i, j);
          return;
        }
      }
      // The row is 0 = 0 apart from the artificial; it can never constrain
      // anything again, so the artificial may stay basic at zero.
      return;
    }
  }

  std::size_t n_, m_, width_, art_, rhs_;
  std::vector<std::vector<Rational>> t_;
  std::vector<Rational> obj_;
  std::vector<int> basis_;
  int ray_column_ = -1;
};

inline std::vector<Rational> map_to_original(const StandardForm& sf,
                                             const std::vector<Rational>& y, bool with_shift) {
  std::vector<Rational> x(sf.vmap.size());
  for (std::size_t j = 0; j < sf.vmap.size(); ++j) {
    x[j] = y[sf.vmap[j].pos];
    if (sf.vmap[j].neg >= 0) x[j] -= y[sf.vmap[j].neg];
    if (with_shift) x[j] += sf.vmap[j].shift;
  }
  return x;
}

}  // namespace detail

/// Solves the program exactly. Deterministic: identical programs produce
/// identical results.
inline Result solve(const LinearProgram& lp) {
  const detail::StandardForm sf = detail::build_standard_form(lp);
  detail::Tableau tab(sf);
  Result res;
  switch (tab.run(sf)) {
    case Status::Infeasible: {
      res.status = Status::Infeasible;
      res.farkas = tab.row_multipliers();
      break;
    }
    case Status::Optimal: {
      res.status = Status::Optimal;
      res.solution = detail::map_to_original(sf, tab.primal(), /*with_shift=*/true);
      res.objective_value = sf.original_value(tab.objective_rhs());
      res.dual = tab.row_multipliers();
      break;
    }
    case Status::Unbounded: {
      res.status = Status::Unbounded;
      res.solution = detail::map_to_original(sf, tab.primal(), /*with_shift=*/true);
      res.ray = detail::map_to_original(sf, tab.ray(), /*with_shift=*/false);
      break;
    }
  }
  return res;
}

namespace detail {

inline bool satisfies_constraints(const LinearProgram& lp, const std::vector<Rational>& x) {
  if (x.size() != lp.arity()) return false;
  for (const auto& con : lp.constraints) {
    Rational lhs = 0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += con.coeffs[j] * x[j];
    if (con.rel == Relation::LessEq && lhs > con.rhs) return false;
    if (con.rel == Relation::GreaterEq && lhs < con.rhs) return false;
    if (con.rel == Relation::Equal && lhs != con.rhs) return false;
  }
  if (!lp.bounds.empty()) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (lp.bounds[j].lower && x[j] < *lp.bounds[j].lower) return false;
      if (lp.bounds[j].upper && x[j] > *lp.bounds[j].upper) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Re-verifies a result against the raw program data, independently of the
/// solver's internal state.
///   Optimal:    primal feasibility, objective arithmetic, and (via the dual)
///               a matching upper bound, so the value really is optimal.
///   Infeasible: the Farkas vector is a nonnegative combination of the
///               standard-form rows with nonnegative variable coefficients
///               and a negative right-hand side.
///   Unbounded:  the point is feasible and the ray improves the objective
///               while respecting every constraint direction.
inline bool verify(const LinearProgram& lp, const Result& res) {
  const detail::StandardForm sf = detail::build_standard_form(lp);
  switch (res.status) {
    case Status::Optimal: {
      if (!detail::satisfies_constraints(lp, res.solution)) return false;
      Rational value = 0;
      for (std::size_t j = 0; j < lp.objective.size(); ++j)
        value += lp.objective[j] * res.solution[j];
      if (lp.objective.empty()) value = 0;
      if (value != res.objective_value) return false;
      if (res.dual.size() != sf.rows.size()) return false;
      Rational bound = 0;
      for (std::size_t i = 0; i < sf.rows.size(); ++i) {
        if (res.dual[i] < 0) return false;
        bound += res.dual[i] * sf.rhs[i];
      }
      for (std::size_t j = 0; j < sf.cols; ++j) {
        Rational col = 0;
        for (std::size_t i = 0; i < sf.rows.size(); ++i) col += res.dual[i] * sf.rows[i][j];
        if (col < sf.c[j]) return false;
      }
      return sf.original_value(bound) == res.objective_value;
    }
    case Status::Infeasible: {
      if (res.farkas.size() != sf.rows.size()) return false;
      Rational combo_rhs = 0;
      for (std::size_t i = 0; i < sf.rows.size(); ++i) {
        if (res.farkas[i] < 0) return false;
        combo_rhs += res.farkas[i] * sf.rhs[i];
      }
      if (combo_rhs >= 0) return false;
      for (std::size_t j = 0; j < sf.cols; ++j) {
        Rational col = 0;
        for (std::size_t i = 0; i < sf.rows.size(); ++i) col += res.farkas[i] * sf.rows[i][j];
        if (col < 0) return false;
      }
      return true;
    }
    case Status::Unbounded: {
      if (!detail::satisfies_constraints(lp, res.solution)) return false;
      if (res.ray.size() != lp.arity()) return false;
      for (const auto& con : lp.constraints) {
        Rational push = 0;
        for (std::size_t j = 0; j < res.ray.size(); ++j) push += con.coeffs[j] * res.ray[j];
        if (con.rel == Relation::LessEq && push > 0) return false;
        if (con.rel == Relation::GreaterEq && push < 0) return false;
        if (con.rel == Relation::Equal && push != 0) return false;
      }
      if (!lp.bounds.empty()) {
        for (std::size_t j = 0; j < res.ray.size(); ++j) {
          if (lp.bounds[j].lower && res.ray[j] < 0) return false;
          if (lp.bounds[j].upper && res.ray[j] > 0) return false;
        }
      }
      Rational gain = 0;
      for (std::size_t j = 0; j < lp.objective.size(); ++j)
        gain += lp.objective[j] * res.ray[j];
      return lp.maximize ? gain > 0 : gain < 0;
    }
  }
  return false;
}

}  // namespace chq::lp
