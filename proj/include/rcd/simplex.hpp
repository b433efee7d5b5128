// Deterministic dense-tableau simplex for the small LPs of contract design.
#pragma once

#include "rcd/common.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rcd {

enum class Relation { LessEq, GreaterEq };

struct LinearConstraint {
  Vector coeffs;
  Relation rel = Relation::LessEq;
  double rhs = 0.0;
};

/**
 * A maximization LP over box-bounded-below variables. Only closed
 * inequalities are representable; that is all the contract formulations
 * need. Lower bounds default to zero when the vector is left empty.
 */
struct LinearProgram {
  Index num_vars = 0;
  Vector objective;                 // maximize objective . x + objective_constant
  double objective_constant = 0.0;
  std::vector<LinearConstraint> constraints;
  Vector var_lower_bounds;          // empty means all zero

  void add_le(Vector coeffs, double rhs) {
    constraints.push_back({std::move(coeffs), Relation::LessEq, rhs});
  }
  void add_ge(Vector coeffs, double rhs) {
    constraints.push_back({std::move(coeffs), Relation::GreaterEq, rhs});
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vector solution;          // meaningful when status == Optimal
  double objective = 0.0;   // includes the constant term
};

struct LpOptions {
  bool force_primal = false;  // test hook: bypass the dual fast path
};

namespace detail {

constexpr double kPivotTol = 1e-9;

/**
 * Phase-2 primal simplex on a dense tableau with Bland's rule (lowest
 * eligible column enters; among minimum-ratio rows, the one whose basic
 * variable has the lowest index leaves). Bland's rule cannot cycle, so the
 * iteration cap only guards against logic errors.
 *
 * On entry: body/rhs describe a basic feasible solution (rhs >= 0), cost
 * holds the reduced costs of the current basis and obj its objective value.
 * Columns with eligible[j] == false are never brought into the basis.
 * Returns false when an improving column proves the LP unbounded.
 */
inline bool simplex_phase(Matrix& body, Vector& rhs, Eigen::RowVectorXd& cost, double& obj,
                          std::vector<Index>& basis, const std::vector<bool>& eligible) {
  const Index rows = body.rows();
  const Index cols = body.cols();
  const long max_iters = 2000 + 200 * static_cast<long>(rows + cols);
  for (long iter = 0; iter < max_iters; ++iter) {
    Index enter = -1;
    for (Index j = 0; j < cols; ++j) {
      if (eligible[j] && cost[j] > kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return true;  // optimal

    Index leave = -1;
    double best_ratio = 0.0;
    for (Index i = 0; i < rows; ++i) {
      if (body(i, enter) <= kPivotTol) continue;
      const double ratio = rhs[i] / body(i, enter);
      if (leave < 0 || ratio < best_ratio - kPivotTol) {
        leave = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + kPivotTol && basis[i] < basis[leave]) {
        leave = i;
        best_ratio = std::min(best_ratio, ratio);
      }
    }
    if (leave < 0) return false;  // unbounded direction

    const double pivot = body(leave, enter);
    body.row(leave) /= pivot;
    rhs[leave] /= pivot;
    for (Index i = 0; i < rows; ++i) {
      if (i == leave) continue;
      const double factor = body(i, enter);
      if (factor == 0.0) continue;
      body.row(i) -= factor * body.row(leave);
      rhs[i] -= factor * rhs[leave];
    }
    const double cfactor = cost[enter];
    cost -= cfactor * body.row(leave);
    obj += cfactor * rhs[leave];
    basis[leave] = enter;
  }
  throw internal_error("simplex iteration cap exceeded");
}

/// Standard-form data: maximize c.x s.t. A x <= b, x >= 0.
struct StandardForm {
  Matrix A;
  Vector b;
  Vector c;
};

/**
 * General route: two-phase primal simplex. Phase 1 drives per-row
 * artificials out of the basis (redundant rows are dropped), phase 2
 * optimizes the true objective.
 */
inline LpResult solve_standard_primal(const StandardForm& sf) {
  const Index k = sf.A.rows();
  const Index nv = sf.A.cols();

  // Equality form A x + s = b with b >= 0; rows flipped as needed.
  Matrix eq = Matrix::Zero(k, nv + k);
  Vector beq(k);
  std::vector<bool> flipped(k, false);
  for (Index i = 0; i < k; ++i) {
    const double sign = sf.b[i] < 0.0 ? -1.0 : 1.0;
    flipped[i] = sign < 0.0;
    eq.block(i, 0, 1, nv) = sign * sf.A.row(i);
    eq(i, nv + i) = sign;  // slack (surplus when flipped)
    beq[i] = sign * sf.b[i];
  }

  // Artificials for rows whose slack cannot start basic.
  std::vector<Index> art_rows;
  for (Index i = 0; i < k; ++i)
    if (flipped[i]) art_rows.push_back(i);
  const Index na = static_cast<Index>(art_rows.size());
  const Index total = nv + k + na;

  Matrix body = Matrix::Zero(k, total);
  body.leftCols(nv + k) = eq;
  std::vector<Index> basis(k);
  for (Index i = 0; i < k; ++i) basis[i] = nv + i;
  for (Index t = 0; t < na; ++t) {
    body(art_rows[t], nv + k + t) = 1.0;
    basis[art_rows[t]] = nv + k + t;
  }
  Vector rhs = beq;

  std::vector<bool> eligible(total, true);

  if (na > 0) {
    // Phase 1: maximize -sum(artificials), priced out for the start basis.
    Eigen::RowVectorXd cost = Eigen::RowVectorXd::Zero(total);
    double obj = 0.0;
    for (Index t = 0; t < na; ++t) {
      cost += body.row(art_rows[t]);
      obj -= rhs[art_rows[t]];
    }
    for (Index t = 0; t < na; ++t) cost[nv + k + t] = 0.0;
    if (!simplex_phase(body, rhs, cost, obj, basis, eligible))
      throw internal_error("phase-1 objective unbounded");
    if (obj < -1e-7) return {LpStatus::Infeasible, {}, 0.0};

    // Pivot basic artificials out; drop rows where no pivot exists.
    std::vector<Index> keep;
    for (Index i = 0; i < k; ++i) {
      if (basis[i] < nv + k) {
        keep.push_back(i);
        continue;
      }
      Index col = -1;
      for (Index j = 0; j < nv + k; ++j) {
        if (std::abs(body(i, j)) > kPivotTol) {
          col = j;
          break;
        }
      }
      if (col < 0) continue;  // redundant row
      const double pivot = body(i, col);
      body.row(i) /= pivot;
      rhs[i] /= pivot;
      for (Index i2 = 0; i2 < k; ++i2) {
        if (i2 == i) continue;
        const double factor = body(i2, col);
        if (factor == 0.0) continue;
        body.row(i2) -= factor * body.row(i);
        rhs[i2] -= factor * rhs[i];
      }
      basis[i] = col;
      keep.push_back(i);
    }
    if (static_cast<Index>(keep.size()) != k) {
      Matrix body2(static_cast<Index>(keep.size()), total);
      Vector rhs2(static_cast<Index>(keep.size()));
      std::vector<Index> basis2;
      for (Index t = 0; t < static_cast<Index>(keep.size()); ++t) {
        body2.row(t) = body.row(keep[t]);
        rhs2[t] = rhs[keep[t]];
        basis2.push_back(basis[keep[t]]);
      }
      body = std::move(body2);
      rhs = std::move(rhs2);
      basis = std::move(basis2);
    }
    for (Index t = 0; t < na; ++t) eligible[nv + k + t] = false;
  }

  // Phase 2: price the true objective out for the current basis.
  Eigen::RowVectorXd cost = Eigen::RowVectorXd::Zero(total);
  cost.head(nv) = sf.c.transpose();
  double obj = 0.0;
  for (Index i = 0; i < static_cast<Index>(basis.size()); ++i) {
    const Index bj = basis[i];
    const double cb = bj < nv ? sf.c[bj] : 0.0;
    if (cb == 0.0) continue;
    cost -= cb * body.row(i);
    obj += cb * rhs[i];
  }
  if (!simplex_phase(body, rhs, cost, obj, basis, eligible))
    return {LpStatus::Unbounded, {}, 0.0};

  Vector x = Vector::Zero(nv);
  for (Index i = 0; i < static_cast<Index>(basis.size()); ++i)
    if (basis[i] < nv) x[basis[i]] = rhs[i];
  return {LpStatus::Optimal, std::move(x), obj};
}

/**
 * Fast route for bounded objectives (c <= 0): the dual of
 * max c.x s.t. Ax <= b, x >= 0 has the standard form
 * max (-b).y s.t. (-A^T) y <= (-c), y >= 0 whose slack basis is feasible
 * outright, so a single simplex phase on an (nv x (k+nv)) tableau replaces
 * the two-phase solve on a (k x ...) tableau. The primal optimum is read
 * off the slack reduced costs; the simplex termination condition on the
 * y-columns is exactly primal feasibility of that point. Dual
 * unboundedness certifies primal infeasibility, and primal unboundedness
 * cannot occur with c <= 0.
 */
inline LpResult solve_standard_dual(const StandardForm& sf) {
  const Index k = sf.A.rows();
  const Index nv = sf.A.cols();
  const Index total = k + nv;

  Matrix body = Matrix::Zero(nv, total);
  body.leftCols(k) = -sf.A.transpose();
  body.rightCols(nv) = Matrix::Identity(nv, nv);
  Vector rhs = -sf.c;
  Eigen::RowVectorXd cost = Eigen::RowVectorXd::Zero(total);
  cost.head(k) = -sf.b.transpose();
  double obj = 0.0;
  std::vector<Index> basis(nv);
  for (Index i = 0; i < nv; ++i) basis[i] = k + i;
  const std::vector<bool> eligible(total, true);

  if (!simplex_phase(body, rhs, cost, obj, basis, eligible))
    return {LpStatus::Infeasible, {}, 0.0};

  Vector x(nv);
  for (Index j = 0; j < nv; ++j) x[j] = -cost[k + j];
  return {LpStatus::Optimal, std::move(x), -obj};
}

inline void check_well_formed(const LinearProgram& lp) {
  if (lp.num_vars < 1) throw std::invalid_argument("LP has no variables");
  if (lp.objective.size() != lp.num_vars)
    throw std::invalid_argument("objective length does not match num_vars");
  if (lp.var_lower_bounds.size() != 0 && lp.var_lower_bounds.size() != lp.num_vars)
    throw std::invalid_argument("lower-bound vector length does not match num_vars");
  for (const auto& con : lp.constraints)
    if (con.coeffs.size() != lp.num_vars)
      throw std::invalid_argument("constraint coefficient length does not match num_vars");
  auto finite = [](const Vector& v) { return v.allFinite(); };
  if (!finite(lp.objective) || !std::isfinite(lp.objective_constant))
    throw std::invalid_argument("non-finite objective");
  if (lp.var_lower_bounds.size() != 0 && !finite(lp.var_lower_bounds))
    throw std::invalid_argument("non-finite lower bound");
  for (const auto& con : lp.constraints)
    if (!finite(con.coeffs) || !std::isfinite(con.rhs))
      throw std::invalid_argument("non-finite constraint");
}

/// True when x satisfies every constraint and bound within kLpTol.
inline bool certify(const LinearProgram& lp, const Vector& x) {
  const Vector lb =
      lp.var_lower_bounds.size() != 0 ? lp.var_lower_bounds : Vector::Zero(lp.num_vars);
  for (Index j = 0; j < lp.num_vars; ++j)
    if (x[j] < lb[j] - kLpTol) return false;
  for (const auto& con : lp.constraints) {
    const double lhs = con.coeffs.dot(x);
    if (con.rel == Relation::LessEq ? lhs > con.rhs + kLpTol : lhs < con.rhs - kLpTol)
      return false;
  }
  return true;
}

}  // namespace detail

/**
 * Solves a LinearProgram deterministically: identical inputs produce
 * bitwise-identical results (fixed Bland pivoting on both routes).
 * Returned optima are vertex (basic) solutions, re-checked against every
 * constraint at kLpTol before being reported; a failed certificate on the
 * dual route falls back to the primal route, and a failed certificate
 * there raises internal_error.
 */
inline LpResult solve_lp(const LinearProgram& lp, const LpOptions& opts = {}) {
  detail::check_well_formed(lp);

  const Index nv = lp.num_vars;
  const Index k = static_cast<Index>(lp.constraints.size());
  const Vector lb = lp.var_lower_bounds.size() != 0 ? lp.var_lower_bounds : Vector::Zero(nv);

  // Shift to x' = x - lb >= 0 and normalize every row to <=.
  detail::StandardForm sf;
  sf.A.resize(k, nv);
  sf.b.resize(k);
  for (Index i = 0; i < k; ++i) {
    const auto& con = lp.constraints[i];
    const double sign = con.rel == Relation::LessEq ? 1.0 : -1.0;
    sf.A.row(i) = sign * con.coeffs.transpose();
    sf.b[i] = sign * (con.rhs - con.coeffs.dot(lb));
  }
  sf.c = lp.objective;
  const double const_term = lp.objective_constant + lp.objective.dot(lb);

  const bool bounded_objective = nv == 0 || sf.c.maxCoeff() <= 0.0;
  LpResult res;
  bool used_dual = false;
  if (bounded_objective && !opts.force_primal) {
    res = detail::solve_standard_dual(sf);
    used_dual = true;
  } else {
    res = detail::solve_standard_primal(sf);
  }

  if (res.status == LpStatus::Optimal) {
    res.solution += lb;
    res.objective += const_term;
    if (!detail::certify(lp, res.solution) ||
        std::abs(lp.objective.dot(res.solution) + lp.objective_constant - res.objective) >
            1e-7 * (1.0 + std::abs(res.objective))) {
      if (!used_dual) throw internal_error("simplex solution failed certification");
      res = detail::solve_standard_primal(sf);
      if (res.status != LpStatus::Optimal)
        throw internal_error("dual and primal simplex routes disagree on status");
      res.solution += lb;
      res.objective += const_term;
      if (!detail::certify(lp, res.solution))
        throw internal_error("simplex solution failed certification");
    }
  }
  return res;
}

}  // namespace rcd
