// Non-robust benchmarks: OPT, social welfare, price-of-robustness bounds,
// and the payment-shift transform that converts contracts into robust ones.
#pragma once

#include "rcd/common.hpp"
#include "rcd/instance.hpp"
#include "rcd/simplex.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rcd {

/// Social welfare: max_a F_a.r - c_a.
inline double social_welfare(const Instance& inst) {
  double best = -std::numeric_limits<double>::infinity();
  for (Index a = 0; a < inst.num_actions(); ++a) best = std::max(best, inst.welfare(a));
  return best;
}

struct NonRobustSolution {
  double opt = 0.0;
  Contract contract;
  Index action = -1;  // the implemented action
};

/**
 * Optimal non-robust contract via per-action minimum-payment LPs: for each
 * action a, minimize the expected payment F_a.p subject to incentive
 * compatibility (u^A(p,a) >= u^A(p,a') for all a'), p >= 0. Individual
 * rationality is implied by the opt-out action. Ties count as implemented
 * (the agent breaks ties in favor of the principal). Actions whose IC LP
 * is infeasible cannot be a best response under any contract and are
 * skipped; the opt-out action is always implementable at p = 0, so the
 * result is well defined on valid instances.
 */
inline NonRobustSolution opt_nonrobust(const Instance& inst) {
  const Index n = inst.num_actions();
  const Index m = inst.num_outcomes();
  NonRobustSolution best;
  best.opt = -std::numeric_limits<double>::infinity();
  for (Index a = 0; a < n; ++a) {
    LinearProgram lp;
    lp.num_vars = m;
    lp.objective = -inst.F.row(a).transpose();  // maximize -F_a.p
    for (Index b = 0; b < n; ++b) {
      if (b == a) continue;
      lp.add_le(inst.F.row(b).transpose() - inst.F.row(a).transpose(), inst.c[b] - inst.c[a]);
    }
    const LpResult res = solve_lp(lp);
    if (res.status == LpStatus::Infeasible) continue;
    if (res.status != LpStatus::Optimal)
      throw internal_error("minimum-payment LP unbounded: payments are bounded below by 0");
    const double value = inst.expected_reward(a) + res.objective;  // R_a - min payment
    if (value > best.opt) {
      best.opt = value;
      best.contract = res.solution.cwiseMax(0.0);
      best.action = a;
    }
  }
  if (best.action < 0) throw internal_error("no implementable action found");
  return best;
}

/// The price-of-robustness envelope around the robust optimum at a given
/// delta.
struct BoundsReport {
  double opt = 0.0;    // non-robust OPT
  double sw = 0.0;     // social welfare
  double delta = 0.0;
  double lb = 0.0;     // OPT - 2 sqrt(delta) + delta
  double ub = 0.0;     // max(0, SW - delta)
};

inline BoundsReport bounds_from_values(double opt, double sw, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must lie strictly between 0 and 1");
  BoundsReport rep;
  rep.opt = opt;
  rep.sw = sw;
  rep.delta = delta;
  rep.lb = opt - 2.0 * std::sqrt(delta) + delta;
  rep.ub = std::max(0.0, sw - delta);
  return rep;
}

inline BoundsReport bounds(const Instance& inst, double delta) {
  return bounds_from_values(opt_nonrobust(inst).opt, social_welfare(inst), delta);
}

/**
 * Moves a contract toward the reward vector:
 * p' = (1 - sqrt(eps)) p + sqrt(eps) r. The worst (delta+eps)-response to
 * p' costs the principal at most 2 sqrt(eps) more than the worst
 * delta-response to p, which is the continuity device behind the lower
 * bound and the learning discretization.
 */
inline Contract shift_contract(const Contract& p, const Vector& r, double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("eps must lie strictly between 0 and 1");
  if (p.size() != r.size()) throw std::invalid_argument("contract/reward dimension mismatch");
  const double root = std::sqrt(eps);
  return ((1.0 - root) * p + root * r).cwiseMax(0.0);
}

}  // namespace rcd
