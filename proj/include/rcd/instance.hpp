// Problem data model: hidden-action principal-agent instances and contracts.
#pragma once

#include "rcd/common.hpp"

#include <Eigen/Core>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace rcd {

/// A payment vector over outcomes, one nonnegative entry per outcome
/// (limited liability: payments flow from principal to agent only).
using Contract = Vector;

/**
 * One principal-agent problem.
 *
 * Row a of F is the outcome distribution of action a; r holds the
 * principal's reward per outcome and c the agent's cost per action.
 * Instances are immutable after validation; every operation on them is a
 * pure function of (instance, contract) and safe to call concurrently.
 */
struct Instance {
  Matrix F;  // n x m, rows stochastic
  Vector r;  // m, entries in [0,1]
  Vector c;  // n, entries in [0,1]
  std::vector<std::string> action_labels;   // optional, presentation only
  std::vector<std::string> outcome_labels;  // optional, presentation only

  Index num_actions() const { return F.rows(); }
  Index num_outcomes() const { return F.cols(); }

  /// Expected principal reward of action a (independent of the contract).
  double expected_reward(Index a) const { return F.row(a).dot(r); }

  /// Social welfare of action a: expected reward minus cost.
  double welfare(Index a) const { return expected_reward(a) - c[a]; }
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

namespace detail {

inline bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace detail

/**
 * Checks an instance against the model invariants: consistent dimensions,
 * stochastic rows (sum 1 within 1e-9), all data in [0,1]. The absence of an
 * opt-out action (a zero-cost action with zero expected reward) is reported
 * as a warning rather than an error; the model assumes one exists w.l.o.g.
 * and individual rationality arguments rely on it.
 */
inline ValidationReport validate_instance(const Instance& inst) {
  ValidationReport rep;
  const Index n = inst.num_actions();
  const Index m = inst.num_outcomes();

  if (n < 1) rep.errors.push_back("instance has no actions");
  if (m < 1) rep.errors.push_back("instance has no outcomes");
  if (inst.r.size() != m)
    rep.errors.push_back("reward vector length " + std::to_string(inst.r.size()) +
                         " does not match outcome count " + std::to_string(m));
  if (inst.c.size() != n)
    rep.errors.push_back("cost vector length " + std::to_string(inst.c.size()) +
                         " does not match action count " + std::to_string(n));
  if (!inst.action_labels.empty() && static_cast<Index>(inst.action_labels.size()) != n)
    rep.errors.push_back("action label count does not match action count");
  if (!inst.outcome_labels.empty() && static_cast<Index>(inst.outcome_labels.size()) != m)
    rep.errors.push_back("outcome label count does not match outcome count");
  if (!rep.errors.empty()) return rep;  // dimension errors make the rest moot

  for (Index a = 0; a < n; ++a) {
    const double row_sum = inst.F.row(a).sum();
    if (!(std::abs(row_sum - 1.0) <= 1e-9))
      rep.errors.push_back("row " + std::to_string(a) + " not stochastic (sums to " +
                           std::to_string(row_sum) + ")");
    for (Index w = 0; w < m; ++w)
      if (!detail::in_unit_interval(inst.F(a, w)))
        rep.errors.push_back("F[" + std::to_string(a) + "][" + std::to_string(w) +
                             "] outside [0,1]");
    if (!detail::in_unit_interval(inst.c[a]))
      rep.errors.push_back("cost of action " + std::to_string(a) + " outside [0,1]");
  }
  for (Index w = 0; w < m; ++w)
    if (!detail::in_unit_interval(inst.r[w]))
      rep.errors.push_back("reward of outcome " + std::to_string(w) + " outside [0,1]");

  if (rep.errors.empty()) {
    bool has_opt_out = false;
    for (Index a = 0; a < n && !has_opt_out; ++a)
      has_opt_out = inst.c[a] <= 1e-9 && inst.expected_reward(a) <= 1e-9;
    if (!has_opt_out)
      rep.warnings.push_back(
          "no opt-out action (zero cost, zero expected reward); "
          "individual rationality is not implied by incentive compatibility");
  }
  return rep;
}

/// Convenience constructor used throughout tests and generators.
inline Instance make_instance(Matrix F, Vector r, Vector c) {
  Instance inst;
  inst.F = std::move(F);
  inst.r = std::move(r);
  inst.c = std::move(c);
  return inst;
}

}  // namespace rcd
