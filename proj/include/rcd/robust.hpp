// Exact computation of optimal delta-robust contracts.
//
// The solver guesses the agent's best response a_star and worst
// delta-best response a_delta, partitions contract space by where the
// quantity L(p) = u^A(p, a_star) + u^P(p, a_delta) - delta falls relative
// to the sorted per-action welfare values, and solves one LP per slot: in
// the slot [nu_{j-1}, nu_j], actions ordered below the window (positions
// <= j-1, welfare <= L(p)) take the agent-utility cap
//     F_a . p <= c_a + u^A(p, a_star) - delta,
// and actions at or above it (positions >= j) take the principal-utility
// cap
//     F_a . p <= F_a . r - u^P(p, a_delta),
// which is exactly where the disjunctive robustness constraint
// linearizes. Candidates are ranked by their re-evaluated robust value
// Psi, not the LP objective.
#pragma once

#include "rcd/common.hpp"
#include "rcd/instance.hpp"
#include "rcd/responses.hpp"
#include "rcd/simplex.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>
#include <vector>

namespace rcd {

/// Actions sorted ascending by welfare nu_a = F_a.r - c_a (stable: ties
/// keep original index order), with sentinel values nu_0 = -inf and
/// nu_{n+1} = +inf.
struct WelfareOrder {
  std::vector<Index> actions;  // actions[l-1] = action at 1-based position l
  Vector values;               // values[l-1] = nu at position l, non-decreasing
  std::vector<Index> position; // position[a] = 1-based position of action a

  /// nu_j with sentinels, j in {0, ..., n+1}.
  double value_at(Index j) const {
    if (j <= 0) return -std::numeric_limits<double>::infinity();
    if (j > values.size()) return std::numeric_limits<double>::infinity();
    return values[j - 1];
  }
};

inline WelfareOrder welfare_order(const Instance& inst) {
  const Index n = inst.num_actions();
  WelfareOrder order;
  order.actions.resize(n);
  std::iota(order.actions.begin(), order.actions.end(), Index{0});
  Vector nu(n);
  for (Index a = 0; a < n; ++a) nu[a] = inst.welfare(a);
  std::stable_sort(order.actions.begin(), order.actions.end(),
                   [&](Index a, Index b) { return nu[a] < nu[b]; });
  order.values.resize(n);
  order.position.resize(n);
  for (Index l = 0; l < n; ++l) {
    order.values[l] = nu[order.actions[l]];
    order.position[order.actions[l]] = l + 1;
  }
  return order;
}

/**
 * Builds the subproblem LP for guess (a_star, a_delta) and welfare slot j
 * (1-based, j in {1, ..., n+1}).
 *
 * Variables are the m payments, bounded below by zero. The objective
 * maximizes u^P(p, a_delta) = F_{a_delta}.(r - p). The window constraint
 * nu_{j-1} <= L(p) <= nu_j omits the -inf side at j = 1 and the +inf side
 * at j = n+1. Slots with j > position(a_star) are empty by construction
 * (a_star's own agent-utility cap reads 0 <= -delta); the LP is still
 * built faithfully so infeasibility is detectable.
 */
inline LinearProgram build_subproblem(const Instance& inst, Index a_star, Index a_delta, Index j,
                                      double delta, const WelfareOrder& order) {
  const Index n = inst.num_actions();
  const Index m = inst.num_outcomes();
  const Vector f_star = inst.F.row(a_star).transpose();
  const Vector f_delta = inst.F.row(a_delta).transpose();
  const double reward_delta = inst.expected_reward(a_delta);

  LinearProgram lp;
  lp.num_vars = m;
  lp.objective = -f_delta;
  lp.objective_constant = reward_delta;

  // L(p) = (f_star - f_delta).p + reward_delta - c_star - delta.
  const Vector l_coeffs = f_star - f_delta;
  const double l_const = reward_delta - inst.c[a_star] - delta;
  if (j >= 2) lp.add_ge(l_coeffs, order.value_at(j - 1) - l_const);
  if (j <= n) lp.add_le(l_coeffs, order.value_at(j) - l_const);

  for (Index l = 1; l <= n; ++l) {
    const Index a = order.actions[l - 1];
    const Vector f_a = inst.F.row(a).transpose();
    if (l <= j - 1) {
      // F_a.p <= c_a + u^A(p, a_star) - delta
      lp.add_le(f_a - f_star, inst.c[a] - inst.c[a_star] - delta);
    } else {
      // F_a.p <= F_a.r - u^P(p, a_delta)
      lp.add_le(f_a - f_delta, inst.expected_reward(a) - reward_delta);
    }
  }
  return lp;
}

/**
 * An optimal delta-robust contract with its certificate: the winning
 * guess (a_star, a_delta), the welfare slot j, the LP objective of the
 * winning subproblem (diagnostic; equals psi only for correct guesses),
 * and psi = Psi(contract) evaluated by the response semantics.
 */
struct RobustSolution {
  Contract contract;
  double psi = 0.0;
  Index a_star = -1;
  Index a_delta = -1;
  Index j = -1;          // 1-based welfare slot
  double lp_value = 0.0;
  long subproblems_solved = 0;
  long subproblems_infeasible = 0;  // includes provably-empty skipped slots
};

struct RobustOptions {
  int threads = 1;
};

namespace detail {

struct SubproblemTask {
  Index a_star;
  Index a_delta;
  Index j;
};

struct Candidate {
  double psi = -std::numeric_limits<double>::infinity();
  long task_index = -1;  // position in enumeration order, for deterministic ties
  Contract contract;
  Index a_star = -1, a_delta = -1, j = -1;
  double lp_value = 0.0;

  /// Higher psi wins, exact ties go to the earlier enumeration slot. This
  /// ordering is total, so the parallel reduction matches the serial scan
  /// for any partitioning.
  bool beats(const Candidate& other) const {
    if (task_index < 0) return false;
    if (other.task_index < 0) return true;
    if (psi != other.psi) return psi > other.psi;
    return task_index < other.task_index;
  }
};

struct RangeResult {
  Candidate best;
  long solved = 0;
  long infeasible = 0;
};

}  // namespace detail

/**
 * Computes an optimal delta-robust contract by exhausting all guess pairs
 * and welfare slots. Infeasible subproblems are skipped silently (they are
 * empty slices of contract space for that guess); at least one subproblem
 * is always feasible for a valid instance, so an all-infeasible run raises
 * internal_error, as does an unbounded subproblem (every objective here is
 * bounded above by the expected reward of a_delta).
 *
 * With threads > 1 the independent subproblems are partitioned across
 * workers and merged by (max psi, earliest enumeration slot), so the
 * result is identical to the serial scan.
 */
inline RobustSolution solve_robust(const Instance& inst, double delta,
                                   const RobustOptions& opts = {}) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must lie strictly between 0 and 1");
  const Index n = inst.num_actions();
  const WelfareOrder order = welfare_order(inst);

  // Slots j > position(a_star) are provably empty; skip without solving.
  std::vector<detail::SubproblemTask> tasks;
  long skipped = 0;
  for (Index a_star = 0; a_star < n; ++a_star) {
    for (Index a_delta = 0; a_delta < n; ++a_delta) {
      for (Index j = 1; j <= n + 1; ++j) {
        if (j > order.position[a_star]) {
          ++skipped;
          continue;
        }
        tasks.push_back({a_star, a_delta, j});
      }
    }
  }

  auto run_range = [&](long lo, long hi) {
    detail::RangeResult out;
    for (long t = lo; t < hi; ++t) {
      const auto& task = tasks[static_cast<std::size_t>(t)];
      const LinearProgram lp =
          build_subproblem(inst, task.a_star, task.a_delta, task.j, delta, order);
      const LpResult res = solve_lp(lp);
      if (res.status == LpStatus::Infeasible) {
        ++out.infeasible;
        continue;
      }
      if (res.status == LpStatus::Unbounded)
        throw internal_error("robust subproblem unbounded: objective should not exceed 1");
      ++out.solved;
      detail::Candidate cand;
      cand.contract = res.solution.cwiseMax(0.0);  // clear solver noise below the bound
      cand.psi = psi(inst, cand.contract, delta);
      cand.task_index = t;
      cand.a_star = task.a_star;
      cand.a_delta = task.a_delta;
      cand.j = task.j;
      cand.lp_value = res.objective;
      if (cand.beats(out.best)) out.best = std::move(cand);
    }
    return out;
  };

  const long total = static_cast<long>(tasks.size());
  const int threads =
      static_cast<int>(std::clamp<long>(opts.threads, 1, std::max<long>(total, 1)));
  detail::RangeResult merged;
  merged.infeasible = skipped;
  if (threads == 1) {
    detail::RangeResult r = run_range(0, total);
    merged.best = std::move(r.best);
    merged.solved = r.solved;
    merged.infeasible += r.infeasible;
  } else {
    std::vector<detail::RangeResult> results(threads);
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    const long chunk = (total + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      const long lo = std::min<long>(total, w * chunk);
      const long hi = std::min<long>(total, lo + chunk);
      pool.emplace_back([&, w, lo, hi] {
        try {
          results[w] = run_range(lo, hi);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors)
      if (err) std::rethrow_exception(err);
    for (auto& r : results) {
      merged.solved += r.solved;
      merged.infeasible += r.infeasible;
      if (r.best.beats(merged.best)) merged.best = std::move(r.best);
    }
  }
  const detail::Candidate& best = merged.best;

  if (best.task_index < 0)
    throw internal_error(
        "every robust subproblem was infeasible; the true guess is always feasible");

  RobustSolution sol;
  sol.contract = best.contract;
  sol.psi = best.psi;
  sol.a_star = best.a_star;
  sol.a_delta = best.a_delta;
  sol.j = best.j;
  sol.lp_value = best.lp_value;
  sol.subproblems_solved = merged.solved;
  sol.subproblems_infeasible = merged.infeasible;
  return sol;
}

}  // namespace rcd
