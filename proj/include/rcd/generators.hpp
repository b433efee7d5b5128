// Instance generators: the two families that make the price-of-robustness
// bounds tight, plus seeded random instances for property testing.
#pragma once

#include "rcd/common.hpp"
#include "rcd/instance.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rcd {

/// Smallest positive integer i with sqrt(delta) < (i-1)/i. Generated
/// two-outcome rows stay inside [0,1] exactly because of this threshold.
inline Index lb_family_kappa(double delta) {
  const double root = std::sqrt(delta);
  Index i = 1;
  while (!(root < static_cast<double>(i - 1) / static_cast<double>(i))) ++i;
  return i;
}

/// The decreasing coefficient sequence of the lower-bound family,
/// defined for i in {kappa, ..., 2n+1} (1-based).
inline double lb_family_gamma(Index i, Index n) {
  if (i <= n) return static_cast<double>(i) / static_cast<double>(i - 1);
  if (i == n + 1) return 1.0;
  if (i <= 2 * n) return static_cast<double>(2 * n + 1 - i) / static_cast<double>(2 * n + 2 - i);
  return 0.0;  // i == 2n+1
}

/**
 * Two-outcome instance with 2n+1 zero-cost actions on which the robust
 * optimum approaches the lower bound OPT - 2 sqrt(delta) + delta within
 * sqrt(delta)/n. Rewards are (1, 0); action i (1-based) puts probability
 * 1 - gamma_i sqrt(delta) on the rewarded outcome (0 below kappa, 1 at the
 * top action). The duplicate zero actions below kappa are kept: the
 * lowest-index tie-break reproduces the intended selection among them.
 */
inline Instance gen_tight_lb(double delta, Index n) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must lie strictly between 0 and 1");
  const Index kappa = lb_family_kappa(delta);
  if (n <= kappa)
    throw std::invalid_argument("n must exceed kappa(delta) = " + std::to_string(kappa));
  const double root = std::sqrt(delta);
  const Index actions = 2 * n + 1;

  Matrix F(actions, 2);
  for (Index i = 1; i <= actions; ++i) {
    const double top = i < kappa ? 0.0 : 1.0 - lb_family_gamma(i, n) * root;
    F(i - 1, 0) = top;
    F(i - 1, 1) = 1.0 - top;
  }
  Vector r(2);
  r << 1.0, 0.0;
  Instance inst = make_instance(std::move(F), std::move(r), Vector::Zero(actions));
  inst.action_labels.reserve(actions);
  for (Index i = 1; i <= actions; ++i) inst.action_labels.push_back("a" + std::to_string(i));
  inst.outcome_labels = {"w1", "w2"};
  return inst;
}

/// Two-action, two-outcome instance on which the robust optimum meets the
/// upper bound exactly: Psi* = SW - delta = 1 - delta for every delta.
inline Instance gen_tight_ub(double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must lie strictly between 0 and 1");
  Matrix F(2, 2);
  F << 1.0, 0.0,
       0.0, 1.0;
  Vector r(2);
  r << 0.0, 1.0;
  Instance inst = make_instance(std::move(F), std::move(r), Vector::Zero(2));
  inst.action_labels = {"a1", "a2"};
  inst.outcome_labels = {"w1", "w2"};
  return inst;
}

/**
 * Seeded random instance. Rows are normalized uniform draws, costs are
 * uniform with action 0 forced free, rewards uniform. With with_opt_out,
 * the last outcome's reward is zeroed and action 0 becomes an exact
 * opt-out supported only on that outcome. Identical seeds produce
 * identical instances.
 */
inline Instance gen_random(Index n, Index m, std::uint64_t seed, bool with_opt_out = true) {
  if (n < 1 || m < 1) throw std::invalid_argument("need at least one action and outcome");
  Rng rng(seed);
  Matrix F(n, m);
  for (Index a = 0; a < n; ++a) {
    double sum = 0.0;
    for (Index w = 0; w < m; ++w) {
      F(a, w) = rng.uniform(1e-3, 1.0);
      sum += F(a, w);
    }
    F.row(a) /= sum;
  }
  Vector r(m);
  for (Index w = 0; w < m; ++w) r[w] = rng.uniform01();
  Vector c(n);
  for (Index a = 0; a < n; ++a) c[a] = rng.uniform01();
  c[0] = 0.0;
  if (with_opt_out) {
    r[m - 1] = 0.0;
    F.row(0).setZero();
    F(0, m - 1) = 1.0;
  }
  return make_instance(std::move(F), std::move(r), std::move(c));
}

}  // namespace rcd
