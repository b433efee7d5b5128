// Online learning of robust contracts: UCB1 over a payment lattice against
// typed agents playing adversarial delta-best responses.
#pragma once

#include "rcd/common.hpp"
#include "rcd/instance.hpp"
#include "rcd/oracle.hpp"
#include "rcd/responses.hpp"
#include "rcd/typed.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rcd {

/// The arm set B_eps: every contract in [0,1]^m whose payments lie on the
/// eps-lattice (with 1 always included as the top level). Lexicographic
/// order, first coordinate most significant.
inline std::vector<Contract> build_grid(double epsilon, Index m) {
  GridSpec spec{epsilon, 1.0};
  const std::vector<double> levels = detail::axis_levels(spec);
  detail::check_grid_cap(levels.size(), m);
  std::vector<Contract> arms;
  std::vector<std::size_t> digit(m, 0);
  bool done = false;
  while (!done) {
    Contract p(m);
    for (Index w = 0; w < m; ++w) p[w] = levels[digit[w]];
    arms.push_back(std::move(p));
    Index w = m - 1;
    while (true) {
      if (++digit[w] < levels.size()) break;
      digit[w] = 0;
      if (w == 0) {
        done = true;
        break;
      }
      --w;
    }
  }
  return arms;
}

/// One round of the hidden-type interaction. The type and action are
/// returned for analysis only; the learner must never read them.
struct StepResult {
  Index type;
  Index action;
  Index outcome;
  double utility;  // r_w - p_w, in [-1, 1] for contracts in the hypercube
};

/**
 * Samples a type from lambda, lets that type play its exact worst
 * delta-best response to p, samples an outcome from the played action's
 * distribution, and returns the principal's realized utility.
 */
inline StepResult environment_step(const TypedInstance& tinst, const Contract& p, double delta,
                                   Rng& rng) {
  StepResult step;
  step.type = rng.categorical(tinst.lambda);
  const Instance& inst = tinst.types[step.type];
  step.action = worst_delta_response(inst, p, delta).action;
  step.outcome = rng.categorical(inst.F.row(step.action).transpose());
  step.utility = tinst.r[step.outcome] - p[step.outcome];
  return step;
}

enum class BaselineMode { Robust, NonRobust, Both };

struct LearnConfig {
  long horizon = 0;               // T
  double delta = 0.0;
  double epsilon = 0.0;           // 0 selects T^(-1/(m+1))
  std::uint64_t seed = 0;
  BaselineMode baseline = BaselineMode::Both;
  double baseline_step = 0.01;    // oracle grid step for OPT(C, delta) / OPT(C)
};

struct Baselines {
  double opt_robust = std::numeric_limits<double>::quiet_NaN();     // OPT(C, delta)
  double opt_nonrobust = std::numeric_limits<double>::quiet_NaN();  // OPT(C)
  double grid_step = 0.0;  // both values are grid-resolution approximations
};

/// Grid approximations of the two typed benchmarks over the hypercube.
inline Baselines compute_baselines(const TypedInstance& tinst, double delta,
                                   const GridSpec& grid = {}) {
  Baselines b;
  b.opt_robust = grid_opt_typed(tinst, delta, grid).value;
  b.opt_nonrobust = grid_opt_typed_nonrobust(tinst, grid).value;
  b.grid_step = grid.step;
  return b;
}

struct RoundRecord {
  Index arm;
  Index type;     // unobservable to the learner; analysis only
  Index action;   // unobservable to the learner; analysis only
  Index outcome;
  double realized_utility;
};

/**
 * Full trace of a bandit run. The regret curves are pseudo-regret: each
 * round contributes the exact lambda-weighted worst-response expected
 * utility of the played arm (not the realized sample), measured against
 * the grid benchmarks.
 */
struct LearnRun {
  std::vector<Contract> arms;
  std::vector<RoundRecord> rounds;
  std::vector<double> expected_utility;      // per round, exact accounting
  std::vector<double> cum_regret_robust;     // vs OPT(C, delta); empty if not computed
  std::vector<double> cum_regret_nonrobust;  // vs OPT(C); empty if not computed
  Baselines baselines;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  long horizon = 0;
};

/**
 * UCB1 on the eps-lattice of contracts: play each arm once, then the arm
 * maximizing mean + sqrt(2 ln t / pulls), ties by lowest arm index.
 * Indices are computed on rewards rescaled from [-1,1] to [0,1] by
 * (u+1)/2 (the affine map preserves arm order); utility accounting keeps
 * the raw scale. The learner state consumes only (arm index, realized
 * utility) -- never the sampled type or action.
 */
inline LearnRun run_ucb1(const TypedInstance& tinst, const LearnConfig& cfg) {
  if (cfg.horizon < 1) throw std::invalid_argument("horizon must be positive");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
    throw std::invalid_argument("delta must lie strictly between 0 and 1");
  const Index m = tinst.num_outcomes();
  const double epsilon =
      cfg.epsilon > 0.0 ? cfg.epsilon
                        : std::pow(static_cast<double>(cfg.horizon),
                                   -1.0 / (static_cast<double>(m) + 1.0));
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1]");

  LearnRun run;
  run.arms = build_grid(epsilon, m);
  run.epsilon = epsilon;
  run.delta = cfg.delta;
  run.seed = cfg.seed;
  run.horizon = cfg.horizon;

  const auto num_arms = static_cast<Index>(run.arms.size());
  // Exact per-arm expected utility under the adversarial response model;
  // contract-dependent only, cached on first use.
  std::vector<double> arm_expected(num_arms, std::numeric_limits<double>::quiet_NaN());
  auto expected_of = [&](Index k) {
    if (std::isnan(arm_expected[k])) {
      double total = 0.0;
      for (Index t = 0; t < tinst.num_types(); ++t)
        total += tinst.lambda[t] * worst_delta_response(tinst.types[t], run.arms[k], cfg.delta).psi;
      arm_expected[k] = total;
    }
    return arm_expected[k];
  };

  {
    const GridSpec bgrid{cfg.baseline_step, 1.0};
    run.baselines.grid_step = cfg.baseline_step;
    if (cfg.baseline != BaselineMode::NonRobust)
      run.baselines.opt_robust = grid_opt_typed(tinst, cfg.delta, bgrid).value;
    if (cfg.baseline != BaselineMode::Robust)
      run.baselines.opt_nonrobust = grid_opt_typed_nonrobust(tinst, bgrid).value;
  }

  Rng rng(cfg.seed);
  std::vector<long> pulls(num_arms, 0);
  std::vector<double> mean01(num_arms, 0.0);  // of rescaled rewards

  run.rounds.reserve(cfg.horizon);
  run.expected_utility.reserve(cfg.horizon);
  double cum_expected = 0.0;
  const bool robust_curve = !std::isnan(run.baselines.opt_robust);
  const bool nonrobust_curve = !std::isnan(run.baselines.opt_nonrobust);

  for (long t = 1; t <= cfg.horizon; ++t) {
    Index arm;
    if (t <= num_arms) {
      arm = static_cast<Index>(t - 1);
    } else {
      arm = 0;
      double best_index = -std::numeric_limits<double>::infinity();
      const double log_t = std::log(static_cast<double>(t));
      for (Index k = 0; k < num_arms; ++k) {
        const double ucb = mean01[k] + std::sqrt(2.0 * log_t / static_cast<double>(pulls[k]));
        if (ucb > best_index) {
          best_index = ucb;
          arm = k;
        }
      }
    }

    const StepResult step = environment_step(tinst, run.arms[arm], cfg.delta, rng);
    // Learner update: arm index and realized utility only.
    const double reward01 = (step.utility + 1.0) / 2.0;
    ++pulls[arm];
    mean01[arm] += (reward01 - mean01[arm]) / static_cast<double>(pulls[arm]);

    run.rounds.push_back({arm, step.type, step.action, step.outcome, step.utility});
    const double expected = expected_of(arm);
    run.expected_utility.push_back(expected);
    cum_expected += expected;
    if (robust_curve)
      run.cum_regret_robust.push_back(static_cast<double>(t) * run.baselines.opt_robust -
                                      cum_expected);
    if (nonrobust_curve)
      run.cum_regret_nonrobust.push_back(static_cast<double>(t) * run.baselines.opt_nonrobust -
                                         cum_expected);
  }
  return run;
}

}  // namespace rcd
