#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rcd/learning.hpp"
#include "rcd/typed.hpp"
#include "support/test_util.hpp"

#include <cmath>
#include <vector>

using namespace rcd;
using rcdtest::family2;

namespace {

TypedInstance family2_env() { return TypedInstance::single(family2()); }

}  // namespace

TEST_CASE("arm lattice enumerates the payment grid") {
  const auto line = build_grid(0.5, 1);
  REQUIRE_EQ(line.size(), 3);
  CHECK_EQ(line[0][0], doctest::Approx(0.0));
  CHECK_EQ(line[1][0], doctest::Approx(0.5));
  CHECK_EQ(line[2][0], doctest::Approx(1.0));

  CHECK_EQ(build_grid(0.5, 2).size(), 9);

  // Non-divisor steps still include the top payment.
  const auto completed = build_grid(0.4, 1);
  REQUIRE_EQ(completed.size(), 4);
  CHECK_EQ(completed[3][0], doctest::Approx(1.0));
}

TEST_CASE("default epsilon follows the horizon schedule") {
  TypedInstance env;  // m = 1, single type, single action
  Matrix F(1, 1);
  F << 1.0;
  Vector r(1);
  r << 0.8;
  env.r = r;
  env.types = {make_instance(F, r, Vector::Zero(1))};
  env.lambda = Vector::Ones(1);

  LearnConfig cfg;
  cfg.horizon = 64;
  cfg.delta = 0.2;
  cfg.seed = 1;
  cfg.baseline_step = 0.5;
  const LearnRun run = run_ucb1(env, cfg);
  CHECK_EQ(run.epsilon, doctest::Approx(0.125));  // 64^(-1/2)
}

TEST_CASE("environment step plays the adversarial response and samples its outcome") {
  const TypedInstance env = family2_env();
  Rng rng(3);
  const StepResult step = environment_step(env, rcdtest::contract2(0.0, 0.2), 0.2, rng);
  CHECK_EQ(step.type, 0);
  CHECK_EQ(step.action, 1);   // boundary excludes the opt-out
  CHECK_EQ(step.outcome, 1);  // the work action is deterministic
  CHECK_EQ(step.utility, doctest::Approx(0.8));
}

TEST_CASE("deterministic F rows always produce their outcome") {
  TypedInstance env;
  Matrix F(1, 2);
  F << 1.0, 0.0;
  Vector r(2);
  r << 0.0, 1.0;
  env.r = r;
  env.types = {make_instance(F, r, Vector::Zero(1))};
  env.lambda = Vector::Ones(1);
  Rng rng(9);
  for (int i = 0; i < 20; ++i)
    CHECK_EQ(environment_step(env, Vector::Zero(2), 0.2, rng).outcome, 0);
}

TEST_CASE("fixed seed reproduces the full trace") {
  LearnConfig cfg;
  cfg.horizon = 500;
  cfg.delta = 0.2;
  cfg.seed = 77;
  cfg.baseline_step = 0.05;
  const LearnRun a = run_ucb1(family2_env(), cfg);
  const LearnRun b = run_ucb1(family2_env(), cfg);
  REQUIRE_EQ(a.rounds.size(), b.rounds.size());
  for (std::size_t t = 0; t < a.rounds.size(); ++t) {
    CHECK_EQ(a.rounds[t].arm, b.rounds[t].arm);
    CHECK_EQ(a.rounds[t].outcome, b.rounds[t].outcome);
    CHECK_EQ(a.rounds[t].realized_utility, b.rounds[t].realized_utility);
  }
}

TEST_CASE("rounds on the benchmark arm contribute zero regret") {
  TypedInstance env;  // one action, one outcome: utility is 0.6 - p
  Matrix F(1, 1);
  F << 1.0;
  Vector r(1);
  r << 0.6;
  env.r = r;
  env.types = {make_instance(F, r, Vector::Zero(1))};
  env.lambda = Vector::Ones(1);

  LearnConfig cfg;
  cfg.horizon = 200;
  cfg.delta = 0.3;
  cfg.epsilon = 1.0;  // arms {0, 1}
  cfg.seed = 5;
  cfg.baseline_step = 1.0;  // benchmark grid equals the arm grid
  const LearnRun run = run_ucb1(env, cfg);
  CHECK_EQ(run.baselines.opt_robust, doctest::Approx(0.6));
  // The regret curve is exactly t * benchmark - cumulative expected utility,
  // so rounds spent on the benchmark-achieving arm add nothing to it.
  double cum = 0.0;
  for (long t = 0; t < cfg.horizon; ++t) {
    const auto ti = static_cast<std::size_t>(t);
    cum += run.expected_utility[ti];
    CHECK_EQ(run.cum_regret_robust[ti],
             doctest::Approx(static_cast<double>(t + 1) * 0.6 - cum).epsilon(1e-12));
    if (run.rounds[ti].arm == 0) {
      const double increment =
          t == 0 ? run.cum_regret_robust[0] : run.cum_regret_robust[ti] - run.cum_regret_robust[ti - 1];
      CHECK_EQ(increment, doctest::Approx(0.0));
    }
  }
}

TEST_CASE("ucb1 concentrates on the best arm") {
  // One outcome, reward 0.8: the arms {0, 0.6, 1} earn 0.8, 0.2 and -0.2.
  TypedInstance env;
  Matrix F(1, 1);
  F << 1.0;
  Vector r(1);
  r << 0.8;
  env.r = r;
  env.types = {make_instance(F, r, Vector::Zero(1))};
  env.lambda = Vector::Ones(1);

  LearnConfig cfg;
  cfg.horizon = 10000;
  cfg.delta = 0.2;
  cfg.epsilon = 0.6;
  cfg.seed = 11;
  cfg.baseline_step = 0.2;
  const LearnRun run = run_ucb1(env, cfg);
  long best_pulls = 0;
  for (const auto& rec : run.rounds)
    if (rec.arm == 0) ++best_pulls;
  CHECK(static_cast<double>(best_pulls) / static_cast<double>(cfg.horizon) > 0.95);
}

TEST_CASE("expected-utility trace matches realized utilities within 3 sigma") {
  LearnConfig cfg;
  cfg.horizon = 20000;
  cfg.delta = 0.2;
  cfg.seed = 19;
  cfg.baseline_step = 0.05;
  const LearnRun run = run_ucb1(family2_env(), cfg);
  double realized = 0.0, expected = 0.0;
  for (long t = 0; t < cfg.horizon; ++t) {
    realized += run.rounds[static_cast<std::size_t>(t)].realized_utility;
    expected += run.expected_utility[static_cast<std::size_t>(t)];
  }
  // Per-round variance is at most 1 on the [-1,1] range.
  CHECK(std::abs(realized - expected) <= 3.0 * std::sqrt(static_cast<double>(cfg.horizon)));
}

TEST_CASE("the learner is reconstructible from (arm, utility) alone") {
  // Replaying only the observable columns must reproduce every arm choice;
  // any dependence on the hidden type/action columns would diverge.
  LearnConfig cfg;
  cfg.horizon = 3000;
  cfg.delta = 0.2;
  cfg.seed = 23;
  cfg.baseline_step = 0.1;
  const LearnRun run = run_ucb1(family2_env(), cfg);

  const auto num_arms = static_cast<Index>(run.arms.size());
  std::vector<long> pulls(num_arms, 0);
  std::vector<double> mean01(num_arms, 0.0);
  for (long t = 1; t <= cfg.horizon; ++t) {
    Index expect;
    if (t <= num_arms) {
      expect = static_cast<Index>(t - 1);
    } else {
      expect = 0;
      double best = -std::numeric_limits<double>::infinity();
      for (Index k = 0; k < num_arms; ++k) {
        const double ucb =
            mean01[k] + std::sqrt(2.0 * std::log(static_cast<double>(t)) / pulls[k]);
        if (ucb > best) {
          best = ucb;
          expect = k;
        }
      }
    }
    const auto& rec = run.rounds[static_cast<std::size_t>(t - 1)];
    REQUIRE_EQ(rec.arm, expect);
    const double reward01 = (rec.realized_utility + 1.0) / 2.0;
    ++pulls[expect];
    mean01[expect] += (reward01 - mean01[expect]) / static_cast<double>(pulls[expect]);
  }
}

TEST_CASE("per-round regret shrinks with the horizon") {
  // Small-scale version of the sublinearity probe (the acceptance suite
  // runs the full one): average R_T/T over a few seeds at two horizons.
  const TypedInstance env = family2_env();
  auto avg_rate = [&](long T) {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      LearnConfig cfg;
      cfg.horizon = T;
      cfg.delta = 0.2;
      cfg.seed = seed;
      cfg.baseline_step = 0.02;
      const LearnRun run = run_ucb1(env, cfg);
      total += run.cum_regret_robust.back() / static_cast<double>(T);
    }
    return total / 3.0;
  };
  CHECK(avg_rate(8000) < avg_rate(1000));
}

TEST_CASE("nonrobust regret decomposes with the 2 sqrt(delta) T surcharge") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    LearnConfig cfg;
    cfg.horizon = 2000;
    cfg.delta = 0.2;
    cfg.seed = seed;
    cfg.baseline_step = 0.05;
    const LearnRun run = run_ucb1(family2_env(), cfg);
    const double surcharge = 2.0 * std::sqrt(cfg.delta) * static_cast<double>(cfg.horizon);
    CHECK(run.cum_regret_nonrobust.back() <=
          run.cum_regret_robust.back() + surcharge + 1e-6);
  }
}

TEST_CASE("realized utilities stay in the unit band") {
  LearnConfig cfg;
  cfg.horizon = 2000;
  cfg.delta = 0.25;
  cfg.seed = 3;
  cfg.baseline_step = 0.1;
  const LearnRun run = run_ucb1(family2_env(), cfg);
  for (const auto& rec : run.rounds) {
    CHECK(rec.realized_utility >= -1.0);
    CHECK(rec.realized_utility <= 1.0);
  }
}

TEST_CASE("a lone opt-out type pins both benchmarks at zero") {
  TypedInstance env;
  Matrix F(1, 2);
  F << 1.0, 0.0;
  Vector r(2);
  r << 0.0, 1.0;
  env.r = r;
  env.types = {make_instance(F, r, Vector::Zero(1))};
  env.lambda = Vector::Ones(1);
  const Baselines b = compute_baselines(env, 0.2, GridSpec{0.1, 1.0});
  CHECK_EQ(b.opt_robust, doctest::Approx(0.0));
  CHECK_EQ(b.opt_nonrobust, doctest::Approx(0.0));
}

TEST_CASE("baseline grids report both benchmarks") {
  const Baselines b = compute_baselines(family2_env(), 0.2, GridSpec{0.01, 1.0});
  CHECK_EQ(b.opt_robust, doctest::Approx(0.8).epsilon(1e-9));
  CHECK_EQ(b.opt_nonrobust, doctest::Approx(1.0));
  CHECK_EQ(b.grid_step, 0.01);

  // Coarse grids never beat fine ones.
  const Baselines coarse = compute_baselines(family2_env(), 0.2, GridSpec{0.25, 1.0});
  CHECK(coarse.opt_robust <= b.opt_robust + 1e-12);
  CHECK(coarse.opt_nonrobust <= b.opt_nonrobust + 1e-12);
}
