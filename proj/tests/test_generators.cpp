#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rcd/generators.hpp"
#include "rcd/instance.hpp"

#include <cmath>

using namespace rcd;

TEST_CASE("kappa is the first index whose slope clears sqrt(delta)") {
  CHECK_EQ(lb_family_kappa(0.25), 3);  // sqrt = 0.5; 2/3 is the first ratio above
  CHECK_EQ(lb_family_kappa(0.04), 2);  // sqrt = 0.2 < 1/2
  CHECK_EQ(lb_family_kappa(0.81), 11); // sqrt = 0.9; needs (i-1)/i > 0.9
}

TEST_CASE("lower-bound family layout") {
  const double delta = 0.25;
  const Index n = 10;
  const Instance inst = gen_tight_lb(delta, n);
  REQUIRE_EQ(inst.num_actions(), 21);
  REQUIRE_EQ(inst.num_outcomes(), 2);
  CHECK_EQ(inst.r[0], doctest::Approx(1.0));
  CHECK_EQ(inst.r[1], doctest::Approx(0.0));
  CHECK_EQ(inst.c.maxCoeff(), doctest::Approx(0.0));

  // Below kappa: no mass on the rewarded outcome. Top action: full mass.
  CHECK_EQ(inst.F(0, 0), doctest::Approx(0.0));
  CHECK_EQ(inst.F(1, 0), doctest::Approx(0.0));
  CHECK_EQ(inst.F(20, 0), doctest::Approx(1.0));
  // Spot checks of the gamma sequence: i = kappa and the middle plateau.
  CHECK_EQ(inst.F(2, 0), doctest::Approx(1.0 - 1.5 * 0.5));   // gamma_3 = 3/2
  CHECK_EQ(inst.F(10, 0), doctest::Approx(1.0 - 0.5));        // gamma_11 = 1
  CHECK_EQ(inst.F(11, 0), doctest::Approx(1.0 - 0.45));       // gamma_12 = 9/10

  const ValidationReport rep = validate_instance(inst);
  CHECK(rep.ok());
  CHECK(rep.warnings.empty());  // the zero actions are opt-outs

  // The rewarded-outcome mass is non-decreasing in the action index.
  for (Index a = 1; a < inst.num_actions(); ++a) CHECK(inst.F(a, 0) >= inst.F(a - 1, 0) - 1e-12);
}

TEST_CASE("lower-bound family rejects n at or below kappa") {
  CHECK_THROWS_AS(gen_tight_lb(0.25, 3), std::invalid_argument);
  CHECK_THROWS_AS(gen_tight_lb(0.25, 2), std::invalid_argument);
  CHECK_NOTHROW(gen_tight_lb(0.25, 4));
}

TEST_CASE("upper-bound family is the two-action identity instance") {
  const Instance inst = gen_tight_ub(0.25);
  REQUIRE_EQ(inst.num_actions(), 2);
  CHECK_EQ(inst.F(0, 0), doctest::Approx(1.0));
  CHECK_EQ(inst.F(1, 1), doctest::Approx(1.0));
  CHECK_EQ(inst.r[0], doctest::Approx(0.0));
  CHECK_EQ(inst.r[1], doctest::Approx(1.0));
  CHECK(validate_instance(inst).ok());
  // Opt-out present: first action earns the principal nothing and is free.
  CHECK(validate_instance(inst).warnings.empty());
}

TEST_CASE("random instances are deterministic in the seed") {
  const Instance a = gen_random(4, 3, 7);
  const Instance b = gen_random(4, 3, 7);
  CHECK_EQ((a.F - b.F).cwiseAbs().maxCoeff(), 0.0);
  CHECK_EQ((a.r - b.r).cwiseAbs().maxCoeff(), 0.0);
  CHECK_EQ((a.c - b.c).cwiseAbs().maxCoeff(), 0.0);

  const Instance other = gen_random(4, 3, 8);
  CHECK((a.F - other.F).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("random rows are stochastic to high precision") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = gen_random(4, 2, seed);
    for (Index a = 0; a < inst.num_actions(); ++a)
      CHECK_EQ(inst.F.row(a).sum(), doctest::Approx(1.0).epsilon(1e-12));
    CHECK(validate_instance(inst).ok());
  }
}

TEST_CASE("with_opt_out removes the validator warning") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ValidationReport rep = validate_instance(gen_random(3, 2, seed, true));
    CHECK(rep.ok());
    CHECK(rep.warnings.empty());
  }
}
