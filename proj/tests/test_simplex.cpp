#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rcd/common.hpp"
#include "rcd/io.hpp"  // format_double for fingerprints
#include "rcd/simplex.hpp"
#include "support/lp_reference.hpp"

#include <sstream>
#include <vector>

using namespace rcd;

namespace {

LinearProgram single_var_box() {
  LinearProgram lp;
  lp.num_vars = 1;
  lp.objective = Vector::Ones(1);
  lp.add_le(Vector::Ones(1), 1.0);
  return lp;
}

std::string fingerprint(const LpResult& res) {
  std::ostringstream ss;
  ss << static_cast<int>(res.status) << "|" << format_double(res.objective);
  for (Index j = 0; j < res.solution.size(); ++j) ss << "|" << format_double(res.solution[j]);
  return ss.str();
}

}  // namespace

TEST_CASE("one-variable box: maximize x subject to x <= 1") {
  const LpResult res = solve_lp(single_var_box());
  REQUIRE_EQ(res.status, LpStatus::Optimal);
  CHECK_EQ(res.objective, doctest::Approx(1.0));
  CHECK_EQ(res.solution[0], doctest::Approx(1.0));
}

TEST_CASE("contradictory bounds are infeasible") {
  LinearProgram lp = single_var_box();
  lp.add_ge(Vector::Ones(1), 2.0);
  CHECK_EQ(solve_lp(lp).status, LpStatus::Infeasible);
}

TEST_CASE("maximize p2 - p1 subject to p2 <= 0.25") {
  LinearProgram lp;
  lp.num_vars = 2;
  lp.objective = Vector(2);
  lp.objective << -1.0, 1.0;
  Vector row(2);
  row << 0.0, 1.0;
  lp.add_le(row, 0.25);
  const LpResult res = solve_lp(lp);
  REQUIRE_EQ(res.status, LpStatus::Optimal);
  CHECK_EQ(res.objective, doctest::Approx(0.25));
  CHECK_EQ(res.solution[0], doctest::Approx(0.0));
  CHECK_EQ(res.solution[1], doctest::Approx(0.25));
}

TEST_CASE("missing ceiling makes the LP unbounded") {
  LinearProgram lp;
  lp.num_vars = 1;
  lp.objective = Vector::Ones(1);
  CHECK_EQ(solve_lp(lp).status, LpStatus::Unbounded);
}

TEST_CASE("nonzero lower bounds shift the feasible box") {
  LinearProgram lp;
  lp.num_vars = 2;
  lp.objective = Vector(2);
  lp.objective << -1.0, -2.0;  // minimize x + 2y
  lp.var_lower_bounds = Vector(2);
  lp.var_lower_bounds << 0.5, 1.0;
  Vector row(2);
  row << 1.0, 1.0;
  lp.add_ge(row, 2.0);
  const LpResult res = solve_lp(lp);
  REQUIRE_EQ(res.status, LpStatus::Optimal);
  // Cheapest point: push x as high as needed, keep y at its bound.
  CHECK_EQ(res.solution[1], doctest::Approx(1.0));
  CHECK_EQ(res.solution[0], doctest::Approx(1.0));
  CHECK_EQ(res.objective, doctest::Approx(-3.0));
}

TEST_CASE("malformed programs are rejected") {
  LinearProgram lp;
  lp.num_vars = 2;
  lp.objective = Vector::Ones(1);  // wrong length
  CHECK_THROWS_AS(solve_lp(lp), std::invalid_argument);

  LinearProgram lp2 = single_var_box();
  lp2.constraints[0].coeffs = Vector::Ones(3);
  CHECK_THROWS_AS(solve_lp(lp2), std::invalid_argument);

  LinearProgram lp3;
  lp3.num_vars = 0;
  CHECK_THROWS_AS(solve_lp(lp3), std::invalid_argument);
}

TEST_CASE("identical inputs give bitwise-identical results") {
  LinearProgram lp;
  lp.num_vars = 3;
  lp.objective = Vector(3);
  lp.objective << -0.3, -0.7, -0.1;
  Rng rng(7);
  for (int i = 0; i < 6; ++i) {
    Vector row(3);
    row << rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1);
    if (i % 2 == 0)
      lp.add_le(row, rng.uniform(-0.2, 1.0));
    else
      lp.add_ge(row, rng.uniform(-1.0, 0.2));
  }
  const std::string a = fingerprint(solve_lp(lp));
  const std::string b = fingerprint(solve_lp(lp));
  CHECK_EQ(a, b);
}

TEST_CASE("dual fast path agrees with the forced primal path") {
  Rng rng(11);
  int optimal_seen = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Index nv = 1 + static_cast<Index>(rng.uniform01() * 3);
    LinearProgram lp;
    lp.num_vars = nv;
    lp.objective = Vector(nv);
    for (Index j = 0; j < nv; ++j) lp.objective[j] = -rng.uniform01();  // c <= 0
    const int rows = 1 + static_cast<int>(rng.uniform01() * 5);
    for (int i = 0; i < rows; ++i) {
      Vector row(nv);
      for (Index j = 0; j < nv; ++j) row[j] = rng.uniform(-1.0, 1.0);
      if (rng.uniform01() < 0.6)
        lp.add_le(row, rng.uniform(-0.5, 1.0));
      else
        lp.add_ge(row, rng.uniform(-1.0, 0.5));
    }
    const LpResult fast = solve_lp(lp);
    const LpResult slow = solve_lp(lp, LpOptions{.force_primal = true});
    REQUIRE_EQ(fast.status, slow.status);
    if (fast.status == LpStatus::Optimal) {
      ++optimal_seen;
      CHECK_EQ(fast.objective, doctest::Approx(slow.objective).epsilon(1e-8));
    }
  }
  CHECK(optimal_seen > 50);  // the sample must actually exercise the comparison
}

TEST_CASE("objective values match exact rational vertex enumeration") {
  // Coefficients are multiples of 1/10 so the rational conversion is exact;
  // box rows x_j <= 2 keep every LP bounded.
  Rng rng(23);
  int optimal_seen = 0, infeasible_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index nv = 1 + static_cast<Index>(rng.uniform01() * 3);
    auto tenth = [&](double lo, double hi) {
      return std::round(rng.uniform(lo, hi) * 10.0) / 10.0;
    };
    LinearProgram lp;
    lp.num_vars = nv;
    lp.objective = Vector(nv);
    for (Index j = 0; j < nv; ++j) lp.objective[j] = tenth(-1.0, 1.0);
    const int rows = static_cast<int>(rng.uniform01() * 5);
    for (int i = 0; i < rows; ++i) {
      Vector row(nv);
      for (Index j = 0; j < nv; ++j) row[j] = tenth(-1.0, 1.0);
      if (rng.uniform01() < 0.7)
        lp.add_le(row, tenth(-0.5, 1.5));
      else
        lp.add_ge(row, tenth(-1.5, 0.5));
    }
    for (Index j = 0; j < nv; ++j) {
      Vector box = Vector::Zero(nv);
      box[j] = 1.0;
      lp.add_le(box, 2.0);
    }

    const LpResult got = solve_lp(lp);
    const rcdtest::ReferenceResult expect = rcdtest::solve_reference(rcdtest::to_reference(lp, 10));
    if (expect.feasible) {
      ++optimal_seen;
      REQUIRE_EQ(got.status, LpStatus::Optimal);
      CHECK_EQ(got.objective, doctest::Approx(expect.value.to_double()).epsilon(1e-8));
    } else {
      ++infeasible_seen;
      REQUIRE_EQ(got.status, LpStatus::Infeasible);
    }
  }
  CHECK(optimal_seen > 50);
  CHECK(infeasible_seen > 5);
}

TEST_CASE("optimal solutions satisfy their constraints at the certificate tolerance") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    LinearProgram lp;
    lp.num_vars = 2;
    lp.objective = Vector(2);
    lp.objective << rng.uniform(-1, 1), rng.uniform(-1, 1);
    for (int i = 0; i < 4; ++i) {
      Vector row(2);
      row << rng.uniform(-1, 1), rng.uniform(-1, 1);
      lp.add_le(row, rng.uniform(0.0, 1.0));
    }
    Vector cap(2);
    cap << 1.0, 1.0;
    lp.add_le(cap, 3.0);
    lp.add_le(Vector::Unit(2, 0), 2.0);
    lp.add_le(Vector::Unit(2, 1), 2.0);
    const LpResult res = solve_lp(lp);
    if (res.status != LpStatus::Optimal) continue;
    for (const auto& con : lp.constraints) {
      const double lhs = con.coeffs.dot(res.solution);
      if (con.rel == Relation::LessEq)
        CHECK(lhs <= con.rhs + kLpTol);
      else
        CHECK(lhs >= con.rhs - kLpTol);
    }
    CHECK(res.solution.minCoeff() >= -kLpTol);
  }
}
