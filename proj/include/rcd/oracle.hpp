// Brute-force references: exhaustive maximization of robust and typed
// objectives over a uniform grid of contracts.
#pragma once

#include "rcd/common.hpp"
#include "rcd/instance.hpp"
#include "rcd/responses.hpp"
#include "rcd/typed.hpp"

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rcd {

/// A uniform lattice over [0, upper]^m: per-axis levels {0, h, 2h, ...}
/// completed with the upper endpoint when the step does not divide it.
struct GridSpec {
  double step = 0.01;
  double upper = 1.0;
};

/// Point budget guard; exhaustive scans stay desk-scale honest.
inline constexpr double kGridPointCap = 1e7;

namespace detail {

inline std::vector<double> axis_levels(const GridSpec& grid) {
  if (!(grid.step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(grid.upper > 0.0)) throw std::invalid_argument("grid upper bound must be positive");
  const auto count = static_cast<Index>(std::floor(grid.upper / grid.step + 1e-9));
  std::vector<double> levels;
  levels.reserve(count + 2);
  for (Index k = 0; k <= count; ++k) levels.push_back(std::min(k * grid.step, grid.upper));
  if (levels.back() < grid.upper - 1e-12) levels.push_back(grid.upper);
  return levels;
}

inline void check_grid_cap(std::size_t levels, Index dims) {
  const double points = std::pow(static_cast<double>(levels), static_cast<double>(dims));
  if (points > kGridPointCap)
    throw std::invalid_argument("grid has " + std::to_string(points) +
                                " points, above the cap of 1e7");
}

/// Lexicographic scan (first coordinate most significant) over the grid,
/// keeping the first maximizer. Deterministic.
template <typename Eval>
inline std::pair<Contract, double> grid_argmax(Index dims, const GridSpec& grid, Eval&& eval) {
  const std::vector<double> levels = axis_levels(grid);
  check_grid_cap(levels.size(), dims);
  std::vector<std::size_t> digit(dims, 0);
  Contract p = Vector::Zero(dims);
  Contract best_p = p;
  double best = -std::numeric_limits<double>::infinity();
  bool done = false;
  while (!done) {
    for (Index w = 0; w < dims; ++w) p[w] = levels[digit[w]];
    const double value = eval(p);
    if (value > best) {
      best = value;
      best_p = p;
    }
    Index w = dims - 1;  // advance odometer, last coordinate fastest
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
  return {best_p, best};
}

}  // namespace detail

struct GridResult {
  Contract contract;
  double value = 0.0;
};

/// Exhaustive maximization of Psi over the grid. The defining property of
/// the exact solver is that it never falls below this reference.
inline GridResult grid_psi_max(const Instance& inst, double delta, const GridSpec& grid = {}) {
  auto [p, v] = detail::grid_argmax(inst.num_outcomes(), grid,
                                    [&](const Contract& q) { return psi(inst, q, delta); });
  return {std::move(p), v};
}

/// Grid maximization of the typed robust objective
/// sum_theta lambda_theta u^P(p, worst delta-response of theta, theta).
inline GridResult grid_opt_typed(const TypedInstance& tinst, double delta,
                                 const GridSpec& grid = {}) {
  auto [p, v] = detail::grid_argmax(tinst.num_outcomes(), grid, [&](const Contract& q) {
    double total = 0.0;
    for (Index t = 0; t < tinst.num_types(); ++t)
      total += tinst.lambda[t] * worst_delta_response(tinst.types[t], q, delta).psi;
    return total;
  });
  return {std::move(p), v};
}

/// Same scan with exact optimistic best responses per type: the
/// non-robust typed benchmark.
inline GridResult grid_opt_typed_nonrobust(const TypedInstance& tinst, const GridSpec& grid = {}) {
  auto [p, v] = detail::grid_argmax(tinst.num_outcomes(), grid, [&](const Contract& q) {
    double total = 0.0;
    for (Index t = 0; t < tinst.num_types(); ++t) {
      const Instance& inst = tinst.types[t];
      total += tinst.lambda[t] * principal_utility(inst, q, optimistic_best_response(inst, q));
    }
    return total;
  });
  return {std::move(p), v};
}

}  // namespace rcd
