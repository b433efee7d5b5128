// Shared constants and small utilities for the robust-contracts toolkit.
#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace rcd {

using Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Tolerance for best-response set membership. Strict inclusion
/// `u - (best - delta) > kMembershipTol` keeps actions that LP optima park
/// exactly on the non-strict boundary out of the delta-best-response set.
inline constexpr double kMembershipTol = 1e-7;

/// Tolerance for LP feasibility / optimality certification.
inline constexpr double kLpTol = 1e-9;

/// Raised when an internal consistency guarantee is violated (e.g. every
/// subproblem of the robust enumeration infeasible, or an unbounded LP where
/// the objective is provably bounded). CLI maps this to exit code 2.
class internal_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deterministic RNG wrapper. All randomness in the toolkit flows through
/// this type; mt19937_64 plus explicit bit manipulation keeps traces
/// bit-reproducible across standard library implementations
/// (std::uniform_real_distribution makes no such guarantee).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform draw in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Samples an index from a probability vector by inverse CDF.
  Index categorical(const Vector& probs) {
    const double u = uniform01();
    double acc = 0.0;
    for (Index i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    return probs.size() - 1;  // guards against cumulative rounding
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rcd
