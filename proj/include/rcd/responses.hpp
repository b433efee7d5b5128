// Best-response and approximate-best-response semantics.
#pragma once

#include "rcd/common.hpp"
#include "rcd/instance.hpp"

#include <Eigen/Core>

#include <vector>

namespace rcd {

/// How boundary actions are treated when forming the delta-best-response
/// set. Strict follows the model definition (utility gap strictly below
/// delta, beyond kMembershipTol); Pessimistic additionally keeps actions
/// sitting on the boundary and exists for sensitivity analysis only.
enum class MembershipMode { Strict, Pessimistic };

/// Agent's expected utility for action a under contract p: F_a . p - c_a.
inline double agent_utility(const Instance& inst, const Eigen::Ref<const Vector>& p, Index a) {
  return inst.F.row(a).dot(p) - inst.c[a];
}

/// Principal's expected utility for action a under contract p: F_a . (r - p).
inline double principal_utility(const Instance& inst, const Eigen::Ref<const Vector>& p,
                                Index a) {
  return inst.F.row(a).dot(inst.r - p);
}

namespace detail {

inline Vector agent_utilities(const Instance& inst, const Eigen::Ref<const Vector>& p) {
  return inst.F * p - inst.c;
}

inline Vector principal_utilities(const Instance& inst, const Eigen::Ref<const Vector>& p) {
  return inst.F * (inst.r - p);
}

inline bool in_delta_set(double utility, double best, double delta, MembershipMode mode) {
  const double margin = utility - (best - delta);
  return mode == MembershipMode::Strict ? margin > kMembershipTol : margin >= -kMembershipTol;
}

}  // namespace detail

/// Exact best responses: actions within kMembershipTol of the maximum
/// agent utility.
inline std::vector<Index> best_responses(const Instance& inst, const Eigen::Ref<const Vector>& p) {
  const Vector u = detail::agent_utilities(inst, p);
  const double best = u.maxCoeff();
  std::vector<Index> out;
  for (Index a = 0; a < u.size(); ++a)
    if (best - u[a] <= kMembershipTol) out.push_back(a);
  return out;
}

/**
 * The action the agent plays in the classical model: a utility-maximizing
 * action, ties broken in favor of the principal, residual ties by lowest
 * action index (for determinism; the model does not specify further).
 */
inline Index optimistic_best_response(const Instance& inst, const Eigen::Ref<const Vector>& p) {
  const Vector u = detail::agent_utilities(inst, p);
  const Vector v = detail::principal_utilities(inst, p);
  const double best = u.maxCoeff();
  Index pick = -1;
  for (Index a = 0; a < u.size(); ++a) {
    if (best - u[a] > kMembershipTol) continue;
    if (pick < 0 || v[a] > v[pick]) pick = a;
  }
  return pick;
}

/// The set of delta-best responses A^delta(p).
inline std::vector<Index> delta_best_responses(const Instance& inst,
                                               const Eigen::Ref<const Vector>& p, double delta,
                                               MembershipMode mode = MembershipMode::Strict) {
  const Vector u = detail::agent_utilities(inst, p);
  const double best = u.maxCoeff();
  std::vector<Index> out;
  for (Index a = 0; a < u.size(); ++a)
    if (detail::in_delta_set(u[a], best, delta, mode)) out.push_back(a);
  return out;
}

struct WorstResponse {
  Index action;  // the delta-best response minimizing principal utility
  double psi;    // principal utility of that action, i.e. Psi(p)
};

/**
 * Adversarial selection: among the delta-best responses, the one that
 * minimizes the principal's utility (ties by lowest action index). The
 * returned psi is the robust value Psi(p) of the contract.
 *
 * The set is mathematically never empty (the exact best response always
 * qualifies for delta > kMembershipTol); emptiness is asserted rather than
 * given a fallback.
 */
inline WorstResponse worst_delta_response(const Instance& inst, const Eigen::Ref<const Vector>& p,
                                          double delta,
                                          MembershipMode mode = MembershipMode::Strict) {
  const Vector u = detail::agent_utilities(inst, p);
  const Vector v = detail::principal_utilities(inst, p);
  const double best = u.maxCoeff();
  Index pick = -1;
  for (Index a = 0; a < u.size(); ++a) {
    if (!detail::in_delta_set(u[a], best, delta, mode)) continue;
    if (pick < 0 || v[a] < v[pick]) pick = a;
  }
  if (pick < 0)
    throw internal_error("delta-best-response set is empty (delta <= membership tolerance?)");
  return {pick, v[pick]};
}

/// Robust value of a contract: principal utility under the worst
/// delta-best response.
inline double psi(const Instance& inst, const Eigen::Ref<const Vector>& p, double delta,
                  MembershipMode mode = MembershipMode::Strict) {
  return worst_delta_response(inst, p, delta, mode).psi;
}

/// One-pass summary of the agent's response structure under a contract.
struct ResponseReport {
  double best_value = 0.0;          // max_a agent utility
  std::vector<Index> best_set;      // exact best responses (within tolerance)
  Index optimistic_action = -1;     // tie-break in favor of the principal
  std::vector<Index> delta_set;     // A^delta(p)
  Index worst_delta_action = -1;    // adversarial delta-best response
  double psi = 0.0;                 // Psi(p)
};

inline ResponseReport analyze_responses(const Instance& inst, const Eigen::Ref<const Vector>& p,
                                        double delta,
                                        MembershipMode mode = MembershipMode::Strict) {
  ResponseReport rep;
  const Vector u = detail::agent_utilities(inst, p);
  const Vector v = detail::principal_utilities(inst, p);
  rep.best_value = u.maxCoeff();
  for (Index a = 0; a < u.size(); ++a) {
    if (rep.best_value - u[a] <= kMembershipTol) {
      rep.best_set.push_back(a);
      if (rep.optimistic_action < 0 || v[a] > v[rep.optimistic_action])
        rep.optimistic_action = a;
    }
    if (detail::in_delta_set(u[a], rep.best_value, delta, mode)) {
      rep.delta_set.push_back(a);
      if (rep.worst_delta_action < 0 || v[a] < v[rep.worst_delta_action])
        rep.worst_delta_action = a;
    }
  }
  if (rep.worst_delta_action < 0)
    throw internal_error("delta-best-response set is empty (delta <= membership tolerance?)");
  rep.psi = v[rep.worst_delta_action];
  return rep;
}

}  // namespace rcd
