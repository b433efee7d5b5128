// Typed principal-agent problems: a family of instances sharing outcomes
// and rewards, indexed by an agent type drawn from a fixed distribution.
#pragma once

#include "rcd/common.hpp"
#include "rcd/instance.hpp"

#include <Eigen/Core>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace rcd {

struct TypedInstance {
  Vector r;                      // shared rewards, length m
  std::vector<Instance> types;   // per-type actions; each carries the shared r
  Vector lambda;                 // type distribution

  Index num_outcomes() const { return r.size(); }
  Index num_types() const { return static_cast<Index>(types.size()); }

  static TypedInstance single(Instance inst) {
    TypedInstance t;
    t.r = inst.r;
    t.types.push_back(std::move(inst));
    t.lambda = Vector::Ones(1);
    return t;
  }
};

inline ValidationReport validate_typed(const TypedInstance& tinst) {
  ValidationReport rep;
  const Index k = tinst.num_types();
  if (k < 1) {
    rep.errors.push_back("typed instance has no types");
    return rep;
  }
  if (tinst.lambda.size() != k) {
    rep.errors.push_back("type distribution length does not match type count");
    return rep;
  }
  for (Index t = 0; t < k; ++t)
    if (!(tinst.lambda[t] >= 0.0))
      rep.errors.push_back("lambda[" + std::to_string(t) + "] negative");
  if (!(std::abs(tinst.lambda.sum() - 1.0) <= 1e-9))
    rep.errors.push_back("type distribution sums to " + std::to_string(tinst.lambda.sum()) +
                         ", expected 1");
  for (Index t = 0; t < k; ++t) {
    const Instance& inst = tinst.types[t];
    if (inst.num_outcomes() != tinst.num_outcomes() || (inst.r - tinst.r).cwiseAbs().maxCoeff() > 0.0) {
      rep.errors.push_back("type " + std::to_string(t) + " does not share the common outcome space");
      continue;
    }
    ValidationReport sub = validate_instance(inst);
    for (const auto& e : sub.errors) rep.errors.push_back("type " + std::to_string(t) + ": " + e);
    for (const auto& w : sub.warnings) rep.warnings.push_back("type " + std::to_string(t) + ": " + w);
  }
  return rep;
}

}  // namespace rcd
