#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "pairlink/autodiff.hpp"
#include "pairlink/parameters.hpp"

namespace pairlink {

struct GradCheckOptions {
  double eps = 1e-5;
  double tol = 1e-4;
  /// Denominator floor for the relative error, so entries whose true gradient
  /// is ~0 are compared on an absolute scale instead of amplifying round-off.
  double floor = 1e-6;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t entries_checked = 0;
  bool passed = false;
};

/// Builds a scalar loss on the given tape from the store's current values.
using LossFunction = std::function<Tensor(Tape&)>;

// Compares the tape gradient of every parameter entry against the central
// difference (f(p+eps) - f(p-eps)) / (2 eps). Relative error per entry is
// |a - n| / max(|a|, |n|, floor). Throws UsageError when two unperturbed
// evaluations of f disagree. Leaves parameter values unchanged and grads zero.
GradCheckReport grad_check(const LossFunction& f, ParameterStore& store,
                           const GradCheckOptions& opts = {});

}  // namespace pairlink
