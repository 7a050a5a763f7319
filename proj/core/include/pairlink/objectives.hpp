#pragma once

#include <span>
#include <string>

#include "pairlink/autodiff.hpp"

namespace pairlink {

enum class LossKind { auc, hinge_auc, weighted_hinge_auc, cross_entropy };

std::string to_string(LossKind kind);
LossKind parse_loss_kind(const std::string& s);
bool is_pairwise(LossKind kind);

// Mean over row-aligned pairs of
//   auc:                (1 - s+ + s-)^2
//   hinge_auc:          max(0, 1 - s+ + s-)^2
//   weighted_hinge_auc: g * max(0, g - s+ + s-)^2
// `gammas` may be empty except for weighted_hinge_auc; when given, its length
// must match and every value must lie in (0, 1]. No L2 term here: weight decay
// is applied by the optimizer.
Tensor pairwise_loss(Tape& tape, const Tensor& pos, const Tensor& neg,
                     std::span<const double> gammas, LossKind kind);

/// mean(-log sigmoid(s+)) + mean(-log(1 - sigmoid(s-))), via softplus.
Tensor cross_entropy_loss(Tape& tape, const Tensor& pos, const Tensor& neg);

/// Dispatches on kind.
Tensor loss(Tape& tape, const Tensor& pos, const Tensor& neg, std::span<const double> gammas,
            LossKind kind);

/// Value-only evaluation on plain score vectors.
double loss_value(std::span<const double> pos, std::span<const double> neg,
                  std::span<const double> gammas, LossKind kind);

/// Fraction of (pos, neg) pairs with pos > neg, strictly. Ties earn nothing.
/// O((n + m) log m). Throws UndefinedMetricError when either side is empty.
double empirical_auc(std::span<const double> pos, std::span<const double> neg);

}  // namespace pairlink
