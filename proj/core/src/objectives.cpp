#include "pairlink/objectives.hpp"

#include <algorithm>
#include <vector>

#include "pairlink/error.hpp"

namespace pairlink {

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::auc: return "auc";
    case LossKind::hinge_auc: return "hinge_auc";
    case LossKind::weighted_hinge_auc: return "weighted_hinge_auc";
    case LossKind::cross_entropy: return "cross_entropy";
  }
  return "?";
}

LossKind parse_loss_kind(const std::string& s) {
  if (s == "auc") return LossKind::auc;
  if (s == "hinge_auc") return LossKind::hinge_auc;
  if (s == "weighted_hinge_auc") return LossKind::weighted_hinge_auc;
  if (s == "cross_entropy" || s == "ce") return LossKind::cross_entropy;
  throw ConfigError("unknown loss '" + s + "' (auc, hinge_auc, weighted_hinge_auc, cross_entropy)");
}

bool is_pairwise(LossKind kind) { return kind != LossKind::cross_entropy; }

namespace {

void require_column(const Tensor& t, const char* what) {
  if (t.cols() != 1) {
    throw DimensionError(std::string(what) + " scores must be a column, got " +
                         t.value().shape_string());
  }
}

}  // namespace

Tensor pairwise_loss(Tape& tape, const Tensor& pos, const Tensor& neg,
                     std::span<const double> gammas, LossKind kind) {
  require_column(pos, "positive");
  require_column(neg, "negative");
  if (pos.rows() != neg.rows()) {
    throw DimensionError("pairwise_loss needs aligned scores: " + std::to_string(pos.rows()) +
                         " positives vs " + std::to_string(neg.rows()) + " negatives");
  }
  if (pos.rows() == 0) throw DimensionError("pairwise_loss on zero pairs");
  if (!gammas.empty() && gammas.size() != pos.rows()) {
    throw DimensionError("pairwise_loss has " + std::to_string(gammas.size()) + " gammas for " +
                         std::to_string(pos.rows()) + " pairs");
  }
  for (double g : gammas) {
    if (!(g > 0.0 && g <= 1.0)) throw ValidationError("gamma must lie in (0, 1]");
  }

  Tensor diff = sub(neg, pos);  // s- - s+
  switch (kind) {
    case LossKind::auc: return mean(square(add_scalar(diff, 1.0)));
    case LossKind::hinge_auc: return mean(square(relu(add_scalar(diff, 1.0))));
    case LossKind::weighted_hinge_auc: {
      if (gammas.empty()) throw ValidationError("weighted_hinge_auc needs gammas");
      Tensor g = tape.constant(Matrix::column(gammas));
      return mean(hadamard(g, square(relu(add(diff, g)))));
    }
    case LossKind::cross_entropy: break;
  }
  throw ValidationError("pairwise_loss does not handle cross_entropy");
}

Tensor cross_entropy_loss(Tape& tape, const Tensor& pos, const Tensor& neg) {
  (void)tape;
  require_column(pos, "positive");
  require_column(neg, "negative");
  if (pos.rows() == 0 || neg.rows() == 0) throw DimensionError("cross_entropy_loss on empty scores");
  // -log sigmoid(s) = softplus(-s); -log(1 - sigmoid(s)) = softplus(s).
  return add(mean(softplus(scale(pos, -1.0))), mean(softplus(neg)));
}

Tensor loss(Tape& tape, const Tensor& pos, const Tensor& neg, std::span<const double> gammas,
            LossKind kind) {
  if (kind == LossKind::cross_entropy) return cross_entropy_loss(tape, pos, neg);
  return pairwise_loss(tape, pos, neg, gammas, kind);
}

double loss_value(std::span<const double> pos, std::span<const double> neg,
                  std::span<const double> gammas, LossKind kind) {
  Tape tape;
  return loss(tape, tape.constant(Matrix::column(pos)), tape.constant(Matrix::column(neg)), gammas,
              kind)
      .item();
}

double empirical_auc(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) throw UndefinedMetricError("AUC needs positives and negatives");
  std::vector<double> sorted(neg.begin(), neg.end());
  std::sort(sorted.begin(), sorted.end());
  // Count pairs with neg < pos; exact in integers.
  std::size_t wins = 0;
  for (double p : pos) {
    wins += static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), p) - sorted.begin());
  }
  return static_cast<double>(wins) /
         (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

}  // namespace pairlink
