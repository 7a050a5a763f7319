#include <cmath>

#include <gtest/gtest.h>

#include "pairlink/error.hpp"
#include "pairlink/objectives.hpp"
#include "oracles.hpp"

using namespace pairlink;

namespace {

double one(double pos, double neg, LossKind kind, double gamma = 1.0) {
  std::vector<double> p{pos}, n{neg}, g{gamma};
  return loss_value(p, n, kind == LossKind::weighted_hinge_auc ? std::span<const double>(g)
                                                               : std::span<const double>{},
                    kind);
}

}  // namespace

TEST(Loss, PairwiseExamples) {
  EXPECT_EQ(one(1.0, 0.0, LossKind::auc), 0.0);
  EXPECT_NEAR(one(0.3, 0.5, LossKind::auc), 1.44, 1e-12);
  EXPECT_EQ(one(2.0, 0.5, LossKind::hinge_auc), 0.0);
  EXPECT_NEAR(one(0.2, 0.0, LossKind::hinge_auc), 0.64, 1e-12);
  EXPECT_EQ(one(0.6, 0.0, LossKind::weighted_hinge_auc, 0.5), 0.0);
  EXPECT_EQ(one(0.4, 0.4, LossKind::weighted_hinge_auc, 1.0), 1.0);
}

TEST(Loss, ReductionIsMeanOverPairs) {
  std::vector<double> pos{1.0, 0.3}, neg{0.0, 0.5};
  EXPECT_NEAR(loss_value(pos, neg, {}, LossKind::auc), 0.72, 1e-12);
}

TEST(Loss, Errors) {
  std::vector<double> two{1, 2}, three{1, 2, 3}, bad_gamma{0.0, 1.0}, ok_gamma{1.0, 1.0};
  EXPECT_THROW(loss_value(two, three, {}, LossKind::auc), DimensionError);
  EXPECT_THROW(loss_value(two, two, bad_gamma, LossKind::weighted_hinge_auc), ValidationError);
  EXPECT_THROW(loss_value(two, two, {}, LossKind::weighted_hinge_auc), ValidationError);
  EXPECT_NO_THROW(loss_value(two, two, ok_gamma, LossKind::weighted_hinge_auc));
}

TEST(Loss, CrossEntropyExamples) {
  // One positive and one negative; each side contributes its own mean.
  EXPECT_NEAR(one(0.0, -800.0, LossKind::cross_entropy), std::log(2.0), 1e-12);
  EXPECT_NEAR(one(40.0, -800.0, LossKind::cross_entropy), 0.0, 1e-15);
  EXPECT_NEAR(one(800.0, 0.0, LossKind::cross_entropy), std::log(2.0), 1e-12);
  EXPECT_TRUE(std::isfinite(one(-800.0, 800.0, LossKind::cross_entropy)));
}

TEST(Loss, HingeZeroIffAllMarginsAtLeastOne) {
  std::vector<double> pos{2.0, 3.0, 1.5}, neg{1.0, 1.5, 0.5};
  EXPECT_EQ(loss_value(pos, neg, {}, LossKind::hinge_auc), 0.0);
  neg[1] = 2.0001;
  EXPECT_GT(loss_value(pos, neg, {}, LossKind::hinge_auc), 0.0);
}

TEST(Loss, PairwiseLossesAreShiftInvariant) {
  Rng rng(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> w(0.1, 1.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> pos(8), neg(8), gam(8);
    for (std::size_t i = 0; i < 8; ++i) {
      // Dyadic values keep the shifted arithmetic exact.
      pos[i] = std::ldexp(std::round(std::ldexp(u(rng), 10)), -10);
      neg[i] = std::ldexp(std::round(std::ldexp(u(rng), 10)), -10);
      gam[i] = std::ldexp(std::round(std::ldexp(w(rng), 10)), -10);
    }
    const double c = 3.0;
    std::vector<double> ps(pos), ns(neg);
    for (auto& v : ps) v += c;
    for (auto& v : ns) v += c;
    for (auto kind : {LossKind::auc, LossKind::hinge_auc}) {
      EXPECT_EQ(loss_value(pos, neg, {}, kind), loss_value(ps, ns, {}, kind));
    }
    EXPECT_EQ(loss_value(pos, neg, gam, LossKind::weighted_hinge_auc),
              loss_value(ps, ns, gam, LossKind::weighted_hinge_auc));
  }
}

TEST(Loss, ParseNames) {
  EXPECT_EQ(parse_loss_kind("weighted_hinge_auc"), LossKind::weighted_hinge_auc);
  EXPECT_THROW(parse_loss_kind("logistic"), ConfigError);
  EXPECT_TRUE(is_pairwise(LossKind::hinge_auc));
  EXPECT_FALSE(is_pairwise(LossKind::cross_entropy));
}

TEST(EmpiricalAuc, Examples) {
  EXPECT_EQ(empirical_auc(std::vector<double>{0.9, 0.4}, std::vector<double>{0.5, 0.1}), 0.75);
  EXPECT_EQ(empirical_auc(std::vector<double>{3, 4}, std::vector<double>{1, 2}), 1.0);
  EXPECT_EQ(empirical_auc(std::vector<double>{1, 1}, std::vector<double>{1, 1, 1}), 0.0);
  EXPECT_THROW(empirical_auc(std::vector<double>{}, std::vector<double>{1}), UndefinedMetricError);
}

TEST(EmpiricalAuc, MatchesBruteForce) {
  Rng rng(2);
  std::uniform_int_distribution<int> size(1, 200);
  std::uniform_int_distribution<int> level(0, 30);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> pos(size(rng)), neg(size(rng));
    for (auto& v : pos) v = level(rng) / 7.0;
    for (auto& v : neg) v = level(rng) / 7.0;
    EXPECT_EQ(empirical_auc(pos, neg), oracle::auc(pos, neg));
  }
}
