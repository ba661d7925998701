#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "burkholder/error.hpp"
#include "burkholder/losses.hpp"
#include "burkholder/potentials/matrix.hpp"
#include "burkholder/potentials/param_free.hpp"
#include "burkholder/rng.hpp"
#include "burkholder/statistic.hpp"

using namespace burkholder;

TEST(Statistic, ComponentwiseAddition) {
  Statistic a = ScalarVec{1.0, {1.0, 0.0}};
  a += ScalarVec{0.5, {0.0, 1.0}};
  const auto& s = a.as<ScalarVec>();
  EXPECT_EQ(s.b, 1.5);
  EXPECT_EQ(s.x, (Vec{1.0, 1.0}));
}

TEST(Statistic, TagAndShapeMismatchThrow) {
  Statistic a = ScalarVec{0.0, {0.0, 0.0}};
  EXPECT_THROW(a += Statistic(ScalarVec{0.0, {0.0}}), StructuralError);
  EXPECT_THROW(a += Statistic(ScalarVecScalar{0.0, {0.0, 0.0}, 0.0}), StructuralError);
  EXPECT_THROW(a.as<VecSym>(), StructuralError);
  Statistic p = Product{{ScalarVec{0.0, {0.0}}, ScalarVec{0.0, {0.0}}}};
  const Statistic single = Product{{ScalarVec{0.0, {0.0}}}};
  EXPECT_THROW(p += single, StructuralError);
}

TEST(Statistic, ZeroLikeFlattenAndProducts) {
  const Statistic s = Product{{ScalarVec{2.0, {1.0, -1.0}}, VecSym{{3.0}, SymMat::identity(1, 4.0)}}};
  const Statistic z = s.zero_like();
  EXPECT_TRUE(z.same_shape(s));
  for (double v : z.flatten()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(s + z, s);
  EXPECT_EQ(s.max_abs_diff(2.0 * s), 4.0);
  EXPECT_EQ(s.tag(), StatTag::product);
  EXPECT_EQ(to_string(StatTag::scalar_sym_psd), "ScalarSymPsd");
}

TEST(Accumulate, AnchorGivesZero) {
  const MatrixPotential mp(MatrixConfig::standard(2, 3, 0.2));
  const Statistic z = mp.stat_map(mp.anchor_instance(), 0.7, 0.0);
  EXPECT_EQ(z, mp.zero());
  const ParamFreePotential pf(ParamFreeConfig::standard(10, 3));
  EXPECT_EQ(pf.stat_map(pf.anchor_instance(), 0.0, 0.4), pf.zero());
}

TEST(Accumulate, DeltaOutsideRangeAndWrongTag) {
  const MatrixPotential mp(MatrixConfig::standard(2, 2, 0.2));
  Rng rng(3);
  const Instance x = mp.random_instance(rng);
  EXPECT_THROW(accumulate(mp.zero(), x, 0.0, 1.5, mp), DomainError);
  const ParamFreePotential pf(ParamFreeConfig::standard(10, 4));
  EXPECT_THROW(accumulate(pf.zero(), x, 0.0, 0.5, mp), StructuralError);
}

TEST(Accumulate, AdditiveAcrossRounds) {
  // Summing increments one by one equals summing them in two halves.
  const MatrixPotential mp(MatrixConfig::standard(3, 2, 0.2));
  Rng rng(4);
  Statistic all = mp.zero(), left = mp.zero(), right = mp.zero();
  for (int t = 0; t < 40; ++t) {
    const Instance x = mp.random_instance(rng);
    const double y_hat = rng.uniform(-1, 1), d = rng.uniform(-1, 1);
    all = accumulate(all, x, y_hat, d, mp);
    (t < 20 ? left : right) += mp.stat_map(x, y_hat, d);
  }
  const Statistic split = left + right;
  double scale = 1.0;
  for (double v : all.flatten()) scale = std::max(scale, std::abs(v));
  EXPECT_LE(all.max_abs_diff(split), 1e-12 * scale);
}

TEST(Loss, Values) {
  EXPECT_EQ(Loss::absolute().value(0.5, 0.5), 0.0);
  EXPECT_EQ(Loss::squared().value(1.0, -1.0), 4.0);
  EXPECT_EQ(Loss::absolute().value(1.0, -1.0), 2.0);
  EXPECT_EQ(Loss::hinge().value(0.5, -1.0), 0.5);
  EXPECT_EQ(Loss::hinge().value(0.5, 1.0), 0.0);
}

TEST(Loss, Subgradients) {
  EXPECT_EQ(Loss::absolute(2.0).subgradient(2.0, 1.0), 1.0);
  EXPECT_EQ(Loss::squared().subgradient(0.5, 0.0), 1.0);
  EXPECT_EQ(Loss::absolute().subgradient(0.3, 0.3), 0.0);
  EXPECT_EQ(Loss::hinge().subgradient(0.0, 1.0), 0.0);
}

TEST(Loss, ByNameAndConstants) {
  EXPECT_EQ(Loss::by_name("squared", 2.0).lipschitz(), 8.0);
  EXPECT_EQ(Loss::by_name("hinge", 3.0).lipschitz(), 3.0);
  EXPECT_EQ(Loss::absolute().strong_convexity(), 0.0);
  EXPECT_EQ(Loss::squared().strong_convexity(), 2.0);
  EXPECT_THROW(Loss::by_name("logistic", 1.0), DomainError);
}

TEST(Loss, SubgradientInequalityAndLipschitz) {
  Rng rng(5);
  const std::vector<Loss> losses{Loss::absolute(1.5), Loss::squared(1.5), Loss::hinge(1.5)};
  for (int trial = 0; trial < 10000; ++trial) {
    const Loss& loss = losses[rng.below(3)];
    const double b = loss.radius;
    const double y_hat = rng.uniform(-b, b), y = rng.uniform(-b, b);
    const double g = loss.subgradient(y_hat, y);
    EXPECT_LE(std::abs(g), loss.lipschitz());
    for (double h : {1e-3, -1e-3, 1e-1, -1e-1})
      EXPECT_GE(loss.value(y_hat + h, y), loss.value(y_hat, y) + g * h - 1e-12);
  }
}

TEST(ArgminOverDistribution, Examples) {
  const std::vector<std::pair<double, double>> pm{{-1.0, 0.5}, {1.0, 0.5}};
  EXPECT_EQ(argmin_over_distribution(Loss::absolute(), pm), 0.0);
  const std::vector<std::pair<double, double>> two{{0.0, 0.25}, {1.0, 0.75}};
  EXPECT_DOUBLE_EQ(argmin_over_distribution(Loss::squared(), two), 0.75);
  const std::vector<std::pair<double, double>> point{{0.3, 1.0}};
  EXPECT_DOUBLE_EQ(argmin_over_distribution(Loss::squared(), point), 0.3);
  EXPECT_THROW(argmin_over_distribution(Loss::squared(), {}), DomainError);
  const std::vector<std::pair<double, double>> bad{{0.0, 0.5}};
  EXPECT_THROW(argmin_over_distribution(Loss::squared(), bad), DomainError);
}

TEST(ArgminOverDistribution, FirstOrderOptimality) {
  Rng rng(6);
  const std::vector<Loss> losses{Loss::absolute(), Loss::squared(), Loss::hinge()};
  for (int trial = 0; trial < 1000; ++trial) {
    const Loss& loss = losses[trial % 3];
    const std::size_t k = 1 + rng.below(6);
    std::vector<std::pair<double, double>> support(k);
    double total = 0.0;
    for (auto& [y, w] : support) {
      y = rng.uniform(-1, 1);
      if (loss.kind == LossKind::hinge) y = rng.sign();
      w = rng.uniform(0.05, 1.0);
      total += w;
    }
    for (auto& [y, w] : support) w /= total;
    const double r = argmin_over_distribution(loss, support);
    EXPECT_LE(std::abs(zero_mean_subgradient_selection(loss, support, r)), 1e-9) << loss.name();

    // Independent check: no point on a fine grid does better.
    auto objective = [&](double v) {
      double acc = 0.0;
      for (const auto& [y, w] : support) acc += w * loss.value(v, y);
      return acc;
    };
    for (int i = 0; i <= 200; ++i) EXPECT_LE(objective(r), objective(-1.0 + i / 100.0) + 1e-12);
  }
}
