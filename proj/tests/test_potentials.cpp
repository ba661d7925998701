#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <memory>

#include "burkholder/error.hpp"
#include "burkholder/losses.hpp"
#include "burkholder/potentials/adagrad.hpp"
#include "burkholder/potentials/combine.hpp"
#include "burkholder/potentials/matrix.hpp"
#include "burkholder/potentials/meta.hpp"
#include "burkholder/potentials/param_free.hpp"
#include "burkholder/potentials/vaw.hpp"
#include "burkholder/rng.hpp"
#include "burkholder/suites.hpp"

using namespace burkholder;

namespace {

Eigen::MatrixXd to_eigen(const SymMat& s) {
  Eigen::MatrixXd e(s.dim(), s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < s.dim(); ++j) e(i, j) = s(i, j);
  return e;
}

// log tr exp via Eigen, independent of the Jacobi solver.
double oracle_lte(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  const double top = es.eigenvalues().maxCoeff();
  return top + std::log((es.eigenvalues().array() - top).exp().sum());
}

// Rademacher step E_sigma U_t(tau + T(x, y_hat, sigma L)) - U_{t-1}(tau).
double rademacher_excess(const Potential& p, const StatePoint& s, const Instance& x, double y_hat) {
  const double l = p.lipschitz();
  const std::size_t t = s.t + 1;
  const double after = 0.5 * (p.after(s.tau, x, y_hat, l, t) + p.after(s.tau, x, y_hat, -l, t));
  return after - p.value(s.tau, s.t);
}

}  // namespace

TEST(ParamFree, RepairedConstantMakesStartZero) {
  for (std::size_t n : {1u, 2u, 10u, 500u}) {
    const ParamFreeConfig cfg = ParamFreeConfig::standard(n, 3);
    const Vec zero(3, 0.0);
    EXPECT_NEAR(pf_U(cfg, 0, 0.0, zero), 0.0, 1e-15);
    EXPECT_NEAR(pf_U(cfg, n, 0.0, zero), cfg.gamma - cfg.c, 1e-15);
    EXPECT_NEAR(cfg.gamma, std::exp(-0.5 * harmonic(n)), 1e-15);
  }
  EXPECT_NEAR(harmonic(4), 1.0 + 0.5 + 1.0 / 3 + 0.25, 1e-15);
  EXPECT_NEAR(harmonic_tail(2, 4), 1.0 / 3 + 0.25, 1e-15);
}

TEST(ParamFree, UnrepairedConstantIsRejected) {
  ParamFreeConfig cfg = ParamFreeConfig::standard(100, 2);
  cfg.gamma = 1.0 / std::sqrt(100.0);
  EXPECT_GT(pf_U(cfg, 0, 0.0, Vec(2, 0.0)), 0.0);
  EXPECT_THROW(cfg.validate(), DomainError);
}

TEST(ParamFree, PredictionExamples) {
  ParamFreeConfig cfg = ParamFreeConfig::standard(2, 1);
  cfg.beta = 1.0;
  cfg.gamma = 0.3;
  cfg.c = 1.0;
  cfg.validate();
  const Vec xsum{1.0}, xt{1.0};
  EXPECT_NEAR(pf_predict(cfg, xsum, 2, xt), -0.15 * (std::exp(1.0) - 1.0), 1e-14);

  const ParamFreeConfig c3 = ParamFreeConfig::standard(10, 2);
  const Vec zero{0.0, 0.0}, e1{1.0, 0.0}, e2{0.0, 0.7};
  EXPECT_EQ(pf_predict(c3, zero, 3, e1), 0.0);
  EXPECT_NEAR(pf_predict(c3, e1, 3, e2), 0.0, 1e-15);
}

TEST(ParamFree, BoundEqualsPotentialAtHorizon) {
  const ParamFreePotential p(ParamFreeConfig::standard(20, 3));
  Rng rng(21);
  for (int i = 0; i < 1000; ++i) {
    const StatePoint s = p.random_state(rng);
    EXPECT_GE(p.value(s.tau, s.t) - p.bound(s.tau), -1e-9);
    EXPECT_NEAR(p.value(s.tau, 20), p.bound(s.tau), 1e-12 * std::max(1.0, std::abs(p.bound(s.tau))));
  }
}

TEST(ParamFree, SupermartingaleStep) {
  for (double q : {2.0, 4.0}) {
    const ParamFreePotential p(ParamFreeConfig::standard(30, 3, q));
    Rng rng(22);
    for (int i = 0; i < 10000; ++i) {
      const StatePoint s = p.random_state(rng);
      EXPECT_LE(rademacher_excess(p, s, p.random_instance(rng), rng.uniform(-1, 1)), 1e-8);
    }
  }
}

TEST(Matrix, StartValueAndAdditivity) {
  const MatrixConfig cfg = MatrixConfig::standard(3, 2, 0.2);
  const SymMat z(5);
  EXPECT_NEAR(mp_U(cfg, 0.0, z, z), 0.0, 1e-14);
  EXPECT_NEAR(mp_U(cfg, 5.0, z, z), 5.0, 1e-14);
  MatrixConfig c0 = cfg;
  c0.c = 0.0;
  EXPECT_NEAR(mp_U(c0, 5.0, z, z), 5.0 + std::log(5.0) / 0.2, 1e-12);
}

TEST(Matrix, ValidationNamesTheInvariant) {
  MatrixConfig cfg = MatrixConfig::standard(10, 10, 0.2);
  cfg.c = 0.0;
  try {
    cfg.validate();
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("c ≥ r·log(d1+d2)"), std::string::npos);
  }
}

TEST(Matrix, PredictionSymmetricCases) {
  const MatrixConfig cfg = MatrixConfig::standard(1, 1, 0.1);
  const SymMat z(2);
  EXPECT_NEAR(mp_predict(cfg, z, z, Mat(1, 1, 3.0)), 0.0, 1e-15);
  const MatrixConfig c2 = MatrixConfig::standard(3, 2, 0.3);
  Rng rng(23);
  const MatrixPotential p(c2);
  for (int i = 0; i < 50; ++i) EXPECT_NEAR(mp_predict(c2, SymMat(5), SymMat(5), p.random_instance(rng)), 0.0, 1e-12);
  const StatePoint s = p.random_state(rng);
  const auto& st = s.tau.as<ScalarSymPsd>();
  EXPECT_EQ(mp_predict(c2, st.h, st.m, Mat(3, 2)), 0.0);
}

TEST(Matrix, PredictionMatchesEigenOracle) {
  const MatrixConfig cfg = MatrixConfig::standard(3, 2, 0.4, 1.5);
  const MatrixPotential p(cfg);
  Rng rng(24);
  for (int i = 0; i < 200; ++i) {
    const StatePoint s = p.random_state(rng);
    const auto& st = s.tau.as<ScalarSymPsd>();
    const Mat x = p.random_instance(rng);
    const Eigen::MatrixXd h = to_eigen(st.h), hx = to_eigen(linalg::dilation(x));
    const Eigen::MatrixXd m = to_eigen(st.m) + to_eigen(linalg::dilation_square(x));
    const double eta = cfg.eta, l = cfg.lipschitz;
    auto f = [&](double d) { return (cfg.r / eta) * oracle_lte(eta * (h + d * hx) - 0.5 * eta * eta * l * l * m); };
    const double expected = std::clamp(-(f(l) - f(-l)) / (2.0 * l), -1.0, 1.0);
    EXPECT_NEAR(mp_predict(cfg, st.h, st.m, x), expected, 1e-9);

    const double u = mp_U(cfg, st.a, st.h, st.m);
    const double ref = st.a + (cfg.r / eta) * oracle_lte(eta * h - 0.5 * eta * eta * l * l * to_eigen(st.m)) - cfg.c / eta;
    EXPECT_NEAR(u, ref, 1e-9 * std::max(1.0, std::abs(ref)));
  }
}

TEST(Matrix, DominatesBoundAndRademacherStep) {
  const MatrixPotential p(MatrixConfig::standard(3, 2, 0.2));
  Rng rng(25);
  for (int i = 0; i < 10000; ++i) {
    const StatePoint s = p.random_state(rng);
    if (i < 1000) EXPECT_GE(p.value(s.tau, 0) - p.bound(s.tau), -1e-9);
    EXPECT_LE(rademacher_excess(p, s, p.random_instance(rng), rng.uniform(-1, 1)), 1e-8);
  }
}

TEST(Matrix, RegretBoundFormula) {
  const MatrixConfig cfg = MatrixConfig::standard(2, 2, 0.2, 1.0);
  const std::vector<double> d{4.0, 1.0, 0.0, 2.0};
  EXPECT_NEAR(mp_regret_bound(cfg, SymMat::diagonal(d)), 0.5 * 0.2 * 4.0 + std::log(4.0) / 0.2, 1e-12);
}

TEST(Matrix, DoublingSingleRoundMatchesPrediction) {
  const MatrixConfig cfg = MatrixConfig::standard(2, 2, 0.2);
  Sequence seq{{Mat::indicator(2, 2, 0, 1), 0.5}};
  const DoublingResult r = mp_doubling_run(cfg, seq, 1.0, Loss::absolute());
  ASSERT_EQ(r.epochs.size(), 1u);
  ASSERT_EQ(r.rounds.size(), 1u);
  MatrixConfig first = cfg;
  first.eta = r.epochs[0].eta;
  EXPECT_EQ(r.rounds[0].y_hat, mp_predict(first, SymMat(4), SymMat(4), seq[0].x));
  EXPECT_THROW(mp_doubling_run(cfg, seq, 0.0, Loss::absolute()), DomainError);
}

TEST(Matrix, DoublingCertifiesEveryEpoch) {
  const MatrixConfig cfg = MatrixConfig::standard(4, 3, 0.2);
  Rng rng(26);
  Sequence seq;
  for (int t = 0; t < 300; ++t)
    seq.push_back({Mat::indicator(4, 3, rng.below(4), rng.below(3)), rng.uniform(-1, 1)});
  const DoublingResult r = mp_doubling_run(cfg, seq, 1.0, Loss::absolute());
  EXPECT_GT(r.epochs.size(), 1u);
  double total = 0.0;
  std::size_t rounds = 0;
  for (const DoublingEpoch& e : r.epochs) {
    EXPECT_LE(e.final_certificate, 1e-9);
    EXPECT_LE(e.msum_norm, e.budget + 1e-12);
    EXPECT_EQ(e.start, rounds);
    rounds += e.length;
    total += e.bound;
  }
  EXPECT_EQ(rounds, seq.size());
  EXPECT_NEAR(total, r.certified_bound, 1e-9);
  EXPECT_LE(r.max_descent_excess, 1e-8);
}

TEST(AdaGrad, UsqExamplesAndSeam) {
  EXPECT_EQ(usq(0.0, 0.0), 0.0);
  const std::vector<double> v{3.0, 4.0};
  EXPECT_NEAR(usq(v, 10.0), -std::sqrt(175.0), 1e-14);
  EXPECT_NEAR(usq(v, 5.0), -5.0, 1e-14);
  Rng rng(27);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(0.0, 5.0);
    EXPECT_NEAR(usq(x, x * (1 + 1e-15)), usq(x, x * (1 - 1e-15)), 1e-9);
  }
}

TEST(AdaGrad, UsqIncrementProperty) {
  Rng rng(28);
  int tested = 0;
  while (tested < 10000) {
    Vec x(3), d(3);
    for (double& e : x) e = rng.normal();
    for (double& e : d) e = rng.normal() * rng.uniform();
    const double nx = linalg::norm2(x), y = rng.uniform(0.0, 3.0);
    if (std::abs(nx - y) < 1e-6) continue;
    Vec g = x;
    const double scale = y >= nx ? 1.0 / std::sqrt(2 * y * y - nx * nx) : 1.0 / nx;
    for (double& e : g) e *= scale;
    Vec moved = x;
    for (std::size_t i = 0; i < 3; ++i) moved[i] += d[i];
    const double lhs = usq(moved, std::sqrt(y * y + linalg::dot(d, d)));
    EXPECT_LE(lhs, usq(x, y) + linalg::dot(g, d) + 1e-8);
    ++tested;
  }
}

TEST(AdaGrad, PredictionExamples) {
  AdaGradConfig cfg;
  cfg.d = 1;
  cfg.radius = 2.0;
  const std::vector<double> xsum{2.0}, s{0.0}, xt{1.0}, zero{0.0};
  EXPECT_NEAR(ada_predict(cfg, xsum, s, xt), -1.0, 1e-15);
  EXPECT_EQ(ada_predict(cfg, zero, s, xt), 0.0);
  cfg.variant = AdaGradVariant::linf;
  EXPECT_NEAR(ada_predict(cfg, xsum, s, xt), -1.0, 1e-15);
}

TEST(AdaGrad, BoundsAndStep) {
  for (AdaGradVariant variant : {AdaGradVariant::l2, AdaGradVariant::linf}) {
    AdaGradConfig cfg;
    cfg.d = 4;
    cfg.variant = variant;
    const AdaGradPotential p(cfg);
    Rng rng(29);
    for (int i = 0; i < 10000; ++i) {
      const StatePoint s = p.random_state(rng);
      if (i < 1000) {
        EXPECT_GE(p.value(s.tau, 0) - p.bound(s.tau), -1e-9);
        EXPECT_GE(*p.adaptive_bound(s.tau), 0.0);
      }
      EXPECT_LE(rademacher_excess(p, s, p.random_instance(rng), rng.uniform(-1, 1)), 1e-8);
    }
    EXPECT_EQ(p.value(p.zero(), 0), 0.0);
  }
}

TEST(Vaw, ClosedForms) {
  const VawConfig cfg = VawConfig::squared_loss(1);
  const Vec zero{0.0, 0.0};
  EXPECT_NEAR(vaw_U(cfg, zero, SymMat(2)), 0.0, 1e-15);
  for (double s : {0.0, 0.5, 3.0}) {
    const std::vector<double> diag{s, 0.0};
    const Vec x{1.0, 0.0};
    EXPECT_NEAR(vaw_U(cfg, x, SymMat::diagonal(diag)), 0.5 / (2 * s + 1) - cfg.c * std::log(2 * s + 1), 1e-12);
  }
  VawConfig bad = cfg;
  bad.c = 1.0;
  EXPECT_THROW(bad.validate(), DomainError);
}

TEST(Vaw, TwoPointStep) {
  const VawPotential p(VawConfig::squared_loss(2));
  Rng rng(30);
  const double l = p.lipschitz();
  for (int i = 0; i < 10000; ++i) {
    const StatePoint s = p.random_state(rng);
    const Instance x = p.random_instance(rng);
    const double y_hat = rng.uniform(-1, 1);
    const double a = l * rng.uniform(), b = l * rng.uniform();
    if (a + b == 0.0) continue;
    const double expected = (b * p.after(s.tau, x, y_hat, a, 0) + a * p.after(s.tau, x, y_hat, -b, 0)) / (a + b);
    EXPECT_LE(expected - p.value(s.tau, 0), 1e-8);
    EXPECT_EQ(p.value(s.tau, 0), p.bound(s.tau));
  }
}

TEST(Meta, SoftMaxIdentities) {
  const std::vector<double> zeros{0.0, 0.0, 0.0};
  EXPECT_NEAR(meta_soft_max(0.5, zeros, zeros), 0.0, 1e-15);
  const std::vector<double> u{1.3}, g{0.4};
  EXPECT_NEAR(meta_soft_max(0.5, u, g), 1.3 - 0.5 * 0.4, 1e-15);
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> us(4), gs(4);
    double best = -1e300;
    const double eta = rng.uniform(0.01, 2.0);
    for (std::size_t a = 0; a < 4; ++a) {
      us[a] = 100 * rng.normal();
      gs[a] = rng.uniform(0.0, 10.0);
      best = std::max(best, us[a] - eta * gs[a]);
    }
    EXPECT_GE(meta_soft_max(eta, us, gs), best - std::log(4.0) / eta - 1e-9);
    EXPECT_LE(meta_soft_max(eta, us, gs), best + 1e-9);
  }
}

TEST(Meta, StartValueAndRademacherStep) {
  const PotentialPtr meta = suites::make_meta(MatrixConfig::standard(3, 2, 0.2), 0.1, 64, 3);
  EXPECT_NEAR(meta->value(meta->zero(), 0), 0.0, 1e-12);
  Rng rng(32);
  for (int i = 0; i < 3000; ++i) {
    const StatePoint s = meta->random_state(rng);
    EXPECT_LE(rademacher_excess(*meta, s, meta->random_instance(rng), rng.uniform(-1, 1)), 1e-8);
    EXPECT_GE(meta->value(s.tau, s.t) - meta->bound(s.tau), -1e-9);
  }
}

TEST(Meta, RejectsMismatchedMembers) {
  auto mp = std::make_shared<MatrixPotential>(MatrixConfig::standard(2, 2, 0.2));
  auto vaw = std::make_shared<VawPotential>(VawConfig::squared_loss(4));
  EXPECT_THROW(MetaPotential({make_meta_member(mp, 1), make_meta_member(vaw, 1)}, 0.1, 10), StructuralError);
  EXPECT_THROW(MetaPotential({}, 0.1, 10), StructuralError);
  EXPECT_THROW(MetaPotential({make_meta_member(mp, 1)}, 0.0, 10), DomainError);
}

TEST(Combine, MinOfSelfAndUnitWeights) {
  auto a = std::make_shared<MatrixPotential>(MatrixConfig::standard(3, 2, 0.2));
  auto b = std::make_shared<MatrixPotential>(MatrixConfig::standard(3, 2, 0.5));
  const PotentialPtr self_min = combine_min({a, a});
  const PotentialPtr first = combine_convex({a, b}, {1.0, 0.0});
  Rng rng(33);
  for (int i = 0; i < 200; ++i) {
    const StatePoint s = a->random_state(rng);
    EXPECT_EQ(self_min->value(s.tau, 0), a->value(s.tau, 0));
    EXPECT_NEAR(first->value(s.tau, 0), a->value(s.tau, 0), 1e-12 * std::max(1.0, std::abs(a->value(s.tau, 0))));
  }
  EXPECT_FALSE(self_min->convex_in_delta());
  EXPECT_TRUE(first->convex_in_delta());
}

TEST(Combine, RejectsMismatchedMapsAndWeights) {
  auto a = std::make_shared<MatrixPotential>(MatrixConfig::standard(3, 2, 0.2));
  auto pf = std::make_shared<ParamFreePotential>(ParamFreeConfig::standard(10, 6));
  EXPECT_THROW(combine_min({a, pf}), StructuralError);
  EXPECT_THROW(combine_convex({a, a}, {0.5, 0.6}), DomainError);
  EXPECT_THROW(combine_convex({a, a}, {1.5, -0.5}), DomainError);
}
