#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "burkholder/error.hpp"
#include "burkholder/potentials/matrix.hpp"
#include "burkholder/potentials/param_free.hpp"
#include "burkholder/potentials/vaw.hpp"
#include "burkholder/rng.hpp"
#include "burkholder/suites.hpp"
#include "burkholder/verify/checks.hpp"

using namespace burkholder;
using namespace burkholder::verify;

namespace {

struct Walk {
  double sum = 0.0;
  int steps = 0;
};

}  // namespace

TEST(Paths, MatchReferenceAndSerial) {
  Rng rng(51);
  for (std::size_t n : {1u, 3u, 7u, 10u, 12u}) {
    const auto tree = PredictableTree<double>::generate(n, [&](std::size_t, std::uint64_t) { return rng.normal(); });
    auto step = [&](const Walk& w, std::size_t level, std::uint64_t prefix, int sign) {
      return Walk{w.sum + sign * tree.at(level, prefix), w.steps + 1};
    };
    auto leaf = [](const Walk& w, std::uint64_t) { return w.sum * w.sum + 0.1 * w.steps; };
    const PathStats ref = enumerate_paths_reference(n, Walk{}, step, leaf);
    const PathStats ser = enumerate_paths(n, Walk{}, step, leaf, Exec::serial);
    const PathStats par = enumerate_paths(n, Walk{}, step, leaf, Exec::parallel);
    for (const PathStats* s : {&ser, &par}) {
      EXPECT_NEAR(s->mean, ref.mean, 1e-12 * std::max(1.0, ref.mean));
      EXPECT_DOUBLE_EQ(s->max, ref.max);
      EXPECT_EQ(s->argmax, ref.argmax);
      EXPECT_EQ(s->count, std::uint64_t{1} << n);
    }
  }
}

TEST(Paths, RademacherSumSecondMoment) {
  // E (sum eps_t)^2 = n, max n^2 at the all-minus path (smallest mask).
  auto step = [](const Walk& w, std::size_t, std::uint64_t, int sign) { return Walk{w.sum + sign, w.steps + 1}; };
  const PathStats s = enumerate_paths(14, Walk{}, step, [](const Walk& w, std::uint64_t) { return w.sum * w.sum; });
  EXPECT_DOUBLE_EQ(s.mean, 14.0);
  EXPECT_DOUBLE_EQ(s.max, 196.0);
  EXPECT_EQ(s.argmax, 0u);
}

TEST(Paths, VisitCoversInternalNodes) {
  auto step = [](const Walk& w, std::size_t, std::uint64_t, int sign) { return Walk{w.sum + sign, w.steps + 1}; };
  auto visit = [](const Walk& w, std::size_t level, std::uint64_t) { return w.sum + 100.0 * level; };
  const PathStats s = visit_nodes(9, Walk{}, step, visit, Exec::parallel);
  EXPECT_EQ(s.count, (std::uint64_t{1} << 9) - 1);
  EXPECT_DOUBLE_EQ(s.max, 808.0);  // level 8, all plus
  EXPECT_EQ(s.argmax, 0xFFu);
  EXPECT_THROW(enumerate_paths(kMaxDepth + 1, Walk{}, step, [](const Walk&, std::uint64_t) { return 0.0; }),
               DomainError);
}

TEST(Paths, MgfOfOrthonormalSequence) {
  // ||sum eps_t e_t||^2 = 4 on every path: E exp(4 / 8) = e^{1/2} <= sqrt(4).
  auto step = [](const Vec& v, std::size_t level, std::uint64_t, int sign) {
    Vec out = v;
    out[level] += sign;
    return out;
  };
  const PathStats s = enumerate_paths(4, Vec(4, 0.0), step, [](const Vec& v, std::uint64_t) {
    return std::exp(linalg::dot(v, v) / 8.0);
  });
  EXPECT_NEAR(s.mean, std::exp(0.5), 1e-15);
  EXPECT_LE(s.mean, 2.0);
}

TEST(CheckP1, MatrixStandardAndZeroConstant) {
  const MatrixPotential ok(MatrixConfig::standard(3, 2, 0.2));
  const CheckReport pass = check_p1(ok, 1e-8);
  EXPECT_TRUE(pass.passed());
  EXPECT_NEAR(pass.max_violation, 0.0, 1e-14);

  MatrixConfig cfg = MatrixConfig::standard(3, 2, 0.2);
  cfg.c = 0.0;
  const MatrixPotential bad(cfg, false);
  const CheckReport fail = check_p1(bad, 1e-8);
  EXPECT_FALSE(fail.passed());
  EXPECT_NEAR(fail.max_violation, std::log(5.0) / 0.2, 1e-12);
  EXPECT_TRUE(fail.witness.has_value());

  const ParamFreePotential pf(ParamFreeConfig::standard(50, 3));
  EXPECT_TRUE(check_p1(pf, 1e-12).passed());
}

TEST(CheckP2, FamiliesPass) {
  const MatrixPotential mp(MatrixConfig::standard(3, 2, 0.2));
  EXPECT_TRUE(check_p2(mp, 1000, 1e-9, 5).passed());
  const VawPotential vaw(VawConfig::squared_loss(2));
  const CheckReport r = check_p2(vaw, 1000, 0.0, 5);
  EXPECT_EQ(r.max_violation, 0.0);
  EXPECT_EQ(r.checks, 1000u);
}

TEST(CheckP3, MatrixAndVaw) {
  const MatrixPotential mp(MatrixConfig::standard(3, 2, 0.2));
  EXPECT_LE(check_p3(mp, P3Mode::rademacher, 10000, 1e-8, 6).max_violation, 1e-8);
  const VawPotential vaw(VawConfig::squared_loss(2));
  EXPECT_LE(check_p3(vaw, P3Mode::two_point, 10000, 1e-8, 6).max_violation, 1e-8);
}

TEST(CheckP3, SerialAndParallelAgree) {
  const MatrixPotential mp(MatrixConfig::standard(3, 2, 0.2));
  const CheckReport a = check_p3(mp, P3Mode::two_point, 2000, 1e-8, 7, Exec::serial);
  const CheckReport b = check_p3(mp, P3Mode::two_point, 2000, 1e-8, 7, Exec::parallel);
  EXPECT_EQ(a.max_violation, b.max_violation);
  ASSERT_TRUE(a.witness && b.witness);
  EXPECT_EQ(a.witness->trial, b.witness->trial);
}

TEST(CheckP3, NegativeControlFailsWithReplayableWitness) {
  const suites::Shipped bad = suites::negative_control();
  for (P3Mode mode : {P3Mode::rademacher, P3Mode::two_point}) {
    const CheckReport r = check_p3(*bad.potential, mode, 2000, bad.tolerance, 8);
    EXPECT_FALSE(r.passed());
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_EQ(replay_p3(*bad.potential, mode, r.witness->seed, r.witness->trial), r.max_violation);
  }
  const CheckReport p2 = check_p2(*bad.potential, 500, 1e-6, 8);
  ASSERT_TRUE(p2.witness.has_value());
  EXPECT_EQ(replay_p2(*bad.potential, p2.witness->seed, p2.witness->trial), p2.max_violation);
}

TEST(CheckP3, TwoPointLaw) {
  const TwoPointDist law{0.3, 0.9};
  EXPECT_NEAR(law.mean(), 0.0, 1e-16);
  EXPECT_NEAR(law.p_a() + law.p_b(), 1.0, 1e-16);
}

TEST(BruteForce, ZeroBoundAndDepthLimit) {
  const MatrixPotential mp(MatrixConfig::standard(2, 2, 0.2));
  const SupResult r = brute_force_sup_EV(mp, [](const Statistic&) { return 0.0; }, 6, TreeSearch::random, 5, 1);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_THROW(brute_force_sup_EV(mp, [](const Statistic&) { return 0.0; }, 15, TreeSearch::random, 1, 1),
               DomainError);
}

TEST(BruteForce, SupOfBoundStaysBelowStart) {
  // E V(zeta_n) <= E U(zeta_n) <= U(0) <= 0 for every predictable tree.
  const MatrixPotential mp(MatrixConfig::standard(2, 2, 0.3));
  auto v = [&](const Statistic& s) { return mp.bound(s); };
  const SupResult rnd = brute_force_sup_EV(mp, v, 8, TreeSearch::random, 20, 2);
  const SupResult asc = brute_force_sup_EV(mp, v, 8, TreeSearch::coordinate_ascent, 40, 2);
  EXPECT_LE(rnd.value, 1e-9);
  EXPECT_LE(asc.value, 1e-9);
  EXPECT_GT(asc.value, -1e9);
}

TEST(Khintchine, RandomAndFixedSequencesPass) {
  const CheckReport a = check_matrix_khintchine(8, 3, 2, 10, 3);
  const CheckReport b = check_matrix_khintchine(8, 3, 2, 10, 3, true);
  EXPECT_TRUE(a.passed());
  EXPECT_TRUE(b.passed());
  ASSERT_TRUE(a.worst_ratio && b.worst_ratio);
  EXPECT_LE(*a.worst_ratio, 1.0);
  EXPECT_LE(*b.worst_ratio, 1.0);
  const CheckReport s = check_matrix_khintchine(8, 3, 2, 10, 3, false, Exec::serial);
  EXPECT_EQ(s.max_violation, a.max_violation);
}

TEST(Mgf, AssertedOnlyFromFour) {
  const CheckReport small = check_mgf_bound(2, 3, 1.0, 10, 4);
  EXPECT_FALSE(small.asserted);
  const CheckReport big = check_mgf_bound(10, 3, 1.0, 10, 4);
  EXPECT_TRUE(big.asserted);
  EXPECT_TRUE(big.passed());
}

TEST(Supermartingale, FlatTreeIsEquality) {
  const MatrixPotential mp(MatrixConfig::standard(2, 2, 0.2));
  const PredictableTree<TreeNode> tree(6, TreeNode{mp.anchor_instance(), 0.3});
  const CheckReport r = check_supermartingale(mp, tree, 1e-12);
  EXPECT_NEAR(r.max_violation, 0.0, 1e-14);
}

TEST(Supermartingale, MatrixParamFreeAndMeta) {
  const MatrixPotential mp(MatrixConfig::standard(3, 2, 0.2));
  EXPECT_TRUE(check_supermartingale(mp, 8, 3, 1e-8, 9).passed());
  const ParamFreePotential pf(ParamFreeConfig::standard(8, 3));
  EXPECT_TRUE(check_supermartingale(pf, 8, 3, 1e-8, 9).passed());
  const PotentialPtr meta = suites::make_meta(MatrixConfig::standard(3, 2, 0.2), 0.1, 8, 9);
  EXPECT_TRUE(check_supermartingale(*meta, 8, 2, 1e-6, 9).passed());
}

TEST(Necessity, ZeroTreeGivesEqualSides) {
  const MatrixPotential mp(MatrixConfig::standard(2, 2, 0.2));
  const PredictableTree<Instance> zero(6, Mat(2, 2));
  const NecessityResult r = check_necessity(mp, matrix_learner(mp), 6, zero, 1e-9);
  const double c_over_eta = mp.config().c / mp.config().eta;
  EXPECT_NEAR(r.expected_v, -c_over_eta, 1e-12);
  EXPECT_NEAR(r.expected_excess, -c_over_eta, 1e-12);
  EXPECT_NEAR(r.gap(), 0.0, 1e-12);
}

TEST(Necessity, MatrixLearnerPassesBrokenLearnerDetected) {
  const MatrixPotential mp(MatrixConfig::standard(3, 2, 0.2));
  const NecessityResult good = check_necessity(mp, matrix_learner(mp), 8, 2, 10, 1e-9);
  EXPECT_LE(good.expected_v, 0.0);
  EXPECT_TRUE(good.report.passed());

  const MatrixPotential wide(MatrixConfig::standard(3, 2, 0.2, 1.0, 1.0, 2.0));
  const NecessityResult broken = check_necessity(wide, constant_learner(2.0), 8, 2, 10, 1e-9);
  EXPECT_FALSE(broken.report.passed());
  EXPECT_GT(broken.gap(), 1.0);
}

TEST(Report, CsvLayout) {
  CheckReport r;
  r.check = "p1";
  r.subject = "matrix";
  r.checks = 1;
  r.max_violation = -0.5;
  r.tolerance = 1e-8;
  const std::string csv = to_csv({r});
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "check,subject,checks,max_violation,tolerance,worst_ratio,asserted,passed,witness_seed,witness_trial,"
            "witness");
  EXPECT_NE(csv.find("p1,\"matrix\",1,"), std::string::npos);
}
