#include "burkholder/suites.hpp"

#include <algorithm>
#include <cmath>

#include "burkholder/error.hpp"

namespace burkholder::suites {

namespace {

constexpr double kAnalyticTol = 1e-8;
constexpr double kEigenTol = 1e-6;
constexpr std::size_t kHorizon = 64;

MatrixConfig small_matrix(double eta) { return MatrixConfig::standard(3, 2, eta, 1.0, 1.0, 1.0); }

}  // namespace

PotentialPtr make_meta(const MatrixConfig& matrix, double eta, std::size_t horizon, std::uint64_t seed) {
  AdaGradConfig ada;
  ada.d = matrix.d1 * matrix.d2;
  ada.rows = matrix.d1;
  ada.cols = matrix.d2;
  ada.variant = AdaGradVariant::l2;
  ada.lipschitz = matrix.lipschitz;
  ada.radius = matrix.radius;
  ada.instance_bound = std::sqrt(static_cast<double>(std::min(matrix.d1, matrix.d2))) * matrix.instance_bound;
  std::vector<MetaMember> members;
  members.push_back(make_meta_member(std::make_shared<MatrixPotential>(matrix), seed));
  members.push_back(make_meta_member(std::make_shared<AdaGradPotential>(ada), seed + 1));
  return std::make_shared<MetaPotential>(std::move(members), eta, horizon);
}

std::vector<Shipped> shipped_potentials(std::uint64_t seed) {
  std::vector<Shipped> out;
  out.push_back({std::make_shared<ParamFreePotential>(ParamFreeConfig::standard(kHorizon, 3, 2.0)), kAnalyticTol});
  out.push_back({std::make_shared<ParamFreePotential>(ParamFreeConfig::standard(kHorizon, 3, 4.0)), kAnalyticTol});
  out.push_back({std::make_shared<MatrixPotential>(small_matrix(0.2)), kEigenTol});

  AdaGradConfig l2;
  l2.d = 4;
  out.push_back({std::make_shared<AdaGradPotential>(l2), kAnalyticTol});
  AdaGradConfig linf = l2;
  linf.variant = AdaGradVariant::linf;
  out.push_back({std::make_shared<AdaGradPotential>(linf), kAnalyticTol});

  out.push_back({std::make_shared<VawPotential>(VawConfig::squared_loss(3)), kEigenTol});
  out.push_back({make_meta(small_matrix(0.2), 0.1, kHorizon, seed), kEigenTol});

  const PotentialPtr a = std::make_shared<MatrixPotential>(small_matrix(0.2));
  const PotentialPtr b = std::make_shared<MatrixPotential>(small_matrix(0.5));
  out.push_back({combine_min({a, b}), kEigenTol});
  out.push_back({combine_convex({a, b}, {0.3, 0.7}), kEigenTol});
  return out;
}

Shipped negative_control() {
  MatrixConfig cfg = small_matrix(0.2);
  cfg.c *= 0.5;
  cfg.variance_weight = 0.25;
  return {std::make_shared<MatrixPotential>(cfg, false), kEigenTol};
}

bool is_suite(const std::string& name) {
  return std::find(kSuiteNames.begin(), kSuiteNames.end(), name) != kSuiteNames.end();
}

namespace {

using verify::CheckReport;

std::vector<Shipped> subjects(const SuiteOptions& options) {
  if (options.negative_control) return {negative_control()};
  return shipped_potentials(options.seed);
}

void property_suite(const std::string& name, const SuiteOptions& options, std::vector<CheckReport>& out) {
  const std::size_t trials = options.trials.value_or(10000);
  for (const auto& s : subjects(options)) {
    const Potential& p = *s.potential;
    if (name == "p1") {
      out.push_back(verify::check_p1(p, s.tolerance));
    } else if (name == "p2") {
      out.push_back(verify::check_p2(p, trials, s.tolerance, options.seed, options.exec));
    } else {
      out.push_back(verify::check_p3(p, verify::P3Mode::two_point, trials, s.tolerance, options.seed, options.exec));
      if (p.convex_in_delta())
        out.push_back(
            verify::check_p3(p, verify::P3Mode::rademacher, trials, s.tolerance, options.seed, options.exec));
    }
  }
}

void supermartingale_suite(const SuiteOptions& options, std::vector<CheckReport>& out) {
  const std::size_t trees = options.trials.value_or(4);
  const std::size_t depth = 10;
  for (const auto& s : subjects(options))
    out.push_back(verify::check_supermartingale(*s.potential, depth, trees, s.tolerance, options.seed, options.exec));
}

void necessity_suite(const SuiteOptions& options, std::vector<CheckReport>& out) {
  const std::size_t trees = options.trials.value_or(4);
  const std::size_t n = 10;
  // B = 2 leaves room for a learner that predicts outside [-1, 1].
  const MatrixPotential p(MatrixConfig::standard(3, 2, 0.2, 1.0, 1.0, 2.0));
  auto good = verify::check_necessity(p, verify::matrix_learner(p), n, trees, options.seed, kEigenTol, options.exec);
  good.report.subject = "matrix learner; " + good.report.subject;
  out.push_back(good.report);

  // Always predicting B pays 2 per round in expectation against y = +-1: the
  // check must see a positive expected gap and a path over budget.
  auto broken = verify::check_necessity(p, verify::constant_learner(2.0), n, trees, options.seed, kEigenTol,
                                        options.exec);
  CheckReport detect = broken.report;
  detect.check = "necessity_detects_broken";
  detect.subject = "constant learner; " + broken.report.subject;
  detect.max_violation = -std::min(broken.gap(), broken.max_path_excess);
  detect.tolerance = 0.0;
  detect.notes.push_back("mean E[regret-A]-E[V]=" + std::to_string(broken.gap()));
  out.push_back(detect);
}

}  // namespace

std::vector<CheckReport> run_suite(const std::string& name, const SuiteOptions& options) {
  if (!is_suite(name)) throw DomainError("unknown suite '" + name + "'");
  std::vector<CheckReport> out;
  auto want = [&](const char* s) { return name == s || name == "all"; };
  if (want("p1")) property_suite("p1", options, out);
  if (want("p2")) property_suite("p2", options, out);
  if (want("p3")) property_suite("p3", options, out);
  if (want("khintchine")) {
    const std::size_t trees = options.trials.value_or(100);
    out.push_back(verify::check_matrix_khintchine(10, 3, 2, trees, options.seed, false, options.exec));
    out.push_back(verify::check_matrix_khintchine(10, 3, 2, trees, options.seed, true, options.exec));
  }
  if (want("mgf")) {
    const std::size_t trees = options.trials.value_or(50);
    for (std::size_t n : {2u, 3u, 8u, 9u, 10u, 11u, 12u, 13u, 14u})
      out.push_back(verify::check_mgf_bound(n, 3, 1.0, trees, options.seed, options.exec));
  }
  if (want("supermartingale")) supermartingale_suite(options, out);
  if (want("necessity")) necessity_suite(options, out);
  return out;
}

}  // namespace burkholder::suites
