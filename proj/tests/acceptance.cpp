// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "burkholder/cli.hpp"
#include "burkholder/config.hpp"
#include "burkholder/harness.hpp"
#include "burkholder/online.hpp"
#include "burkholder/potentials.hpp"
#include "burkholder/rng.hpp"
#include "burkholder/suites.hpp"
#include "burkholder/symlin.hpp"
#include "burkholder/verify/checks.hpp"

using namespace burkholder;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

constexpr std::size_t kRuns = 100;

harness::SequenceSpec matrix_spec(std::uint64_t seed) {
  harness::SequenceSpec s;
  s.kind = harness::SequenceKind::matrix_completion;
  s.n = 500;
  s.d1 = 10;
  s.d2 = 10;
  s.rank = 1;
  s.noise = 0.1;
  s.seed = seed;
  return s;
}

harness::SequenceSpec vector_spec(std::size_t n, std::size_t d, std::uint64_t seed) {
  harness::SequenceSpec s;
  s.kind = harness::SequenceKind::random_vectors;
  s.n = n;
  s.d = d;
  s.noise = 0.2;
  s.seed = seed;
  return s;
}

// The matrix runs feed criteria 1 and 2.
struct MatrixRun {
  double regret = 0.0;
  double bound = 0.0;
  double worst_step = 0.0;     ///< max_t U(zeta_t) - U(zeta_{t-1})
  double worst_descent = 0.0;  ///< max_t sup over the y-grid
};

std::vector<MatrixRun> matrix_runs;
double matrix_seconds = 0.0;

void play_matrix_runs() {
  const auto start = std::chrono::steady_clock::now();
  const MatrixPotential p(MatrixConfig::standard(10, 10, 0.2));
  const Loss loss = Loss::absolute();
  matrix_runs.assign(kRuns, {});
  const long long runs = static_cast<long long>(kRuns);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < runs; ++i) {
    const harness::Generated g = harness::generate_planted(matrix_spec(1000 + static_cast<std::uint64_t>(i)));
    RunOptions opts;
    opts.record_descent = true;
    opts.descent_grid = 101;
    const Trajectory traj = run_online(p, g.sequence, loss, opts);
    const harness::Comparator w =
        harness::comparator_oracle(harness::ComparatorClass::nuclear_ball, 1.0, g.sequence, loss, {}, {g.planted});
    MatrixRun& run = matrix_runs[static_cast<std::size_t>(i)];
    run.regret = traj.cumulative_loss() - w.loss;
    // (1/2) eta L^2 r ||sum M(X_t)||_sigma + r log(d1 + d2) / eta
    const SymMat& m = traj.zetas.back().as<ScalarSymPsd>().m;
    run.bound = 0.5 * 0.2 * linalg::lambda_max(m) + std::log(20.0) / 0.2;
    run.worst_step = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 1; t < traj.potential_values.size(); ++t)
      run.worst_step = std::max(run.worst_step, traj.potential_values[t] - traj.potential_values[t - 1]);
    run.worst_descent = *std::max_element(traj.descent_excess.begin(), traj.descent_excess.end());
  }
  matrix_seconds = seconds_since(start);
}

Outcome criterion1() {
  play_matrix_runs();
  Outcome out;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& r : matrix_runs) {
    worst = std::max(worst, r.regret - r.bound);
    if (!(r.regret <= r.bound + 1e-6)) out.ok = false;
  }
  if (matrix_seconds > 120.0) out.ok = false;
  out.detail = std::to_string(kRuns) + " runs, max(regret - bound) " + fmt(worst) + ", " + fmt(matrix_seconds) + " s";
  return out;
}

// Param-free runs feed criteria 2 and 6.
struct ParamFreeRun {
  double worst_step = 0.0;
  double worst_descent = 0.0;
  double worst_excess = 0.0;
};

std::vector<ParamFreeRun> param_free_runs;

void play_param_free_runs() {
  const ParamFreePotential p(ParamFreeConfig::standard(500, 10));
  const Loss loss = Loss::absolute();
  param_free_runs.assign(kRuns, {});
  const long long runs = static_cast<long long>(kRuns);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < runs; ++i) {
    RunOptions opts;
    opts.record_descent = true;
    opts.descent_grid = 101;
    const Trajectory traj = run_online(p, harness::generate(vector_spec(500, 10, 2000 + static_cast<std::uint64_t>(i))),
                                       loss, opts);
    ParamFreeRun& run = param_free_runs[static_cast<std::size_t>(i)];
    run.worst_step = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 1; t < traj.potential_values.size(); ++t)
      run.worst_step = std::max(run.worst_step, traj.potential_values[t] - traj.potential_values[t - 1]);
    run.worst_descent = *std::max_element(traj.descent_excess.begin(), traj.descent_excess.end());
    run.worst_excess = -std::numeric_limits<double>::infinity();
    for (const auto& point : harness::param_free_grid(p, traj, loss, 50, 1e-2, 1e2))
      run.worst_excess = std::max(run.worst_excess, point.excess());
  }
}

Outcome criterion2() {
  play_param_free_runs();
  double step = -std::numeric_limits<double>::infinity(), descent = step;
  for (const auto& r : matrix_runs) {
    step = std::max(step, r.worst_step);
    descent = std::max(descent, r.worst_descent);
  }
  for (const auto& r : param_free_runs) {
    step = std::max(step, r.worst_step);
    descent = std::max(descent, r.worst_descent);
  }
  Outcome out;
  out.ok = step <= 1e-8 && descent <= 1e-8;
  out.detail = std::to_string(matrix_runs.size()) + " matrix + " + std::to_string(param_free_runs.size()) +
               " param-free runs, max U step " + fmt(step) + ", max y-grid descent excess " + fmt(descent);
  return out;
}

Outcome criterion3() {
  Outcome out;
  suites::SuiteOptions opts;
  opts.seed = 3;
  opts.trials = 10000;
  std::size_t reports = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (const char* suite : {"p1", "p2", "p3"}) {
    for (const auto& r : suites::run_suite(suite, opts)) {
      ++reports;
      worst = std::max(worst, r.max_violation - r.tolerance);
      if (!r.passed() || !r.asserted) out.ok = false;
      if (r.check != "p1" && r.checks < 10000) out.ok = false;
      if (!r.passed()) out.detail += "failed " + r.check + " [" + r.subject + "]; ";
    }
  }
  opts.negative_control = true;
  bool caught = false;
  for (const char* suite : {"p1", "p3"})
    for (const auto& r : suites::run_suite(suite, opts))
      if (!r.passed() && r.witness) caught = true;
  if (!caught) {
    out.ok = false;
    out.detail += "negative control not detected; ";
  }
  out.detail += std::to_string(reports) + " reports, max(violation - tol) " + fmt(worst) +
                (caught ? ", negative control fails with witness" : "");
  return out;
}

Outcome criterion4() {
  const auto start = std::chrono::steady_clock::now();
  const auto tree = verify::check_matrix_khintchine(10, 3, 2, 100, 4);
  const auto fixed = verify::check_matrix_khintchine(10, 3, 2, 100, 4, true);
  const double secs = seconds_since(start);
  Outcome out;
  out.ok = tree.passed() && fixed.passed() && fixed.worst_ratio && *fixed.worst_ratio <= 1.0 && secs <= 60.0;
  out.detail = "trees max(LHS - RHS) " + fmt(tree.max_violation) + ", fixed worst ratio " +
               (fixed.worst_ratio ? fmt(*fixed.worst_ratio) : "n/a") + ", " + fmt(secs) + " s";
  return out;
}

Outcome criterion5() {
  Outcome out;
  double worst = 0.0;
  for (std::size_t n = 8; n <= 14; ++n)
    for (std::size_t d = 1; d <= 4; ++d) {
      const auto r = verify::check_mgf_bound(n, d, 1.0, 50, 5 + 100 * n + d);
      worst = std::max(worst, *r.worst_ratio);
      if (!r.passed() || !r.asserted) out.ok = false;
    }
  std::string observed;
  for (std::size_t n : {2u, 3u}) {
    const auto r = verify::check_mgf_bound(n, 4, 1.0, 50, 5);
    observed += " n=" + std::to_string(n) + ":" + fmt(*r.worst_ratio);
  }
  out.detail = "n=8..14, d=1..4: worst E/sqrt(n) " + fmt(worst) + "; observed below 4:" + observed;
  return out;
}

Outcome criterion6() {
  double pf = -std::numeric_limits<double>::infinity();
  for (const auto& r : param_free_runs) pf = std::max(pf, r.worst_excess);

  const VawPotential p(VawConfig::squared_loss(5));
  const Loss loss = Loss::squared();
  std::vector<double> vaw(kRuns);
  const long long runs = static_cast<long long>(kRuns);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < runs; ++i) {
    RunOptions opts;
    opts.strategy = StrategyKind::convex;
    const auto seed = 3000 + static_cast<std::uint64_t>(i);
    const Trajectory traj = run_online(p, harness::generate(vector_spec(200, 5, seed)), loss, opts);
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& point : harness::vaw_grid(p, traj, loss, 50, seed)) worst = std::max(worst, point.excess());
    vaw[static_cast<std::size_t>(i)] = worst;
  }
  const double vw = *std::max_element(vaw.begin(), vaw.end());
  Outcome out;
  out.ok = pf <= 1e-6 && vw <= 1e-6 && param_free_runs.size() == kRuns;
  out.detail = "max(regret - bound) over 50-point grids: param-free " + fmt(pf) + ", VAW " + fmt(vw);
  return out;
}

Outcome criterion7() {
  std::istringstream text(
      "family = matrix\nn = 100\nnoise = 0.1\neps1 = 0.05\neps2 = 0.05\nrepetitions = 20\nseed = 7\n");
  const Experiment e = build_experiment(Config::parse(text));
  const auto s = cli::compare(e, {StrategyKind::linearized, StrategyKind::randomized});
  Outcome out;
  out.ok = s.checked && s.passed;
  out.detail = "mean gap " + fmt(s.mean_gap) + " vs slack " + fmt(s.mean_slack);
  return out;
}

Outcome criterion8() {
  Rng rng(8);
  double spec_err = 0.0, sq_err = 0.0, mono = 0.0, idem = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d1 = 1 + rng.below(6), d2 = 1 + rng.below(6);
    Mat x(d1, d2);
    for (double& v : x.data()) v = rng.normal();

    // Top eigenvalue of the dilation against sqrt(lambda_1(X^T X)).
    SymMat gram(d2);
    for (std::size_t a = 0; a < d2; ++a)
      for (std::size_t b = a; b < d2; ++b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < d1; ++i) acc += x(i, a) * x(i, b);
        gram.set(a, b, acc);
      }
    const double top = linalg::lambda_max(linalg::dilation(x));
    spec_err = std::max(spec_err, std::abs(top - std::sqrt(linalg::lambda_max(gram))) / std::max(1.0, top));
    spec_err = std::max(spec_err, std::abs(top - linalg::spectral_norm(x)) / std::max(1.0, top));

    // dilation_square against the explicit product h h.
    const SymMat h = linalg::dilation(x);
    const SymMat m = linalg::dilation_square(x);
    const std::size_t n = d1 + d2;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += h(a, k) * h(k, b);
        sq_err = std::max(sq_err, std::abs(acc - m(a, b)));
      }

    // A <= A + P P^T implies log tr exp is no smaller.
    const std::size_t k = 1 + rng.below(6);
    Mat a(k, k), pm(k, k);
    for (double& v : a.data()) v = rng.normal();
    for (double& v : pm.data()) v = rng.normal();
    SymMat base(a), psd(k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) {
        double acc = 0.0;
        for (std::size_t c = 0; c < k; ++c) acc += pm(i, c) * pm(j, c);
        psd.set(i, j, acc);
      }
    mono = std::max(mono, linalg::log_trace_exp(base) - linalg::log_trace_exp(base + psd));

    const Mat once = linalg::nuclear_projection(x, 1.0);
    const Mat twice = linalg::nuclear_projection(once, 1.0);
    for (std::size_t i = 0; i < once.size(); ++i) idem = std::max(idem, std::abs(once.data()[i] - twice.data()[i]));
  }
  const Mat diag(2, 2, std::vector<double>{3.0, 0.0, 0.0, 1.0});
  const Mat proj = linalg::nuclear_projection(diag, 2.0);
  double case_err = 0.0;
  const double want[4] = {2.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < 4; ++i) case_err = std::max(case_err, std::abs(proj.data()[i] - want[i]));

  Outcome out;
  out.ok = spec_err <= 1e-10 && sq_err <= 1e-10 && mono <= 1e-12 && idem <= 1e-10 && case_err <= 1e-12;
  out.detail = "lambda_1 vs ||X|| " + fmt(spec_err) + ", M vs h^2 " + fmt(sq_err) + ", monotonicity " + fmt(mono) +
               ", idempotence " + fmt(idem) + ", diag(3,1) case " + fmt(case_err);
  return out;
}

Outcome criterion9() {
  Outcome out;
  const MatrixConfig mc = MatrixConfig::standard(3, 2, 0.2);
  const std::vector<std::pair<PotentialPtr, double>> subjects{
      {std::make_shared<MatrixPotential>(mc), 1e-6},
      {std::make_shared<ParamFreePotential>(ParamFreeConfig::standard(10, 3)), 1e-8},
      {suites::make_meta(mc, 0.1, 10, 9), 1e-6},
  };
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [p, tol] : subjects) {
    const auto r = verify::check_supermartingale(*p, 10, 8, tol, 9);
    worst = std::max(worst, r.max_violation);
    if (!r.passed()) {
      out.ok = false;
      out.detail += "supermartingale fails for " + p->name() + "; ";
    }
  }

  const PotentialPtr a = std::make_shared<MatrixPotential>(mc);
  const PotentialPtr b = std::make_shared<MatrixPotential>(MatrixConfig::standard(3, 2, 0.5));
  const std::vector<PotentialPtr> combos{
      std::make_shared<CombinedPotential>(CombineKind::min, std::vector<PotentialPtr>{a, b}),
      std::make_shared<CombinedPotential>(CombineKind::convex, std::vector<PotentialPtr>{a, b}, Vec{0.4, 0.6}),
  };
  double combo = -std::numeric_limits<double>::infinity();
  for (const auto& p : combos) {
    const auto r1 = verify::check_p1(*p, 1e-6);
    const auto r3 = verify::check_p3(*p, verify::P3Mode::two_point, 10000, 1e-6, 9);
    const auto r3r = verify::check_p3(*p, verify::P3Mode::rademacher, 10000, 1e-6, 9);
    combo = std::max({combo, r1.max_violation, r3.max_violation, r3r.max_violation});
    if (!r1.passed() || !r3.passed() || !r3r.passed()) {
      out.ok = false;
      out.detail += p->name() + " fails p1/p3; ";
    }
  }
  out.detail += "supermartingale max violation " + fmt(worst) + " (matrix, param-free, meta; n=10), min/convex p1/p3 " +
                fmt(combo);
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 matrix regret certificate", criterion1},
      {"2 per-round descent", criterion2},
      {"3 property suites and negative control", criterion3},
      {"4 matrix Khintchine", criterion4},
      {"5 mgf bound", criterion5},
      {"6 param-free and VAW comparator grids", criterion6},
      {"7 randomized strategy slack", criterion7},
      {"8 linear-algebra identities", criterion8},
      {"9 supermartingale and combinations", criterion9},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.ok) ++failed;
    std::printf("%s criterion %s: %s (%.1f s)\n", o.ok ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
