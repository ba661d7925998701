#include "burkholder/verify/checks.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "burkholder/error.hpp"
#include "burkholder/strategies.hpp"

namespace burkholder::verify {

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

// Per-trial outcome; merged by max violation with ties going to the smaller
// trial index.
struct TrialResult {
  double violation = -std::numeric_limits<double>::infinity();
  std::string detail;
};

template <class Trial>
void run_trials(CheckReport& report, std::size_t trials, std::uint64_t seed, Exec exec, const Trial& trial) {
  std::vector<TrialResult> results(trials);
  const long long count = static_cast<long long>(trials);
#pragma omp parallel for schedule(dynamic, 16) if (exec == Exec::parallel)
  for (long long i = 0; i < count; ++i) results[static_cast<std::size_t>(i)] = trial(static_cast<std::uint64_t>(i));
  for (std::size_t i = 0; i < trials; ++i) {
    ++report.checks;
    if (results[i].violation > report.max_violation) {
      report.max_violation = results[i].violation;
      report.witness = Witness{seed, i, results[i].detail};
    }
  }
}

TrialResult p2_trial(const Potential& p, std::uint64_t seed, std::uint64_t trial) {
  Rng rng(stream_seed(seed, trial));
  const StatePoint s = p.random_state(rng);
  const double u = p.value(s.tau, s.t);
  const double v = p.bound(s.tau);
  return {v - u, "t=" + std::to_string(s.t) + " U=" + fmt(u) + " V=" + fmt(v)};
}

TrialResult p3_trial(const Potential& p, P3Mode mode, std::uint64_t seed, std::uint64_t trial) {
  Rng rng(stream_seed(seed, trial));
  const StatePoint s = p.random_state(rng);
  const std::size_t t = s.t + 1;
  const double lip = p.lipschitz();
  const double b = p.y_radius();
  // One trial in sixteen plays the anchor instance.
  const Instance x = rng.below(16) == 0 ? p.anchor_instance() : p.random_instance(rng);
  const double y_hat = rng.uniform(-b, b);
  const double before = p.value(s.tau, s.t);

  double expected = 0.0;
  std::ostringstream detail;
  detail << std::setprecision(17) << "t=" << t << " y_hat=" << y_hat;
  if (mode == P3Mode::rademacher) {
    expected = 0.5 * (p.after(s.tau, x, y_hat, lip, t) + p.after(s.tau, x, y_hat, -lip, t));
  } else {
    // Endpoint-heavy draws: a or b equals L a quarter of the time each.
    auto draw = [&] { return rng.below(4) == 0 ? lip : lip * (1.0 - rng.uniform()); };
    const TwoPointDist dist{draw(), draw()};
    expected = dist.p_a() * p.after(s.tau, x, y_hat, dist.a, t) + dist.p_b() * p.after(s.tau, x, y_hat, -dist.b, t);
    detail << " a=" << dist.a << " b=" << dist.b;
  }
  detail << " E_after=" << expected << " before=" << before;
  return {expected - before, detail.str()};
}

const char* mode_name(P3Mode mode) { return mode == P3Mode::rademacher ? "p3_rademacher" : "p3_two_point"; }

double leaf_norm(const Mat& s) { return s.rows() == 0 ? 0.0 : linalg::spectral_norm(s); }

}  // namespace

std::string to_csv(const std::vector<CheckReport>& reports) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "check,subject,checks,max_violation,tolerance,worst_ratio,asserted,passed,witness_seed,witness_trial,witness\n";
  for (const auto& r : reports) {
    out << r.check << ",\"" << r.subject << "\"," << r.checks << "," << r.max_violation << "," << r.tolerance << ",";
    if (r.worst_ratio) out << *r.worst_ratio;
    out << "," << (r.asserted ? 1 : 0) << "," << (r.passed() ? 1 : 0) << ",";
    if (r.witness) out << r.witness->seed << "," << r.witness->trial << ",\"" << r.witness->detail << "\"";
    else out << ",,";
    out << "\n";
  }
  return out.str();
}

CheckReport check_p1(const Potential& p, double tol) {
  CheckReport report;
  report.check = "p1";
  report.subject = p.describe();
  report.tolerance = tol;
  report.checks = 1;
  const double u0 = p.value(p.zero(), 0);
  report.max_violation = u0;
  report.witness = Witness{0, 0, "U_0(0)=" + fmt(u0)};
  return report;
}

CheckReport check_p2(const Potential& p, std::size_t trials, double tol, std::uint64_t seed, Exec exec) {
  CheckReport report;
  report.check = "p2";
  report.subject = p.describe();
  report.tolerance = tol;
  run_trials(report, trials, seed, exec, [&](std::uint64_t i) { return p2_trial(p, seed, i); });
  return report;
}

double replay_p2(const Potential& p, std::uint64_t seed, std::uint64_t trial) {
  return p2_trial(p, seed, trial).violation;
}

CheckReport check_p3(const Potential& p, P3Mode mode, std::size_t trials, double tol, std::uint64_t seed,
                     Exec exec) {
  CheckReport report;
  report.check = mode_name(mode);
  report.subject = p.describe();
  report.tolerance = tol;
  if (mode == P3Mode::rademacher && !p.convex_in_delta())
    report.notes.push_back("not convex in the subgradient: Rademacher steps alone do not certify 3°");
  run_trials(report, trials, seed, exec, [&](std::uint64_t i) { return p3_trial(p, mode, seed, i); });
  return report;
}

double replay_p3(const Potential& p, P3Mode mode, std::uint64_t seed, std::uint64_t trial) {
  return p3_trial(p, mode, seed, trial).violation;
}

PredictableTree<TreeNode> random_tree(const Potential& p, std::size_t depth, Rng& rng) {
  const double b = p.y_radius();
  return PredictableTree<TreeNode>::generate(depth, [&](std::size_t, std::uint64_t) {
    TreeNode node;
    node.x = p.random_instance(rng);
    node.y_hat = rng.uniform(-b, b);
    return node;
  });
}

SupResult brute_force_sup_EV(const Potential& p, const std::function<double(const Statistic&)>& v, std::size_t n,
                             TreeSearch search, std::size_t budget, std::uint64_t seed, Exec exec) {
  if (n > 14) throw DomainError("brute_force_sup_EV: n must be at most 14");
  const double lip = p.lipschitz();
  auto expected = [&](const PredictableTree<TreeNode>& tree, Exec e) {
    auto step = [&](const Statistic& zeta, std::size_t level, std::uint64_t prefix, int sign) {
      const TreeNode& node = tree.at(level, prefix);
      return p.accumulate(zeta, node.x, node.y_hat, sign * lip);
    };
    auto leaf = [&](const Statistic& zeta, std::uint64_t) { return v(zeta); };
    return enumerate_paths(n, p.zero(), step, leaf, e).mean;
  };

  SupResult out;
  out.seed = seed;
  if (search == TreeSearch::random) {
    std::vector<double> values(budget);
    const long long count = static_cast<long long>(budget);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
    for (long long k = 0; k < count; ++k) {
      Rng rng(stream_seed(seed, static_cast<std::uint64_t>(k)));
      values[static_cast<std::size_t>(k)] = expected(random_tree(p, n, rng), Exec::serial);
    }
    for (double value : values) out.value = std::max(out.value, value);
    out.trees = budget;
    return out;
  }

  Rng rng(seed);
  PredictableTree<TreeNode> tree = random_tree(p, n, rng);
  out.value = expected(tree, exec);
  out.trees = 1;
  const double b = p.y_radius();
  for (std::size_t step = 0; step < budget && n > 0; ++step) {
    const std::size_t level = static_cast<std::size_t>(rng.below(n));
    const std::uint64_t prefix = rng.below(std::uint64_t{1} << level);
    const TreeNode saved = tree.at(level, prefix);
    tree.at(level, prefix) = TreeNode{p.random_instance(rng), rng.uniform(-b, b)};
    const double value = expected(tree, exec);
    ++out.trees;
    if (value > out.value) out.value = value;
    else tree.at(level, prefix) = saved;
  }
  return out;
}

namespace {

struct KhintchineState {
  Mat sum;
  SymMat var;
};

Mat random_matrix(std::size_t d1, std::size_t d2, Rng& rng) {
  Mat x(d1, d2);
  const double scale = rng.uniform();
  for (double& v : x.data()) v = scale * rng.normal();
  return x;
}

}  // namespace

CheckReport check_matrix_khintchine(std::size_t n, std::size_t d1, std::size_t d2, std::size_t trees,
                                    std::uint64_t seed, bool fixed_sequences, Exec exec) {
  if (n > 12 || d1 > 6 || d2 > 6) throw DomainError("check_matrix_khintchine: needs n <= 12 and d1, d2 <= 6");
  CheckReport report;
  report.check = fixed_sequences ? "khintchine_fixed" : "khintchine";
  report.subject = "n=" + std::to_string(n) + " " + std::to_string(d1) + "x" + std::to_string(d2);
  report.tolerance = 1e-9;
  const double log_d = std::log(static_cast<double>(d1 + d2));

  struct Outcome {
    double lhs = 0.0, rhs = 0.0;
  };
  std::vector<Outcome> outcomes(trees);
  const long long count = static_cast<long long>(trees);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (long long k = 0; k < count; ++k) {
    Rng rng(stream_seed(seed, static_cast<std::uint64_t>(k)));
    PredictableTree<Mat> tree;
    if (fixed_sequences) {
      std::vector<Mat> seq;
      for (std::size_t t = 0; t < n; ++t) seq.push_back(random_matrix(d1, d2, rng));
      tree = PredictableTree<Mat>::generate(n, [&](std::size_t level, std::uint64_t) { return seq[level]; });
    } else {
      tree = PredictableTree<Mat>::generate(n, [&](std::size_t, std::uint64_t) { return random_matrix(d1, d2, rng); });
    }
    auto step = [&](const KhintchineState& s, std::size_t level, std::uint64_t prefix, int sign) {
      const Mat& x = tree.at(level, prefix);
      KhintchineState next = s;
      if (sign > 0) next.sum += x;
      else next.sum -= x;
      next.var += linalg::dilation_square(x);
      return next;
    };
    const KhintchineState root{Mat(d1, d2), SymMat(d1 + d2)};
    const double lhs =
        enumerate_paths(n, root, step, [](const KhintchineState& s, std::uint64_t) { return leaf_norm(s.sum); },
                        Exec::serial)
            .mean;
    const double var = enumerate_paths(
                           n, root, step,
                           [](const KhintchineState& s, std::uint64_t) { return std::max(linalg::lambda_max(s.var), 0.0); },
                           Exec::serial)
                           .mean;
    outcomes[static_cast<std::size_t>(k)] = {lhs, std::sqrt(2.0 * var * log_d)};
  }

  double worst_ratio = 0.0;
  for (std::size_t k = 0; k < trees; ++k) {
    ++report.checks;
    const auto& o = outcomes[k];
    const double violation = o.lhs - o.rhs;
    if (o.rhs > 0.0) worst_ratio = std::max(worst_ratio, o.lhs / o.rhs);
    if (violation > report.max_violation) {
      report.max_violation = violation;
      report.witness = Witness{seed, k, "E||S||=" + fmt(o.lhs) + " rhs=" + fmt(o.rhs)};
    }
  }
  report.worst_ratio = worst_ratio;
  return report;
}

namespace {

Vec random_ball_vector(std::size_t d, Rng& rng) {
  Vec v(d);
  double norm = 0.0;
  while (norm == 0.0) {
    for (double& x : v) x = rng.normal();
    norm = linalg::norm2(v);
  }
  // Mostly unit length, which is where the bound is tight.
  const double radius = rng.below(4) == 0 ? rng.uniform() : 1.0;
  for (double& x : v) x *= radius / norm;
  return v;
}

}  // namespace

CheckReport check_mgf_bound(std::size_t n, std::size_t d, double beta, std::size_t trees, std::uint64_t seed,
                            Exec exec) {
  if (n < 1 || n > 14 || d < 1 || d > 4) throw DomainError("check_mgf_bound: needs 1 <= n <= 14 and 1 <= d <= 4");
  if (!(beta > 0.0)) throw DomainError("check_mgf_bound: beta must be positive");
  CheckReport report;
  report.check = "mgf";
  report.subject = "n=" + std::to_string(n) + " d=" + std::to_string(d) + " beta=" + fmt(beta);
  report.tolerance = 1e-9;
  report.asserted = n >= 4;
  if (!report.asserted) report.notes.push_back("n < 4: ratio observed only");
  const double root_n = std::sqrt(static_cast<double>(n));
  const double scale = 1.0 / (2.0 * beta * static_cast<double>(n));

  std::vector<double> expectations(trees);
  const long long count = static_cast<long long>(trees);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (long long k = 0; k < count; ++k) {
    Rng rng(stream_seed(seed, static_cast<std::uint64_t>(k)));
    const auto tree =
        PredictableTree<Vec>::generate(n, [&](std::size_t, std::uint64_t) { return random_ball_vector(d, rng); });
    auto step = [&](const Vec& s, std::size_t level, std::uint64_t prefix, int sign) {
      Vec next = s;
      const Vec& x = tree.at(level, prefix);
      for (std::size_t i = 0; i < d; ++i) next[i] += sign * x[i];
      return next;
    };
    auto leaf = [&](const Vec& s, std::uint64_t) { return std::exp(scale * linalg::dot(s, s)); };
    expectations[static_cast<std::size_t>(k)] = enumerate_paths(n, Vec(d, 0.0), step, leaf, Exec::serial).mean;
  }

  double worst_ratio = 0.0;
  for (std::size_t k = 0; k < trees; ++k) {
    ++report.checks;
    const double ratio = expectations[k] / root_n;
    worst_ratio = std::max(worst_ratio, ratio);
    if (ratio - 1.0 > report.max_violation) {
      report.max_violation = ratio - 1.0;
      report.witness = Witness{seed, k, "E=" + fmt(expectations[k]) + " sqrt(n)=" + fmt(root_n)};
    }
  }
  report.worst_ratio = worst_ratio;
  return report;
}

CheckReport check_supermartingale(const Potential& p, const PredictableTree<TreeNode>& tree, double tol, Exec exec) {
  const std::size_t n = tree.depth();
  if (p.time_varying() && n > p.horizon())
    throw DomainError("check_supermartingale: tree deeper than the potential's horizon");
  const double lip = p.lipschitz();
  auto step = [&](const Statistic& zeta, std::size_t level, std::uint64_t prefix, int sign) {
    const TreeNode& node = tree.at(level, prefix);
    return p.accumulate(zeta, node.x, node.y_hat, sign * lip);
  };
  auto visit = [&](const Statistic& zeta, std::size_t level, std::uint64_t prefix) {
    const TreeNode& node = tree.at(level, prefix);
    const std::size_t t = level + 1;
    const double up = p.after(zeta, node.x, node.y_hat, lip, t);
    const double down = p.after(zeta, node.x, node.y_hat, -lip, t);
    return 0.5 * (up + down) - p.value(zeta, level);
  };
  const PathStats stats = visit_nodes(n, p.zero(), step, visit, exec);
  CheckReport report;
  report.check = "supermartingale";
  report.subject = p.describe();
  report.tolerance = tol;
  report.checks = stats.count;
  report.max_violation = stats.max;
  report.witness = Witness{0, 0, "prefix=" + std::to_string(stats.argmax)};
  return report;
}

CheckReport check_supermartingale(const Potential& p, std::size_t n, std::size_t trees, double tol,
                                  std::uint64_t seed, Exec exec) {
  CheckReport report;
  report.check = "supermartingale";
  report.subject = p.describe() + " n=" + std::to_string(n);
  report.tolerance = tol;
  std::vector<CheckReport> parts(trees);
  const long long count = static_cast<long long>(trees);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (long long k = 0; k < count; ++k) {
    Rng rng(stream_seed(seed, static_cast<std::uint64_t>(k)));
    parts[static_cast<std::size_t>(k)] = check_supermartingale(p, random_tree(p, n, rng), tol, Exec::serial);
  }
  for (std::size_t k = 0; k < trees; ++k) {
    report.checks += parts[k].checks;
    if (parts[k].max_violation > report.max_violation) {
      report.max_violation = parts[k].max_violation;
      report.witness = Witness{seed, k, parts[k].witness ? parts[k].witness->detail : ""};
    }
  }
  return report;
}

Learner matrix_learner(const MatrixPotential& p) {
  return [&p](const Statistic& zeta, const Instance& x, std::size_t t) {
    return predict_linearized(p, zeta, x, p.config().radius, t);
  };
}

Learner constant_learner(double value) {
  return [value](const Statistic&, const Instance&, std::size_t) { return value; };
}

PredictableTree<Instance> indicator_tree(std::size_t depth, std::size_t d1, std::size_t d2, double scale, Rng& rng) {
  return PredictableTree<Instance>::generate(depth, [&](std::size_t, std::uint64_t) {
    Mat x = Mat::indicator(d1, d2, rng.below(d1), rng.below(d2));
    x *= scale;
    return x;
  });
}

namespace {

struct NecessityState {
  Statistic zeta;
  double cum_loss = 0.0;
  Mat signed_sum;
};

}  // namespace

NecessityResult check_necessity(const MatrixPotential& p, const Learner& learner, std::size_t n,
                                const PredictableTree<Instance>& tree, double tol, Exec exec) {
  if (n > 12) throw DomainError("check_necessity: n must be at most 12");
  if (tree.depth() != n) throw StructuralError("check_necessity: tree depth does not match n");
  const MatrixConfig& cfg = p.config();
  if (cfg.radius < 1.0) throw DomainError("check_necessity: outcomes +-1 need B >= 1");
  for (std::size_t level = 0; level < n; ++level)
    for (std::uint64_t prefix = 0; prefix < (std::uint64_t{1} << level); ++prefix)
      if (cfg.r * linalg::spectral_norm(tree.at(level, prefix)) > 1.0 + 1e-12)
        throw DomainError("check_necessity: instances need r ||X||_sigma <= 1");
  const Loss loss = Loss::absolute(cfg.radius);

  auto step = [&](const NecessityState& s, std::size_t level, std::uint64_t prefix, int sign) {
    const Instance& x = tree.at(level, prefix);
    const double y = sign;
    const double y_hat = learner(s.zeta, x, level + 1);
    NecessityState next;
    next.cum_loss = s.cum_loss + loss.value(y_hat, y);
    next.zeta = p.accumulate(s.zeta, x, y_hat, loss.subgradient(y_hat, y));
    next.signed_sum = s.signed_sum;
    if (sign > 0) next.signed_sum += x;
    else next.signed_sum -= x;
    return next;
  };
  // With r ||X_t|| <= 1 every comparator has |<W, X_t>| <= 1, so the
  // comparator loss is n - <W, sum eps X> and its infimum is n - r ||sum eps X||.
  auto best = [&](const NecessityState& s) { return static_cast<double>(n) - cfg.r * leaf_norm(s.signed_sum); };
  auto budget = [&](const NecessityState& s) { return mp_regret_bound(cfg, s.zeta.as<ScalarSymPsd>().m); };
  auto excess = [&](const NecessityState& s, std::uint64_t) { return s.cum_loss - best(s) - budget(s); };
  auto v_lin = [&](const NecessityState& s, std::uint64_t) { return cfg.r * leaf_norm(s.signed_sum) - budget(s); };

  const NecessityState root{p.zero(), 0.0, Mat(cfg.d1, cfg.d2)};
  const PathStats ex = enumerate_paths(n, root, step, excess, exec);
  const PathStats vl = enumerate_paths(n, root, step, v_lin, exec);

  NecessityResult out;
  out.expected_excess = ex.mean;
  out.expected_v = vl.mean;
  out.max_path_excess = ex.max;
  out.worst_path = ex.argmax;
  CheckReport& report = out.report;
  report.check = "necessity";
  report.subject = p.describe() + " n=" + std::to_string(n);
  report.tolerance = tol;
  report.checks = ex.count;
  // A learner claiming the bound needs regret <= A on every path, E[V] <= 0
  // and E[regret - A] >= E[V].
  report.max_violation = std::max({ex.max, vl.mean, vl.mean - ex.mean});
  report.witness = Witness{0, ex.argmax, "path=" + std::to_string(ex.argmax) + " regret-A=" + fmt(ex.max)};
  report.notes.push_back("E[regret-A]-E[V]=" + fmt(ex.mean - vl.mean));
  report.notes.push_back("E[V]=" + fmt(vl.mean));
  return out;
}

NecessityResult check_necessity(const MatrixPotential& p, const Learner& learner, std::size_t n, std::size_t trees,
                                std::uint64_t seed, double tol, Exec exec) {
  const MatrixConfig& cfg = p.config();
  const double scale = cfg.r > 0.0 ? std::min(1.0, 1.0 / cfg.r) : 1.0;
  NecessityResult out;
  out.max_path_excess = -std::numeric_limits<double>::infinity();
  out.report.check = "necessity";
  out.report.subject = p.describe() + " n=" + std::to_string(n);
  out.report.tolerance = tol;
  double min_gap = std::numeric_limits<double>::infinity();
  double max_ev = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < trees; ++k) {
    Rng rng(stream_seed(seed, k));
    const NecessityResult r = check_necessity(p, learner, n, indicator_tree(n, cfg.d1, cfg.d2, scale, rng), tol, exec);
    out.expected_excess += r.expected_excess / static_cast<double>(trees);
    out.expected_v += r.expected_v / static_cast<double>(trees);
    min_gap = std::min(min_gap, r.expected_excess - r.expected_v);
    max_ev = std::max(max_ev, r.expected_v);
    out.report.checks += r.report.checks;
    if (r.max_path_excess > out.max_path_excess) {
      out.max_path_excess = r.max_path_excess;
      out.worst_path = r.worst_path;
    }
    if (r.report.max_violation > out.report.max_violation) {
      out.report.max_violation = r.report.max_violation;
      out.report.witness = Witness{seed, k, r.report.witness->detail};
    }
  }
  out.report.notes.push_back("min over trees of E[regret-A]-E[V]=" + fmt(min_gap));
  out.report.notes.push_back("max over trees of E[V]=" + fmt(max_ev));
  return out;
}

}  // namespace burkholder::verify
