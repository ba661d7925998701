#include "burkholder/online.hpp"

#include <cmath>
#include <map>

#include "burkholder/error.hpp"

namespace burkholder {

double Trajectory::cumulative_loss() const {
  double total = 0.0;
  for (const auto& r : rounds) total += r.loss;
  return total;
}

StrategyKind strategy_by_name(const std::string& name) {
  if (name == "linearized") return StrategyKind::linearized;
  if (name == "convex") return StrategyKind::convex;
  if (name == "randomized") return StrategyKind::randomized;
  throw DomainError("unknown strategy '" + name + "' (expected linearized, convex or randomized)");
}

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::linearized: return "linearized";
    case StrategyKind::convex: return "convex";
    case StrategyKind::randomized: return "randomized";
  }
  return "?";
}

double predict(const Potential& p, const Loss& loss, const Statistic& zeta, const Instance& x, std::size_t t,
               const RunOptions& options, Rng& rng) {
  switch (options.strategy) {
    case StrategyKind::linearized: return predict_linearized(p, zeta, x, loss.radius, t);
    case StrategyKind::convex: return predict_convex(p, loss, zeta, x, t, options.grid);
    case StrategyKind::randomized: return predict_randomized(p, loss, zeta, x, t, options.randomized, rng).sample;
  }
  return 0.0;
}

double descent_excess(const Potential& p, const Loss& loss, const Statistic& zeta, const Instance& x,
                      double y_hat, std::size_t t, std::size_t points) {
  const double before = p.value(zeta, t - 1);
  std::map<double, double> by_delta;
  double worst = -std::numeric_limits<double>::infinity();
  for (double y : uniform_grid(loss.radius, points)) {
    const double delta = loss.subgradient(y_hat, y);
    auto it = by_delta.find(delta);
    if (it == by_delta.end()) it = by_delta.emplace(delta, p.after(zeta, x, y_hat, delta, t)).first;
    worst = std::max(worst, it->second);
  }
  return worst - before;
}

Trajectory run_online(const Potential& p, const Sequence& sequence, const Loss& loss, const RunOptions& options) {
  if (loss.lipschitz() > p.lipschitz() * (1.0 + 1e-12))
    throw DomainError("run_online: loss Lipschitz constant " + std::to_string(loss.lipschitz()) +
                      " exceeds the potential's L = " + std::to_string(p.lipschitz()));
  if (p.time_varying() && sequence.size() > p.horizon())
    throw DomainError("run_online: sequence longer than the potential's horizon");

  Trajectory traj;
  Rng rng(options.seed);
  Statistic zeta = p.zero();
  traj.zetas.push_back(zeta);
  traj.potential_values.push_back(p.value(zeta, 0));
  traj.rounds.reserve(sequence.size());

  for (std::size_t k = 0; k < sequence.size(); ++k) {
    const std::size_t t = k + 1;
    const Example& ex = sequence[k];
    if (!(std::abs(ex.y) <= loss.radius)) throw DomainError("run_online: outcome outside [-B, B]");

    double y_hat = 0.0;
    if (options.strategy == StrategyKind::randomized) {
      const RandomizedPrediction rp = predict_randomized(p, loss, zeta, ex.x, t, options.randomized, rng);
      y_hat = rp.sample;
      traj.slack_budget.push_back(rp.k_bound * options.randomized.eps1 + options.randomized.eps2);
      traj.randomized_excess.push_back(rp.value - p.value(zeta, t - 1));
      traj.k_estimated = traj.k_estimated || rp.k_estimated;
    } else {
      y_hat = predict(p, loss, zeta, ex.x, t, options, rng);
    }
    if (options.record_descent)
      traj.descent_excess.push_back(descent_excess(p, loss, zeta, ex.x, y_hat, t, options.descent_grid));

    Round r;
    r.t = t;
    r.x = ex.x;
    r.y_hat = y_hat;
    r.y = ex.y;
    r.delta = loss.subgradient(y_hat, ex.y);
    r.loss = loss.value(y_hat, ex.y);
    zeta = p.accumulate(zeta, ex.x, y_hat, r.delta);
    traj.zetas.push_back(zeta);
    traj.potential_values.push_back(p.value(zeta, t));
    traj.rounds.push_back(std::move(r));
  }
  return traj;
}

}  // namespace burkholder
