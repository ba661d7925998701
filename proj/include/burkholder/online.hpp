#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "burkholder/losses.hpp"
#include "burkholder/potential.hpp"
#include "burkholder/strategies.hpp"

namespace burkholder {

struct Example {
  Instance x;
  double y = 0.0;
};
using Sequence = std::vector<Example>;

struct Round {
  std::size_t t = 0;
  Instance x;
  double y_hat = 0.0;
  double y = 0.0;
  double delta = 0.0;
  double loss = 0.0;
};

struct Trajectory {
  std::vector<Round> rounds;
  /// zetas[0] is the zero statistic; zetas[t] follows round t.
  std::vector<Statistic> zetas;
  /// U_t(zetas[t]) for t = 0..n.
  Vec potential_values;
  /// Per round: max over the descent grid of U_t(zeta_{t-1} + T(x_t, y_hat_t,
  /// dl(y_hat_t, y))) - U_{t-1}(zeta_{t-1}). Empty unless requested.
  Vec descent_excess;
  /// Randomized strategy only: per-round K_t * eps1 + eps2 and the realized
  /// sup over outcomes of the mixed value minus U_{t-1}(zeta_{t-1}).
  Vec slack_budget;
  Vec randomized_excess;
  bool k_estimated = false;

  double cumulative_loss() const;
};

enum class StrategyKind { linearized, convex, randomized };

StrategyKind strategy_by_name(const std::string& name);
std::string to_string(StrategyKind kind);

struct RunOptions {
  StrategyKind strategy = StrategyKind::linearized;
  GridOptions grid;
  RandomizedOptions randomized;
  std::uint64_t seed = 0;
  bool record_descent = false;
  std::size_t descent_grid = 101;
};

/// Plays the Burkholder algorithm on `sequence`. Outcomes must lie in
/// [-B, B] with B = loss.radius, and the loss Lipschitz constant must not
/// exceed the potential's.
Trajectory run_online(const Potential& p, const Sequence& sequence, const Loss& loss, const RunOptions& options);

/// One prediction at round t (1-based) from statistic zeta.
double predict(const Potential& p, const Loss& loss, const Statistic& zeta, const Instance& x, std::size_t t,
               const RunOptions& options, Rng& rng);

/// max over a `points`-grid of outcomes of U_t(zeta + T(x, y_hat, dl)) minus
/// U_{t-1}(zeta), deduplicated by subgradient.
double descent_excess(const Potential& p, const Loss& loss, const Statistic& zeta, const Instance& x,
                      double y_hat, std::size_t t, std::size_t points);

}  // namespace burkholder
