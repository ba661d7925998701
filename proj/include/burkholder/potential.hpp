#pragma once

// A Burkholder potential: the function U over statistics, the statistic map T
// and the bound function V, together with the facts the strategies and
// checks need (Lipschitz constant, convexity in the subgradient, whether the
// potential splits as U(tau + T(x, y_hat, d)) = y_hat * d + F(tau, x, d)).

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "burkholder/rng.hpp"
#include "burkholder/statistic.hpp"

namespace burkholder {

/// A sampled point in statistic space: tau reachable after `t` rounds.
struct StatePoint {
  Statistic tau;
  std::size_t t = 0;
};

class Potential {
 public:
  virtual ~Potential() = default;

  virtual std::string name() const = 0;
  virtual Statistic zero() const = 0;
  virtual Statistic stat_map(const Instance& x, double y_hat, double delta) const = 0;

  /// U_t(tau). Time-invariant potentials ignore t.
  virtual double value(const Statistic& tau, std::size_t t) const = 0;
  /// V(tau).
  virtual double bound(const Statistic& tau) const = 0;

  /// Loss Lipschitz constant L; subgradients live in [-L, L].
  virtual double lipschitz() const = 0;
  /// Prediction radius B.
  virtual double y_radius() const = 0;
  virtual bool convex_in_delta() const = 0;
  virtual bool decomposes() const { return false; }
  /// Number of rounds the family is defined for; 0 means unbounded and
  /// time-invariant.
  virtual std::size_t horizon() const { return 0; }

  /// F(tau, x, d) = U_t(tau + T(x, y_hat, d)) - y_hat * d for decomposable
  /// potentials. The default evaluates at y_hat = 0.
  virtual double residual(const Statistic& tau, const Instance& x, double delta, std::size_t t) const;

  /// Adaptive regret budget at tau when it does not depend on the comparator.
  virtual std::optional<double> adaptive_bound(const Statistic&) const { return std::nullopt; }

  /// Analytic bound on (U_t(tau + T) - U_{t-1}(tau))^2 for one round.
  virtual std::optional<double> increment_bound() const { return std::nullopt; }
  /// Analytic Lipschitz constant of y_hat -> U(tau + T(x, y_hat, d(y_hat, y))).
  virtual std::optional<double> prediction_lipschitz() const { return std::nullopt; }

  virtual Instance random_instance(Rng& rng) const = 0;
  virtual Instance anchor_instance() const = 0;

  /// A reachable state: tau sums T over random rounds with uniform y_hat and
  /// delta. Time-varying families return t < horizon.
  virtual StatePoint random_state(Rng& rng) const;

  /// Short parameter summary for reports.
  virtual std::string describe() const { return name(); }

  /// U_t(tau + T(x, y_hat, delta)).
  double after(const Statistic& tau, const Instance& x, double y_hat, double delta, std::size_t t) const;
  /// zeta + T(x, y_hat, delta); checks |delta| <= L.
  Statistic accumulate(const Statistic& zeta, const Instance& x, double y_hat, double delta) const;

  bool time_varying() const { return horizon() != 0; }
};

using PotentialPtr = std::shared_ptr<const Potential>;

/// zeta + P.stat_map(x, y_hat, delta). Throws StructuralError on a tag
/// mismatch and DomainError when |delta| > L.
Statistic accumulate(const Statistic& zeta, const Instance& x, double y_hat, double delta, const Potential& p);

/// Random rounds used by the default random_state.
inline constexpr std::size_t kMaxSampledRounds = 24;

}  // namespace burkholder
