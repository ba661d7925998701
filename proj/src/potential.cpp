#include "burkholder/potential.hpp"

#include <algorithm>
#include <cmath>

#include "burkholder/error.hpp"

namespace burkholder {

double Potential::residual(const Statistic& tau, const Instance& x, double delta, std::size_t t) const {
  return value(tau + stat_map(x, 0.0, delta), t);
}

double Potential::after(const Statistic& tau, const Instance& x, double y_hat, double delta, std::size_t t) const {
  return value(tau + stat_map(x, y_hat, delta), t);
}

Statistic Potential::accumulate(const Statistic& zeta, const Instance& x, double y_hat, double delta) const {
  const double lip = lipschitz();
  if (!(std::abs(delta) <= lip * (1.0 + 1e-12)))
    throw DomainError("accumulate: |delta| = " + std::to_string(std::abs(delta)) + " exceeds L = " + std::to_string(lip));
  Statistic out = zeta;
  out += stat_map(x, y_hat, delta);
  return out;
}

Statistic accumulate(const Statistic& zeta, const Instance& x, double y_hat, double delta, const Potential& p) {
  return p.accumulate(zeta, x, y_hat, delta);
}

StatePoint Potential::random_state(Rng& rng) const {
  // Time-varying families: t rounds of which the first `rounds` are drawn at
  // random and the rest played at the anchor, which contributes nothing.
  const std::size_t n = horizon();
  const std::size_t cap = n == 0 ? kMaxSampledRounds : std::min(kMaxSampledRounds, n - 1);
  const std::size_t rounds = static_cast<std::size_t>(rng.below(cap + 1));
  const std::size_t t = n == 0 ? rounds : rounds + static_cast<std::size_t>(rng.below(n - rounds));
  const double lip = lipschitz();
  const double b = y_radius();
  Statistic tau = zero();
  for (std::size_t k = 0; k < rounds; ++k) {
    const Instance x = random_instance(rng);
    const double y_hat = rng.uniform(-b, b);
    const double delta = rng.uniform(-lip, lip);
    tau += stat_map(x, y_hat, delta);
  }
  return {std::move(tau), t};
}

}  // namespace burkholder
