#pragma once

#include "burkholder/potential.hpp"

namespace burkholder {

/// Strongly convex losses with an unconstrained linear class: z = (x, -y_hat),
/// statistic (x, A) = sum (d z, z z^T) in R^{d+1} x S^{d+1}.
struct VawConfig {
  std::size_t d = 1;
  double rho = 2.0;
  double lambda = 1.0;
  double lipschitz = 4.0;  ///< L
  double c = 8.0;
  double radius = 1.0;     ///< prediction radius B

  /// Squared loss on [-B, B]: L = 4B, rho = 2, c = L^2 / rho.
  static VawConfig squared_loss(std::size_t d, double radius = 1.0, double lambda = 1.0);
  /// Throws DomainError unless lambda, rho > 0 and c >= L^2 / rho.
  void validate() const;
};

/// (1/2) x^T (rho A + lambda I)^{-1} x - c [logdet(rho A + lambda I) - (d+1) log lambda].
double vaw_U(const VawConfig& cfg, std::span<const double> x, const SymMat& a);

/// (lambda/2)(||w||^2 + 1) + c [logdet(rho A + lambda I) - (d+1) log lambda].
double vaw_regret_bound(const VawConfig& cfg, std::span<const double> w, const SymMat& a);

class VawPotential final : public Potential {
 public:
  explicit VawPotential(VawConfig cfg, bool enforce = true);

  const VawConfig& config() const { return cfg_; }

  std::string name() const override { return "vaw"; }
  Statistic zero() const override;
  Statistic stat_map(const Instance& x, double y_hat, double delta) const override;
  double value(const Statistic& tau, std::size_t t) const override;
  double bound(const Statistic& tau) const override { return value(tau, 0); }
  double lipschitz() const override { return cfg_.lipschitz; }
  double y_radius() const override { return cfg_.radius; }
  bool convex_in_delta() const override { return true; }
  Instance random_instance(Rng& rng) const override;
  Instance anchor_instance() const override { return Mat(cfg_.d, 1); }
  std::string describe() const override;

 private:
  VawConfig cfg_;
};

}  // namespace burkholder
