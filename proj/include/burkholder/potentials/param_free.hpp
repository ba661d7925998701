#pragma once

#include "burkholder/potential.hpp"

namespace burkholder {

/// Time-varying potential for unconstrained linear prediction under a smooth
/// l_p norm (p >= 2), statistic (b, x) = sum (d * y_hat, d * x).
struct ParamFreeConfig {
  std::size_t n = 1;      ///< horizon
  std::size_t d = 1;      ///< dimension
  double p = 2.0;         ///< norm exponent
  double beta = 1.0;      ///< smoothness of 0.5 ||.||^2, p - 1 for l_p
  double gamma = 1.0;
  double c = 1.0;
  double radius = 1.0;    ///< prediction radius B

  /// beta = p - 1 and gamma = c * exp(-H_n / 2), which makes U_0(0) = 0.
  static ParamFreeConfig standard(std::size_t n, std::size_t d, double p = 2.0, double c = 1.0,
                                  double radius = 1.0);
  /// Throws DomainError unless n >= 1, p >= 2, gamma, c > 0 and
  /// gamma * exp(H_n / 2) <= c.
  void validate() const;
};

/// H_n = sum_{t=1}^n 1/t.
double harmonic(std::size_t n);
/// sum_{s=t+1}^n 1/s.
double harmonic_tail(std::size_t t, std::size_t n);

/// U_t(b, x) = b + gamma * exp(||x||^2 / (2 beta t) + tail(t)) - c; at t = 0
/// the exponential term is the constant gamma * exp(H_n / 2) and x must be 0.
/// Throws NumericError when the exponent exceeds 700.
double pf_U(const ParamFreeConfig& cfg, std::size_t t, double b, std::span<const double> x);

/// Linearized prediction at round t given the running sum xsum.
double pf_predict(const ParamFreeConfig& cfg, std::span<const double> xsum, std::size_t t,
                  std::span<const double> x_t);

/// ||w||_* sqrt(2 beta n log(sqrt(beta n) ||w||_* / gamma + 1)) + c.
double pf_regret_bound(const ParamFreeConfig& cfg, double dual_norm);

/// Dual exponent q = p / (p - 1).
double dual_exponent(double p);

class ParamFreePotential final : public Potential {
 public:
  explicit ParamFreePotential(ParamFreeConfig cfg, bool enforce = true);

  const ParamFreeConfig& config() const { return cfg_; }

  std::string name() const override;
  Statistic zero() const override;
  Statistic stat_map(const Instance& x, double y_hat, double delta) const override;
  double value(const Statistic& tau, std::size_t t) const override;
  double bound(const Statistic& tau) const override;
  double lipschitz() const override { return 1.0; }
  double y_radius() const override { return cfg_.radius; }
  bool convex_in_delta() const override { return true; }
  bool decomposes() const override { return true; }
  std::size_t horizon() const override { return cfg_.n; }
  Instance random_instance(Rng& rng) const override;
  Instance anchor_instance() const override;
  std::string describe() const override;

 private:
  ParamFreeConfig cfg_;
};

}  // namespace burkholder
