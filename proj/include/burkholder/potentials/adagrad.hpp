#pragma once

#include "burkholder/potential.hpp"

namespace burkholder {

enum class AdaGradVariant { l2, linf };

/// Adaptive linear prediction against the unit l2 ball (statistic
/// (b, x, s) = sum (d y_hat, d x, ||x||^2)) or the unit l_inf ball
/// (coordinatewise, statistic (b, x) and the vector of squared sums).
/// Instances of any shape are read as vec(X).
struct AdaGradConfig {
  std::size_t d = 1;
  AdaGradVariant variant = AdaGradVariant::l2;
  double lipschitz = 1.0;  ///< L
  double radius = 1.0;     ///< prediction radius B
  /// R: bound on ||x||_2 (l2) or ||x||_1 (linf) of instances; used for
  /// increment bounds and random instances.
  double instance_bound = 1.0;
  /// Shape of the instances; 0 means d x 1.
  std::size_t rows = 0;
  std::size_t cols = 0;

  void validate() const;
};

/// -sqrt(2y^2 - ||x||^2) if y >= ||x||_2, else ||x||_2 - 2y.
double usq(std::span<const double> x, double y);
double usq(double x, double y);

/// Linearized prediction with F(d) = usq(xsum + d x, L sqrt(s + ||x||^2))
/// (l2) or its coordinatewise sum (linf).
double ada_predict(const AdaGradConfig& cfg, std::span<const double> xsum, std::span<const double> s,
                   std::span<const double> x_t);

class AdaGradPotential final : public Potential {
 public:
  explicit AdaGradPotential(AdaGradConfig cfg);

  const AdaGradConfig& config() const { return cfg_; }

  std::string name() const override { return cfg_.variant == AdaGradVariant::l2 ? "adagrad_l2" : "adagrad_linf"; }
  Statistic zero() const override;
  Statistic stat_map(const Instance& x, double y_hat, double delta) const override;
  double value(const Statistic& tau, std::size_t t) const override;
  double bound(const Statistic& tau) const override;
  double lipschitz() const override { return cfg_.lipschitz; }
  double y_radius() const override { return cfg_.radius; }
  bool convex_in_delta() const override { return true; }
  bool decomposes() const override { return true; }
  /// 2L sqrt(s) or 2L sum_i sqrt(s_i).
  std::optional<double> adaptive_bound(const Statistic& tau) const override;
  /// (L (B + 3R))^2: usq is 1-Lipschitz in x and 2-Lipschitz in y.
  std::optional<double> increment_bound() const override;
  Instance random_instance(Rng& rng) const override;
  Instance anchor_instance() const override;
  std::string describe() const override;

 private:
  /// (b, x, per-coordinate or total squared sums) views of a statistic.
  struct View {
    double b;
    std::span<const double> x;
    std::span<const double> s;
  };
  View view(const Statistic& tau) const;

  AdaGradConfig cfg_;
};

}  // namespace burkholder
