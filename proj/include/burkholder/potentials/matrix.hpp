#pragma once

#include "burkholder/online.hpp"
#include "burkholder/potential.hpp"

namespace burkholder {

/// Matrix prediction with nuclear-norm comparators: instances X in
/// R^{d1 x d2}, statistic (a, H, M) = sum (d * y_hat, d * h(X), h(X)^2).
struct MatrixConfig {
  std::size_t d1 = 1;
  std::size_t d2 = 1;
  double eta = 0.1;
  double r = 1.0;          ///< nuclear radius of the comparator class
  double lipschitz = 1.0;  ///< L
  double c = 0.0;
  double radius = 1.0;     ///< prediction radius B
  double instance_bound = 1.0;  ///< R >= ||X||_sigma, used for increment bounds
  /// Coefficient of eta^2 L^2 M inside the trace exponential. Only a
  /// corrupted negative-control potential changes it from 1/2.
  double variance_weight = 0.5;

  /// c = r log(d1 + d2).
  static MatrixConfig standard(std::size_t d1, std::size_t d2, double eta, double r = 1.0, double lipschitz = 1.0,
                               double radius = 1.0);
  /// Throws DomainError naming "c ≥ r·log(d1+d2)" when c is too small.
  void validate() const;
};

/// a + (r/eta) log tr exp(eta H - w eta^2 L^2 M) - c/eta with w = 1/2.
double mp_U(const MatrixConfig& cfg, double a, const SymMat& h, const SymMat& m);
/// a + r lambda_1(H - (1/2) eta L^2 M) - c/eta.
double mp_V(const MatrixConfig& cfg, double a, const SymMat& h, const SymMat& m);
/// Linearized prediction; Msum is the sum over previous rounds and M(X_t) is
/// added inside both branches.
double mp_predict(const MatrixConfig& cfg, const SymMat& hsum, const SymMat& msum, const Mat& x_t);
/// (1/2) eta L^2 r ||M||_sigma + c/eta.
double mp_regret_bound(const MatrixConfig& cfg, const SymMat& m);

class MatrixPotential final : public Potential {
 public:
  explicit MatrixPotential(MatrixConfig cfg, bool enforce = true);

  const MatrixConfig& config() const { return cfg_; }

  std::string name() const override { return "matrix"; }
  Statistic zero() const override;
  Statistic stat_map(const Instance& x, double y_hat, double delta) const override;
  double value(const Statistic& tau, std::size_t t) const override;
  double bound(const Statistic& tau) const override;
  double lipschitz() const override { return cfg_.lipschitz; }
  double y_radius() const override { return cfg_.radius; }
  bool convex_in_delta() const override { return true; }
  bool decomposes() const override { return true; }
  std::optional<double> adaptive_bound(const Statistic& tau) const override;
  std::optional<double> increment_bound() const override;
  Instance random_instance(Rng& rng) const override;
  Instance anchor_instance() const override { return Mat(cfg_.d1, cfg_.d2); }
  std::string describe() const override;

 private:
  MatrixConfig cfg_;
};

struct DoublingEpoch {
  std::size_t start = 0;   ///< first round (0-based) of the epoch
  std::size_t length = 0;
  double budget = 0.0;     ///< B_k
  double eta = 0.0;
  double msum_norm = 0.0;  ///< ||sum_epoch M(X_t)||_sigma
  double bound = 0.0;      ///< (1/2) eta L^2 r msum_norm + c/eta
  double final_potential = 0.0;
  double final_certificate = 0.0;  ///< V at the end of the epoch
};

struct DoublingResult {
  std::vector<Round> rounds;
  std::vector<DoublingEpoch> epochs;
  /// Sum of per-epoch bounds; total regret against any comparator in the
  /// nuclear ball is at most this.
  double certified_bound = 0.0;
  double max_descent_excess = -std::numeric_limits<double>::infinity();
};

/// Restarts the linearized matrix learner with eta_k = sqrt(2c / (r L^2 B_k))
/// whenever the epoch's ||sum M(X_t)||_sigma would exceed B_k = R^2 2^k.
/// Throws DomainError if R <= 0 or some ||X_t||_sigma exceeds R.
DoublingResult mp_doubling_run(const MatrixConfig& base, const Sequence& sequence, double instance_bound,
                               const Loss& loss);

}  // namespace burkholder
