#pragma once

// The three generic prediction strategies: the closed-form linearized rule for
// decomposable potentials convex in the subgradient, grid minimax for
// potentials convex in the prediction, and a randomized strategy that runs
// multiplicative weights over a grid of control points.

#include <cstddef>
#include <functional>
#include <optional>

#include "burkholder/losses.hpp"
#include "burkholder/potential.hpp"
#include "burkholder/rng.hpp"

namespace burkholder {

/// clamp(-(1/L) * (f_plus - f_minus) / 2, -B, B). Throws NumericError if
/// either residual is not finite.
double linearized_prediction(double f_plus, double f_minus, double lipschitz, double radius);

/// Same rule with F supplied as a function of the subgradient.
double predict_linearized(const std::function<double(double)>& residual, double lipschitz, double radius);

/// Uses P.residual at round t (1-based). Requires P.decomposes() and
/// P.convex_in_delta(); throws StructuralError otherwise.
double predict_linearized(const Potential& p, const Statistic& zeta, const Instance& x, double radius, std::size_t t);

struct GridOptions {
  std::size_t yhat_grid = 257;
  std::size_t y_grid = 129;
  double tol = 1e-9;
  int max_iterations = 200;
};

/// Uniform grid of `points` values on [-B, B] including both endpoints.
Vec uniform_grid(double radius, std::size_t points);

/// g(y_hat) = sup_y U_t(zeta + T(x, y_hat, dl(y_hat, y))). The sup is over
/// y = +-B when the loss and potential allow it, otherwise over the y-grid.
double minimax_objective(const Potential& p, const Loss& loss, const Statistic& zeta, const Instance& x,
                         double y_hat, std::size_t t, const GridOptions& options);

/// Leftmost grid minimizer of g refined by golden-section search on the
/// neighbouring cells. Throws NumericError if the refinement does not close
/// its bracket within the iteration budget.
double predict_convex(const Potential& p, const Loss& loss, const Statistic& zeta, const Instance& x,
                      std::size_t t, const GridOptions& options = {});

struct RandomizedOptions {
  double eps1 = 0.05;
  double eps2 = 0.05;
  std::size_t y_grid = 129;
  /// Overrides the iteration count derived from eps2 (testing hook).
  std::optional<std::size_t> iterations;
};

struct RandomizedPrediction {
  Vec points;
  Vec weights;           ///< averaged iterate
  double sample = 0.0;   ///< draw from `weights`
  std::size_t iterations = 0;
  double half_range = 0.0;   ///< H
  double k_bound = 0.0;      ///< K
  bool k_estimated = false;  ///< K sampled rather than analytic
  double value = 0.0;        ///< sup_y sum_i w_i U(zeta + T(x, z_i, dl(z_i, y)))
};

/// Throws DomainError unless eps1 and eps2 are positive.
RandomizedPrediction predict_randomized(const Potential& p, const Loss& loss, const Statistic& zeta,
                                        const Instance& x, std::size_t t, const RandomizedOptions& options,
                                        Rng& rng);

/// Lipschitz constant K of y_hat -> U_t(zeta + T(x, y_hat, dl(y_hat, y))) used
/// in the slack of the randomized strategy. Decomposable potentials use L;
/// otherwise the analytic bound if the potential has one, else 2x the largest
/// slope over 1000 sampled pairs.
struct KBound {
  double value = 0.0;
  bool estimated = false;
};
KBound prediction_lipschitz(const Potential& p, const Loss& loss, const Statistic& zeta, const Instance& x,
                            std::size_t t, std::uint64_t seed);

}  // namespace burkholder
