#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace burkholder {

enum class LossKind { absolute, squared, hinge };

/// Convex loss on predictions and outcomes in [-B, B]. Hinge is the margin-0
/// variant max(0, -y * y_hat).
struct Loss {
  LossKind kind = LossKind::absolute;
  double radius = 1.0;  ///< B

  static Loss absolute(double radius = 1.0) { return {LossKind::absolute, radius}; }
  static Loss squared(double radius = 1.0) { return {LossKind::squared, radius}; }
  static Loss hinge(double radius = 1.0) { return {LossKind::hinge, radius}; }
  /// "absolute", "squared" or "hinge"; throws DomainError otherwise.
  static Loss by_name(const std::string& name, double radius);

  std::string name() const;

  /// Lipschitz constant over [-B, B]: 1, 4B and B respectively.
  double lipschitz() const;
  /// Strong convexity: 2 for squared, 0 otherwise.
  double strong_convexity() const;

  double value(double y_hat, double y) const;
  /// A subderivative in y_hat. Absolute loss returns 0 at y_hat == y; hinge
  /// returns 0 on the kink.
  double subgradient(double y_hat, double y) const;

  /// True when sup over y in [-B, B] of a convex function of the subgradient
  /// is attained at y = +-B.
  bool endpoint_sup() const { return kind != LossKind::hinge; }
};

/// Minimizer of E_{y~p} loss(y_hat, y). Absolute loss returns the midpoint of
/// the median interval. Throws DomainError for an empty support or weights
/// that do not sum to one within 1e-12.
double argmin_over_distribution(const Loss& loss, std::span<const std::pair<double, double>> support);

/// E_{y~p} subgradient at y_hat, where at atoms y == y_hat the subgradient may
/// be chosen anywhere in the subdifferential. Returns the expectation with
/// the selection closest to zero; this is the first-order optimality
/// residual used to validate argmin_over_distribution.
double zero_mean_subgradient_selection(const Loss& loss, std::span<const std::pair<double, double>> support,
                                       double y_hat);

}  // namespace burkholder
