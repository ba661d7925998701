#include "burkholder/losses.hpp"

#include <algorithm>
#include <cmath>

#include "burkholder/error.hpp"

namespace burkholder {

Loss Loss::by_name(const std::string& name, double radius) {
  if (!(radius > 0.0)) throw DomainError("loss radius B must be positive");
  if (name == "absolute") return absolute(radius);
  if (name == "squared") return squared(radius);
  if (name == "hinge") return hinge(radius);
  throw DomainError("unknown loss '" + name + "' (expected absolute, squared or hinge)");
}

std::string Loss::name() const {
  switch (kind) {
    case LossKind::absolute: return "absolute";
    case LossKind::squared: return "squared";
    case LossKind::hinge: return "hinge";
  }
  return "?";
}

double Loss::lipschitz() const {
  switch (kind) {
    case LossKind::absolute: return 1.0;
    case LossKind::squared: return 4.0 * radius;
    case LossKind::hinge: return radius;
  }
  return 0.0;
}

double Loss::strong_convexity() const { return kind == LossKind::squared ? 2.0 : 0.0; }

double Loss::value(double y_hat, double y) const {
  switch (kind) {
    case LossKind::absolute: return std::abs(y_hat - y);
    case LossKind::squared: return (y_hat - y) * (y_hat - y);
    case LossKind::hinge: return std::max(0.0, -y * y_hat);
  }
  return 0.0;
}

double Loss::subgradient(double y_hat, double y) const {
  switch (kind) {
    case LossKind::absolute: return y_hat > y ? 1.0 : (y_hat < y ? -1.0 : 0.0);
    case LossKind::squared: return 2.0 * (y_hat - y);
    case LossKind::hinge: return y * y_hat < 0.0 ? -y : 0.0;
  }
  return 0.0;
}

namespace {

void validate(std::span<const std::pair<double, double>> support) {
  if (support.empty()) throw DomainError("argmin_over_distribution: empty support");
  double total = 0.0;
  for (const auto& [y, p] : support) {
    if (!(p >= 0.0) || !std::isfinite(y)) throw DomainError("argmin_over_distribution: invalid atom");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("argmin_over_distribution: probabilities must sum to 1");
}

double weighted_median_midpoint(std::span<const std::pair<double, double>> support) {
  std::vector<std::pair<double, double>> atoms(support.begin(), support.end());
  std::sort(atoms.begin(), atoms.end());
  // Left median: smallest y with P(Y <= y) >= 1/2; right median: smallest y
  // with P(Y <= y) > 1/2. Their midpoint is the centre of the minimizer set.
  double cumulative = 0.0;
  double left = atoms.back().first, right = atoms.back().first;
  bool have_left = false;
  for (const auto& [y, p] : atoms) {
    cumulative += p;
    if (!have_left && cumulative >= 0.5 - 1e-15) {
      left = y;
      have_left = true;
    }
    if (cumulative > 0.5 + 1e-15) {
      right = y;
      break;
    }
  }
  return 0.5 * (left + right);
}

}  // namespace

double argmin_over_distribution(const Loss& loss, std::span<const std::pair<double, double>> support) {
  validate(support);
  switch (loss.kind) {
    case LossKind::absolute: return weighted_median_midpoint(support);
    case LossKind::squared: {
      double mean = 0.0;
      for (const auto& [y, p] : support) mean += p * y;
      return mean;
    }
    case LossKind::hinge:
      // E max(0, -y * y_hat) is zero at y_hat = 0 and nonnegative elsewhere.
      return 0.0;
  }
  return 0.0;
}

double zero_mean_subgradient_selection(const Loss& loss, std::span<const std::pair<double, double>> support,
                                       double y_hat) {
  validate(support);
  double fixed = 0.0, slack_lo = 0.0, slack_hi = 0.0;
  for (const auto& [y, p] : support) {
    if (loss.kind == LossKind::absolute && y == y_hat) {
      slack_lo -= p;
      slack_hi += p;
    } else if (loss.kind == LossKind::hinge && y_hat == 0.0) {
      slack_lo += p * std::min(0.0, -y);
      slack_hi += p * std::max(0.0, -y);
    } else {
      fixed += p * loss.subgradient(y_hat, y);
    }
  }
  // Pick the selection in [fixed + slack_lo, fixed + slack_hi] nearest zero.
  return std::clamp(0.0, fixed + slack_lo, fixed + slack_hi);
}

}  // namespace burkholder
