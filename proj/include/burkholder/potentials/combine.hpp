#pragma once

#include <vector>

#include "burkholder/potential.hpp"

namespace burkholder {

enum class CombineKind { min, convex };

/// Pointwise minimum or convex combination of potentials that share one
/// statistic map. U and V combine the same way.
class CombinedPotential final : public Potential {
 public:
  /// Throws StructuralError when the members' statistic maps disagree on
  /// probe inputs, DomainError for bad weights.
  CombinedPotential(CombineKind kind, std::vector<PotentialPtr> members, Vec weights = {});

  CombineKind kind() const { return kind_; }
  const std::vector<PotentialPtr>& members() const { return members_; }
  const Vec& weights() const { return weights_; }

  std::string name() const override;
  Statistic zero() const override { return members_.front()->zero(); }
  Statistic stat_map(const Instance& x, double y_hat, double delta) const override {
    return members_.front()->stat_map(x, y_hat, delta);
  }
  double value(const Statistic& tau, std::size_t t) const override;
  double bound(const Statistic& tau) const override;
  double lipschitz() const override { return members_.front()->lipschitz(); }
  double y_radius() const override { return members_.front()->y_radius(); }
  /// The minimum of convex functions is not convex in general.
  bool convex_in_delta() const override;
  bool decomposes() const override;
  std::size_t horizon() const override { return members_.front()->horizon(); }
  Instance random_instance(Rng& rng) const override { return members_.front()->random_instance(rng); }
  Instance anchor_instance() const override { return members_.front()->anchor_instance(); }
  std::string describe() const override;

 private:
  double combine(const Vec& values) const;

  CombineKind kind_;
  std::vector<PotentialPtr> members_;
  Vec weights_;
};

PotentialPtr combine_min(std::vector<PotentialPtr> members);
PotentialPtr combine_convex(std::vector<PotentialPtr> members, Vec weights);

}  // namespace burkholder
