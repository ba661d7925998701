#pragma once

#include <vector>

#include "burkholder/potential.hpp"

namespace burkholder {

/// Soft-max aggregation of Burkholder potentials over a shared instance
/// space:
///   U_t(tau) = (1/eta) log sum_a exp(eta U_a(tau_a) - eta^2 gamma_a) - log|A| / eta
/// with gamma_a = t * C[a] and C[a] a bound on the squared one-round
/// increment of member a. The statistic is the product of member statistics.
struct MetaMember {
  PotentialPtr potential;
  double increment = 0.0;  ///< C[a]
  bool estimated = false;  ///< C[a] sampled rather than analytic
};

/// (1/eta) log sum_a exp(eta u_a - eta^2 gamma_a) - log|A| / eta, max-shifted.
double meta_soft_max(double eta, std::span<const double> u, std::span<const double> gamma);

/// C[a]: the member's analytic bound if it has one, else twice the largest
/// squared increment over `samples` random (tau, z, alpha).
MetaMember make_meta_member(PotentialPtr p, std::uint64_t seed, std::size_t samples = 10000);

class MetaPotential final : public Potential {
 public:
  /// Throws StructuralError if members disagree on L or B or if the list is
  /// empty; DomainError unless eta > 0 and every C[a] >= 0.
  MetaPotential(std::vector<MetaMember> members, double eta, std::size_t horizon);

  const std::vector<MetaMember>& members() const { return members_; }
  double eta() const { return eta_; }

  /// Value with an explicit gamma vector instead of t * C.
  double value_with_gamma(const Statistic& tau, std::span<const double> gamma, std::size_t t) const;

  std::string name() const override { return "meta"; }
  Statistic zero() const override;
  Statistic stat_map(const Instance& x, double y_hat, double delta) const override;
  double value(const Statistic& tau, std::size_t t) const override;
  /// max_a (V_a - eta n C[a]) - log|A| / eta.
  double bound(const Statistic& tau) const override;
  double lipschitz() const override;
  double y_radius() const override;
  bool convex_in_delta() const override;
  bool decomposes() const override;
  std::size_t horizon() const override { return horizon_; }
  Instance random_instance(Rng& rng) const override;
  Instance anchor_instance() const override;
  std::string describe() const override;

 private:
  Vec member_values(const Statistic& tau, std::size_t t) const;

  std::vector<MetaMember> members_;
  double eta_;
  std::size_t horizon_;
};

}  // namespace burkholder
