#include "burkholder/potentials/combine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "burkholder/error.hpp"

namespace burkholder {

CombinedPotential::CombinedPotential(CombineKind kind, std::vector<PotentialPtr> members, Vec weights)
    : kind_(kind), members_(std::move(members)), weights_(std::move(weights)) {
  if (members_.empty()) throw StructuralError("combine: needs at least one member");
  if (kind_ == CombineKind::convex) {
    if (weights_.size() != members_.size()) throw DomainError("combine: one weight per member required");
    double total = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0)) throw DomainError("combine: weights must be nonnegative");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("combine: weights must sum to 1");
  }
  const auto& first = *members_.front();
  for (const auto& m : members_) {
    if (m->lipschitz() != first.lipschitz() || m->horizon() != first.horizon())
      throw StructuralError("combine: members must share L and horizon");
  }
  // Probe the statistic maps on a few fixed inputs.
  Rng rng(0x5EED);
  for (int probe = 0; probe < 8; ++probe) {
    const Instance x = probe == 0 ? first.anchor_instance() : first.random_instance(rng);
    const double y_hat = rng.uniform(-first.y_radius(), first.y_radius());
    const double delta = rng.uniform(-first.lipschitz(), first.lipschitz());
    const Statistic ref = first.stat_map(x, y_hat, delta);
    for (std::size_t a = 1; a < members_.size(); ++a) {
      Statistic other;
      try {
        other = members_[a]->stat_map(x, y_hat, delta);
      } catch (const StructuralError&) {
        throw StructuralError("combine: members do not share a statistic map");
      }
      if (!ref.same_shape(other) || ref.max_abs_diff(other) > 1e-12)
        throw StructuralError("combine: members do not share a statistic map");
    }
  }
}

std::string CombinedPotential::name() const { return kind_ == CombineKind::min ? "combine_min" : "combine_convex"; }

std::string CombinedPotential::describe() const {
  std::ostringstream out;
  out << name() << " {";
  for (std::size_t a = 0; a < members_.size(); ++a) {
    out << (a ? "; " : "") << members_[a]->describe();
    if (kind_ == CombineKind::convex) out << " w=" << weights_[a];
  }
  out << "}";
  return out.str();
}

double CombinedPotential::combine(const Vec& values) const {
  if (kind_ == CombineKind::min) return *std::min_element(values.begin(), values.end());
  double acc = 0.0;
  for (std::size_t a = 0; a < values.size(); ++a)
    if (weights_[a] != 0.0) acc += weights_[a] * values[a];
  return acc;
}

double CombinedPotential::value(const Statistic& tau, std::size_t t) const {
  Vec v(members_.size());
  for (std::size_t a = 0; a < members_.size(); ++a) v[a] = members_[a]->value(tau, t);
  return combine(v);
}

double CombinedPotential::bound(const Statistic& tau) const {
  Vec v(members_.size());
  for (std::size_t a = 0; a < members_.size(); ++a) v[a] = members_[a]->bound(tau);
  return combine(v);
}

bool CombinedPotential::convex_in_delta() const {
  if (kind_ == CombineKind::min) return members_.size() == 1 && members_.front()->convex_in_delta();
  return std::all_of(members_.begin(), members_.end(), [](const auto& m) { return m->convex_in_delta(); });
}

bool CombinedPotential::decomposes() const {
  return std::all_of(members_.begin(), members_.end(), [](const auto& m) { return m->decomposes(); });
}

PotentialPtr combine_min(std::vector<PotentialPtr> members) {
  return std::make_shared<CombinedPotential>(CombineKind::min, std::move(members));
}

PotentialPtr combine_convex(std::vector<PotentialPtr> members, Vec weights) {
  return std::make_shared<CombinedPotential>(CombineKind::convex, std::move(members), std::move(weights));
}

}  // namespace burkholder
