#include "burkholder/potentials/meta.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "burkholder/error.hpp"

namespace burkholder {

double meta_soft_max(double eta, std::span<const double> u, std::span<const double> gamma) {
  if (u.empty() || u.size() != gamma.size()) throw StructuralError("meta: member count mismatch");
  Vec e(u.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < u.size(); ++a) {
    e[a] = eta * u[a] - eta * eta * gamma[a];
    top = std::max(top, e[a]);
  }
  double acc = 0.0;
  for (double v : e) acc += std::exp(v - top);
  return (top + std::log(acc)) / eta - std::log(static_cast<double>(u.size())) / eta;
}

MetaMember make_meta_member(PotentialPtr p, std::uint64_t seed, std::size_t samples) {
  if (auto c = p->increment_bound()) return {std::move(p), *c, false};
  Rng rng(seed);
  const double lip = p->lipschitz(), b = p->y_radius();
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const StatePoint s = p->random_state(rng);
    const Instance x = p->random_instance(rng);
    const double y_hat = rng.uniform(-b, b);
    const double alpha = rng.uniform(-lip, lip);
    const double diff = p->after(s.tau, x, y_hat, alpha, s.t + 1) - p->value(s.tau, s.t);
    worst = std::max(worst, diff * diff);
  }
  return {std::move(p), 2.0 * worst, true};
}

MetaPotential::MetaPotential(std::vector<MetaMember> members, double eta, std::size_t horizon)
    : members_(std::move(members)), eta_(eta), horizon_(horizon) {
  if (members_.empty()) throw StructuralError("meta: needs at least one member");
  if (!(eta_ > 0.0)) throw DomainError("meta: eta must be positive");
  if (horizon_ < 1) throw DomainError("meta: horizon must be positive");
  const double lip = members_.front().potential->lipschitz();
  const double b = members_.front().potential->y_radius();
  for (const auto& m : members_) {
    if (!(m.increment >= 0.0)) throw DomainError("meta: every C[a] must be nonnegative");
    if (m.potential->lipschitz() != lip || m.potential->y_radius() != b)
      throw StructuralError("meta: members must share L and B");
    if (m.potential->time_varying() && m.potential->horizon() < horizon_)
      throw StructuralError("meta: member horizon shorter than the aggregate's");
  }
}

std::string MetaPotential::describe() const {
  std::ostringstream out;
  out << "meta eta=" << eta_ << " n=" << horizon_ << " {";
  for (std::size_t a = 0; a < members_.size(); ++a)
    out << (a ? "; " : "") << members_[a].potential->describe() << " C=" << members_[a].increment
        << (members_[a].estimated ? " (estimated)" : "");
  out << "}";
  return out.str();
}

Statistic MetaPotential::zero() const {
  Product p;
  for (const auto& m : members_) p.parts.push_back(m.potential->zero());
  return p;
}

Statistic MetaPotential::stat_map(const Instance& x, double y_hat, double delta) const {
  Product p;
  for (const auto& m : members_) p.parts.push_back(m.potential->stat_map(x, y_hat, delta));
  return p;
}

Vec MetaPotential::member_values(const Statistic& tau, std::size_t t) const {
  const auto& p = tau.as<Product>();
  if (p.parts.size() != members_.size()) throw StructuralError("meta: statistic arity mismatch");
  Vec u(members_.size());
  for (std::size_t a = 0; a < members_.size(); ++a) u[a] = members_[a].potential->value(p.parts[a], t);
  return u;
}

double MetaPotential::value_with_gamma(const Statistic& tau, std::span<const double> gamma, std::size_t t) const {
  return meta_soft_max(eta_, member_values(tau, t), gamma);
}

double MetaPotential::value(const Statistic& tau, std::size_t t) const {
  if (t > horizon_) throw DomainError("meta: round index exceeds the horizon");
  Vec gamma(members_.size());
  for (std::size_t a = 0; a < members_.size(); ++a) gamma[a] = static_cast<double>(t) * members_[a].increment;
  return value_with_gamma(tau, gamma, t);
}

double MetaPotential::bound(const Statistic& tau) const {
  const auto& p = tau.as<Product>();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < members_.size(); ++a)
    best = std::max(best, members_[a].potential->bound(p.parts[a]) -
                              eta_ * static_cast<double>(horizon_) * members_[a].increment);
  return best - std::log(static_cast<double>(members_.size())) / eta_;
}

double MetaPotential::lipschitz() const { return members_.front().potential->lipschitz(); }
double MetaPotential::y_radius() const { return members_.front().potential->y_radius(); }

// log-sum-exp is convex and nondecreasing in each argument.
bool MetaPotential::convex_in_delta() const {
  return std::all_of(members_.begin(), members_.end(), [](const auto& m) { return m.potential->convex_in_delta(); });
}

bool MetaPotential::decomposes() const {
  return std::all_of(members_.begin(), members_.end(), [](const auto& m) { return m.potential->decomposes(); });
}

Instance MetaPotential::random_instance(Rng& rng) const { return members_.front().potential->random_instance(rng); }
Instance MetaPotential::anchor_instance() const { return members_.front().potential->anchor_instance(); }

}  // namespace burkholder
