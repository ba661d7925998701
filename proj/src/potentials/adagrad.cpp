#include "burkholder/potentials/adagrad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "burkholder/error.hpp"

namespace burkholder {

void AdaGradConfig::validate() const {
  if (d < 1) throw DomainError("adagrad: dimension must be positive");
  if (!(lipschitz > 0.0) || !(radius > 0.0) || !(instance_bound > 0.0))
    throw DomainError("adagrad: L, B and R must be positive");
  if ((rows != 0 || cols != 0) && rows * cols != d) throw DomainError("adagrad: rows * cols must equal d");
}

double usq(double x, double y) { return std::abs(x) <= y ? -std::sqrt(2.0 * y * y - x * x) : std::abs(x) - 2.0 * y; }

double usq(std::span<const double> x, double y) { return usq(linalg::norm2(x), y); }

double ada_predict(const AdaGradConfig& cfg, std::span<const double> xsum, std::span<const double> s,
                   std::span<const double> x_t) {
  const double l = cfg.lipschitz;
  auto residual = [&](double delta) {
    if (cfg.variant == AdaGradVariant::l2) {
      Vec moved(xsum.begin(), xsum.end());
      for (std::size_t i = 0; i < moved.size(); ++i) moved[i] += delta * x_t[i];
      return usq(moved, l * std::sqrt(s[0] + linalg::dot(x_t, x_t)));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < xsum.size(); ++i)
      acc += usq(xsum[i] + delta * x_t[i], l * std::sqrt(s[i] + x_t[i] * x_t[i]));
    return acc;
  };
  const double raw = -(0.5 / l) * (residual(l) - residual(-l));
  return std::clamp(raw, -cfg.radius, cfg.radius);
}

AdaGradPotential::AdaGradPotential(AdaGradConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  // The linearized strategy needs alpha -> U(tau + T(z, alpha)) convex;
  // sample midpoint convexity once at construction.
  Rng rng(0x5eedULL + cfg_.d);
  const double l = cfg_.lipschitz;
  for (int i = 0; i < 200; ++i) {
    const StatePoint s = random_state(rng);
    const Instance x = random_instance(rng);
    const double y_hat = rng.uniform(-cfg_.radius, cfg_.radius);
    const double a = rng.uniform(-l, l), b = rng.uniform(-l, l);
    const double fa = after(s.tau, x, y_hat, a, 1), fb = after(s.tau, x, y_hat, b, 1);
    const double fm = after(s.tau, x, y_hat, 0.5 * (a + b), 1);
    if (fm > 0.5 * (fa + fb) + 1e-9 * (1.0 + std::abs(fm)))
      throw StructuralError("adagrad: sampled convexity in the subgradient failed");
  }
}

std::string AdaGradPotential::describe() const {
  std::ostringstream out;
  out << name() << " d=" << cfg_.d << " L=" << cfg_.lipschitz << " B=" << cfg_.radius;
  return out.str();
}

// The l_inf statistic keeps (b, x) and the squared-sum vector as a product so
// that the coordinatewise sums stay additive.
Statistic AdaGradPotential::zero() const {
  if (cfg_.variant == AdaGradVariant::l2) return ScalarVecScalar{0.0, Vec(cfg_.d, 0.0), 0.0};
  return Product{{ScalarVec{0.0, Vec(cfg_.d, 0.0)}, ScalarVec{0.0, Vec(cfg_.d, 0.0)}}};
}

Statistic AdaGradPotential::stat_map(const Instance& x, double y_hat, double delta) const {
  if (x.size() != cfg_.d) throw StructuralError("adagrad: instance has wrong dimension");
  const auto v = x.data();
  Vec dx(v.begin(), v.end());
  for (double& e : dx) e *= delta;
  if (cfg_.variant == AdaGradVariant::l2) return ScalarVecScalar{delta * y_hat, std::move(dx), linalg::dot(v, v)};
  Vec sq(v.begin(), v.end());
  for (double& e : sq) e *= e;
  return Product{{ScalarVec{delta * y_hat, std::move(dx)}, ScalarVec{0.0, std::move(sq)}}};
}

AdaGradPotential::View AdaGradPotential::view(const Statistic& tau) const {
  if (cfg_.variant == AdaGradVariant::l2) {
    const auto& s = tau.as<ScalarVecScalar>();
    return {s.b, s.x, std::span<const double>(&s.s, 1)};
  }
  const auto& p = tau.as<Product>();
  if (p.parts.size() != 2) throw StructuralError("adagrad: malformed l_inf statistic");
  const auto& bx = p.parts[0].as<ScalarVec>();
  const auto& sq = p.parts[1].as<ScalarVec>();
  return {bx.b, bx.x, sq.x};
}

double AdaGradPotential::value(const Statistic& tau, std::size_t) const {
  const View v = view(tau);
  const double l = cfg_.lipschitz;
  if (cfg_.variant == AdaGradVariant::l2) return v.b + usq(v.x, l * std::sqrt(std::max(v.s[0], 0.0)));
  double acc = v.b;
  for (std::size_t i = 0; i < v.x.size(); ++i) acc += usq(v.x[i], l * std::sqrt(std::max(v.s[i], 0.0)));
  return acc;
}

double AdaGradPotential::bound(const Statistic& tau) const {
  const View v = view(tau);
  const double l = cfg_.lipschitz;
  if (cfg_.variant == AdaGradVariant::l2) return v.b + linalg::norm2(v.x) - 2.0 * l * std::sqrt(std::max(v.s[0], 0.0));
  double acc = v.b;
  for (std::size_t i = 0; i < v.x.size(); ++i) acc += std::abs(v.x[i]) - 2.0 * l * std::sqrt(std::max(v.s[i], 0.0));
  return acc;
}

std::optional<double> AdaGradPotential::adaptive_bound(const Statistic& tau) const {
  const View v = view(tau);
  double acc = 0.0;
  for (double s : v.s) acc += std::sqrt(std::max(s, 0.0));
  return 2.0 * cfg_.lipschitz * acc;
}

std::optional<double> AdaGradPotential::increment_bound() const {
  const double step = cfg_.lipschitz * (cfg_.radius + 3.0 * cfg_.instance_bound);
  return step * step;
}

Instance AdaGradPotential::random_instance(Rng& rng) const {
  Vec v(cfg_.d);
  for (double& e : v) e = rng.normal();
  const double norm = cfg_.variant == AdaGradVariant::l2 ? linalg::norm2(v) : linalg::norm_p(v, 1.0);
  const double scale = cfg_.instance_bound * (rng.uniform() < 0.5 ? 1.0 : rng.uniform());
  if (norm > 0.0)
    for (double& e : v) e *= scale / norm;
  if (cfg_.rows != 0) return Mat(cfg_.rows, cfg_.cols, std::move(v));
  return Mat::column(v);
}

Instance AdaGradPotential::anchor_instance() const {
  if (cfg_.rows != 0) return Mat(cfg_.rows, cfg_.cols);
  return Mat(cfg_.d, 1);
}

}  // namespace burkholder
