#include "burkholder/potentials/param_free.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "burkholder/error.hpp"

namespace burkholder {

double harmonic(std::size_t n) { return harmonic_tail(0, n); }

double harmonic_tail(std::size_t t, std::size_t n) {
  double acc = 0.0;
  for (std::size_t s = n; s > t; --s) acc += 1.0 / static_cast<double>(s);
  return acc;
}

double dual_exponent(double p) { return p / (p - 1.0); }

ParamFreeConfig ParamFreeConfig::standard(std::size_t n, std::size_t d, double p, double c, double radius) {
  ParamFreeConfig cfg;
  cfg.n = n;
  cfg.d = d;
  cfg.p = p;
  cfg.beta = p - 1.0;
  cfg.c = c;
  cfg.gamma = c * std::exp(-0.5 * harmonic(n));
  cfg.radius = radius;
  return cfg;
}

void ParamFreeConfig::validate() const {
  if (n < 1) throw DomainError("param_free: horizon n must be at least 1");
  if (d < 1) throw DomainError("param_free: dimension d must be at least 1");
  if (!(p >= 2.0)) throw DomainError("param_free: norm exponent p must be at least 2");
  if (!(beta > 0.0) || !(gamma > 0.0) || !(c > 0.0)) throw DomainError("param_free: beta, gamma, c must be positive");
  if (!(radius > 0.0)) throw DomainError("param_free: B must be positive");
  if (gamma * std::exp(0.5 * harmonic(n)) > c * (1.0 + 1e-12))
    throw DomainError("param_free: gamma * exp(H_n / 2) <= c violated");
}

namespace {

double lp_norm(std::span<const double> x, double p) { return linalg::norm_p(x, p); }

double exponent_term(const ParamFreeConfig& cfg, std::size_t t, std::span<const double> x) {
  if (t > cfg.n) throw DomainError("param_free: round index exceeds the horizon");
  if (t == 0) {
    if (lp_norm(x, cfg.p) != 0.0) throw DomainError("param_free: U_0 is only defined at x = 0");
    return 0.5 * harmonic(cfg.n);
  }
  const double norm = lp_norm(x, cfg.p);
  const double e = norm * norm / (2.0 * cfg.beta * static_cast<double>(t)) + 0.5 * harmonic_tail(t, cfg.n);
  if (e > 700.0) {
    std::ostringstream msg;
    msg << "param_free: exponent " << e << " overflows (||x|| = " << norm << ", t = " << t << ")";
    throw NumericError(msg.str());
  }
  return e;
}

}  // namespace

double pf_U(const ParamFreeConfig& cfg, std::size_t t, double b, std::span<const double> x) {
  return b + cfg.gamma * std::exp(exponent_term(cfg, t, x)) - cfg.c;
}

double pf_predict(const ParamFreeConfig& cfg, std::span<const double> xsum, std::size_t t,
                  std::span<const double> x_t) {
  Vec plus(xsum.begin(), xsum.end()), minus(xsum.begin(), xsum.end());
  for (std::size_t i = 0; i < plus.size(); ++i) {
    plus[i] += x_t[i];
    minus[i] -= x_t[i];
  }
  const double e_plus = std::exp(exponent_term(cfg, t, plus));
  const double e_minus = std::exp(exponent_term(cfg, t, minus));
  return std::clamp(-0.5 * cfg.gamma * (e_plus - e_minus), -cfg.radius, cfg.radius);
}

double pf_regret_bound(const ParamFreeConfig& cfg, double dual_norm) {
  const double bn = cfg.beta * static_cast<double>(cfg.n);
  return dual_norm * std::sqrt(2.0 * bn * std::log(std::sqrt(bn) * dual_norm / cfg.gamma + 1.0)) + cfg.c;
}

ParamFreePotential::ParamFreePotential(ParamFreeConfig cfg, bool enforce) : cfg_(cfg) {
  if (enforce) cfg_.validate();
}

std::string ParamFreePotential::name() const {
  return cfg_.p == 2.0 ? "param_free_l2" : "param_free_l" + std::to_string(static_cast<int>(cfg_.p));
}

std::string ParamFreePotential::describe() const {
  std::ostringstream out;
  out << name() << " n=" << cfg_.n << " d=" << cfg_.d << " beta=" << cfg_.beta << " gamma=" << cfg_.gamma
      << " c=" << cfg_.c;
  return out.str();
}

Statistic ParamFreePotential::zero() const { return ScalarVec{0.0, Vec(cfg_.d, 0.0)}; }

Statistic ParamFreePotential::stat_map(const Instance& x, double y_hat, double delta) const {
  if (x.size() != cfg_.d) throw StructuralError("param_free: instance has wrong dimension");
  ScalarVec s{delta * y_hat, Vec(x.data().begin(), x.data().end())};
  for (double& v : s.x) v *= delta;
  return s;
}

double ParamFreePotential::value(const Statistic& tau, std::size_t t) const {
  const auto& s = tau.as<ScalarVec>();
  return pf_U(cfg_, t, s.b, s.x);
}

double ParamFreePotential::bound(const Statistic& tau) const { return value(tau, cfg_.n); }

Instance ParamFreePotential::random_instance(Rng& rng) const {
  Vec v(cfg_.d);
  for (double& e : v) e = rng.normal();
  const double norm = linalg::norm_p(v, cfg_.p);
  const double radius = rng.uniform() < 0.5 ? 1.0 : rng.uniform();
  if (norm > 0.0)
    for (double& e : v) e *= radius / norm;
  return Mat::column(v);
}

Instance ParamFreePotential::anchor_instance() const { return Mat(cfg_.d, 1); }

}  // namespace burkholder
