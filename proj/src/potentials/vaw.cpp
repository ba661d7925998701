#include "burkholder/potentials/vaw.hpp"

#include <cmath>
#include <sstream>

#include "burkholder/error.hpp"

namespace burkholder {

VawConfig VawConfig::squared_loss(std::size_t d, double radius, double lambda) {
  VawConfig cfg;
  cfg.d = d;
  cfg.rho = 2.0;
  cfg.lambda = lambda;
  cfg.radius = radius;
  cfg.lipschitz = 4.0 * radius;
  cfg.c = cfg.lipschitz * cfg.lipschitz / cfg.rho;
  return cfg;
}

void VawConfig::validate() const {
  if (d < 1) throw DomainError("vaw: dimension must be positive");
  if (!(rho > 0.0) || !(lambda > 0.0)) throw DomainError("vaw: rho and lambda must be positive");
  if (!(lipschitz > 0.0) || !(radius > 0.0)) throw DomainError("vaw: L and B must be positive");
  if (!(c >= lipschitz * lipschitz / rho * (1.0 - 1e-12))) {
    std::ostringstream msg;
    msg << "vaw: c ≥ L²/rho violated (c = " << c << ", L²/rho = " << lipschitz * lipschitz / rho << ")";
    throw DomainError(msg.str());
  }
}

namespace {

SymMat regularized(const VawConfig& cfg, const SymMat& a) {
  if (a.dim() != cfg.d + 1) throw StructuralError("vaw: statistic dimension does not match d + 1");
  SymMat g = cfg.rho * a;
  g += SymMat::identity(a.dim(), cfg.lambda);
  return g;
}

double log_det_ratio(const VawConfig& cfg, const linalg::Mat& chol) {
  double acc = 0.0;
  for (std::size_t i = 0; i < chol.rows(); ++i) acc += std::log(chol(i, i));
  return 2.0 * acc - static_cast<double>(cfg.d + 1) * std::log(cfg.lambda);
}

}  // namespace

double vaw_U(const VawConfig& cfg, std::span<const double> x, const SymMat& a) {
  const linalg::Mat chol = linalg::cholesky(regularized(cfg, a));
  const Vec solved = linalg::cholesky_solve(chol, x);
  return 0.5 * linalg::dot(x, solved) - cfg.c * log_det_ratio(cfg, chol);
}

double vaw_regret_bound(const VawConfig& cfg, std::span<const double> w, const SymMat& a) {
  const linalg::Mat chol = linalg::cholesky(regularized(cfg, a));
  return 0.5 * cfg.lambda * (linalg::dot(w, w) + 1.0) + cfg.c * log_det_ratio(cfg, chol);
}

VawPotential::VawPotential(VawConfig cfg, bool enforce) : cfg_(cfg) {
  if (enforce) cfg_.validate();
}

std::string VawPotential::describe() const {
  std::ostringstream out;
  out << "vaw d=" << cfg_.d << " rho=" << cfg_.rho << " lambda=" << cfg_.lambda << " L=" << cfg_.lipschitz
      << " c=" << cfg_.c;
  return out.str();
}

Statistic VawPotential::zero() const { return VecSym{Vec(cfg_.d + 1, 0.0), SymMat(cfg_.d + 1)}; }

Statistic VawPotential::stat_map(const Instance& x, double y_hat, double delta) const {
  if (x.size() != cfg_.d) throw StructuralError("vaw: instance has wrong dimension");
  Vec z(x.data().begin(), x.data().end());
  z.push_back(-y_hat);
  SymMat zz(z.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i; j < z.size(); ++j) zz.set(i, j, z[i] * z[j]);
  for (double& v : z) v *= delta;
  return VecSym{std::move(z), std::move(zz)};
}

double VawPotential::value(const Statistic& tau, std::size_t) const {
  const auto& s = tau.as<VecSym>();
  return vaw_U(cfg_, s.x, s.a);
}

Instance VawPotential::random_instance(Rng& rng) const {
  Vec v(cfg_.d);
  for (double& e : v) e = rng.normal();
  const double norm = linalg::norm2(v);
  const double scale = rng.uniform() < 0.5 ? 1.0 : rng.uniform();
  if (norm > 0.0)
    for (double& e : v) e *= scale / norm;
  return Mat::column(v);
}

}  // namespace burkholder
