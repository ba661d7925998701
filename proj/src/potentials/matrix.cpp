#include "burkholder/potentials/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "burkholder/error.hpp"

namespace burkholder {

MatrixConfig MatrixConfig::standard(std::size_t d1, std::size_t d2, double eta, double r, double lipschitz,
                                    double radius) {
  MatrixConfig cfg;
  cfg.d1 = d1;
  cfg.d2 = d2;
  cfg.eta = eta;
  cfg.r = r;
  cfg.lipschitz = lipschitz;
  cfg.radius = radius;
  cfg.c = r * std::log(static_cast<double>(d1 + d2));
  return cfg;
}

void MatrixConfig::validate() const {
  if (d1 < 1 || d2 < 1) throw DomainError("matrix: d1 and d2 must be positive");
  if (!(eta > 0.0)) throw DomainError("matrix: eta must be positive");
  if (!(r >= 0.0)) throw DomainError("matrix: r must be nonnegative");
  if (!(lipschitz > 0.0) || !(radius > 0.0)) throw DomainError("matrix: L and B must be positive");
  const double need = r * std::log(static_cast<double>(d1 + d2));
  if (!(c >= need * (1.0 - 1e-12))) {
    std::ostringstream msg;
    msg << "matrix: c ≥ r·log(d1+d2) violated (c = " << c << ", r·log(d1+d2) = " << need << ")";
    throw DomainError(msg.str());
  }
}

namespace {

void check_dims(const MatrixConfig& cfg, const SymMat& h, const SymMat& m) {
  const std::size_t n = cfg.d1 + cfg.d2;
  if (h.dim() != n || m.dim() != n) throw StructuralError("matrix: statistic dimension does not match d1 + d2");
}

SymMat exponent_argument(const MatrixConfig& cfg, const SymMat& h, const SymMat& m) {
  SymMat s = cfg.eta * h;
  s.axpy(-cfg.variance_weight * cfg.eta * cfg.eta * cfg.lipschitz * cfg.lipschitz, m);
  return s;
}

}  // namespace

double mp_U(const MatrixConfig& cfg, double a, const SymMat& h, const SymMat& m) {
  check_dims(cfg, h, m);
  return a + (cfg.r / cfg.eta) * linalg::log_trace_exp(exponent_argument(cfg, h, m)) - cfg.c / cfg.eta;
}

double mp_V(const MatrixConfig& cfg, double a, const SymMat& h, const SymMat& m) {
  check_dims(cfg, h, m);
  SymMat s = h;
  s.axpy(-0.5 * cfg.eta * cfg.lipschitz * cfg.lipschitz, m);
  return a + cfg.r * linalg::lambda_max(s) - cfg.c / cfg.eta;
}

double mp_predict(const MatrixConfig& cfg, const SymMat& hsum, const SymMat& msum, const Mat& x_t) {
  check_dims(cfg, hsum, msum);
  const SymMat hx = linalg::dilation(x_t);
  const SymMat m = msum + linalg::dilation_square(x_t);
  const SymMat base = exponent_argument(cfg, hsum, m);
  const double step = cfg.eta * cfg.lipschitz;
  SymMat plus = base, minus = base;
  plus.axpy(step, hx);
  minus.axpy(-step, hx);
  const double diff = linalg::log_trace_exp(plus) - linalg::log_trace_exp(minus);
  if (!std::isfinite(diff)) throw NumericError("mp_predict: non-finite log-trace-exp difference");
  return std::clamp(-(cfg.r / (2.0 * cfg.lipschitz * cfg.eta)) * diff, -cfg.radius, cfg.radius);
}

double mp_regret_bound(const MatrixConfig& cfg, const SymMat& m) {
  const double norm = m.dim() == 0 ? 0.0 : std::max(linalg::lambda_max(m), 0.0);
  return 0.5 * cfg.eta * cfg.lipschitz * cfg.lipschitz * cfg.r * norm + cfg.c / cfg.eta;
}

MatrixPotential::MatrixPotential(MatrixConfig cfg, bool enforce) : cfg_(cfg) {
  if (enforce) cfg_.validate();
}

std::string MatrixPotential::describe() const {
  std::ostringstream out;
  out << "matrix d1=" << cfg_.d1 << " d2=" << cfg_.d2 << " eta=" << cfg_.eta << " r=" << cfg_.r
      << " L=" << cfg_.lipschitz << " c=" << cfg_.c;
  if (cfg_.variance_weight != 0.5) out << " variance_weight=" << cfg_.variance_weight;
  return out.str();
}

Statistic MatrixPotential::zero() const {
  const std::size_t n = cfg_.d1 + cfg_.d2;
  return ScalarSymPsd{0.0, SymMat(n), SymMat(n)};
}

Statistic MatrixPotential::stat_map(const Instance& x, double y_hat, double delta) const {
  if (x.rows() != cfg_.d1 || x.cols() != cfg_.d2) throw StructuralError("matrix: instance has wrong shape");
  return ScalarSymPsd{delta * y_hat, delta * linalg::dilation(x), linalg::dilation_square(x)};
}

double MatrixPotential::value(const Statistic& tau, std::size_t) const {
  const auto& s = tau.as<ScalarSymPsd>();
  return mp_U(cfg_, s.a, s.h, s.m);
}

double MatrixPotential::bound(const Statistic& tau) const {
  const auto& s = tau.as<ScalarSymPsd>();
  return mp_V(cfg_, s.a, s.h, s.m);
}

std::optional<double> MatrixPotential::adaptive_bound(const Statistic& tau) const {
  return mp_regret_bound(cfg_, tau.as<ScalarSymPsd>().m);
}

// |d y_hat| <= L B, and log tr exp is 1-Lipschitz in the spectral norm, so
// the trace term moves by at most r L R + (1/2) eta r L^2 R^2.
std::optional<double> MatrixPotential::increment_bound() const {
  const double l = cfg_.lipschitz, rr = cfg_.instance_bound;
  const double step = l * cfg_.radius + cfg_.r * l * rr + 0.5 * cfg_.eta * cfg_.r * l * l * rr * rr;
  return step * step;
}

Instance MatrixPotential::random_instance(Rng& rng) const {
  if (rng.uniform() < 0.5) {
    Mat x = Mat::indicator(cfg_.d1, cfg_.d2, rng.below(cfg_.d1), rng.below(cfg_.d2));
    x *= cfg_.instance_bound;
    return x;
  }
  Mat x(cfg_.d1, cfg_.d2);
  for (double& v : x.data()) v = rng.normal();
  const double norm = linalg::spectral_norm(x);
  if (norm > 0.0) x *= cfg_.instance_bound * rng.uniform() / norm;
  return x;
}

DoublingResult mp_doubling_run(const MatrixConfig& base, const Sequence& sequence, double instance_bound,
                               const Loss& loss) {
  if (!(instance_bound > 0.0)) throw DomainError("mp_doubling_run: R must be positive");
  base.validate();
  const double l2 = base.lipschitz * base.lipschitz;
  DoublingResult out;

  std::size_t k = 0;
  auto eta_for = [&](double budget) { return std::sqrt(2.0 * base.c / (base.r * l2 * budget)); };
  double budget = instance_bound * instance_bound;
  MatrixConfig cfg = base;
  cfg.eta = eta_for(budget);
  auto pot = std::make_unique<MatrixPotential>(cfg);
  Statistic zeta = pot->zero();
  DoublingEpoch epoch{0, 0, budget, cfg.eta};

  auto close_epoch = [&] {
    const auto& s = zeta.as<ScalarSymPsd>();
    epoch.msum_norm = std::max(linalg::lambda_max(s.m), 0.0);
    epoch.bound = 0.5 * epoch.eta * l2 * base.r * epoch.msum_norm + base.c / epoch.eta;
    epoch.final_potential = pot->value(zeta, epoch.length);
    epoch.final_certificate = pot->bound(zeta);
    out.certified_bound += epoch.bound;
    out.epochs.push_back(epoch);
  };

  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const Example& ex = sequence[i];
    if (linalg::spectral_norm(ex.x) > instance_bound * (1.0 + 1e-12))
      throw DomainError("mp_doubling_run: instance spectral norm exceeds R");
    const SymMat mx = linalg::dilation_square(ex.x);
    if (epoch.length > 0) {
      const SymMat candidate = zeta.as<ScalarSymPsd>().m + mx;
      if (linalg::lambda_max(candidate) > budget) {
        close_epoch();
        ++k;
        budget = instance_bound * instance_bound * std::ldexp(1.0, static_cast<int>(k));
        cfg.eta = eta_for(budget);
        pot = std::make_unique<MatrixPotential>(cfg);
        zeta = pot->zero();
        epoch = DoublingEpoch{i, 0, budget, cfg.eta};
      }
    }
    const std::size_t t = epoch.length + 1;
    const double y_hat = predict_linearized(*pot, zeta, ex.x, loss.radius, t);
    out.max_descent_excess = std::max(out.max_descent_excess, descent_excess(*pot, loss, zeta, ex.x, y_hat, t, 101));
    Round r;
    r.t = i + 1;
    r.x = ex.x;
    r.y_hat = y_hat;
    r.y = ex.y;
    r.delta = loss.subgradient(y_hat, ex.y);
    r.loss = loss.value(y_hat, ex.y);
    zeta = pot->accumulate(zeta, ex.x, y_hat, r.delta);
    out.rounds.push_back(std::move(r));
    ++epoch.length;
  }
  if (epoch.length > 0 || out.epochs.empty()) close_epoch();
  return out;
}

}  // namespace burkholder
