#include "burkholder/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "burkholder/error.hpp"

namespace burkholder {

double linearized_prediction(double f_plus, double f_minus, double lipschitz, double radius) {
  if (!std::isfinite(f_plus) || !std::isfinite(f_minus)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "linearized prediction: non-finite residual F(+L) = " << f_plus << ", F(-L) = " << f_minus;
    throw NumericError(msg.str());
  }
  const double raw = -(0.5 / lipschitz) * (f_plus - f_minus);
  return std::clamp(raw, -radius, radius);
}

double predict_linearized(const std::function<double(double)>& residual, double lipschitz, double radius) {
  return linearized_prediction(residual(lipschitz), residual(-lipschitz), lipschitz, radius);
}

double predict_linearized(const Potential& p, const Statistic& zeta, const Instance& x, double radius,
                          std::size_t t) {
  if (!p.decomposes() || !p.convex_in_delta())
    throw StructuralError("linearized strategy needs a decomposable potential convex in the subgradient (" +
                          p.name() + ")");
  const double lip = p.lipschitz();
  return linearized_prediction(p.residual(zeta, x, lip, t), p.residual(zeta, x, -lip, t), lip, radius);
}

Vec uniform_grid(double radius, std::size_t points) {
  if (points < 2) return {-radius};
  Vec grid(points);
  const double step = 2.0 * radius / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = -radius + step * static_cast<double>(i);
  grid.back() = radius;
  return grid;
}

double minimax_objective(const Potential& p, const Loss& loss, const Statistic& zeta, const Instance& x,
                         double y_hat, std::size_t t, const GridOptions& options) {
  const double radius = loss.radius;
  const bool endpoints = loss.endpoint_sup() && p.convex_in_delta();
  const Vec ys = endpoints ? Vec{-radius, radius} : uniform_grid(radius, options.y_grid);
  std::map<double, double> by_delta;
  double worst = -std::numeric_limits<double>::infinity();
  for (double y : ys) {
    const double delta = loss.subgradient(y_hat, y);
    auto it = by_delta.find(delta);
    if (it == by_delta.end()) it = by_delta.emplace(delta, p.after(zeta, x, y_hat, delta, t)).first;
    worst = std::max(worst, it->second);
  }
  return worst;
}

double predict_convex(const Potential& p, const Loss& loss, const Statistic& zeta, const Instance& x,
                      std::size_t t, const GridOptions& options) {
  const double radius = loss.radius;
  const Vec grid = uniform_grid(radius, options.yhat_grid);
  auto g = [&](double y_hat) { return minimax_objective(p, loss, zeta, x, y_hat, t, options); };

  std::size_t best = 0;
  double best_value = g(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = g(grid[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  if (grid.size() < 2) return grid[best];

  // Golden-section search on the two cells around the grid minimizer.
  double lo = grid[best == 0 ? 0 : best - 1];
  double hi = grid[std::min(best + 1, grid.size() - 1)];
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - ratio * (hi - lo), b = lo + ratio * (hi - lo);
  double ga = g(a), gb = g(b);
  int iter = 0;
  while (hi - lo > options.tol) {
    if (++iter > options.max_iterations) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "predict_convex: golden-section search did not converge; bracket [" << lo << ", " << hi
          << "], g(a) = " << ga << ", g(b) = " << gb;
      throw NumericError(msg.str());
    }
    if (ga <= gb) {
      hi = b;
      b = a;
      gb = ga;
      a = hi - ratio * (hi - lo);
      ga = g(a);
    } else {
      lo = a;
      a = b;
      ga = gb;
      b = lo + ratio * (hi - lo);
      gb = g(b);
    }
  }
  const double refined = 0.5 * (lo + hi);
  const double refined_value = g(refined);
  return refined_value < best_value ? refined : grid[best];
}

KBound prediction_lipschitz(const Potential& p, const Loss& loss, const Statistic& zeta, const Instance& x,
                            std::size_t t, std::uint64_t seed) {
  if (p.decomposes()) return {p.lipschitz(), false};
  if (auto k = p.prediction_lipschitz()) return {*k, false};
  Rng rng(seed);
  const double radius = loss.radius;
  const double h = 1e-3 * radius;
  double slope = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double y = rng.uniform(-radius, radius);
    const double a = rng.uniform(-radius, radius - h);
    const double ua = p.after(zeta, x, a, loss.subgradient(a, y), t);
    const double ub = p.after(zeta, x, a + h, loss.subgradient(a + h, y), t);
    slope = std::max(slope, std::abs(ub - ua) / h);
  }
  return {2.0 * slope, true};
}

RandomizedPrediction predict_randomized(const Potential& p, const Loss& loss, const Statistic& zeta,
                                        const Instance& x, std::size_t t, const RandomizedOptions& options,
                                        Rng& rng) {
  if (!(options.eps1 > 0.0) || !(options.eps2 > 0.0))
    throw DomainError("predict_randomized: eps1 and eps2 must be positive");
  const double radius = loss.radius;
  const std::size_t n_points = static_cast<std::size_t>(std::ceil(2.0 * radius / options.eps1)) + 1;

  RandomizedPrediction out;
  out.points.resize(n_points);
  for (std::size_t i = 0; i < n_points; ++i)
    out.points[i] = std::min(-radius + options.eps1 * static_cast<double>(i), radius);

  // Outcomes: the uniform grid plus every control point and the midpoints
  // between them, so that for piecewise-constant subgradients each sign
  // pattern over the control points is represented.
  Vec ys = uniform_grid(radius, options.y_grid);
  for (std::size_t i = 0; i < n_points; ++i) {
    ys.push_back(out.points[i]);
    if (i + 1 < n_points) ys.push_back(0.5 * (out.points[i] + out.points[i + 1]));
  }
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  // Residual cache for decomposable potentials: U = z * d + F(d).
  std::map<double, double> residuals;
  auto u_at = [&](double z, double delta) {
    if (!p.decomposes()) return p.after(zeta, x, z, delta, t);
    auto it = residuals.find(delta);
    if (it == residuals.end()) it = residuals.emplace(delta, p.residual(zeta, x, delta, t)).first;
    return z * delta + it->second;
  };

  // Value table, one column per outcome with identical columns merged.
  std::vector<Vec> columns;
  std::map<Vec, bool> seen;
  for (double y : ys) {
    Vec col(n_points);
    Vec key(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
      const double delta = loss.subgradient(out.points[i], y);
      key[i] = delta;
      col[i] = u_at(out.points[i], delta);
    }
    if (p.decomposes()) {
      if (!seen.emplace(key, true).second) continue;
    } else if (!seen.emplace(col, true).second) {
      continue;
    }
    columns.push_back(std::move(col));
  }

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& col : columns)
    for (double v : col) {
      if (!std::isfinite(v)) throw NumericError("predict_randomized: non-finite potential value in table");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  out.half_range = 0.5 * (hi - lo);
  const double centre = 0.5 * (hi + lo);

  const double log_n = std::log(static_cast<double>(n_points));
  std::size_t iterations = 0;
  if (options.iterations) {
    iterations = *options.iterations;
  } else if (out.half_range > 0.0 && n_points > 1) {
    iterations = static_cast<std::size_t>(
        std::ceil(2.0 * out.half_range * out.half_range * log_n / (options.eps2 * options.eps2)));
  }
  out.iterations = iterations;

  Vec log_w(n_points, 0.0);
  Vec mu(n_points, 1.0 / static_cast<double>(n_points));
  Vec avg(n_points, 0.0);
  if (iterations > 0 && out.half_range > 0.0) {
    const double step = std::sqrt(2.0 * log_n / static_cast<double>(iterations)) / out.half_range;
    for (std::size_t it = 0; it < iterations; ++it) {
      // Play mu, then charge it the worst column.
      std::size_t worst = 0;
      double worst_value = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < columns.size(); ++j) {
        double v = 0.0;
        for (std::size_t i = 0; i < n_points; ++i) v += mu[i] * columns[j][i];
        if (v > worst_value) {
          worst_value = v;
          worst = j;
        }
      }
      for (std::size_t i = 0; i < n_points; ++i) avg[i] += mu[i];
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n_points; ++i) {
        log_w[i] -= step * (columns[worst][i] - centre);
        top = std::max(top, log_w[i]);
      }
      double total = 0.0;
      for (std::size_t i = 0; i < n_points; ++i) {
        mu[i] = std::exp(log_w[i] - top);
        total += mu[i];
      }
      for (double& m : mu) m /= total;
    }
    for (double& a : avg) a /= static_cast<double>(iterations);
    out.weights = std::move(avg);
  } else {
    out.weights = std::move(mu);
  }

  out.value = -std::numeric_limits<double>::infinity();
  for (const auto& col : columns) {
    double v = 0.0;
    for (std::size_t i = 0; i < n_points; ++i) v += out.weights[i] * col[i];
    out.value = std::max(out.value, v);
  }

  const KBound k = prediction_lipschitz(p, loss, zeta, x, t, rng.next());
  out.k_bound = k.value;
  out.k_estimated = k.estimated;

  const double u = rng.uniform();
  double cumulative = 0.0;
  out.sample = out.points.back();
  for (std::size_t i = 0; i < n_points; ++i) {
    cumulative += out.weights[i];
    if (u < cumulative) {
      out.sample = out.points[i];
      break;
    }
  }
  return out;
}

}  // namespace burkholder
