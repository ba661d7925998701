#include "burkholder/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "burkholder/error.hpp"

namespace burkholder::harness {

SequenceKind sequence_kind_by_name(const std::string& name) {
  if (name == "matrix_completion") return SequenceKind::matrix_completion;
  if (name == "random_vectors") return SequenceKind::random_vectors;
  if (name == "adversarial_gradient") return SequenceKind::adversarial_gradient;
  throw DomainError("unknown sequence kind '" + name +
                    "' (expected matrix_completion, random_vectors or adversarial_gradient)");
}

std::string to_string(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::matrix_completion: return "matrix_completion";
    case SequenceKind::random_vectors: return "random_vectors";
    case SequenceKind::adversarial_gradient: return "adversarial_gradient";
  }
  return "?";
}

void SequenceSpec::validate() const {
  if (!(radius > 0.0)) throw DomainError("sequence: radius B must be positive");
  if (!(noise >= 0.0)) throw DomainError("sequence: noise must be nonnegative");
  switch (kind) {
    case SequenceKind::matrix_completion:
      if (d1 < 1 || d2 < 1) throw DomainError("sequence: d1 and d2 must be positive");
      if (rank > std::min(d1, d2)) throw DomainError("sequence: rank exceeds min(d1, d2)");
      if (!(nuclear_radius >= 0.0)) throw DomainError("sequence: nuclear radius must be nonnegative");
      if (!(zipf >= 0.0)) throw DomainError("sequence: zipf exponent must be nonnegative");
      break;
    case SequenceKind::random_vectors:
    case SequenceKind::adversarial_gradient:
      if (d < 1) throw DomainError("sequence: d must be positive");
      if (!(norm_bound > 0.0)) throw DomainError("sequence: norm bound must be positive");
      if (!(p >= 1.0)) throw DomainError("sequence: p must be at least 1");
      if (!(comparator_norm >= 0.0)) throw DomainError("sequence: comparator norm must be nonnegative");
      if (kind == SequenceKind::adversarial_gradient && steps < 1) throw DomainError("sequence: steps must be positive");
      break;
  }
}

namespace {

// Index drawn with weights proportional to (i + 1)^-s.
class SkewedIndex {
 public:
  SkewedIndex(std::size_t size, double s) : cumulative_(size) {
    double total = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      total += std::pow(static_cast<double>(i + 1), -s);
      cumulative_[i] = total;
    }
    for (double& c : cumulative_) c /= total;
  }
  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
  }

 private:
  Vec cumulative_;
};

double clip(double v, double b) { return std::clamp(v, -b, b); }

Generated matrix_completion(const SequenceSpec& spec, Rng& rng) {
  Generated out;
  Mat w(spec.d1, spec.d2);
  if (spec.rank > 0 && spec.nuclear_radius > 0.0) {
    for (std::size_t k = 0; k < spec.rank; ++k) {
      Vec u(spec.d1), v(spec.d2);
      for (double& e : u) e = rng.normal();
      for (double& e : v) e = rng.normal();
      for (std::size_t i = 0; i < spec.d1; ++i)
        for (std::size_t j = 0; j < spec.d2; ++j) w(i, j) += u[i] * v[j];
    }
    const double norm = linalg::nuclear_norm(w);
    if (norm > 0.0) w *= spec.nuclear_radius / norm;
  }
  out.planted = w;
  const SkewedIndex rows(spec.d1, spec.zipf), cols(spec.d2, spec.zipf);
  out.sequence.reserve(spec.n);
  for (std::size_t t = 0; t < spec.n; ++t) {
    const std::size_t i = rows.draw(rng), j = cols.draw(rng);
    double y = w(i, j);
    if (spec.noise > 0.0) y += spec.noise * rng.normal();
    out.sequence.push_back({Mat::indicator(spec.d1, spec.d2, i, j), clip(y, spec.radius)});
  }
  return out;
}

Vec random_direction(std::size_t d, double p, double scale, Rng& rng) {
  Vec v(d);
  double norm = 0.0;
  while (norm == 0.0) {
    for (double& e : v) e = rng.normal();
    norm = linalg::norm_p(v, p);
  }
  for (double& e : v) e *= scale / norm;
  return v;
}

Generated random_vectors(const SequenceSpec& spec, Rng& rng) {
  Generated out;
  const double q = spec.p > 1.0 ? spec.p / (spec.p - 1.0) : std::numeric_limits<double>::infinity();
  const Vec w = std::isinf(q) ? Vec(spec.d, spec.comparator_norm) : random_direction(spec.d, q, spec.comparator_norm, rng);
  out.planted = Mat::column(w);
  for (std::size_t t = 0; t < spec.n; ++t) {
    const Vec x = random_direction(spec.d, spec.p, spec.norm_bound, rng);
    double y = linalg::dot(w, x);
    if (spec.noise > 0.0) y += spec.noise * rng.normal();
    out.sequence.push_back({Mat::column(x), clip(y, spec.radius)});
  }
  return out;
}

// Blocks of `steps` identical rounds on one coordinate with a consistent
// outcome sign, so the gradient sum grows linearly within a block.
Generated adversarial_gradient(const SequenceSpec& spec, Rng& rng) {
  Generated out;
  out.planted = Mat(spec.d, 1);
  std::size_t coord = 0;
  double sign = 1.0;
  for (std::size_t t = 0; t < spec.n; ++t) {
    if (t % spec.steps == 0) {
      coord = static_cast<std::size_t>(rng.below(spec.d));
      sign = rng.sign();
    }
    Mat x(spec.d, 1);
    x(coord, 0) = spec.norm_bound;
    double y = sign * spec.radius;
    if (spec.noise > 0.0) y += spec.noise * rng.normal();
    out.sequence.push_back({std::move(x), clip(y, spec.radius)});
  }
  return out;
}

}  // namespace

Generated generate_planted(const SequenceSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  switch (spec.kind) {
    case SequenceKind::matrix_completion: return matrix_completion(spec, rng);
    case SequenceKind::random_vectors: return random_vectors(spec, rng);
    case SequenceKind::adversarial_gradient: return adversarial_gradient(spec, rng);
  }
  return {};
}

Sequence generate(const SequenceSpec& spec) { return generate_planted(spec).sequence; }

namespace {

// Instances as sparse (index, value) lists; indicator instances make the
// oracle cost O(n) per iterate.
struct Sparse {
  std::vector<std::pair<std::size_t, double>> entries;
};

std::vector<Sparse> sparsify(const Sequence& seq) {
  std::vector<Sparse> out(seq.size());
  for (std::size_t t = 0; t < seq.size(); ++t) {
    const auto& data = seq[t].x.data();
    for (std::size_t k = 0; k < data.size(); ++k)
      if (data[k] != 0.0) out[t].entries.emplace_back(k, data[k]);
  }
  return out;
}

double sparse_inner(const Sparse& x, const Mat& w) {
  double acc = 0.0;
  for (const auto& [k, v] : x.entries) acc += v * w.data()[k];
  return acc;
}

void check_shape(const Sequence& seq, const Mat& w) {
  for (const auto& ex : seq)
    if (ex.x.rows() != w.rows() || ex.x.cols() != w.cols())
      throw StructuralError("comparator shape does not match the instances");
}

Mat project(ComparatorClass cls, const Mat& w, double r) {
  if (cls == ComparatorClass::nuclear_ball) return linalg::nuclear_projection(w, r);
  if (cls == ComparatorClass::linf_ball) {
    Mat out = w;
    for (double& v : out.data()) v = std::clamp(v, -r, r);
    return out;
  }
  const double norm = linalg::frobenius_norm(w);
  if (norm <= r) return w;
  Mat out = w;
  out *= norm > 0.0 ? r / norm : 0.0;
  return out;
}

}  // namespace

double comparator_loss(const Sequence& seq, const Loss& loss, const Mat& w) {
  check_shape(seq, w);
  double total = 0.0;
  for (const auto& ex : seq) total += loss.value(linalg::inner(w, ex.x), ex.y);
  return total;
}

Comparator comparator_oracle(ComparatorClass cls, double r, const Sequence& seq, const Loss& loss,
                             const OracleOptions& options, const std::vector<Mat>& candidates) {
  if (!(r >= 0.0)) throw DomainError("comparator_oracle: radius must be nonnegative");
  if (options.iterations < 1) throw DomainError("comparator_oracle: iterations must be at least 1");
  if (seq.empty()) {
    if (!candidates.empty()) return {Mat(candidates.front().rows(), candidates.front().cols()), 0.0};
    return {Mat(), 0.0};
  }
  const std::size_t rows = seq.front().x.rows(), cols = seq.front().x.cols();
  const auto sparse = sparsify(seq);
  const double n = static_cast<double>(seq.size());
  auto objective = [&](const Mat& w) {
    double total = 0.0;
    for (std::size_t t = 0; t < seq.size(); ++t) total += loss.value(sparse_inner(sparse[t], w), seq[t].y);
    return total;
  };

  Comparator best{Mat(rows, cols), 0.0};
  best.loss = objective(best.w);
  for (const Mat& c : candidates) {
    check_shape(seq, c);
    Mat w = project(cls, c, r);
    const double value = objective(w);
    if (value < best.loss) best = {std::move(w), value};
  }
  if (r == 0.0) return best;

  Mat w(rows, cols);
  Mat grad(rows, cols);
  for (std::size_t k = 1; k <= options.iterations; ++k) {
    std::fill(grad.data().begin(), grad.data().end(), 0.0);
    for (std::size_t t = 0; t < seq.size(); ++t) {
      const double g = loss.subgradient(sparse_inner(sparse[t], w), seq[t].y) / n;
      if (g == 0.0) continue;
      for (const auto& [idx, v] : sparse[t].entries) grad.data()[idx] += g * v;
    }
    const double step = options.step_scale * r / std::sqrt(static_cast<double>(k));
    for (std::size_t i = 0; i < w.data().size(); ++i) w.data()[i] -= step * grad.data()[i];
    w = project(cls, w, r);
    const double value = objective(w);
    if (value < best.loss) best = {w, value};
  }
  return best;
}

Comparator scan_1d(const Sequence& seq, const Loss& loss, double r) {
  if (!(r >= 0.0)) throw DomainError("scan_1d: radius must be nonnegative");
  for (const auto& ex : seq)
    if (ex.x.rows() != 1 || ex.x.cols() != 1) throw StructuralError("scan_1d: instances must be scalars");
  auto objective = [&](double w) {
    double total = 0.0;
    for (const auto& ex : seq) total += loss.value(w * ex.x(0, 0), ex.y);
    return total;
  };
  Vec candidates{-r, 0.0, r};
  if (loss.kind == LossKind::squared) {
    double sxy = 0.0, sxx = 0.0;
    for (const auto& ex : seq) {
      sxy += ex.x(0, 0) * ex.y;
      sxx += ex.x(0, 0) * ex.x(0, 0);
    }
    if (sxx > 0.0) candidates.push_back(std::clamp(sxy / sxx, -r, r));
  } else if (loss.kind == LossKind::absolute) {
    for (const auto& ex : seq)
      if (ex.x(0, 0) != 0.0) {
        const double w = ex.y / ex.x(0, 0);
        if (std::abs(w) <= r) candidates.push_back(w);
      }
  }
  Comparator best{Mat(1, 1), std::numeric_limits<double>::infinity()};
  for (double w : candidates) {
    const double value = objective(w);
    if (value < best.loss) best = {Mat(1, 1, w), value};
  }
  return best;
}

namespace {

GridPoint grid_point(const Trajectory& traj, const Loss& loss, Mat w, double norm, double bound) {
  GridPoint g;
  double comp = 0.0;
  for (const auto& round : traj.rounds) comp += loss.value(linalg::inner(w, round.x), round.y);
  g.regret = traj.cumulative_loss() - comp;
  g.w = std::move(w);
  g.norm = norm;
  g.bound = bound;
  return g;
}

}  // namespace

std::vector<GridPoint> param_free_grid(const ParamFreePotential& p, const Trajectory& traj, const Loss& loss,
                                       std::size_t points, double lo, double hi) {
  if (points < 1 || !(lo > 0.0) || !(hi >= lo)) throw DomainError("param_free_grid: invalid grid");
  const auto& cfg = p.config();
  Vec g(cfg.d, 0.0);
  for (const auto& round : traj.rounds)
    for (std::size_t i = 0; i < cfg.d; ++i) g[i] -= round.delta * round.x.data()[i];
  // u maximizes <u, g> over ||u||_q = 1 for the exponent q dual to p.
  Vec u(cfg.d, 0.0);
  const double gnorm = linalg::norm_p(g, cfg.p);
  if (gnorm > 0.0) {
    for (std::size_t i = 0; i < cfg.d; ++i)
      u[i] = std::copysign(std::pow(std::abs(g[i]) / gnorm, cfg.p - 1.0), g[i]);
  } else {
    u[0] = 1.0;
  }
  const double q = dual_exponent(cfg.p);
  const double unorm = linalg::norm_p(u, q);
  std::vector<GridPoint> out;
  out.reserve(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double frac = points == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(points - 1);
    const double radius = lo * std::pow(hi / lo, frac);
    Mat w = Mat::column(u);
    w *= radius / unorm;
    out.push_back(grid_point(traj, loss, std::move(w), radius, pf_regret_bound(cfg, radius)));
  }
  return out;
}

std::vector<GridPoint> vaw_grid(const VawPotential& p, const Trajectory& traj, const Loss& loss, std::size_t points,
                                std::uint64_t seed) {
  const auto& cfg = p.config();
  const SymMat& a = traj.zetas.back().as<VecSym>().a;
  Rng rng(seed);
  std::vector<GridPoint> out;
  out.reserve(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double scale = 0.1 * std::pow(30.0, rng.uniform());
    Vec w(cfg.d);
    for (double& e : w) e = scale * rng.normal();
    const double bound = vaw_regret_bound(cfg, w, a);
    out.push_back(grid_point(traj, loss, Mat::column(w), linalg::norm2(w), bound));
  }
  return out;
}

std::optional<BoundFn> bound_function(const Potential& p) {
  if (const auto* m = dynamic_cast<const MatrixPotential*>(&p)) {
    return BoundFn([m](const Statistic& tau, const Mat&) {
      return mp_regret_bound(m->config(), tau.as<ScalarSymPsd>().m);
    });
  }
  if (const auto* pf = dynamic_cast<const ParamFreePotential*>(&p)) {
    return BoundFn([pf](const Statistic&, const Mat& w) {
      const auto& cfg = pf->config();
      return pf_regret_bound(cfg, linalg::norm_p(w.data(), dual_exponent(cfg.p)));
    });
  }
  if (const auto* v = dynamic_cast<const VawPotential*>(&p)) {
    return BoundFn([v](const Statistic& tau, const Mat& w) {
      return vaw_regret_bound(v->config(), w.data(), tau.as<VecSym>().a);
    });
  }
  if (dynamic_cast<const AdaGradPotential*>(&p)) {
    return BoundFn([&p](const Statistic& tau, const Mat&) { return *p.adaptive_bound(tau); });
  }
  if (const auto* meta = dynamic_cast<const MetaPotential*>(&p)) {
    // V = max_a (V_a - eta n C_a) - log|A| / eta <= 0 bounds the regret by
    // min_a (A_a + eta n C_a) + log|A| / eta.
    std::vector<BoundFn> parts;
    for (const auto& member : meta->members()) {
      auto f = bound_function(*member.potential);
      if (!f) return std::nullopt;
      parts.push_back(std::move(*f));
    }
    return BoundFn([meta, parts](const Statistic& tau, const Mat& w) {
      const auto& prod = tau.as<Product>();
      const double n = static_cast<double>(meta->horizon());
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < parts.size(); ++a)
        best = std::min(best, parts[a](prod.parts[a], w) + meta->eta() * n * meta->members()[a].increment);
      return best + std::log(static_cast<double>(parts.size())) / meta->eta();
    });
  }
  if (const auto* comb = dynamic_cast<const CombinedPotential*>(&p)) {
    // V = min_a V_a gives the largest member budget; V = sum w_a V_a gives the
    // weighted budget.
    std::vector<BoundFn> parts;
    for (const auto& member : comb->members()) {
      auto f = bound_function(*member);
      if (!f) return std::nullopt;
      parts.push_back(std::move(*f));
    }
    return BoundFn([comb, parts](const Statistic& tau, const Mat& w) {
      double acc = comb->kind() == CombineKind::min ? -std::numeric_limits<double>::infinity() : 0.0;
      for (std::size_t a = 0; a < parts.size(); ++a) {
        if (comb->kind() == CombineKind::min) {
          acc = std::max(acc, parts[a](tau, w));
        } else if (comb->weights()[a] != 0.0) {
          acc += comb->weights()[a] * parts[a](tau, w);
        }
      }
      return acc;
    });
  }
  return std::nullopt;
}

RegretReport report(const Potential& p, const Trajectory& traj, const Loss& loss, const Mat& comparator,
                    const BoundFn& bound) {
  const std::size_t n = traj.rounds.size();
  if (traj.zetas.size() != n + 1 || traj.potential_values.size() != n + 1)
    throw StructuralError("report: trajectory has inconsistent lengths");
  RegretReport out;
  out.rows.reserve(n + 1);
  RegretRow row;
  row.bound = bound(traj.zetas[0], comparator);
  row.potential = traj.potential_values[0];
  out.rows.push_back(row);
  for (std::size_t k = 0; k < n; ++k) {
    const Round& r = traj.rounds[k];
    if (r.x.rows() != comparator.rows() || r.x.cols() != comparator.cols())
      throw StructuralError("report: comparator shape does not match the instances");
    row.round = k + 1;
    row.loss = r.loss;
    row.cum_loss += r.loss;
    row.comp_loss += loss.value(linalg::inner(comparator, r.x), r.y);
    row.regret = row.cum_loss - row.comp_loss;
    row.bound = bound(traj.zetas[k + 1], comparator);
    row.potential = traj.potential_values[k + 1];
    out.rows.push_back(row);
  }
  out.final_regret = out.rows.back().regret;
  out.final_bound = out.rows.back().bound;
  out.certificate = p.bound(traj.zetas.back());
  return out;
}

void write_csv(std::ostream& out, const RegretReport& r) {
  out << kRegretHeader << "\n";
  char buf[512];
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", row.round, row.loss, row.cum_loss,
                  row.comp_loss, row.regret, row.bound, row.potential);
    out << buf;
  }
}

void write_sequence_csv(std::ostream& out, const Sequence& seq) {
  const std::size_t width = seq.empty() ? 0 : seq.front().x.size();
  out << "t";
  for (std::size_t k = 0; k < width; ++k) out << ",x" << k + 1;
  out << ",y\n";
  char buf[64];
  for (std::size_t t = 0; t < seq.size(); ++t) {
    out << t + 1;
    for (double v : seq[t].x.data()) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, ",%.17g\n", seq[t].y);
    out << buf;
  }
}

namespace {

std::optional<double> parse_number(const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used]))) ++used;
    if (used != field.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

Sequence read_sequence_csv(std::istream& in, std::size_t rows, std::size_t cols) {
  Sequence seq;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (line_no == 1 && !fields.empty() && !parse_number(fields[0])) continue;
    if (fields.size() != rows * cols + 2)
      throw DomainError("sequence CSV line " + std::to_string(line_no) + ": expected " +
                        std::to_string(rows * cols + 2) + " fields, found " + std::to_string(fields.size()));
    std::vector<double> values;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const auto v = parse_number(fields[k]);
      if (!v) throw DomainError("sequence CSV line " + std::to_string(line_no) + ": bad number '" + fields[k] + "'");
      values.push_back(*v);
    }
    const double y = values.back();
    values.pop_back();
    seq.push_back({Mat(rows, cols, std::move(values)), y});
  }
  return seq;
}

}  // namespace burkholder::harness
