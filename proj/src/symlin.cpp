#include "burkholder/symlin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "burkholder/error.hpp"

namespace burkholder::linalg {

Mat::Mat(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) throw StructuralError("Mat: entry count does not match shape");
  for (double v : data_)
    if (!std::isfinite(v)) throw DomainError("Mat: non-finite entry");
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::column(std::span<const double> values) {
  return Mat(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

Mat Mat::indicator(std::size_t rows, std::size_t cols, std::size_t i, std::size_t j) {
  if (i >= rows || j >= cols) throw DomainError("Mat::indicator: index out of range");
  Mat m(rows, cols);
  m(i, j) = 1.0;
  return m;
}

Mat Mat::transpose() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Mat& Mat::operator+=(const Mat& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw StructuralError("Mat: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Mat& Mat::operator-=(const Mat& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw StructuralError("Mat: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Mat& Mat::operator*=(double scale) {
  for (double& v : data_) v *= scale;
  return *this;
}

Mat operator+(Mat lhs, const Mat& rhs) { return lhs += rhs; }
Mat operator-(Mat lhs, const Mat& rhs) { return lhs -= rhs; }
Mat operator*(double scale, Mat m) { return m *= scale; }

Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw StructuralError("matmul: inner dimensions differ");
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

double inner(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw StructuralError("inner: shape mismatch");
  return dot(a.data(), b.data());
}

double frobenius_norm(const Mat& a) { return norm2(a.data()); }

double max_abs(const Mat& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------

SymMat::SymMat(std::size_t dim, double fill) : dim_(dim), data_(dim * dim, fill) {}

SymMat::SymMat(const Mat& m) : dim_(m.rows()), data_(m.rows() * m.rows()) {
  if (m.rows() != m.cols()) throw DomainError("SymMat: matrix is not square");
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      if (!std::isfinite(v)) throw DomainError("SymMat: non-finite entry");
      data_[i * dim_ + j] = v;
    }
}

SymMat SymMat::identity(std::size_t n, double scale) {
  SymMat s(n);
  for (std::size_t i = 0; i < n; ++i) s.data_[i * n + i] = scale;
  return s;
}

SymMat SymMat::diagonal(std::span<const double> diag) {
  SymMat s(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) s.data_[i * diag.size() + i] = diag[i];
  return s;
}

void SymMat::set(std::size_t i, std::size_t j, double value) {
  data_[i * dim_ + j] = value;
  data_[j * dim_ + i] = value;
}

void SymMat::add_to(std::size_t i, std::size_t j, double value) {
  data_[i * dim_ + j] += value;
  if (i != j) data_[j * dim_ + i] += value;
}

Mat SymMat::to_mat() const { return Mat(dim_, dim_, data_); }

SymMat& SymMat::operator+=(const SymMat& other) { return axpy(1.0, other); }

SymMat& SymMat::operator-=(const SymMat& other) { return axpy(-1.0, other); }

SymMat& SymMat::operator*=(double scale) {
  for (double& v : data_) v *= scale;
  return *this;
}

SymMat& SymMat::axpy(double scale, const SymMat& other) {
  if (dim_ != other.dim_) throw StructuralError("SymMat: dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += scale * other.data_[k];
  return *this;
}

SymMat operator+(SymMat lhs, const SymMat& rhs) { return lhs += rhs; }
SymMat operator-(SymMat lhs, const SymMat& rhs) { return lhs -= rhs; }
SymMat operator*(double scale, SymMat m) { return m *= scale; }

SymMat dilation(const Mat& x) {
  const std::size_t d1 = x.rows(), d2 = x.cols();
  SymMat s(d1 + d2);
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t j = 0; j < d2; ++j) s.set(i, d1 + j, x(i, j));
  return s;
}

SymMat dilation_square(const Mat& x) {
  const std::size_t d1 = x.rows(), d2 = x.cols();
  SymMat s(d1 + d2);
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t k = i; k < d1; ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j < d2; ++j) acc += x(i, j) * x(k, j);
      s.set(i, k, acc);
    }
  for (std::size_t j = 0; j < d2; ++j)
    for (std::size_t l = j; l < d2; ++l) {
      double acc = 0.0;
      for (std::size_t i = 0; i < d1; ++i) acc += x(i, j) * x(i, l);
      s.set(d1 + j, d1 + l, acc);
    }
  return s;
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi. `a` is a full n x n symmetric array that is driven to
// diagonal form in place; `v` (optional) accumulates the rotations.

namespace {

double off_diagonal_norm(const std::vector<double>& a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) acc += a[i * n + j] * a[i * n + j];
  return std::sqrt(2.0 * acc);
}

void jacobi(std::vector<double>& a, std::size_t n, std::vector<double>* v,
            const JacobiOptions& options) {
  if (v) {
    v->assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) (*v)[i * n + i] = 1.0;
  }
  double fro = 0.0;
  for (double x : a) fro += x * x;
  fro = std::sqrt(fro);
  if (n < 2 || fro == 0.0) return;
  const double target = options.tolerance * fro;

  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    if (off_diagonal_norm(a, n) <= target) return;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        // Once an element is negligible against both diagonal entries a
        // rotation would not change them; zero it instead.
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
          a[p * n + q] = a[q * n + p] = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          const double np = c * akp - s * akq;
          const double nq = s * akp + c * akq;
          a[k * n + p] = a[p * n + k] = np;
          a[k * n + q] = a[q * n + k] = nq;
        }
        a[p * n + p] = app - t * apq;
        a[q * n + q] = aqq + t * apq;
        a[p * n + q] = a[q * n + p] = 0.0;

        if (v) {
          auto& vv = *v;
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = vv[k * n + p];
            const double vkq = vv[k * n + q];
            vv[k * n + p] = c * vkp - s * vkq;
            vv[k * n + q] = s * vkp + c * vkq;
          }
        }
      }
    }
  }
  const double off = off_diagonal_norm(a, n);
  if (off <= target) return;
  std::ostringstream msg;
  msg << "sym_eig: Jacobi did not converge in " << options.max_sweeps
      << " sweeps (off-diagonal norm " << off << ", target " << target << ", diagonal [";
  for (std::size_t i = 0; i < n; ++i) msg << (i ? ", " : "") << a[i * n + i];
  msg << "])";
  throw NumericError(msg.str());
}

void check_finite(const SymMat& s) {
  for (double v : s.data())
    if (!std::isfinite(v)) throw NumericError("sym_eig: non-finite matrix entry");
}

}  // namespace

SymEig sym_eig(const SymMat& s, const JacobiOptions& options) {
  check_finite(s);
  const std::size_t n = s.dim();
  std::vector<double> a(s.data().begin(), s.data().end());
  std::vector<double> v;
  jacobi(a, n, &v, options);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a[i * n + i] > a[j * n + j]; });
  SymEig out;
  out.values.resize(n);
  out.vectors = Mat(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a[order[k] * n + order[k]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v[i * n + order[k]];
  }
  return out;
}

Vec eigenvalues(const SymMat& s, const JacobiOptions& options) {
  check_finite(s);
  const std::size_t n = s.dim();
  std::vector<double> a(s.data().begin(), s.data().end());
  jacobi(a, n, nullptr, options);
  Vec values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a[i * n + i];
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

double lambda_max(const SymMat& s) {
  if (s.dim() == 0) throw DomainError("lambda_max: empty matrix");
  return eigenvalues(s).front();
}

double lambda_min(const SymMat& s) {
  if (s.dim() == 0) throw DomainError("lambda_min: empty matrix");
  return eigenvalues(s).back();
}

double log_trace_exp(const SymMat& s) {
  if (s.dim() == 0) throw DomainError("log_trace_exp: empty matrix");
  const Vec values = eigenvalues(s);
  const double top = values.front();
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - top);
  return top + std::log(acc);
}

Vec singular_values(const Mat& x) {
  const std::size_t k = std::min(x.rows(), x.cols());
  const Vec values = eigenvalues(dilation(x));
  Vec out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = std::max(values[i], 0.0);
  return out;
}

double spectral_norm(const Mat& x) {
  if (x.size() == 0) return 0.0;
  return std::max(eigenvalues(dilation(x)).front(), 0.0);
}

double nuclear_norm(const Mat& x) {
  const Vec s = singular_values(x);
  return std::accumulate(s.begin(), s.end(), 0.0);
}

Vec project_l1_ball(std::span<const double> v, double radius) {
  if (radius < 0.0) throw DomainError("project_l1_ball: negative radius");
  Vec out(v.begin(), v.end());
  double total = 0.0;
  for (double x : v) {
    if (x < 0.0) throw DomainError("project_l1_ball: expects a nonnegative vector");
    total += x;
  }
  if (total <= radius) return out;
  // Simplex-style threshold: find theta with sum max(v_i - theta, 0) = radius.
  Vec sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - radius) / static_cast<double>(k + 1);
    if (k + 1 == sorted.size() || sorted[k + 1] <= candidate) {
      theta = candidate;
      break;
    }
  }
  for (double& x : out) x = std::max(x - theta, 0.0);
  return out;
}

// The projection works with the Gram matrix of the shorter side: with
// W^T W = V diag(s^2) V^T, the projected matrix is W V diag(f) V^T where
// f_k = max(s_k - theta, 0) / s_k. Components thresholded to zero never
// divide by a small singular value.
Mat nuclear_projection(const Mat& w, double radius) {
  if (radius < 0.0) throw DomainError("nuclear_projection: negative radius");
  if (radius == 0.0 || w.size() == 0) return Mat(w.rows(), w.cols());
  // A unit eigenvector (u; v) of h(W) with eigenvalue s > 0 has W v = s u,
  // W^T u = s v and |u| = |v| = 1/sqrt(2), so W = sum_k 2 s_k u_k v_k^T over
  // the top min(d1, d2) eigenpairs. Working on h(W) rather than W^T W keeps
  // small singular values accurate.
  const std::size_t d1 = w.rows(), d2 = w.cols(), k = std::min(d1, d2);
  const SymEig eig = sym_eig(dilation(w));
  Vec sigma(k);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sigma[i] = std::max(eig.values[i], 0.0);
    total += sigma[i];
  }
  if (total <= radius) return w;

  const Vec shrunk = project_l1_ball(sigma, radius);
  Mat out(d1, d2);
  for (std::size_t c = 0; c < k; ++c) {
    if (shrunk[c] <= 0.0) continue;
    const double f = 2.0 * shrunk[c];
    for (std::size_t i = 0; i < d1; ++i)
      for (std::size_t j = 0; j < d2; ++j) out(i, j) += f * eig.vectors(i, c) * eig.vectors(d1 + j, c);
  }
  return out;
}

// ---------------------------------------------------------------------------

Mat cholesky(const SymMat& s) {
  const std::size_t n = s.dim();
  Mat l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = s(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0)) {
      std::ostringstream msg;
      msg << "cholesky: non-positive pivot " << diag << " at index " << j;
      throw NumericError(msg.str());
    }
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double acc = s(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
      l(i, j) = acc / ljj;
    }
  }
  return l;
}

double logdet_spd(const SymMat& s) {
  const Mat l = cholesky(s);
  double acc = 0.0;
  for (std::size_t i = 0; i < l.rows(); ++i) acc += std::log(l(i, i));
  return 2.0 * acc;
}

Vec cholesky_solve(const Mat& chol, std::span<const double> b) {
  const std::size_t n = chol.rows();
  if (b.size() != n) throw StructuralError("cholesky_solve: size mismatch");
  Vec y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= chol(i, k) * y[k];
    y[i] /= chol(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) y[i] -= chol(k, i) * y[k];
    y[i] /= chol(i, i);
  }
  return y;
}

Vec solve_spd(const SymMat& s, std::span<const double> b) { return cholesky_solve(cholesky(s), b); }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw StructuralError("dot: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_p(std::span<const double> a, double p) {
  if (p < 1.0) throw DomainError("norm_p: p must be at least 1");
  if (p == 2.0) return norm2(a);
  double top = 0.0;
  for (double v : a) top = std::max(top, std::abs(v));
  if (top == 0.0) return 0.0;
  if (std::isinf(p)) return top;
  double acc = 0.0;
  for (double v : a) acc += std::pow(std::abs(v) / top, p);
  return top * std::pow(acc, 1.0 / p);
}

}  // namespace burkholder::linalg
