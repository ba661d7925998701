#pragma once

// Dense real linear algebra for the matrix potential: Hermitian dilation,
// symmetric eigendecomposition (cyclic Jacobi), spectral quantities and a
// stable log-trace-exponential. Dimensions here are small (at most a few
// dozen), so everything is dense and row-major.

#include <cstddef>
#include <span>
#include <vector>

namespace burkholder::linalg {

using Vec = std::vector<double>;

/// Row-major dense matrix.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0);
  Mat(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Mat identity(std::size_t n);
  /// Column vector (n x 1).
  static Mat column(std::span<const double> values);
  /// Indicator e_i e_j^T.
  static Mat indicator(std::size_t rows, std::size_t cols, std::size_t i, std::size_t j);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  Mat transpose() const;

  Mat& operator+=(const Mat& other);
  Mat& operator-=(const Mat& other);
  Mat& operator*=(double scale);

  bool operator==(const Mat& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Mat operator+(Mat lhs, const Mat& rhs);
Mat operator-(Mat lhs, const Mat& rhs);
Mat operator*(double scale, Mat m);
Mat matmul(const Mat& a, const Mat& b);

/// Frobenius inner product tr(A B^T).
double inner(const Mat& a, const Mat& b);
double frobenius_norm(const Mat& a);
double max_abs(const Mat& a);

/// Symmetric matrix; symmetrized on construction from a general square matrix.
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(std::size_t dim, double fill = 0.0);
  /// Averages `m` with its transpose. Throws DomainError if `m` is not square
  /// or contains non-finite entries.
  explicit SymMat(const Mat& m);

  static SymMat identity(std::size_t n, double scale = 1.0);
  static SymMat diagonal(std::span<const double> diag);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  /// Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double value);
  void add_to(std::size_t i, std::size_t j, double value);

  std::span<const double> data() const { return data_; }
  Mat to_mat() const;

  SymMat& operator+=(const SymMat& other);
  SymMat& operator-=(const SymMat& other);
  SymMat& operator*=(double scale);
  /// this += scale * other
  SymMat& axpy(double scale, const SymMat& other);

  bool operator==(const SymMat& other) const { return dim_ == other.dim_ && data_ == other.data_; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

SymMat operator+(SymMat lhs, const SymMat& rhs);
SymMat operator-(SymMat lhs, const SymMat& rhs);
SymMat operator*(double scale, SymMat m);

/// [[0, X], [X^T, 0]].
SymMat dilation(const Mat& x);
/// dilation(X)^2 = [[X X^T, 0], [0, X^T X]].
SymMat dilation_square(const Mat& x);

struct SymEig {
  Vec values;    ///< descending
  Mat vectors;   ///< column k is the unit eigenvector of values[k]
};

struct JacobiOptions {
  double tolerance = 1e-12;  ///< off-diagonal Frobenius norm relative to ||S||_F
  int max_sweeps = 100;
};

/// Full eigendecomposition S = Q diag(values) Q^T by cyclic Jacobi rotations.
/// Throws NumericError if the off-diagonal mass does not fall below the
/// tolerance within the sweep budget.
SymEig sym_eig(const SymMat& s, const JacobiOptions& options = {});

/// Eigenvalues only (descending); skips accumulating rotations.
Vec eigenvalues(const SymMat& s, const JacobiOptions& options = {});

double lambda_max(const SymMat& s);
double lambda_min(const SymMat& s);

/// log tr exp(S) = lambda_1 + log sum_i exp(lambda_i - lambda_1).
double log_trace_exp(const SymMat& s);

/// Singular values of X in descending order (length min(rows, cols)), read off
/// the positive half of the dilation spectrum.
Vec singular_values(const Mat& x);
double spectral_norm(const Mat& x);
double nuclear_norm(const Mat& x);

/// Euclidean projection onto {W : ||W||_nuclear <= radius}.
Mat nuclear_projection(const Mat& w, double radius);

/// Euclidean projection of a nonnegative vector onto the l1 ball of radius r.
Vec project_l1_ball(std::span<const double> v, double radius);

/// Cholesky factor L (lower, row-major) of a symmetric positive definite
/// matrix. Throws NumericError when a pivot is not positive.
Mat cholesky(const SymMat& s);
/// log det S for S positive definite.
double logdet_spd(const SymMat& s);
/// Solves S x = b for S positive definite.
Vec solve_spd(const SymMat& s, std::span<const double> b);
/// Solves using an existing Cholesky factor.
Vec cholesky_solve(const Mat& chol, std::span<const double> b);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
/// ||a||_p for p >= 1.
double norm_p(std::span<const double> a, double p);

}  // namespace burkholder::linalg
