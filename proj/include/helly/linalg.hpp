#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace helly {

using Vec = std::vector<double>;

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
// y += t * x
void axpy(double t, std::span<const double> x, std::span<double> y);

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vec column(std::size_t j) const;

  Vec multiply(std::span<const double> x) const;
  Vec multiply_transposed(std::span<const double> x) const;
  Matrix transposed() const;

  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

/// Dense symmetric matrix. Any input is symmetrized as (A + A^T) / 2, so
/// entries (i, j) and (j, i) always agree bit for bit.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim);
  explicit SymMatrix(const Matrix& a);

  static SymMatrix identity(std::size_t dim);
  static SymMatrix diagonal(std::span<const double> diag);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  void set(std::size_t i, std::size_t j, double value);

  /// this += t * x x^T
  void add_rank_one(double t, std::span<const double> x);
  void scale(double t);
  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);

  Vec multiply(std::span<const double> x) const;
  double quadratic_form(std::span<const double> x) const;
  double trace() const;
  double frobenius_norm() const;
  bool all_finite() const;
  Matrix as_matrix() const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

SymMatrix operator-(SymMatrix a, const SymMatrix& b);

/// Eigenvalues ascending; eigenvectors stored as the matching columns.
struct Spectrum {
  Vec eigenvalues;
  Matrix eigenvectors;

  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }
};

/// Cyclic Jacobi eigen-decomposition. Throws InvalidMatrix on non-finite input.
Spectrum sym_eigen(const SymMatrix& a);

/// V f(diag) V^T
SymMatrix spectral_apply(const Spectrum& spectrum, const std::function<double(double)>& f);

struct SandwichVerdict {
  bool pass = false;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// True iff lo - tol <= lambda_min(A) and lambda_max(A) <= hi + tol.
SandwichVerdict psd_sandwich_check(const SymMatrix& a, double lo, double hi, double tol);

/// Solves A x = rhs for symmetric A; throws IllConditioned when
/// cond(A) > 1e12.
Vec solve_linear(const SymMatrix& a, std::span<const double> rhs);

/// Solves a general square system by LU with partial pivoting. Throws
/// IllConditioned on a (numerically) singular matrix.
Vec lu_solve(const Matrix& a, std::span<const double> rhs);

/// Minimum-norm-residual solution of an overdetermined (rows >= cols)
/// system via Householder QR. Rank-deficient columns get zero coefficients.
Vec least_squares(const Matrix& a, std::span<const double> rhs);

/// Lawson-Hanson nonnegative least squares: argmin ||A x - b|| s.t. x >= 0.
Vec nnls(const Matrix& a, std::span<const double> rhs, int max_iterations = 0);

}  // namespace helly
