#include "helly/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "helly/error.hpp"

namespace helly {

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double t, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += t * x[i];
}

Vec Matrix::column(std::size_t j) const {
  Vec c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

Vec Matrix::multiply(std::span<const double> x) const {
  Vec y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) y[i] = dot(row(i), x);
  return y;
}

Vec Matrix::multiply_transposed(std::span<const double> x) const {
  Vec y(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) axpy(x[i], row(i), y);
  return y;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

SymMatrix::SymMatrix(const Matrix& a) : SymMatrix(a.rows()) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidMatrix, "matrix is not square");
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      data_[i * dim_ + j] = v;
      data_[j * dim_ + i] = v;
    }
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.data_[i * dim + i] = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.data_[i * diag.size() + i] = diag[i];
  return m;
}

void SymMatrix::set(std::size_t i, std::size_t j, double value) {
  data_[i * dim_ + j] = value;
  data_[j * dim_ + i] = value;
}

void SymMatrix::add_rank_one(double t, std::span<const double> x) {
  for (std::size_t i = 0; i < dim_; ++i) {
    const double ti = t * x[i];
    for (std::size_t j = i; j < dim_; ++j) {
      const double v = data_[i * dim_ + j] + ti * x[j];
      data_[i * dim_ + j] = v;
      data_[j * dim_ + i] = v;
    }
  }
}

void SymMatrix::scale(double t) {
  for (double& v : data_) v *= t;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }

Vec SymMatrix::multiply(std::span<const double> x) const {
  Vec y(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i)
    y[i] = dot(std::span<const double>(data_.data() + i * dim_, dim_), x);
  return y;
}

double SymMatrix::quadratic_form(std::span<const double> x) const { return dot(x, multiply(x)); }

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += data_[i * dim_ + i];
  return t;
}

double SymMatrix::frobenius_norm() const { return norm2(data_); }

bool SymMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix SymMatrix::as_matrix() const {
  Matrix m(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

Spectrum sym_eigen(const SymMatrix& input) {
  if (!input.all_finite()) throw Error(ErrorCode::InvalidMatrix, "non-finite entry");
  const std::size_t n = input.dim();
  Matrix a = input.as_matrix();
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  const double scale = input.frobenius_norm();
  const double target = 1e-17 * scale;
  double previous_off = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    off = std::sqrt(2.0 * off);
    if (off <= target || off >= previous_off) break;
    previous_off = off;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  Spectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

SymMatrix spectral_apply(const Spectrum& spectrum, const std::function<double(double)>& f) {
  const std::size_t n = spectrum.eigenvalues.size();
  SymMatrix out(n);
  Vec col(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) col[i] = spectrum.eigenvectors(i, k);
    out.add_rank_one(f(spectrum.eigenvalues[k]), col);
  }
  return out;
}

SandwichVerdict psd_sandwich_check(const SymMatrix& a, double lo, double hi, double tol) {
  const Spectrum s = sym_eigen(a);
  SandwichVerdict v;
  v.lambda_min = s.min();
  v.lambda_max = s.max();
  v.pass = v.lambda_min >= lo - tol && v.lambda_max <= hi + tol;
  return v;
}

Vec solve_linear(const SymMatrix& a, std::span<const double> rhs) {
  const Spectrum s = sym_eigen(a);
  double largest = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  for (double l : s.eigenvalues) {
    largest = std::max(largest, std::abs(l));
    smallest = std::min(smallest, std::abs(l));
  }
  if (smallest == 0.0 || largest / smallest > 1e12)
    throw Error(ErrorCode::IllConditioned, "condition number above 1e12");

  const std::size_t n = a.dim();
  auto apply_inverse = [&](std::span<const double> r) {
    Vec coeff = s.eigenvectors.multiply_transposed(r);
    for (std::size_t k = 0; k < n; ++k) coeff[k] /= s.eigenvalues[k];
    return s.eigenvectors.multiply(coeff);
  };
  Vec x = apply_inverse(rhs);
  // one step of iterative refinement
  Vec residual = a.multiply(x);
  for (std::size_t i = 0; i < n; ++i) residual[i] = rhs[i] - residual[i];
  const Vec correction = apply_inverse(residual);
  for (std::size_t i = 0; i < n; ++i) x[i] += correction[i];
  return x;
}

Vec lu_solve(const Matrix& input, std::span<const double> rhs) {
  const std::size_t n = input.rows();
  Matrix a = input;
  Vec b(rhs.begin(), rhs.end());
  double scale = 0.0;
  for (double v : a.data()) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
    if (std::abs(a(pivot, k)) <= 1e-14 * std::max(scale, 1e-300))
      throw Error(ErrorCode::IllConditioned, "singular matrix in LU solve");
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
      std::swap(b[k], b[pivot]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

Vec least_squares(const Matrix& input, std::span<const double> rhs) {
  const std::size_t m = input.rows();
  const std::size_t n = input.cols();
  Matrix a = input;
  Vec b(rhs.begin(), rhs.end());
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Vec col_norm(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) col_norm[j] = norm2(a.column(j));
  const double tol = 1e-12 * std::max(1.0, *std::max_element(col_norm.begin(), col_norm.end()));

  std::size_t rank = 0;
  const std::size_t steps = std::min(m, n);
  for (std::size_t k = 0; k < steps; ++k) {
    // column pivoting on remaining norms
    std::size_t best = k;
    double best_norm = -1.0;
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += a(i, j) * a(i, j);
      if (s > best_norm) {
        best_norm = s;
        best = j;
      }
    }
    if (std::sqrt(best_norm) <= tol) break;
    if (best != k) {
      for (std::size_t i = 0; i < m; ++i) std::swap(a(i, k), a(i, best));
      std::swap(perm[k], perm[best]);
    }
    double alpha = 0.0;
    for (std::size_t i = k; i < m; ++i) alpha += a(i, k) * a(i, k);
    alpha = std::sqrt(alpha);
    if (a(k, k) > 0) alpha = -alpha;
    Vec u(m - k);
    for (std::size_t i = k; i < m; ++i) u[i - k] = a(i, k);
    u[0] -= alpha;
    const double unorm2 = dot(u, u);
    if (unorm2 > 0.0) {
      for (std::size_t j = k; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = k; i < m; ++i) s += u[i - k] * a(i, j);
        s = 2.0 * s / unorm2;
        for (std::size_t i = k; i < m; ++i) a(i, j) -= s * u[i - k];
      }
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += u[i - k] * b[i];
      s = 2.0 * s / unorm2;
      for (std::size_t i = k; i < m; ++i) b[i] -= s * u[i - k];
    }
    ++rank;
  }

  Vec z(n, 0.0);
  for (std::size_t i = rank; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < rank; ++j) s -= a(i, j) * z[j];
    z[i] = s / a(i, i);
  }
  Vec x(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) x[perm[j]] = z[j];
  return x;
}

Vec nnls(const Matrix& a, std::span<const double> b, int max_iterations) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 30);
  Vec x(n, 0.0);
  std::vector<bool> passive(n, false);

  auto gradient = [&]() {
    Vec r(b.begin(), b.end());
    const Vec ax = a.multiply(x);
    for (std::size_t i = 0; i < m; ++i) r[i] -= ax[i];
    return a.multiply_transposed(r);
  };
  auto solve_passive = [&]() {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < n; ++j)
      if (passive[j]) idx.push_back(j);
    Matrix sub(m, idx.size());
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < idx.size(); ++k) sub(i, k) = a(i, idx[k]);
    const Vec zs = least_squares(sub, b);
    Vec z(n, 0.0);
    for (std::size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zs[k];
    return z;
  };

  double scale = 0.0;
  for (double v : a.data()) scale = std::max(scale, std::abs(v));
  const double tol = 1e-13 * std::max(1.0, scale) * std::max(1.0, norm2(b));

  for (int outer = 0; outer < max_iterations; ++outer) {
    const Vec w = gradient();
    std::size_t entering = n;
    double best = tol;
    for (std::size_t j = 0; j < n; ++j)
      if (!passive[j] && w[j] > best) {
        best = w[j];
        entering = j;
      }
    if (entering == n) break;
    passive[entering] = true;

    for (int inner = 0; inner < max_iterations; ++inner) {
      Vec z = solve_passive();
      bool feasible = true;
      for (std::size_t j = 0; j < n; ++j)
        if (passive[j] && z[j] <= 0.0) feasible = false;
      if (feasible) {
        x = std::move(z);
        break;
      }
      double step = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (passive[j] && z[j] <= 0.0) step = std::min(step, x[j] / (x[j] - z[j]));
      for (std::size_t j = 0; j < n; ++j) {
        x[j] += step * (z[j] - x[j]);
        if (passive[j] && x[j] <= 1e-15) {
          passive[j] = false;
          x[j] = 0.0;
        }
      }
    }
  }
  return x;
}

}  // namespace helly
