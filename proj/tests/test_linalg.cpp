#include <cmath>

#include "doctest.h"
#include "helly/error.hpp"
#include "helly/linalg.hpp"
#include "helly/rng.hpp"

using namespace helly;

namespace {

SymMatrix random_symmetric(Rng& rng, std::size_t n, double scale = 1.0) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = scale * rng.normal();
  return SymMatrix(a);
}

SymMatrix random_spd(Rng& rng, std::size_t n) {
  SymMatrix a(n);
  for (std::size_t k = 0; k < 2 * n; ++k) {
    Vec x(n);
    for (double& v : x) v = rng.normal();
    a.add_rank_one(1.0, x);
  }
  return a;
}

double reconstruction_error(const SymMatrix& a, const Spectrum& s) {
  SymMatrix r = spectral_apply(s, [](double l) { return l; });
  return (r - a).frobenius_norm();
}

double orthogonality_error(const Spectrum& s) {
  const Matrix& v = s.eigenvectors;
  const Matrix vtv = v.transposed() * v;
  double err = 0.0;
  for (std::size_t i = 0; i < vtv.rows(); ++i)
    for (std::size_t j = 0; j < vtv.cols(); ++j) {
      const double d = vtv(i, j) - (i == j ? 1.0 : 0.0);
      err += d * d;
    }
  return std::sqrt(err);
}

}  // namespace

TEST_CASE("symmetrization on construction") {
  Matrix a(2, 2);
  a(0, 1) = 1.0;
  a(1, 0) = 0.0;
  const SymMatrix s(a);
  CHECK(s(0, 1) == s(1, 0));
  CHECK(s(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("sym_eigen small cases") {
  {
    const auto s = sym_eigen(SymMatrix::identity(2));
    CHECK(s.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(s.eigenvalues[1] == doctest::Approx(1.0));
  }
  {
    const Vec d{3.0, 2.0};
    const auto s = sym_eigen(SymMatrix::diagonal(d));
    CHECK(s.eigenvalues[0] == doctest::Approx(2.0));
    CHECK(s.eigenvalues[1] == doctest::Approx(3.0));
  }
  {
    Matrix a(2, 2);
    a(0, 1) = a(1, 0) = 1.0;
    const auto s = sym_eigen(SymMatrix(a));
    CHECK(s.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(s.eigenvalues[1] == doctest::Approx(1.0));
  }
}

TEST_CASE("sym_eigen rejects non-finite input") {
  SymMatrix a(2);
  a.set(0, 1, std::nan(""));
  CHECK_THROWS_AS(sym_eigen(a), Error);
  try {
    sym_eigen(a);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidMatrix);
  }
}

TEST_CASE("sym_eigen reconstruction and orthonormality on random matrices") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.below(30);
    const SymMatrix a = random_symmetric(rng, n, std::pow(10.0, rng.uniform(-3, 3)));
    const Spectrum s = sym_eigen(a);
    CHECK(reconstruction_error(a, s) <= 1e-9 * (1.0 + a.frobenius_norm()));
    CHECK(orthogonality_error(s) <= 1e-9);
    for (std::size_t k = 1; k < n; ++k) CHECK(s.eigenvalues[k - 1] <= s.eigenvalues[k]);
  }
}

TEST_CASE("psd_sandwich_check") {
  const Vec d12{1.0, 2.0};
  auto v = psd_sandwich_check(SymMatrix::diagonal(d12), 1.0, 2.0, 0.0);
  CHECK(v.pass);
  CHECK(v.lambda_min == doctest::Approx(1.0));
  CHECK(v.lambda_max == doctest::Approx(2.0));

  const Vec d{0.5, 2.0};
  v = psd_sandwich_check(SymMatrix::diagonal(d), 1.0, 9.0, 1e-9);
  CHECK_FALSE(v.pass);
  CHECK(v.lambda_min == doctest::Approx(0.5));
}

TEST_CASE("psd_sandwich_check is monotone in the interval") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const SymMatrix a = random_spd(rng, 4);
    const double lo = rng.uniform(0.0, 3.0);
    const double hi = lo + rng.uniform(0.0, 20.0);
    const bool tight = psd_sandwich_check(a, lo, hi, 0.0).pass;
    const bool loose = psd_sandwich_check(a, lo - rng.uniform(), hi + rng.uniform(), 0.0).pass;
    if (tight) CHECK(loose);
  }
}

TEST_CASE("solve_linear") {
  const Vec rhs{1.0, 2.0, 3.0};
  const Vec x = solve_linear(SymMatrix::identity(3), rhs);
  for (int i = 0; i < 3; ++i) CHECK(x[i] == doctest::Approx(rhs[i]));

  const Vec d{2.0, 4.0};
  const Vec r2{2.0, 4.0};
  const Vec y = solve_linear(SymMatrix::diagonal(d), r2);
  CHECK(y[0] == doctest::Approx(1.0));
  CHECK(y[1] == doctest::Approx(1.0));

  const Vec bad{1.0, 1e-14};
  CHECK_THROWS_AS(solve_linear(SymMatrix::diagonal(bad), r2), Error);
}

TEST_CASE("solve_linear residual on random SPD systems") {
  Rng rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const SymMatrix a = random_spd(rng, 5);
    Vec rhs(5);
    for (double& v : rhs) v = rng.normal();
    const Vec x = solve_linear(a, rhs);
    Vec r = a.multiply(x);
    for (std::size_t i = 0; i < 5; ++i) r[i] -= rhs[i];
    CHECK(norm2(r) <= 1e-8 * (1.0 + norm2(rhs)));
  }
}

TEST_CASE("least squares and nnls") {
  Matrix a(3, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;
  a(2, 0) = 1.0;
  a(2, 1) = 1.0;
  const Vec b{1.0, 2.0, 3.0};
  const Vec x = least_squares(a, b);
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(2.0));

  // unconstrained optimum has a negative coordinate; nnls clips it
  const Vec b2{-1.0, 2.0, 1.0};
  const Vec z = nnls(a, b2);
  CHECK(z[0] == doctest::Approx(0.0));
  CHECK(z[1] == doctest::Approx(1.5));
}
