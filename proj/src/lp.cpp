#include "helly/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "helly/error.hpp"

namespace helly {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr std::ptrdiff_t kNoColumn = -1;

class Tableau {
 public:
  // hint[i] names a column equal to e_i that may start the basis for row i
  // (only honored when b_i >= 0).
  Tableau(const StandardForm& lp, const std::vector<std::ptrdiff_t>& hint)
      : m_(lp.a.rows()), n_(lp.a.cols()), sign_(m_, 1.0) {
    std::vector<std::ptrdiff_t> start(m_, kNoColumn);
    for (std::size_t i = 0; i < m_; ++i) {
      if (lp.b[i] < 0.0) sign_[i] = -1.0;
      if (i < hint.size() && hint[i] != kNoColumn && lp.b[i] >= 0.0) start[i] = hint[i];
    }
    n_art_ = static_cast<std::size_t>(std::count(start.begin(), start.end(), kNoColumn));
    cols_ = n_ + n_art_;
    t_ = Matrix(m_, cols_ + 1);
    basis_.assign(m_, 0);
    std::size_t art = n_;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) t_(i, j) = sign_[i] * lp.a(i, j);
      t_(i, cols_) = sign_[i] * lp.b[i];
      if (start[i] == kNoColumn) {
        t_(i, art) = 1.0;
        art_row_.push_back(i);
        basis_[i] = art++;
      } else {
        basis_[i] = static_cast<std::size_t>(start[i]);
      }
    }
    double bmax = 0.0;
    for (double v : lp.b) bmax = std::max(bmax, std::abs(v));
    feas_tol_ = 1e-9 * std::max(1.0, bmax);
    budget_ = 50 * (m_ + cols_) + 1000;
  }

  std::size_t artificial_count() const { return n_art_; }
  bool is_artificial(std::size_t j) const { return j >= n_; }

  // Runs simplex minimizing `cost` (length cols_). Returns false if unbounded.
  bool optimize(const Vec& cost, bool allow_artificial) {
    price(cost);
    double cmax = 0.0;
    for (double c : cost) cmax = std::max(cmax, std::abs(c));
    const double dual_tol = 1e-10 * std::max(1.0, cmax);
    for (std::size_t iter = 0;; ++iter) {
      if (iter > budget_) throw Error(ErrorCode::SolverStall, "simplex pivot budget exceeded");
      std::size_t entering = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!allow_artificial && is_artificial(j)) continue;
        if (reduced_[j] < -dual_tol) {
          entering = j;
          break;
        }
      }
      if (entering == cols_) return true;

      std::size_t leaving = m_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double piv = t_(i, entering);
        if (piv <= kPivotTol) continue;
        const double ratio = t_(i, cols_) / piv;
        if (leaving == m_ || ratio < best_ratio - 1e-12 * std::max(1.0, std::abs(best_ratio))) {
          best_ratio = ratio;
          leaving = i;
        } else if (ratio <= best_ratio + 1e-12 * std::max(1.0, std::abs(best_ratio)) &&
                   basis_[i] < basis_[leaving]) {
          leaving = i;
        }
      }
      if (leaving == m_) return false;
      pivot(leaving, entering);
    }
  }

  double objective_value(const Vec& cost) const {
    double v = 0.0;
    for (std::size_t i = 0; i < m_; ++i) v += cost[basis_[i]] * t_(i, cols_);
    return v;
  }

  double feasibility_tolerance() const { return feas_tol_; }

  // After phase one: pivot zero-level artificials out of the basis where a
  // structural column allows it.
  void expel_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      std::size_t best = n_;
      double best_abs = kPivotTol;
      for (std::size_t j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > best_abs) {
          best_abs = std::abs(t_(i, j));
          best = j;
        }
      }
      if (best != n_) pivot(i, best);
    }
  }

  const std::vector<std::size_t>& basis() const { return basis_; }
  double rhs(std::size_t i) const { return t_(i, cols_); }
  double sign(std::size_t i) const { return sign_[i]; }
  std::size_t rows() const { return m_; }
  std::size_t structural() const { return n_; }
  std::size_t columns() const { return cols_; }

  // row whose unit vector the artificial column j started as
  std::size_t artificial_row(std::size_t j) const { return art_row_[j - n_]; }

 private:
  void price(const Vec& cost) {
    reduced_.assign(cols_, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) reduced_[j] = cost[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) reduced_[j] -= cb * t_(i, j);
    }
  }

  void pivot(std::size_t r, std::size_t e) {
    const double p = t_(r, e);
    auto row_r = t_.row(r);
    for (double& v : row_r) v /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = t_(i, e);
      if (f == 0.0) continue;
      auto row_i = t_.row(i);
      for (std::size_t j = 0; j <= cols_; ++j) row_i[j] -= f * row_r[j];
      row_i[e] = 0.0;
    }
    if (!reduced_.empty()) {
      const double f = reduced_[e];
      if (f != 0.0)
        for (std::size_t j = 0; j < cols_; ++j) reduced_[j] -= f * row_r[j];
      reduced_[e] = 0.0;
    }
    basis_[r] = e;
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t n_art_ = 0;
  std::size_t cols_ = 0;
  Vec sign_;
  Matrix t_;
  Vec reduced_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> art_row_;
  double feas_tol_ = 1e-9;
  std::size_t budget_ = 0;
};

StandardResult solve_with_hint(const StandardForm& lp, const std::vector<std::ptrdiff_t>& hint) {
  const std::size_t m = lp.a.rows();
  const std::size_t n = lp.a.cols();
  Tableau tab(lp, hint);

  if (tab.artificial_count() > 0) {
    Vec phase1(tab.columns(), 0.0);
    for (std::size_t j = n; j < tab.columns(); ++j) phase1[j] = 1.0;
    tab.optimize(phase1, true);
    if (tab.objective_value(phase1) > tab.feasibility_tolerance()) return {LpStatus::Infeasible, {}, {}, 0.0, {}};
    tab.expel_artificials();
  }

  Vec phase2(tab.columns(), 0.0);
  std::copy(lp.cost.begin(), lp.cost.end(), phase2.begin());
  if (!tab.optimize(phase2, false)) return {LpStatus::Unbounded, {}, {}, 0.0, {}};

  StandardResult out;
  out.status = LpStatus::Optimal;
  out.basis = tab.basis();
  out.y.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (out.basis[i] < n) out.y[out.basis[i]] = std::max(0.0, tab.rhs(i));

  // Re-solve the final basis against the original data. Artificials still
  // basic (redundant rows) contribute unit columns.
  Matrix basis_matrix(m, m);
  Vec cb(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t j = out.basis[k];
    if (j < n) {
      for (std::size_t i = 0; i < m; ++i) basis_matrix(i, k) = tab.sign(i) * lp.a(i, j);
      cb[k] = lp.cost[j];
    } else {
      basis_matrix(tab.artificial_row(j), k) = 1.0;
    }
  }
  Vec signed_b(m);
  for (std::size_t i = 0; i < m; ++i) signed_b[i] = tab.sign(i) * lp.b[i];
  try {
    const Vec yb = lu_solve(basis_matrix, signed_b);
    bool ok = true;
    for (std::size_t k = 0; k < m; ++k)
      if (yb[k] < -1e-9 * std::max(1.0, std::abs(yb[k]))) ok = false;
    if (ok) {
      std::fill(out.y.begin(), out.y.end(), 0.0);
      for (std::size_t k = 0; k < m; ++k)
        if (out.basis[k] < n) out.y[out.basis[k]] = std::max(0.0, yb[k]);
    }
    const Vec pi = lu_solve(basis_matrix.transposed(), cb);
    out.duals.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.duals[i] = tab.sign(i) * pi[i];
  } catch (const Error&) {
    out.duals.assign(m, std::numeric_limits<double>::quiet_NaN());
  }
  out.value = dot(lp.cost, out.y);
  return out;
}

}  // namespace

StandardResult solve_standard(const StandardForm& lp) { return solve_with_hint(lp, {}); }

LpResult solve_lp(const LinearProgram& lp) {
  const std::size_t nv = lp.objective.size();
  const std::size_t mi = lp.inequality.rows();
  const std::size_t me = lp.equality.rows();
  for (double v : lp.objective)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "non-finite objective");
  if ((mi > 0 && lp.inequality.cols() != nv) || (me > 0 && lp.equality.cols() != nv) ||
      lp.inequality_rhs.size() != mi || lp.equality_rhs.size() != me)
    throw Error(ErrorCode::InvalidInput, "inconsistent linear program dimensions");

  const std::size_t split = lp.nonnegative ? nv : 2 * nv;
  StandardForm sf;
  sf.a = Matrix(mi + me, split + mi);
  sf.b.assign(mi + me, 0.0);
  sf.cost.assign(split + mi, 0.0);
  std::vector<std::ptrdiff_t> hint(mi + me, kNoColumn);
  for (std::size_t j = 0; j < nv; ++j) {
    sf.cost[j] = -lp.objective[j];
    if (!lp.nonnegative) sf.cost[nv + j] = lp.objective[j];
  }
  auto fill_row = [&](std::size_t r, std::span<const double> row) {
    for (std::size_t j = 0; j < nv; ++j) {
      if (!std::isfinite(row[j])) throw Error(ErrorCode::InvalidInput, "non-finite constraint");
      sf.a(r, j) = row[j];
      if (!lp.nonnegative) sf.a(r, nv + j) = -row[j];
    }
  };
  for (std::size_t i = 0; i < mi; ++i) {
    fill_row(i, lp.inequality.row(i));
    sf.a(i, split + i) = 1.0;
    sf.b[i] = lp.inequality_rhs[i];
    hint[i] = static_cast<std::ptrdiff_t>(split + i);
  }
  for (std::size_t i = 0; i < me; ++i) {
    fill_row(mi + i, lp.equality.row(i));
    sf.b[mi + i] = lp.equality_rhs[i];
  }

  const StandardResult r = solve_with_hint(sf, hint);
  LpResult out;
  out.status = r.status;
  if (r.status != LpStatus::Optimal) return out;
  out.x.assign(nv, 0.0);
  for (std::size_t j = 0; j < nv; ++j) out.x[j] = lp.nonnegative ? r.y[j] : r.y[j] - r.y[nv + j];
  out.value = dot(lp.objective, out.x);
  return out;
}

bool is_feasible(std::span<const Halfspace> constraints, std::size_t dim) {
  LinearProgram lp;
  lp.objective.assign(dim, 0.0);
  lp.inequality = Matrix(constraints.size(), dim);
  lp.inequality_rhs.resize(constraints.size());
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    std::copy(constraints[i].normal.begin(), constraints[i].normal.end(), lp.inequality.row(i).begin());
    lp.inequality_rhs[i] = constraints[i].offset;
  }
  return solve_lp(lp).status == LpStatus::Optimal;
}

SupportResult support_query(std::span<const Halfspace> constraints, std::span<const double> direction) {
  const std::size_t dim = direction.size();
  const std::size_t m = constraints.size();
  for (double v : direction)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "non-finite direction");

  // dual: minimize h . y  s.t.  G^T y = u,  y >= 0
  StandardForm dual;
  dual.a = Matrix(dim, m);
  dual.b.assign(direction.begin(), direction.end());
  dual.cost.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (constraints[k].normal.size() != dim) throw Error(ErrorCode::InvalidInput, "constraint dimension mismatch");
    for (std::size_t i = 0; i < dim; ++i) dual.a(i, k) = constraints[k].normal[i];
    dual.cost[k] = constraints[k].offset;
  }
  const StandardResult r = solve_standard(dual);
  SupportResult out;
  if (r.status == LpStatus::Optimal) {
    out.status = LpStatus::Optimal;
    out.value = r.value;
    out.maximizer = r.duals;
    return out;
  }
  // dual unbounded means the primal is empty; dual infeasible means the
  // primal is unbounded or empty.
  if (r.status == LpStatus::Unbounded || !is_feasible(constraints, dim))
    throw Error(ErrorCode::EmptyBody, "halfspace intersection is empty");
  out.status = LpStatus::Unbounded;
  out.value = std::numeric_limits<double>::infinity();
  return out;
}

double support_h_polytope(std::span<const Halfspace> constraints, std::span<const double> direction) {
  return support_query(constraints, direction).value;
}

}  // namespace helly
