#include "helly/john.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "helly/error.hpp"

namespace helly {
namespace {

constexpr long kMaxKhachiyanIterations = 5'000'000;

struct CenteredState {
  std::vector<Vec> q;
  Vec p;
  SymMatrix inverse;  // Lambda^{-1}
  Vec omega;
};

SymMatrix moment(std::span<const Vec> q, std::span<const double> p) {
  SymMatrix lambda(q.front().size());
  for (std::size_t k = 0; k < q.size(); ++k)
    if (p[k] > 0.0) lambda.add_rank_one(p[k], q[k]);
  return lambda;
}

void refresh(CenteredState& s) {
  const SymMatrix lambda = moment(s.q, s.p);
  const Spectrum spec = sym_eigen(lambda);
  if (spec.min() <= 1e-13 * std::max(spec.max(), 1e-300))
    throw Error(ErrorCode::DegenerateSpan, "points do not span the space");
  s.inverse = spectral_apply(spec, [](double l) { return 1.0 / l; });
  s.omega.resize(s.q.size());
  for (std::size_t k = 0; k < s.q.size(); ++k) s.omega[k] = s.inverse.quadratic_form(s.q[k]);
}

// Weighted Khachiyan with away steps on the centered problem in dimension
// D = q[0].size(). Returns the weights and the final gap.
MveeResult khachiyan(std::vector<Vec> q, double eps) {
  const std::size_t m = q.size();
  if (m == 0) throw Error(ErrorCode::DegenerateSpan, "empty point set");
  const double dim = static_cast<double>(q.front().size());
  CenteredState s;
  s.q = std::move(q);
  s.p.assign(m, 1.0 / static_cast<double>(m));
  refresh(s);

  MveeResult out;
  Vec u;
  for (long iter = 0;; ++iter) {
    std::size_t up = 0;
    std::size_t down = m;
    for (std::size_t k = 0; k < m; ++k) {
      if (s.omega[k] > s.omega[up]) up = k;
      if (s.p[k] > 0.0 && (down == m || s.omega[k] < s.omega[down])) down = k;
    }
    const double eps_up = s.omega[up] / dim - 1.0;
    const double eps_down = 1.0 - s.omega[down] / dim;
    out.gap = std::max(eps_up, eps_down);
    out.iterations = iter;
    if (out.gap <= eps) break;
    if (iter >= kMaxKhachiyanIterations)
      throw Error(ErrorCode::JohnExtractionFailed, "MVEE iteration budget exhausted");

    const std::size_t j = eps_up >= eps_down ? up : down;
    const double wj = s.omega[j];
    double beta = (wj / dim - 1.0) / (wj - 1.0);
    if (j == down && eps_up < eps_down) {
      // for omega <= 1 the objective decreases all the way to the drop step
      const double drop = -s.p[j] / (1.0 - s.p[j]);
      beta = wj <= 1.0 ? drop : std::max(beta, drop);
    }

    u = s.inverse.multiply(s.q[j]);
    const double denom = 1.0 - beta + beta * wj;
    for (std::size_t k = 0; k < m; ++k) {
      const double c = dot(s.q[k], u);
      s.omega[k] = (s.omega[k] - beta * c * c / denom) / (1.0 - beta);
    }
    s.inverse.add_rank_one(-beta / denom, u);
    s.inverse.scale(1.0 / (1.0 - beta));
    for (double& pk : s.p) pk *= (1.0 - beta);
    s.p[j] += beta;
    if (s.p[j] < 1e-300) s.p[j] = 0.0;

    if (iter % 256 == 255) refresh(s);
  }
  // renormalize and rebuild from the final weights so downstream identities
  // are exact for these weights
  double total = 0.0;
  for (double pk : s.p) total += pk;
  for (double& pk : s.p) pk /= total;
  out.weights = s.p;
  return out;
}

SymMatrix inverse_sqrt(const SymMatrix& a) {
  const Spectrum spec = sym_eigen(a);
  if (spec.min() <= 0.0) throw Error(ErrorCode::DegenerateSpan, "moment matrix is not positive definite");
  return spectral_apply(spec, [](double l) { return 1.0 / std::sqrt(l); });
}

}  // namespace

MveeResult mvee_centered(std::span<const Vec> points, double eps) {
  MveeResult out = khachiyan(std::vector<Vec>(points.begin(), points.end()), eps);
  const std::size_t n = points.front().size();
  SymMatrix lambda = moment(points, out.weights);
  const Spectrum spec = sym_eigen(lambda);
  SymMatrix shape = spectral_apply(spec, [](double l) { return 1.0 / l; });
  shape.scale(1.0 / static_cast<double>(n));
  out.ellipsoid = {Vec(n, 0.0), std::move(shape)};
  return out;
}

MveeResult mvee_general(std::span<const Vec> points, double eps) {
  const std::size_t n = points.front().size();
  std::vector<Vec> lifted;
  lifted.reserve(points.size());
  for (const Vec& x : points) {
    Vec q = x;
    q.push_back(1.0);
    lifted.push_back(std::move(q));
  }
  MveeResult out = khachiyan(std::move(lifted), eps);
  Vec center(n, 0.0);
  for (std::size_t k = 0; k < points.size(); ++k) axpy(out.weights[k], points[k], center);
  SymMatrix scatter = moment(points, out.weights);
  scatter.add_rank_one(-1.0, center);
  const Spectrum spec = sym_eigen(scatter);
  SymMatrix shape = spectral_apply(spec, [](double l) { return 1.0 / l; });
  shape.scale(1.0 / static_cast<double>(n));
  out.ellipsoid = {std::move(center), std::move(shape)};
  return out;
}

void measure_residuals(JohnDecomposition& d, std::size_t dim) {
  SymMatrix sum(dim);
  Vec bary(dim, 0.0);
  double total = 0.0;
  double dev = 0.0;
  for (std::size_t j = 0; j < d.vectors.size(); ++j) {
    sum.add_rank_one(d.weights[j], d.vectors[j]);
    axpy(d.weights[j], d.vectors[j], bary);
    total += d.weights[j];
    dev = std::max(dev, std::abs(norm2(d.vectors[j]) - 1.0));
  }
  d.residual_identity = (sum - SymMatrix::identity(dim)).frobenius_norm();
  d.residual_barycenter = norm2(bary);
  d.residual_trace = std::abs(total - static_cast<double>(dim));
  d.max_unit_deviation = dev;
}

JohnResult john_decomposition(const TaggedPointSet& points, bool centered, const JohnOptions& options) {
  if (points.points.empty()) throw Error(ErrorCode::DegenerateSpan, "no points");
  const std::size_t n = points.points.front().size();
  const std::size_t m = points.points.size();

  JohnResult out;
  out.mvee = centered ? mvee_general(points.points, options.eps_mvee) : mvee_centered(points.points, options.eps_mvee);
  const Vec& p = out.mvee.weights;
  out.center = out.mvee.ellipsoid.center;

  // Lowner map L = M^{1/2}; computed from the moment matrix of the final
  // weights so that n L S L = I holds for exactly these weights.
  SymMatrix scatter = moment(points.points, p);
  if (centered) scatter.add_rank_one(-1.0, out.center);
  out.lowner_map = inverse_sqrt(scatter);
  out.lowner_map.scale(1.0 / std::sqrt(static_cast<double>(n)));

  out.mapped_points.reserve(m);
  for (const Vec& x : points.points) {
    Vec shifted = x;
    for (std::size_t i = 0; i < n; ++i) shifted[i] -= out.center[i];
    out.mapped_points.push_back(out.lowner_map.multiply(shifted));
  }

  JohnDecomposition& d = out.decomposition;
  d.centered = centered;
  const double floor = 1e-9 / static_cast<double>(m);
  const double slack = std::max(10.0 * options.eps_mvee, 1e-12);
  // contact points are snapped onto the sphere; the raw distance is reported
  double raw_deviation = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    if (p[k] <= floor) continue;
    const double r2 = dot(out.mapped_points[k], out.mapped_points[k]);
    if (r2 < 1.0 - slack) continue;
    const double r = std::sqrt(r2);
    raw_deviation = std::max(raw_deviation, std::abs(r - 1.0));
    Vec unit = out.mapped_points[k];
    for (double& x : unit) x /= r;
    d.vectors.push_back(std::move(unit));
    d.weights.push_back(static_cast<double>(n) * p[k]);
    d.sources.push_back(k);
    d.owners.push_back(points.owners.at(k));
  }
  measure_residuals(d, n);

  if (centered && !d.vectors.empty()) {
    // refit weights on [v; vec(v v^T)] = [0; vec(I)]
    const std::size_t rows = n + n * n;
    Matrix design(rows, d.vectors.size());
    Vec target(rows, 0.0);
    for (std::size_t i = 0; i < n; ++i) target[n + i * n + i] = 1.0;
    for (std::size_t j = 0; j < d.vectors.size(); ++j) {
      const Vec& v = d.vectors[j];
      for (std::size_t i = 0; i < n; ++i) design(i, j) = v[i];
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) design(n + a * n + b, j) = v[a] * v[b];
    }
    const Vec refit = nnls(design, target);
    JohnDecomposition candidate = d;
    candidate.vectors.clear();
    candidate.weights.clear();
    candidate.sources.clear();
    candidate.owners.clear();
    for (std::size_t j = 0; j < d.vectors.size(); ++j) {
      if (refit[j] <= 0.0) continue;
      candidate.vectors.push_back(d.vectors[j]);
      candidate.weights.push_back(refit[j]);
      candidate.sources.push_back(d.sources[j]);
      candidate.owners.push_back(d.owners[j]);
    }
    measure_residuals(candidate, n);
    const double before = std::hypot(d.residual_identity, d.residual_barycenter);
    const double after = std::hypot(candidate.residual_identity, candidate.residual_barycenter);
    if (!candidate.vectors.empty() && after < before) d = std::move(candidate);
  }

  d.max_unit_deviation = std::max(d.max_unit_deviation, raw_deviation);
  const double tol = options.tol_john;
  const bool ok = d.residual_identity <= tol && d.residual_trace <= static_cast<double>(n) * tol &&
                  (!centered || d.residual_barycenter <= tol) && d.max_unit_deviation <= 1e-6;
  if (!ok) {
    std::ostringstream msg;
    msg << "residual_identity=" << d.residual_identity << " residual_trace=" << d.residual_trace
        << " residual_barycenter=" << d.residual_barycenter << " unit_deviation=" << d.max_unit_deviation
        << " (tol " << tol << ")";
    throw Error(ErrorCode::JohnExtractionFailed, msg.str());
  }
  return out;
}

}  // namespace helly
