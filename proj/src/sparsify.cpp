#include "helly/sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "helly/error.hpp"

namespace helly {

double gamma_d(double d) {
  const double r = std::sqrt(d);
  return (r + 1.0) / (r - 1.0);
}

namespace {

struct Barrier {
  double upper;
  double lower;
};

double barrier_sum(const Vec& eig, double shift, bool upper) {
  double s = 0.0;
  for (double l : eig) s += upper ? 1.0 / (shift - l) : 1.0 / (l - shift);
  return s;
}

std::string dump_state(std::size_t step, const Barrier& bar, const Spectrum& spec) {
  std::ostringstream os;
  os << "step " << step << ": u=" << bar.upper << " l=" << bar.lower << " lambda=[" << spec.min() << ", "
     << spec.max() << "]";
  return os.str();
}

}  // namespace

SparsifierResult bss_select(std::span<const Vec> vectors, std::span<const double> weights, double d) {
  if (!(d > 1.0)) throw Error(ErrorCode::InvalidInput, "d must exceed 1");
  if (vectors.empty() || vectors.size() != weights.size())
    throw Error(ErrorCode::InvalidInput, "vectors and weights must be non-empty and of equal length");
  const std::size_t n = vectors.front().size();
  const std::size_t m = vectors.size();
  const double nd = static_cast<double>(n);
  const double rd = std::sqrt(d);

  std::vector<Vec> w(m);
  SymMatrix input(n);
  for (std::size_t j = 0; j < m; ++j) {
    if (vectors[j].size() != n || !(weights[j] > 0.0))
      throw Error(ErrorCode::InvalidInput, "bad vector dimension or non-positive weight");
    w[j] = vectors[j];
    const double sa = std::sqrt(weights[j]);
    for (double& x : w[j]) x *= sa;
    input.add_rank_one(1.0, w[j]);
  }

  SparsifierResult out;
  out.d = d;
  out.gamma = gamma_d(d);
  out.input_residual = (input - SymMatrix::identity(n)).frobenius_norm();

  const double delta_l = 1.0;
  const double delta_u = out.gamma;
  Barrier bar{nd * (d + rd) / (rd - 1.0), -nd * rd};
  const std::size_t budget = static_cast<std::size_t>(std::ceil(d * nd - 1e-9));

  SymMatrix a(n);
  Vec s(m, 0.0);
  Vec y(n);
  for (std::size_t step = 0; step < budget; ++step) {
    const Spectrum spec = sym_eigen(a);
    const Vec& lam = spec.eigenvalues;
    const double u1 = bar.upper + delta_u;
    const double l1 = bar.lower + delta_l;
    if (spec.max() >= bar.upper || spec.min() <= l1)
      throw Error(ErrorCode::BarrierStuck, "barrier violated at " + dump_state(step, bar, spec));
    const double du = barrier_sum(lam, bar.upper, true) - barrier_sum(lam, u1, true);
    const double dl = barrier_sum(lam, l1, false) - barrier_sum(lam, bar.lower, false);

    std::size_t pick = m;
    double pick_u = 0.0;
    double pick_l = 0.0;
    for (std::size_t j = 0; j < m && pick == m; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += spec.eigenvectors(i, k) * w[j][i];
        y[k] = acc;
      }
      double u_quad1 = 0.0, u_quad2 = 0.0, l_quad1 = 0.0, l_quad2 = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double y2 = y[k] * y[k];
        const double gu = 1.0 / (u1 - lam[k]);
        const double gl = 1.0 / (lam[k] - l1);
        u_quad1 += y2 * gu;
        u_quad2 += y2 * gu * gu;
        l_quad1 += y2 * gl;
        l_quad2 += y2 * gl * gl;
      }
      const double uq = u_quad2 / du + u_quad1;
      const double lq = l_quad2 / dl - l_quad1;
      if (uq > 0.0 && lq > 0.0 && uq <= lq * (1.0 + 1e-12)) {
        pick = j;
        pick_u = uq;
        pick_l = lq;
      }
    }
    if (pick == m) throw Error(ErrorCode::BarrierStuck, "no admissible vector at " + dump_state(step, bar, spec));
    const double t = 2.0 / (pick_u + pick_l);
    a.add_rank_one(t, w[pick]);
    s[pick] += t;
    bar = {u1, l1};
    out.steps = step + 1;
  }

  const Spectrum raw = sym_eigen(a);
  if (!(raw.min() > 0.0)) throw Error(ErrorCode::BarrierStuck, "selection is singular");
  SymMatrix scaled(n);
  for (std::size_t j = 0; j < m; ++j) {
    if (s[j] <= 0.0) continue;
    out.sigma.push_back(j);
    out.b.push_back(s[j] / raw.min());
    scaled.add_rank_one(out.b.back(), w[j]);
  }
  const Spectrum fin = sym_eigen(scaled);
  out.lambda_min = fin.min();
  out.lambda_max = fin.max();
  const double r = out.input_residual;
  const double allowed = out.gamma * out.gamma * (1.0 + 1e-6) * (r < 1.0 ? (1.0 + r) / (1.0 - r) : 0.0);
  out.certified = out.lambda_min > 0.0 && out.lambda_max / out.lambda_min <= allowed &&
                  out.sigma.size() <= budget;
  return out;
}

OperatorCertificate certify_operator_T(std::span<const Vec> vectors, std::span<const std::size_t> sigma,
                                       std::span<const double> b, std::span<const double> v, double eps) {
  const std::size_t n = v.size();
  Vec g(n, 0.0);
  double total = 0.0;
  SymMatrix a(n);
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    const Vec& x = vectors[sigma[k]];
    axpy(b[k], x, g);
    total += b[k];
    a.add_rank_one(b[k], x);
  }
  SymMatrix t(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) t.set(i, j, g[i] * v[j] + v[i] * g[j] + total * v[i] * v[j]);

  OperatorCertificate out;
  out.t_norm = total * dot(v, v);
  const Spectrum ts = sym_eigen(t);
  out.t_eigen = std::max(std::abs(ts.min()), std::abs(ts.max()));
  out.t_pass = std::max(out.t_norm, out.t_eigen) <= eps * (1.0 + 1e-9);
  const Spectrum as = sym_eigen(a);
  out.a_min = as.min();
  out.a_max = as.max();
  out.a_pass = out.a_min >= 1.0 - eps - 1e-6 && out.a_max <= 4.0 + 3.0 * eps + 1e-6;
  out.trace_residual = std::abs(a.trace() + t.trace() - (total - out.t_norm));
  return out;
}

ShiftedDecomposition shifted_select(std::span<const Vec> vectors, std::span<const double> weights, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidInput, "eps must be positive");
  if (vectors.empty()) throw Error(ErrorCode::InvalidInput, "no vectors");
  const std::size_t n = vectors.front().size();
  const double nd = static_cast<double>(n);
  std::vector<Vec> lifted;
  lifted.reserve(vectors.size());
  for (const Vec& x : vectors) {
    Vec q = x;
    q.push_back(1.0 / std::sqrt(nd));
    lifted.push_back(std::move(q));
  }

  ShiftedDecomposition out;
  out.eps = eps;
  for (double d : kShiftEscalation) {
    std::ostringstream line;
    line << "d=" << d << ": ";
    SparsifierResult sp;
    try {
      sp = bss_select(lifted, weights, d);
    } catch (const Error& e) {
      line << e.what();
      out.trail.push_back(line.str());
      continue;
    }

    ShiftedDecomposition cur;
    cur.eps = eps;
    cur.d = d;
    cur.sigma = sp.sigma;
    cur.b.resize(sp.sigma.size());
    for (std::size_t k = 0; k < sp.sigma.size(); ++k) cur.b[k] = sp.b[k] * weights[sp.sigma[k]];

    auto shifted_sum = [&](double& total, Vec& shift) {
      Vec g(n, 0.0);
      total = 0.0;
      for (std::size_t k = 0; k < cur.sigma.size(); ++k) {
        axpy(cur.b[k], vectors[cur.sigma[k]], g);
        total += cur.b[k];
      }
      shift = g;
      for (double& x : shift) x = -x / total;
      SymMatrix m(n);
      Vec y(n);
      for (std::size_t k = 0; k < cur.sigma.size(); ++k) {
        const Vec& x = vectors[cur.sigma[k]];
        for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + shift[i];
        m.add_rank_one(cur.b[k], y);
      }
      return sym_eigen(m);
    };

    double total = 0.0;
    Spectrum spec = shifted_sum(total, cur.v);
    if (!(spec.min() > 0.0)) {
      line << "shifted sum is singular";
      out.trail.push_back(line.str());
      continue;
    }
    const double scale = 1.0 / spec.min();
    for (double& x : cur.b) x *= scale;
    spec = shifted_sum(total, cur.v);

    cur.sum_b = total;
    cur.shift_norm_sq = dot(cur.v, cur.v);
    Vec bary(n, 0.0);
    for (std::size_t k = 0; k < cur.sigma.size(); ++k) {
      const Vec& x = vectors[cur.sigma[k]];
      for (std::size_t i = 0; i < n; ++i) bary[i] += cur.b[k] * (x[i] + cur.v[i]);
    }
    cur.barycenter_residual = norm2(bary);
    cur.shifted_min = spec.min();
    cur.shifted_max = spec.max();
    cur.barycenter_pass = cur.barycenter_residual <= 1e-10;
    cur.shift_pass = cur.shift_norm_sq * total <= eps * (1.0 + 1e-12);
    cur.sum_pass = total >= nd * (1.0 - 1e-6) && total <= (4.0 + 2.0 * eps) * nd * (1.0 + 1e-6);
    cur.shifted_pass = cur.shifted_min >= 1.0 - 1e-9 && cur.shifted_max <= 4.0 + eps + 1e-9;
    cur.operator_t = certify_operator_T(vectors, cur.sigma, cur.b, cur.v, eps);

    line << "|sigma|=" << cur.sigma.size() << " sum_b=" << total << " (sum_b)|v|^2=" << total * cur.shift_norm_sq
         << " shifted=[" << cur.shifted_min << ", " << cur.shifted_max << "] barycenter=" << cur.barycenter_residual;
    const bool ok = cur.barycenter_pass && cur.shift_pass && cur.sum_pass && cur.shifted_pass && cur.operator_t.t_pass;
    line << (ok ? " ok" : " rejected");
    out.trail.push_back(line.str());
    if (ok) {
      cur.trail = std::move(out.trail);
      return cur;
    }
  }
  std::string msg = "no escalation step certified:";
  for (const std::string& l : out.trail) msg += "\n  " + l;
  throw Error(ErrorCode::ShiftCertificateFailed, msg);
}

}  // namespace helly
