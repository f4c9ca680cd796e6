#include "helly/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "helly/error.hpp"
#include "helly/lp.hpp"
#include "helly/oracle.hpp"
#include "helly/rng.hpp"

namespace helly {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxRecenter = 200;

template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(name) + ": " + e.detail());
  }
}

JohnRecord make_record(const JohnResult& jr) {
  JohnRecord r;
  const JohnDecomposition& d = jr.decomposition;
  r.vectors = d.vectors;
  r.weights = d.weights;
  r.sources = d.sources;
  r.owners = d.owners;
  r.lowner_map = jr.lowner_map;
  r.center = jr.center;
  r.residual_identity = d.residual_identity;
  r.residual_barycenter = d.residual_barycenter;
  r.residual_trace = d.residual_trace;
  r.max_unit_deviation = d.max_unit_deviation;
  r.mvee_gap = jr.mvee.gap;
  r.mvee_iterations = jr.mvee.iterations;
  return r;
}

// Distinct owners of the listed contact indices, sorted.
std::vector<std::size_t> owners_of(const JohnRecord& john, std::span<const std::size_t> contacts) {
  std::set<std::size_t> s;
  for (std::size_t k : contacts) s.insert(john.owners.at(k));
  return {s.begin(), s.end()};
}

std::vector<std::string> ids_of(const BodyFamily& family, std::span<const std::size_t> selected) {
  std::vector<std::string> ids;
  for (std::size_t i : selected) ids.push_back(family.bodies.at(i).id);
  return ids;
}

double pow_n32(std::size_t n) { return std::pow(static_cast<double>(n), 1.5); }

// Barvinok check: the selected contact points X against all generators C.
double barvinok_worst(const TaggedPointSet& gens, const JohnRecord& john, std::span<const std::size_t> sigma,
                      double gamma, std::size_t samples, std::uint64_t seed) {
  const std::size_t n = gens.points.front().size();
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t t = 0; t < samples; ++t) {
    const Vec z = rng.unit_vector(n);
    double all = 0.0;
    for (const Vec& x : gens.points) all = std::max(all, std::abs(dot(z, x)));
    double sel = 0.0;
    for (std::size_t k : sigma) sel = std::max(sel, std::abs(dot(z, gens.points.at(john.sources.at(k)))));
    const double ratio = sel > 0.0 ? all / (gamma * std::sqrt(static_cast<double>(n)) * sel) : kInf;
    worst = std::max(worst, ratio);
  }
  return worst;
}

struct Recentered {
  Vec z;
  std::size_t iterations = 0;
  double offset = 0.0;
};

// Moves z until the minimal ellipsoid of the polar generators is centered at
// the origin: z <- z + x0 with x0 the center of the polar of that ellipsoid.
Recentered recenter(const BodyFamily& family, Vec z, double eps_mvee) {
  Recentered best{z, 0, kInf};
  int since_best = 0;
  for (int it = 0; it < kMaxRecenter; ++it) {
    const BodyFamily f = normalize_family(family, z);
    const TaggedPointSet gens = polar_generators(f);
    const MveeResult mv = mvee_general(gens.points, eps_mvee);
    const Vec& c = mv.ellipsoid.center;
    const Vec mc = mv.ellipsoid.shape.multiply(c);
    const double q = dot(c, mc);
    const double offset = std::sqrt(std::max(q, 0.0));
    if (offset < best.offset) {
      best = {z, static_cast<std::size_t>(it), offset};
      since_best = 0;
    } else if (++since_best >= 5) {
      break;
    }
    if (offset <= 1e-9) break;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] -= mc[i] / (1.0 - q);
  }
  return best;
}

void fill_common(SelectionCertificate& cert, const BodyFamily& family, const PipelineOptions& options) {
  cert.mode = family.mode;
  cert.dim = family.dim;
  cert.body_count = family.bodies.size();
  cert.constraint_count = family.constraint_count();
  cert.seed = options.seed;
  cert.tol_john = options.tol_john;
}

double diameter_or_inf(const BodyFamily& f, std::span<const std::size_t> sel) {
  try {
    return diameter_exact(family_halfspaces(f, sel), f.dim);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnboundedBody) return kInf;
    throw;
  }
}

bool near(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

}  // namespace

bool SelectionCertificate::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.second; });
}

void SelectionCertificate::set_verdict(const std::string& name, bool pass) {
  for (auto& v : verdicts)
    if (v.first == name) {
      v.second = pass;
      return;
    }
  verdicts.emplace_back(name, pass);
}

double binomial(std::size_t s, std::size_t k) {
  if (k > s) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(s - k + i) / static_cast<double>(i);
  return std::round(r);
}

CaratheodoryWitness caratheodory_express(std::span<const double> w, std::span<const Vec> points) {
  if (points.empty()) throw Error(ErrorCode::CaratheodoryFailed, "no points");
  const std::size_t n = w.size();
  const std::size_t m = points.size();
  // sum lambda_k (p_k, 1) = (w, 1), lambda >= 0
  StandardForm lp;
  lp.a = Matrix(n + 1, m);
  lp.b.assign(w.begin(), w.end());
  lp.b.push_back(1.0);
  lp.cost.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < n; ++i) lp.a(i, k) = points[k][i];
    lp.a(n, k) = 1.0;
  }
  const StandardResult r = solve_standard(lp);
  if (r.status != LpStatus::Optimal) throw Error(ErrorCode::CaratheodoryFailed, "target is outside the hull");

  std::vector<std::size_t> support;
  Vec lambda;
  for (std::size_t k = 0; k < m; ++k)
    if (r.y[k] > 0.0) {
      support.push_back(k);
      lambda.push_back(r.y[k]);
    }

  // null-space reduction, only needed for a non-basic starting point
  while (support.size() > n + 1) {
    const std::size_t s = support.size();
    SymMatrix gram(s);
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = a; b < s; ++b) {
        double acc = 1.0;
        for (std::size_t i = 0; i < n; ++i) acc += points[support[a]][i] * points[support[b]][i];
        gram.set(a, b, acc);
      }
    const Spectrum spec = sym_eigen(gram);
    Vec mu = spec.eigenvectors.column(0);
    if (std::all_of(mu.begin(), mu.end(), [](double x) { return x <= 0.0; }))
      for (double& x : mu) x = -x;
    double t = kInf;
    std::size_t leave = s;
    for (std::size_t a = 0; a < s; ++a)
      if (mu[a] > 1e-14 && lambda[a] / mu[a] < t) {
        t = lambda[a] / mu[a];
        leave = a;
      }
    if (leave == s) break;
    for (std::size_t a = 0; a < s; ++a) lambda[a] -= t * mu[a];
    lambda[leave] = 0.0;
    std::vector<std::size_t> ns;
    Vec nl;
    for (std::size_t a = 0; a < s; ++a)
      if (lambda[a] > 0.0) {
        ns.push_back(support[a]);
        nl.push_back(lambda[a]);
      }
    support = std::move(ns);
    lambda = std::move(nl);
  }

  auto residuals = [&](const Vec& rho, double& res, double& sum_res) {
    Vec acc(n, 0.0);
    double total = 0.0;
    for (std::size_t a = 0; a < support.size(); ++a) {
      axpy(rho[a], points[support[a]], acc);
      total += rho[a];
    }
    for (std::size_t i = 0; i < n; ++i) acc[i] -= w[i];
    res = norm2(acc);
    sum_res = std::abs(total - 1.0);
  };

  // polish on the support
  Matrix sub(n + 1, support.size());
  for (std::size_t a = 0; a < support.size(); ++a) {
    for (std::size_t i = 0; i < n; ++i) sub(i, a) = points[support[a]][i];
    sub(n, a) = 1.0;
  }
  const Vec refit = least_squares(sub, lp.b);
  double res0 = 0.0, sum0 = 0.0, res1 = 0.0, sum1 = 0.0;
  residuals(lambda, res0, sum0);
  if (std::all_of(refit.begin(), refit.end(), [](double x) { return x > 0.0; })) {
    residuals(refit, res1, sum1);
    if (res1 + sum1 < res0 + sum0) lambda = refit;
  }

  CaratheodoryWitness out;
  out.tau = support;
  out.rho = lambda;
  out.target.assign(w.begin(), w.end());
  residuals(out.rho, out.residual, out.sum_residual);
  return out;
}

BodyFamily certificate_frame(const BodyFamily& family, const SelectionCertificate& cert) {
  if (cert.dim != family.dim || cert.body_count != family.bodies.size())
    throw Error(ErrorCode::InvalidInput, "certificate does not match the instance");
  return normalize_family(family, cert.translate);
}

SelectionCertificate select_symmetric(const BodyFamily& family, const PipelineOptions& options) {
  validate_family(family);
  if (family.mode != FamilyMode::Symmetric) throw Error(ErrorCode::InvalidInput, "select-sym needs a symmetric family");
  if (!(options.d > 1.0)) throw Error(ErrorCode::InvalidInput, "d must exceed 1");
  const std::size_t n = family.dim;

  SelectionCertificate cert;
  fill_common(cert, family, options);
  cert.translate.assign(n, 0.0);
  const BodyFamily f = stage("normalize", [&] { return normalize_family(family, cert.translate); });
  const TaggedPointSet gens = polar_generators(f);
  const JohnResult jr =
      stage("john", [&] { return john_decomposition(gens, false, {options.eps_mvee, options.tol_john}); });
  cert.john = make_record(jr);

  const SparsifierResult sp =
      stage("bss", [&] { return bss_select(cert.john.vectors, cert.john.weights, options.d); });
  SymmetricStage st;
  st.d = options.d;
  st.gamma = sp.gamma;
  st.sigma = sp.sigma;
  st.b = sp.b;
  st.lambda_min = sp.lambda_min;
  st.lambda_max = sp.lambda_max;
  st.barvinok_samples = options.barvinok_samples;
  st.barvinok_worst = barvinok_worst(gens, cert.john, st.sigma, st.gamma, st.barvinok_samples, options.seed);

  cert.selected = owners_of(cert.john, st.sigma);
  cert.selected_ids = ids_of(family, cert.selected);
  cert.size_bound = static_cast<std::size_t>(std::ceil(options.d * static_cast<double>(n) - 1e-9));
  cert.bound_claimed = st.gamma * std::sqrt(static_cast<double>(n));
  cert.alpha = stage("containment", [&] { return containment_factor(cert.selected, f); });
  cert.c_reported = cert.alpha / pow_n32(n);
  cert.symmetric = std::move(st);
  cert.verdicts = recheck_certificate(family, cert);
  return cert;
}

SelectionCertificate select_general(const BodyFamily& family, const PipelineOptions& options) {
  validate_family(family);
  if (family.mode != FamilyMode::General) throw Error(ErrorCode::InvalidInput, "select-gen needs a general family");
  if (!(options.eps > 0.0)) throw Error(ErrorCode::InvalidInput, "eps must be positive");
  const std::size_t n = family.dim;
  const double nd = static_cast<double>(n);

  SelectionCertificate cert;
  fill_common(cert, family, options);
  const ChebyshevCenter cc = stage("chebyshev", [&] { return chebyshev_center(family); });
  const Recentered rc = stage("recenter", [&] { return recenter(family, cc.center, options.eps_mvee); });
  cert.translate = rc.z;
  const BodyFamily f = stage("normalize", [&] { return normalize_family(family, cert.translate); });
  const TaggedPointSet gens = polar_generators(f);
  const JohnResult jr =
      stage("john", [&] { return john_decomposition(gens, true, {options.eps_mvee, options.tol_john}); });
  cert.john = make_record(jr);

  GeneralStage st;
  st.eps = options.eps;
  st.recenter_iterations = rc.iterations;
  st.recenter_offset = rc.offset;
  st.shifted = stage("shift", [&] { return shifted_select(cert.john.vectors, cert.john.weights, options.eps); });
  st.w = st.shifted.v;
  for (double& x : st.w) x /= std::sqrt(options.eps * nd);
  st.w_norm = norm2(st.w);
  st.caratheodory = stage("caratheodory", [&] { return caratheodory_express(st.w, cert.john.vectors); });
  st.size_budget = static_cast<std::size_t>(std::ceil(st.shifted.d * (nd + 1.0) - 1e-9)) + n + 1;

  std::vector<std::size_t> contacts = st.shifted.sigma;
  contacts.insert(contacts.end(), st.caratheodory.tau.begin(), st.caratheodory.tau.end());
  cert.selected = owners_of(cert.john, contacts);
  cert.selected_ids = ids_of(family, cert.selected);
  cert.size_bound = st.size_budget;
  cert.alpha = stage("containment", [&] { return containment_factor(cert.selected, f); });
  cert.c_reported = cert.alpha / pow_n32(n);
  cert.bound_claimed = cert.alpha;
  cert.general = std::move(st);
  cert.verdicts = recheck_certificate(family, cert);
  return cert;
}

SelectionCertificate reduce_to_2n(const BodyFamily& family, const SelectionCertificate& cert) {
  const std::size_t n = family.dim;
  if (n > kOracleMaxDim) throw Error(ErrorCode::OracleTooLarge, "reduction needs the circumradius oracle (n <= 6)");
  if (cert.reduction) throw Error(ErrorCode::InvalidInput, "certificate is already reduced");
  const BodyFamily f = certificate_frame(family, cert);
  const std::size_t twon = 2 * n;

  SelectionCertificate out = cert;
  ReductionRecord rec;
  rec.start = cert.selected;
  rec.alpha_start = cert.alpha;
  rec.binomial_bound = binomial(cert.selected.size(), std::min(twon, cert.selected.size()));

  auto radius = [&](std::span<const std::size_t> sel) { return circumradius_exact(family_halfspaces(f, sel), n); };
  auto diameter = [&](std::span<const std::size_t> sel) { return diameter_or_inf(f, sel); };

  std::vector<std::size_t> sel = cert.selected;
  const double r0 = radius(sel);
  if (!std::isfinite(r0)) throw Error(ErrorCode::InvalidInput, "selected intersection is unbounded");
  const std::vector<std::size_t> all;
  const double diam_full = diameter(all);
  rec.diameter_ratio_start = diameter(sel) / diam_full;

  double r = r0;
  while (sel.size() > twon) {
    const std::size_t m = sel.size();
    double best = kInf;
    std::size_t drop = m;
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<std::size_t> rest = sel;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
      const double rk = radius(rest);
      if (drop == m || rk < best) {
        best = rk;
        drop = k;
      }
    }
    ReductionStep step;
    step.dropped = sel[drop];
    step.m = m;
    step.radius_before = r;
    step.radius_after = best;
    step.growth = best / r;
    step.bound = static_cast<double>(m) / static_cast<double>(m - twon);
    step.pass = step.growth <= step.bound * (1.0 + 1e-6);
    rec.steps.push_back(step);
    sel.erase(sel.begin() + static_cast<std::ptrdiff_t>(drop));
    r = best;
  }
  rec.cumulative_growth = r / r0;
  rec.diameter_ratio_final = diameter(sel) / diam_full;

  out.selected = sel;
  out.selected_ids = ids_of(family, sel);
  out.alpha = containment_factor(sel, f);
  out.c_reported = out.alpha / pow_n32(n);
  out.alpha_exact.reset();
  out.diameter.reset();
  out.reduction = std::move(rec);
  out.notes.push_back("reduction growth bound uses m/(m-2n)");
  out.verdicts = recheck_certificate(family, out);
  return out;
}

DiameterReport diameter_report(const BodyFamily& family, const SelectionCertificate& cert, bool exact) {
  DiameterReport out;
  out.exact = exact;
  if (!exact) {
    out.ratio = cert.alpha;
    return out;
  }
  if (family.dim > kOracleMaxDim) throw Error(ErrorCode::OracleTooLarge, "exact diameters need n <= 6");
  const BodyFamily f = certificate_frame(family, cert);
  const std::vector<std::size_t> all;
  out.diam_full = diameter_or_inf(f, all);
  out.diam_selected = diameter_or_inf(f, cert.selected);
  out.ratio = out.diam_selected / out.diam_full;
  return out;
}

std::vector<std::pair<std::string, bool>> recheck_certificate(const BodyFamily& family,
                                                              const SelectionCertificate& cert) {
  validate_family(family);
  if (cert.mode != family.mode) throw Error(ErrorCode::InvalidInput, "certificate mode does not match the instance");
  const BodyFamily f = certificate_frame(family, cert);
  const TaggedPointSet gens = polar_generators(f);
  const std::size_t n = family.dim;
  const double nd = static_cast<double>(n);
  const JohnRecord& john = cert.john;
  const std::size_t contacts = john.vectors.size();
  if (john.weights.size() != contacts || john.sources.size() != contacts || john.owners.size() != contacts)
    throw Error(ErrorCode::InvalidInput, "certificate contact lists have mismatched lengths");

  std::vector<std::pair<std::string, bool>> v;
  const double tol = cert.tol_john;

  // John layer, recomputed from the stored contacts
  JohnDecomposition d;
  d.vectors = john.vectors;
  d.weights = john.weights;
  measure_residuals(d, n);
  bool match = john.lowner_map.dim() == n && john.center.size() == n;
  double raw_dev = 0.0;
  for (std::size_t j = 0; j < contacts && match; ++j) {
    if (john.sources[j] >= gens.points.size() || gens.owners[john.sources[j]] != john.owners[j]) {
      match = false;
      break;
    }
    Vec x = gens.points[john.sources[j]];
    for (std::size_t i = 0; i < n; ++i) x[i] -= john.center[i];
    const Vec y = john.lowner_map.multiply(x);
    const double r = norm2(y);
    raw_dev = std::max(raw_dev, std::abs(r - 1.0));
    for (std::size_t i = 0; i < n; ++i) match = match && std::abs(y[i] / r - john.vectors[j][i]) <= 1e-6;
  }
  v.emplace_back("john_contacts_match_generators", match);
  v.emplace_back("john_unit_norm", raw_dev <= 1e-6);
  v.emplace_back("john_residual_identity", d.residual_identity <= tol);
  v.emplace_back("john_residual_trace", d.residual_trace <= nd * tol);
  if (cert.mode == FamilyMode::General) v.emplace_back("john_residual_barycenter", d.residual_barycenter <= tol);

  const std::vector<std::size_t>& stage_selected = cert.reduction ? cert.reduction->start : cert.selected;
  const double stage_alpha = cert.reduction ? cert.reduction->alpha_start : cert.alpha;
  auto in_range = [&](std::span<const std::size_t> idx) {
    return std::all_of(idx.begin(), idx.end(), [&](std::size_t k) { return k < contacts; });
  };

  if (cert.symmetric) {
    const SymmetricStage& st = *cert.symmetric;
    const bool ok_idx = in_range(st.sigma) && st.b.size() == st.sigma.size();
    bool sandwich = false;
    if (ok_idx) {
      SymMatrix s(n);
      for (std::size_t k = 0; k < st.sigma.size(); ++k) s.add_rank_one(st.b[k] * john.weights[st.sigma[k]], john.vectors[st.sigma[k]]);
      const Spectrum spec = sym_eigen(s);
      const double g2 = gamma_d(st.d) * gamma_d(st.d);
      const double r = d.residual_identity;
      const double widen = r < 1.0 ? (1.0 + r) / (1.0 - r) : 0.0;
      sandwich = spec.min() >= 1.0 - 1e-9 && spec.max() <= g2 * (1.0 + 1e-6) * widen &&
                 near(spec.min(), st.lambda_min, 1e-9) && near(spec.max(), st.lambda_max, 1e-9) &&
                 std::all_of(st.b.begin(), st.b.end(), [](double x) { return x > 0.0; });
    }
    const std::size_t budget = static_cast<std::size_t>(std::ceil(st.d * nd - 1e-9));
    v.emplace_back("bss_size", ok_idx && st.sigma.size() <= budget);
    v.emplace_back("bss_sandwich", sandwich);
    v.emplace_back("owners_consistent", ok_idx && owners_of(john, st.sigma) == stage_selected);
    v.emplace_back("selection_size", stage_selected.size() <= budget);
    const double worst =
        ok_idx ? barvinok_worst(gens, john, st.sigma, gamma_d(st.d), st.barvinok_samples, cert.seed) : kInf;
    v.emplace_back("barvinok_samples", worst <= 1.0 + 1e-5 && near(worst, st.barvinok_worst, 1e-12));
    v.emplace_back("alpha_within_bound", stage_alpha <= gamma_d(st.d) * std::sqrt(nd) * (1.0 + 1e-5));
  }

  if (cert.general) {
    const GeneralStage& st = *cert.general;
    const ShiftedDecomposition& sh = st.shifted;
    const double eps = st.eps;
    const bool ok_idx = in_range(sh.sigma) && sh.b.size() == sh.sigma.size() && sh.v.size() == n &&
                        in_range(st.caratheodory.tau) && st.caratheodory.rho.size() == st.caratheodory.tau.size();
    bool bary = false, shift = false, sum = false, shifted = false, tpass = false, unshifted = false;
    bool wnorm = false, cara = false;
    if (ok_idx) {
      double total = 0.0;
      Vec g(n, 0.0);
      SymMatrix m(n);
      Vec y(n);
      for (std::size_t k = 0; k < sh.sigma.size(); ++k) {
        const Vec& x = john.vectors[sh.sigma[k]];
        total += sh.b[k];
        for (std::size_t i = 0; i < n; ++i) {
          y[i] = x[i] + sh.v[i];
          g[i] += sh.b[k] * y[i];
        }
        m.add_rank_one(sh.b[k], y);
      }
      const Spectrum spec = sym_eigen(m);
      bary = norm2(g) <= 1e-10;
      shift = dot(sh.v, sh.v) * total <= eps * (1.0 + 1e-12);
      sum = total >= nd * (1.0 - 1e-6) && total <= (4.0 + 2.0 * eps) * nd * (1.0 + 1e-6);
      shifted = spec.min() >= 1.0 - 1e-9 && spec.max() <= 4.0 + eps + 1e-9;
      const OperatorCertificate oc = certify_operator_T(john.vectors, sh.sigma, sh.b, sh.v, eps);
      tpass = oc.t_pass;
      unshifted = oc.a_min >= 1.0 - eps - 1e-5 && oc.a_max <= 4.0 + 3.0 * eps + 1e-5;

      Vec w = sh.v;
      for (double& x : w) x /= std::sqrt(eps * nd);
      const double wn = norm2(w);
      wnorm = wn <= 1.0 / nd + 1e-9 && w == st.w;

      const CaratheodoryWitness& cw = st.caratheodory;
      Vec acc(n, 0.0);
      double rs = 0.0;
      bool positive = true;
      for (std::size_t k = 0; k < cw.tau.size(); ++k) {
        axpy(cw.rho[k], john.vectors[cw.tau[k]], acc);
        rs += cw.rho[k];
        positive = positive && cw.rho[k] >= 0.0;
      }
      for (std::size_t i = 0; i < n; ++i) acc[i] -= w[i];
      cara = positive && cw.tau.size() <= n + 1 && norm2(acc) <= 1e-9 && std::abs(rs - 1.0) <= 1e-12;
    }
    v.emplace_back("shift_barycenter", bary);
    v.emplace_back("shift_norm", shift);
    v.emplace_back("shift_sum_b", sum);
    v.emplace_back("shifted_sandwich", shifted);
    v.emplace_back("operator_T", tpass);
    v.emplace_back("unshifted_sandwich", unshifted);
    v.emplace_back("w_norm", wnorm);
    v.emplace_back("caratheodory", cara);
    std::vector<std::size_t> all_contacts = sh.sigma;
    all_contacts.insert(all_contacts.end(), st.caratheodory.tau.begin(), st.caratheodory.tau.end());
    v.emplace_back("owners_consistent", ok_idx && owners_of(john, all_contacts) == stage_selected);
    v.emplace_back("selection_size", stage_selected.size() <= st.size_budget);
    v.emplace_back("alpha_finite", std::isfinite(stage_alpha));
  }

  const double alpha = containment_factor(cert.selected, f);
  v.emplace_back("alpha_reproduced", alpha == cert.alpha || near(alpha, cert.alpha, 1e-9));
  v.emplace_back("alpha_at_least_one", cert.alpha >= 1.0 - 1e-9);

  if (cert.alpha_exact) {
    const double exact = containment_factor_exact(cert.selected, f);
    v.emplace_back("alpha_matches_exact",
                   near(exact, *cert.alpha_exact, 1e-9) && std::abs(cert.alpha - exact) <= 1e-6 * std::max(1.0, exact));
  }
  if (cert.diameter && cert.diameter->exact) {
    const DiameterReport dr = diameter_report(family, cert, true);
    v.emplace_back("diameter_within_alpha",
                   near(dr.ratio, cert.diameter->ratio, 1e-9) && dr.ratio <= cert.alpha * (1.0 + 1e-9));
  }

  if (cert.reduction) {
    const ReductionRecord& rec = *cert.reduction;
    bool steps = true;
    double product = 1.0;
    std::vector<std::size_t> sel = rec.start;
    double r = circumradius_exact(family_halfspaces(f, sel), n);
    const double r0 = r;
    for (const ReductionStep& s : rec.steps) {
      auto it = std::find(sel.begin(), sel.end(), s.dropped);
      if (it == sel.end() || s.m != sel.size() || s.m <= 2 * n) {
        steps = false;
        break;
      }
      sel.erase(it);
      const double after = circumradius_exact(family_halfspaces(f, sel), n);
      const double bound = static_cast<double>(s.m) / static_cast<double>(s.m - 2 * n);
      steps = steps && near(after, s.radius_after, 1e-9) && after / r <= bound * (1.0 + 1e-6);
      product *= bound;
      r = after;
    }
    steps = steps && sel == cert.selected;
    v.emplace_back("reduction_step_growth", steps);
    v.emplace_back("reduction_cumulative", r / r0 <= rec.binomial_bound * (1.0 + 1e-6) &&
                                               product <= rec.binomial_bound * (1.0 + 1e-9));
    const std::vector<std::size_t> all;
    const double full = diameter_or_inf(f, all);
    const double start = diameter_or_inf(f, rec.start) / full;
    const double final_ratio = diameter_or_inf(f, cert.selected) / full;
    v.emplace_back("reduction_diameter", near(start, rec.diameter_ratio_start, 1e-9) &&
                                             near(final_ratio, rec.diameter_ratio_final, 1e-9) &&
                                             final_ratio <= start * rec.binomial_bound * (1.0 + 1e-6));
  }
  return v;
}

}  // namespace helly
