#include "helly/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "helly/error.hpp"

namespace helly {

std::size_t BodyFamily::constraint_count() const {
  std::size_t total = 0;
  for (const Body& b : bodies) total += b.constraints.size();
  return total;
}

void validate_family(const BodyFamily& family) {
  if (family.dim == 0) throw Error(ErrorCode::InvalidInput, "dimension must be positive");
  if (family.bodies.empty()) throw Error(ErrorCode::InvalidInput, "family has no bodies");
  for (std::size_t i = 0; i < family.bodies.size(); ++i) {
    const Body& body = family.bodies[i];
    if (body.constraints.empty())
      throw Error(ErrorCode::InvalidInput, "body " + std::to_string(i) + " has no constraints");
    for (const Halfspace& h : body.constraints) {
      if (h.normal.size() != family.dim)
        throw Error(ErrorCode::InvalidInput, "body " + std::to_string(i) + ": constraint dimension mismatch");
      if (!std::isfinite(h.offset) ||
          !std::all_of(h.normal.begin(), h.normal.end(), [](double v) { return std::isfinite(v); }))
        throw Error(ErrorCode::InvalidInput, "body " + std::to_string(i) + ": non-finite constraint");
      if (norm2(h.normal) == 0.0)
        throw Error(ErrorCode::InvalidInput, "body " + std::to_string(i) + ": zero constraint vector");
      if (family.mode == FamilyMode::Symmetric && !(h.offset > 0.0))
        throw Error(ErrorCode::InvalidInput, "body " + std::to_string(i) + ": slab offset must be positive");
    }
  }
}

std::vector<Halfspace> body_halfspaces(const Body& body, FamilyMode mode) {
  std::vector<Halfspace> out;
  out.reserve(body.constraints.size() * (mode == FamilyMode::Symmetric ? 2 : 1));
  for (const Halfspace& h : body.constraints) {
    out.push_back(h);
    if (mode == FamilyMode::Symmetric) {
      Halfspace neg = h;
      for (double& v : neg.normal) v = -v;
      out.push_back(std::move(neg));
    }
  }
  return out;
}

std::vector<Halfspace> family_halfspaces(const BodyFamily& family, std::span<const std::size_t> selected) {
  std::vector<Halfspace> out;
  auto append = [&](std::size_t i) {
    for (Halfspace& h : body_halfspaces(family.bodies.at(i), family.mode)) out.push_back(std::move(h));
  };
  if (selected.empty()) {
    for (std::size_t i = 0; i < family.bodies.size(); ++i) append(i);
  } else {
    for (std::size_t i : selected) append(i);
  }
  return out;
}

BodyFamily normalize_family(const BodyFamily& raw, std::span<const double> z) {
  validate_family(raw);
  if (z.size() != raw.dim) throw Error(ErrorCode::InvalidInput, "translate has wrong dimension");
  if (raw.mode == FamilyMode::Symmetric && norm2(z) != 0.0)
    throw Error(ErrorCode::InvalidInput, "symmetric families are normalized about the origin");

  BodyFamily out = raw;
  for (std::size_t i = 0; i < out.bodies.size(); ++i) {
    for (Halfspace& h : out.bodies[i].constraints) {
      const double slack = h.offset - dot(h.normal, z);
      if (slack < kInteriorMargin * norm2(h.normal))
        throw Error(ErrorCode::NotInterior,
                    "translate is within 1e-7 of a constraint of body " + std::to_string(i));
      for (double& v : h.normal) v /= slack;
      h.offset = 1.0;
    }
  }
  return out;
}

ChebyshevCenter chebyshev_center(const BodyFamily& family) {
  validate_family(family);
  const std::vector<Halfspace> hs = family_halfspaces(family);
  const std::size_t n = family.dim;
  // variables (z, r): maximize r  s.t.  <a, z> + r ||a|| <= c,  r <= cap
  constexpr double kRadiusCap = 1e6;
  LinearProgram lp;
  lp.objective.assign(n + 1, 0.0);
  lp.objective[n] = 1.0;
  lp.inequality = Matrix(hs.size() + 1, n + 1);
  lp.inequality_rhs.resize(hs.size() + 1);
  for (std::size_t k = 0; k < hs.size(); ++k) {
    for (std::size_t j = 0; j < n; ++j) lp.inequality(k, j) = hs[k].normal[j];
    lp.inequality(k, n) = norm2(hs[k].normal);
    lp.inequality_rhs[k] = hs[k].offset;
  }
  lp.inequality(hs.size(), n) = 1.0;
  lp.inequality_rhs[hs.size()] = kRadiusCap;

  const LpResult r = solve_lp(lp);
  if (r.status != LpStatus::Optimal || r.x[n] <= 1e-9)
    throw Error(ErrorCode::DegenerateInterior, "intersection has no interior (Chebyshev margin <= 1e-9)");
  ChebyshevCenter out;
  out.center.assign(r.x.begin(), r.x.begin() + static_cast<std::ptrdiff_t>(n));
  out.margin = r.x[n];
  return out;
}

TaggedPointSet polar_generators(const BodyFamily& family) {
  TaggedPointSet out;
  for (std::size_t i = 0; i < family.bodies.size(); ++i) {
    for (const Halfspace& h : family.bodies[i].constraints) {
      Vec a = h.normal;
      for (double& v : a) v /= h.offset;
      out.points.push_back(a);
      out.owners.push_back(i);
      if (family.mode == FamilyMode::Symmetric) {
        for (double& v : a) v = -v;
        out.points.push_back(std::move(a));
        out.owners.push_back(i);
      }
    }
  }
  return out;
}

double containment_factor(std::span<const std::size_t> selected, const BodyFamily& family) {
  if (selected.empty()) throw Error(ErrorCode::InvalidInput, "selection is empty");
  std::vector<bool> chosen(family.bodies.size(), false);
  for (std::size_t i : selected) chosen.at(i) = true;
  const std::vector<Halfspace> q = family_halfspaces(family, selected);

  double alpha = 1.0;
  for (std::size_t i = 0; i < family.bodies.size(); ++i) {
    // constraints of selected bodies hold on Q, so h_Q <= 1 there
    if (chosen[i]) continue;
    for (const Halfspace& h : family.bodies[i].constraints) {
      Vec u = h.normal;
      for (double& v : u) v /= h.offset;
      const double value = support_h_polytope(q, u);
      if (std::isinf(value)) return std::numeric_limits<double>::infinity();
      alpha = std::max(alpha, value);
      // Q is symmetric in symmetric mode, so h_Q(-u) = h_Q(u)
    }
  }
  return alpha;
}

double minkowski_functional_v(std::span<const Vec> points, std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t m = points.size();
  if (norm2(x) == 0.0) return 0.0;
  // minimize sum(lambda)  s.t.  sum lambda_k p_k = x,  lambda >= 0
  StandardForm lp;
  lp.a = Matrix(n, m);
  lp.b.assign(x.begin(), x.end());
  lp.cost.assign(m, 1.0);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < n; ++i) lp.a(i, k) = points[k][i];
  const StandardResult r = solve_standard(lp);
  if (r.status != LpStatus::Optimal || r.value > 1e9)
    throw Error(ErrorCode::Outside, "point is not in any dilate of the hull");
  return r.value;
}

}  // namespace helly
