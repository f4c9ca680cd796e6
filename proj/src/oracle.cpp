#include "helly/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "helly/error.hpp"
#include "helly/rng.hpp"

namespace helly {
namespace {

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return r;
}

// Advances a k-combination of {0..n-1} in lexicographic order.
bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<std::size_t> first_combination(std::size_t k) {
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i;
  return c;
}

struct Cone {
  std::vector<Vec> generators;
  double upper = 0.0;
};

// max sum(lambda) s.t. x = G lambda in P, lambda >= 0, solved via its dual.
// Returns false when the cone meets P in an unbounded set.
bool bound_cone(std::span<const Halfspace> constraints, Cone& cone, Vec& argmax) {
  const std::size_t n = cone.generators.size();
  const std::size_t m = constraints.size();
  StandardForm dual;
  dual.a = Matrix(n, m + n);
  dual.b.assign(n, 1.0);
  dual.cost.assign(m + n, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    dual.cost[k] = constraints[k].offset;
    for (std::size_t i = 0; i < n; ++i) dual.a(i, k) = dot(constraints[k].normal, cone.generators[i]);
  }
  for (std::size_t i = 0; i < n; ++i) dual.a(i, m + i) = -1.0;
  const StandardResult r = solve_standard(dual);
  if (r.status != LpStatus::Optimal) return false;
  cone.upper = r.value;
  argmax.assign(constraints.front().normal.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) axpy(std::max(0.0, r.duals[i]), cone.generators[i], argmax);
  return true;
}

}  // namespace

bool is_bounded(std::span<const Halfspace> constraints, std::size_t dim) {
  Vec e(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    for (double s : {1.0, -1.0}) {
      e[i] = s;
      if (std::isinf(support_h_polytope(constraints, e))) return false;
    }
    e[i] = 0.0;
  }
  return true;
}

VertexSet enumerate_vertices(std::span<const Halfspace> constraints, std::size_t dim) {
  const std::size_t m = constraints.size();
  if (dim > kOracleMaxDim || binomial(m, dim) > kOracleMaxBases)
    throw Error(ErrorCode::OracleTooLarge, "vertex enumeration beyond caps (n=" + std::to_string(dim) +
                                               ", constraints=" + std::to_string(m) + ")");
  if (!is_feasible(constraints, dim)) throw Error(ErrorCode::EmptyBody, "polyhedron is empty");
  if (!is_bounded(constraints, dim)) throw Error(ErrorCode::UnboundedBody, "polyhedron is unbounded");

  VertexSet out;
  if (m < dim) return out;
  Matrix a(dim, dim);
  Vec rhs(dim);
  std::vector<std::size_t> combo = first_combination(dim);
  do {
    for (std::size_t r = 0; r < dim; ++r) {
      const Halfspace& h = constraints[combo[r]];
      std::copy(h.normal.begin(), h.normal.end(), a.row(r).begin());
      rhs[r] = h.offset;
    }
    Vec x;
    try {
      x = lu_solve(a, rhs);
    } catch (const Error&) {
      continue;
    }
    const double xnorm = norm2(x);
    bool feasible = true;
    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < m && feasible; ++k) {
      const double tol = 1e-9 * (1.0 + norm2(constraints[k].normal) * xnorm + std::abs(constraints[k].offset));
      const double slack = constraints[k].offset - dot(constraints[k].normal, x);
      if (slack < -tol) feasible = false;
      if (std::abs(slack) <= tol) active.push_back(k);
    }
    if (!feasible) continue;

    bool merged = false;
    for (std::size_t v = 0; v < out.vertices.size(); ++v) {
      Vec d = out.vertices[v];
      for (std::size_t i = 0; i < dim; ++i) d[i] -= x[i];
      if (norm2(d) <= 1e-7) {
        auto& act = out.active[v];
        for (std::size_t k : active)
          if (std::find(act.begin(), act.end(), k) == act.end()) act.push_back(k);
        std::sort(act.begin(), act.end());
        merged = true;
        break;
      }
    }
    if (!merged) {
      out.vertices.push_back(std::move(x));
      out.active.push_back(std::move(active));
    }
  } while (next_combination(combo, m));
  return out;
}

double diameter_exact(std::span<const Halfspace> constraints, std::size_t dim) {
  const VertexSet vs = enumerate_vertices(constraints, dim);
  double best = 0.0;
  for (std::size_t i = 0; i < vs.vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vs.vertices.size(); ++j) {
      Vec d = vs.vertices[i];
      for (std::size_t k = 0; k < dim; ++k) d[k] -= vs.vertices[j][k];
      best = std::max(best, norm2(d));
    }
  return best;
}

CircumradiusBounds circumradius_bounds(std::span<const Halfspace> constraints, std::size_t dim, double rel_tol,
                                       double threshold, std::size_t max_cones) {
  for (const Halfspace& h : constraints)
    if (!(h.offset > 0.0))
      throw Error(ErrorCode::InvalidInput, "cone bound needs the origin strictly inside");
  const double inf = std::numeric_limits<double>::infinity();
  if (constraints.empty()) return {inf, inf};

  auto cmp = [](const Cone& a, const Cone& b) { return a.upper < b.upper; };
  std::priority_queue<Cone, std::vector<Cone>, decltype(cmp)> queue(cmp);
  double lower = 0.0;
  std::size_t solves = 0;
  Vec argmax;

  auto evaluate = [&](Cone cone) {
    if (++solves > max_cones) throw Error(ErrorCode::OracleTooLarge, "circumradius cone budget exceeded");
    if (!bound_cone(constraints, cone, argmax)) return false;
    lower = std::max(lower, norm2(argmax));
    for (const Vec& g : cone.generators) {
      // radial value along each generator is a feasible point as well
      double worst = 0.0;
      for (const Halfspace& h : constraints) worst = std::max(worst, dot(h.normal, g) / h.offset);
      if (worst > 0.0) lower = std::max(lower, 1.0 / worst);
    }
    queue.push(std::move(cone));
    return true;
  };

  // the 2^n coordinate orthants
  const std::size_t orthants = std::size_t{1} << dim;
  for (std::size_t mask = 0; mask < orthants; ++mask) {
    Cone c;
    for (std::size_t i = 0; i < dim; ++i) {
      Vec e(dim, 0.0);
      e[i] = (mask >> i) & 1 ? -1.0 : 1.0;
      c.generators.push_back(std::move(e));
    }
    if (!evaluate(std::move(c))) return {inf, inf};
  }

  while (true) {
    const double upper = queue.top().upper;
    if (upper <= lower * (1.0 + rel_tol)) return {lower, upper};
    if (threshold > 0.0 && (upper <= threshold || lower > threshold)) return {lower, upper};

    Cone top = queue.top();
    queue.pop();
    std::size_t bi = 0, bj = 0;
    double worst = 2.0;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i + 1; j < dim; ++j) {
        const double c = dot(top.generators[i], top.generators[j]);
        if (c < worst) {
          worst = c;
          bi = i;
          bj = j;
        }
      }
    if (dim == 1) return {lower, std::max(lower, upper)};
    Vec mid = top.generators[bi];
    axpy(1.0, top.generators[bj], mid);
    const double mn = norm2(mid);
    for (double& v : mid) v /= mn;
    Cone left = top;
    Cone right = top;
    left.generators[bi] = mid;
    right.generators[bj] = std::move(mid);
    if (!evaluate(std::move(left)) || !evaluate(std::move(right))) return {inf, inf};
  }
}

double circumradius_exact(std::span<const Halfspace> constraints, std::size_t dim) {
  if (!is_feasible(constraints, dim)) throw Error(ErrorCode::EmptyBody, "polyhedron is empty");
  if (!is_bounded(constraints, dim)) return std::numeric_limits<double>::infinity();
  if (dim <= kOracleMaxDim && binomial(constraints.size(), dim) <= kBruteForceMaxSubsets) {
    const VertexSet vs = enumerate_vertices(constraints, dim);
    double best = 0.0;
    for (const Vec& v : vs.vertices) best = std::max(best, norm2(v));
    return best;
  }
  if (dim > kOracleMaxDim) throw Error(ErrorCode::OracleTooLarge, "circumradius oracle limited to n <= 6");
  return circumradius_bounds(constraints, dim, 1e-9).lower;
}

double containment_factor_exact(std::span<const std::size_t> selected, const BodyFamily& family) {
  const std::vector<Halfspace> q = family_halfspaces(family, selected);
  if (!is_bounded(q, family.dim)) return std::numeric_limits<double>::infinity();
  const VertexSet vs = enumerate_vertices(q, family.dim);
  double alpha = 1.0;
  for (const Vec& x : vs.vertices)
    for (const Body& body : family.bodies)
      for (const Halfspace& h : body.constraints) {
        double g = dot(h.normal, x) / h.offset;
        if (family.mode == FamilyMode::Symmetric) g = std::abs(g);
        alpha = std::max(alpha, g);
      }
  return alpha;
}

BruteForceResult best_subset_bruteforce(const BodyFamily& family, std::size_t s) {
  const std::size_t m = family.bodies.size();
  if (s == 0 || s > m) throw Error(ErrorCode::InvalidInput, "subset size out of range");
  if (binomial(m, s) > kBruteForceMaxSubsets)
    throw Error(ErrorCode::OracleTooLarge, "too many subsets for exhaustive search");
  BruteForceResult best;
  best.alpha = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> combo = first_combination(s);
  do {
    const double alpha = containment_factor(combo, family);
    if (alpha < best.alpha || best.subset.empty()) {
      best.alpha = alpha;
      best.subset = combo;
    }
  } while (next_combination(combo, m));
  return best;
}

SharpnessInstance gen_sharpness_instance(std::size_t n, std::size_t count, std::uint64_t seed) {
  if (n == 0 || n > kOracleMaxDim || count == 0 || count > 4096)
    throw Error(ErrorCode::InvalidInput, "sharpness generator needs 1 <= n <= 6 and 1 <= N <= 4096");
  Rng rng(seed);
  SharpnessInstance out;
  for (int attempt = 1; attempt <= 20; ++attempt) {
    BodyFamily family;
    family.mode = FamilyMode::Symmetric;
    family.dim = n;
    for (std::size_t j = 0; j < count; ++j)
      family.bodies.push_back({"w" + std::to_string(j), {{rng.unit_vector(n), 1.0}}});
    const std::vector<Halfspace> hs = family_halfspaces(family);
    out.attempts = attempt;
    out.circumradius = circumradius_bounds(hs, n, 1e-9, 2.0);
    if (out.circumradius.upper <= 2.0) {
      out.family = std::move(family);
      return out;
    }
  }
  throw Error(ErrorCode::SharpnessGenFailed,
              "outer inclusion in 2B failed after 20 draws; circumradius in [" +
                  std::to_string(out.circumradius.lower) + ", " + std::to_string(out.circumradius.upper) + "]");
}

BodyFamily gen_slab_family(std::size_t n, std::size_t bodies, std::uint64_t seed) {
  Rng rng(seed);
  for (;;) {
    BodyFamily family;
    family.mode = FamilyMode::Symmetric;
    family.dim = n;
    SymMatrix gram(n);
    for (std::size_t i = 0; i < bodies; ++i) {
      Body body;
      body.id = "b" + std::to_string(i);
      const std::size_t k = 1 + rng.below(3);
      for (std::size_t j = 0; j < k; ++j) {
        Vec w = rng.unit_vector(n);
        const double len = rng.uniform(0.5, 2.0);
        for (double& v : w) v *= len;
        gram.add_rank_one(1.0, w);
        body.constraints.push_back({std::move(w), rng.uniform(0.5, 2.0)});
      }
      family.bodies.push_back(std::move(body));
    }
    if (sym_eigen(gram).min() > 1e-6 * gram.trace()) return family;
  }
}

BodyFamily gen_halfspace_family(std::size_t n, std::size_t bodies, double margin, std::uint64_t seed) {
  Rng rng(seed);
  for (;;) {
    Vec center(n);
    for (double& v : center) v = rng.uniform(-1.0, 1.0);
    BodyFamily family;
    family.mode = FamilyMode::General;
    family.dim = n;
    for (std::size_t i = 0; i < bodies; ++i) {
      Body body;
      body.id = "b" + std::to_string(i);
      const std::size_t k = rng.uniform() < 0.75 ? 1 : 2;
      for (std::size_t j = 0; j < k; ++j) {
        Vec a = rng.unit_vector(n);
        const double offset = rng.uniform(margin, 1.0) + dot(a, center);
        body.constraints.push_back({std::move(a), offset});
      }
      family.bodies.push_back(std::move(body));
    }
    if (is_bounded(family_halfspaces(family), n)) return family;
  }
}

}  // namespace helly
