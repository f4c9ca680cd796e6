#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helly/error.hpp"
#include "helly/oracle.hpp"
#include "helly/pipeline.hpp"
#include "helly/rng.hpp"

using namespace helly;

namespace {

BodyFamily cube(std::size_t n, FamilyMode mode) {
  BodyFamily f;
  f.mode = mode;
  f.dim = n;
  for (std::size_t i = 0; i < n; ++i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    if (mode == FamilyMode::Symmetric) {
      f.bodies.push_back({"x" + std::to_string(i), {{e, 1.0}}});
    } else {
      f.bodies.push_back({"+x" + std::to_string(i), {{e, 1.0}}});
      e[i] = -1.0;
      f.bodies.push_back({"-x" + std::to_string(i), {{e, 1.0}}});
    }
  }
  return f;
}

BodyFamily regular_simplex(std::size_t n) {
  // facet normals of the regular simplex: centered standard basis of R^{n+1} in an orthonormal basis of sum = 0
  std::vector<Vec> basis;
  for (std::size_t k = 0; k < n; ++k) {
    Vec b(n + 1, 0.0);
    for (std::size_t i = 0; i <= k; ++i) b[i] = 1.0;
    b[k + 1] = -static_cast<double>(k + 1);
    const double len = norm2(b);
    for (double& x : b) x /= len;
    basis.push_back(b);
  }
  BodyFamily f;
  f.mode = FamilyMode::General;
  f.dim = n;
  for (std::size_t j = 0; j <= n; ++j) {
    Vec a(n);
    for (std::size_t k = 0; k < n; ++k) a[k] = basis[k][j];
    f.bodies.push_back({"f" + std::to_string(j), {{a, 1.0}}});
  }
  return f;
}

BodyFamily spaced_slabs(std::size_t count) {
  BodyFamily f;
  f.mode = FamilyMode::Symmetric;
  f.dim = 2;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
    f.bodies.push_back({"s" + std::to_string(k), {{{std::cos(t), std::sin(t)}, 1.0}}});
  }
  return f;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidInput;
}

bool verdict(const SelectionCertificate& c, const std::string& name) {
  for (const auto& [k, v] : c.verdicts)
    if (k == name) return v;
  FAIL("missing verdict " << name);
  return false;
}

void check_general_invariants(const SelectionCertificate& c) {
  REQUIRE(c.general);
  const GeneralStage& g = *c.general;
  const std::size_t n = c.dim;
  CHECK(g.shifted.barycenter_residual <= 1e-10);
  CHECK(g.shifted.shift_norm_sq <= g.eps / g.shifted.sum_b * (1 + 1e-12));
  CHECK(g.shifted.sum_b >= static_cast<double>(n) * (1 - 1e-6));
  CHECK(g.shifted.sum_b <= (4 + 2 * g.eps) * static_cast<double>(n) * (1 + 1e-6));
  CHECK(g.w_norm <= 1.0 / static_cast<double>(n) + 1e-9);
  CHECK(g.caratheodory.tau.size() <= n + 1);
  CHECK(g.caratheodory.residual <= 1e-9);
  CHECK(c.selected.size() <= g.size_budget);
  CHECK(std::isfinite(c.alpha));
  CHECK(c.alpha >= 1.0);
}

}  // namespace

TEST_CASE("symmetric cube keeps every slab") {
  PipelineOptions o;
  o.d = 2.0;
  for (std::size_t n = 2; n <= 5; ++n) {
    const SelectionCertificate c = select_symmetric(cube(n, FamilyMode::Symmetric), o);
    CHECK(c.selected.size() == n);
    CHECK(c.alpha == doctest::Approx(1.0));
    CHECK(c.all_pass());
    CHECK(c.size_bound == 2 * n);
  }
}

TEST_CASE("100 equally spaced plane slabs") {
  const BodyFamily f = spaced_slabs(100);
  const SelectionCertificate c = select_symmetric(f);
  CHECK(c.all_pass());
  CHECK(c.selected.size() <= 8);
  CHECK(c.bound_claimed == doctest::Approx(3.0 * std::sqrt(2.0)));
  CHECK(c.alpha <= 3.0 * std::sqrt(2.0) * (1 + 1e-5));
  const BodyFamily g = certificate_frame(f, c);
  CHECK(c.alpha == doctest::Approx(containment_factor_exact(c.selected, g)).epsilon(1e-6));
  const DiameterReport d = diameter_report(f, c, true);
  CHECK(d.ratio <= c.alpha * (1 + 1e-9));
  CHECK(d.ratio <= 3.0 * std::sqrt(2.0));
}

TEST_CASE("random symmetric families satisfy the end-to-end bound") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t n = 2 + seed % 5;
    const BodyFamily f = gen_slab_family(n, 6 * n, seed);
    const SelectionCertificate c = select_symmetric(f);
    CHECK(c.all_pass());
    CHECK(c.selected.size() <= 4 * n);
    CHECK(c.alpha <= 3.0 * std::sqrt(static_cast<double>(n)) * (1 + 1e-5));
    CHECK(std::is_sorted(c.selected.begin(), c.selected.end()));
    for (std::size_t k = 0; k < c.selected.size(); ++k) CHECK(c.selected_ids[k] == f.bodies[c.selected[k]].id);
    // the bound-mode diameter ratio is alpha itself
    const DiameterReport d = diameter_report(f, c, false);
    CHECK(d.ratio == c.alpha);
  }
}

TEST_CASE("symmetric pipeline rejects bad input") {
  CHECK(code_of([] { select_symmetric(regular_simplex(2)); }) == ErrorCode::InvalidInput);
  PipelineOptions o;
  o.d = 1.0;
  CHECK(code_of([&] { select_symmetric(cube(2, FamilyMode::Symmetric), o); }) == ErrorCode::InvalidInput);
  BodyFamily strip = cube(2, FamilyMode::Symmetric);
  strip.bodies.pop_back();
  CHECK(code_of([&] { select_symmetric(strip); }) != ErrorCode::OracleTooLarge);
}

TEST_CASE("general simplex keeps every facet") {
  for (std::size_t n = 2; n <= 4; ++n) {
    const SelectionCertificate c = select_general(regular_simplex(n));
    CHECK(c.selected.size() == n + 1);
    CHECK(c.alpha == doctest::Approx(1.0));
    CHECK(c.all_pass());
    check_general_invariants(c);
    CHECK(c.general->recenter_offset <= 1e-8);
  }
}

TEST_CASE("cube fed as a general family") {
  const SelectionCertificate c = select_general(cube(3, FamilyMode::General));
  CHECK(c.all_pass());
  CHECK(c.selected.size() == 6);
  CHECK(c.alpha == doctest::Approx(1.0));
  // the sparsifier picks an asymmetric subset, so the shift is small but not zero
  CHECK(c.general->shifted.shift_norm_sq * c.general->shifted.sum_b <= 0.5 * (1 + 1e-12));
  check_general_invariants(c);
}

TEST_CASE("60 random halfspaces in 3D") {
  const BodyFamily f = gen_halfspace_family(3, 60, 0.1, 11);
  const SelectionCertificate c = select_general(f);
  CHECK(c.all_pass());
  CHECK(c.selected.size() <= 120);
  check_general_invariants(c);
  CHECK(c.c_reported == doctest::Approx(c.alpha / std::pow(3.0, 1.5)));
  const DiameterReport d = diameter_report(f, c, true);
  CHECK(d.ratio <= c.alpha * (1 + 1e-9));
}

TEST_CASE("random general families") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 2 + seed % 4;
    const SelectionCertificate c = select_general(gen_halfspace_family(n, 8 * n, 0.1, 100 + seed));
    CHECK(c.all_pass());
    check_general_invariants(c);
  }
}

TEST_CASE("Caratheodory on the cross-polytope") {
  const std::vector<Vec> pts = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  const CaratheodoryWitness z = caratheodory_express(Vec{0, 0}, pts);
  CHECK(z.tau.size() <= 3);
  CHECK(z.residual <= 1e-12);
  CHECK(z.sum_residual <= 1e-12);
  for (double r : z.rho) CHECK(r > 0.0);

  const CaratheodoryWitness e = caratheodory_express(Vec{1, 0}, pts);
  CHECK(e.tau == std::vector<std::size_t>{0});
  CHECK(e.rho[0] == doctest::Approx(1.0));

  CHECK(code_of([&] { caratheodory_express(Vec{1, 1}, pts); }) == ErrorCode::CaratheodoryFailed);
}

TEST_CASE("Caratheodory reduces random hulls to n + 1 points") {
  Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    std::vector<Vec> pts;
    for (int k = 0; k < 20; ++k) {
      Vec p(5);
      for (double& x : p) x = rng.normal();
      pts.push_back(p);
    }
    // a random convex combination of all points
    Vec lam(20), w(5, 0.0);
    double total = 0.0;
    for (double& l : lam) total += (l = rng.uniform(0.01, 1.0));
    for (int k = 0; k < 20; ++k)
      for (int i = 0; i < 5; ++i) w[i] += lam[k] / total * pts[k][i];
    const CaratheodoryWitness c = caratheodory_express(w, pts);
    CHECK(c.tau.size() <= 6);
    CHECK(c.residual <= 1e-9);
    CHECK(c.sum_residual <= 1e-12);
    double sum = 0.0;
    Vec back(5, 0.0);
    for (std::size_t k = 0; k < c.tau.size(); ++k) {
      CHECK(c.rho[k] >= 0.0);
      sum += c.rho[k];
      for (int i = 0; i < 5; ++i) back[i] += c.rho[k] * pts[c.tau[k]][i];
    }
    CHECK(sum == doctest::Approx(1.0));
    for (int i = 0; i < 5; ++i) CHECK(back[i] == doctest::Approx(w[i]).epsilon(1e-9));
  }
}

TEST_CASE("reduction leaves a 2n selection unchanged") {
  const BodyFamily f = cube(2, FamilyMode::General);
  const SelectionCertificate c = select_general(f);
  REQUIRE(c.selected.size() == 4);
  const SelectionCertificate r = reduce_to_2n(f, c);
  CHECK(r.selected == c.selected);
  CHECK(r.reduction->steps.empty());
  CHECK(r.reduction->cumulative_growth == 1.0);
  CHECK(r.all_pass());
  CHECK(code_of([&] { reduce_to_2n(f, r); }) == ErrorCode::InvalidInput);
}

TEST_CASE("reduction with one drop") {
  // a pentagon-like 2D family with 5 bodies selected
  BodyFamily f;
  f.mode = FamilyMode::General;
  f.dim = 2;
  for (int k = 0; k < 5; ++k) {
    const double t = 2.0 * std::numbers::pi * k / 5.0;
    f.bodies.push_back({"p" + std::to_string(k), {{{std::cos(t), std::sin(t)}, 1.0}}});
  }
  const SelectionCertificate c = select_general(f);
  REQUIRE(c.selected.size() == 5);
  const SelectionCertificate r = reduce_to_2n(f, c);
  REQUIRE(r.reduction->steps.size() == 1);
  const ReductionStep& s = r.reduction->steps[0];
  CHECK(s.m == 5);
  CHECK(s.bound == doctest::Approx(5.0));
  CHECK(s.growth <= 5.0);
  CHECK(s.growth >= 1.0);
  CHECK(s.pass);
  CHECK(r.selected.size() == 4);
  CHECK(r.all_pass());
  CHECK(verdict(r, "reduction_step_growth"));
}

TEST_CASE("reduction from eight bodies in the plane") {
  // the circumscribed 16-gon selects 8 of its facets
  BodyFamily f;
  f.mode = FamilyMode::General;
  f.dim = 2;
  for (int k = 0; k < 16; ++k) {
    const double t = 2.0 * std::numbers::pi * k / 16.0;
    f.bodies.push_back({"p" + std::to_string(k), {{{std::cos(t), std::sin(t)}, 1.0}}});
  }
  const SelectionCertificate c = select_general(f);
  REQUIRE(c.selected.size() == 8);
  const SelectionCertificate r = reduce_to_2n(f, c);
  CHECK(r.selected.size() == 4);
  CHECK(r.reduction->steps.size() == 4);
  CHECK(r.reduction->binomial_bound == 70.0);
  double chain = 1.0;
  for (const ReductionStep& s : r.reduction->steps) {
    CHECK(s.pass);
    chain *= s.growth;
  }
  CHECK(r.reduction->cumulative_growth == doctest::Approx(chain));
  CHECK(r.reduction->cumulative_growth <= 70.0);
  CHECK(r.reduction->diameter_ratio_final <= r.reduction->diameter_ratio_start * 70.0);
  CHECK(r.all_pass());
}

TEST_CASE("reduction needs the oracle") {
  const BodyFamily f = cube(7, FamilyMode::General);
  const SelectionCertificate c = select_general(f);
  CHECK(code_of([&] { reduce_to_2n(f, c); }) == ErrorCode::OracleTooLarge);
}

TEST_CASE("binomial") {
  CHECK(binomial(8, 4) == 70.0);
  CHECK(binomial(5, 0) == 1.0);
  CHECK(binomial(3, 4) == 0.0);
  CHECK(binomial(40, 20) == doctest::Approx(137846528820.0));
}

TEST_CASE("recheck reproduces the verdicts and spots tampering") {
  const BodyFamily f = gen_slab_family(3, 15, 2);
  const SelectionCertificate c = select_symmetric(f);
  CHECK(recheck_certificate(f, c) == c.verdicts);

  SelectionCertificate bad = c;
  bad.alpha *= 0.5;
  CHECK_FALSE(verdict([&] {
    bad.verdicts = recheck_certificate(f, bad);
    return bad;
  }(), "alpha_reproduced"));

  SelectionCertificate moved = c;
  moved.john.vectors[0][0] += 1e-3;
  moved.verdicts = recheck_certificate(f, moved);
  CHECK_FALSE(moved.all_pass());

  const BodyFamily h = gen_halfspace_family(3, 20, 0.1, 2);
  const SelectionCertificate g = select_general(h);
  CHECK(recheck_certificate(h, g) == g.verdicts);
  SelectionCertificate shifted = g;
  shifted.general->w[0] += 0.1;
  shifted.verdicts = recheck_certificate(h, shifted);
  CHECK_FALSE(shifted.all_pass());
}

TEST_CASE("pipelines are deterministic") {
  const BodyFamily f = gen_slab_family(4, 20, 9);
  const SelectionCertificate a = select_symmetric(f);
  const SelectionCertificate b = select_symmetric(f);
  CHECK(a.selected == b.selected);
  CHECK(a.alpha == b.alpha);
  CHECK(a.john.weights == b.john.weights);
  const BodyFamily h = gen_halfspace_family(3, 20, 0.1, 9);
  const SelectionCertificate x = select_general(h);
  const SelectionCertificate y = select_general(h);
  CHECK(x.selected == y.selected);
  CHECK(x.general->shifted.b == y.general->shifted.b);
  CHECK(x.alpha == y.alpha);
}
