#include <cmath>
#include <limits>

#include "doctest.h"
#include "helly/error.hpp"
#include "helly/geometry.hpp"
#include "helly/oracle.hpp"
#include "helly/rng.hpp"

using namespace helly;

namespace {

BodyFamily cube(std::size_t n, double half = 1.0) {
  BodyFamily f;
  f.mode = FamilyMode::Symmetric;
  f.dim = n;
  for (std::size_t i = 0; i < n; ++i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    f.bodies.push_back({"x" + std::to_string(i), {{e, half}}});
  }
  return f;
}

// x_i >= 0 and sum x_i <= 1, one body per facet
BodyFamily simplex(std::size_t n) {
  BodyFamily f;
  f.mode = FamilyMode::General;
  f.dim = n;
  for (std::size_t i = 0; i < n; ++i) {
    Vec a(n, 0.0);
    a[i] = -1.0;
    f.bodies.push_back({"f" + std::to_string(i), {{a, 0.0}}});
  }
  f.bodies.push_back({"top", {{Vec(n, 1.0), 1.0}}});
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

}  // namespace

TEST_CASE("validate_family rejects malformed input") {
  BodyFamily f = cube(2);
  CHECK_NOTHROW(validate_family(f));
  BodyFamily bad = f;
  bad.bodies[0].constraints[0].normal = {1.0};
  CHECK(code_of([&] { validate_family(bad); }) == ErrorCode::InvalidInput);
  bad = f;
  bad.bodies[1].constraints[0].offset = 0.0;
  CHECK(code_of([&] { validate_family(bad); }) == ErrorCode::InvalidInput);
  bad = f;
  bad.bodies[1].constraints[0].normal = {0.0, 0.0};
  CHECK(code_of([&] { validate_family(bad); }) == ErrorCode::InvalidInput);
  bad = f;
  bad.bodies[0].constraints[0].normal[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK(code_of([&] { validate_family(bad); }) == ErrorCode::InvalidInput);
  bad = f;
  bad.bodies.clear();
  CHECK(code_of([&] { validate_family(bad); }) == ErrorCode::InvalidInput);
}

TEST_CASE("slabs expand to two halfspaces") {
  const BodyFamily f = cube(3);
  CHECK(family_halfspaces(f).size() == 6);
  const std::vector<std::size_t> one = {1};
  const auto hs = family_halfspaces(f, one);
  REQUIRE(hs.size() == 2);
  CHECK(hs[0].normal[1] == 1.0);
  CHECK(hs[1].normal[1] == -1.0);
}

TEST_CASE("normalize_family divides by the slack") {
  BodyFamily f = simplex(2);
  const Vec z = {0.25, 0.25};
  const BodyFamily g = normalize_family(f, z);
  // -x <= 0 has slack 0.25 at z, so it becomes -4 (x - z) <= 1
  CHECK(g.bodies[0].constraints[0].normal[0] == doctest::Approx(-4.0));
  CHECK(g.bodies[0].constraints[0].offset == 1.0);
  // x + y <= 1 has slack 0.5
  CHECK(g.bodies[2].constraints[0].normal[0] == doctest::Approx(2.0));

  CHECK(code_of([&] { normalize_family(f, Vec{0.0, 0.5}); }) == ErrorCode::NotInterior);
  CHECK(code_of([&] { normalize_family(cube(2), Vec{0.1, 0.0}); }) == ErrorCode::InvalidInput);
}

TEST_CASE("normalization preserves the body up to translation") {
  Rng rng(8);
  const BodyFamily f = gen_halfspace_family(3, 10, 0.1, 8);
  const ChebyshevCenter cc = chebyshev_center(f);
  const BodyFamily g = normalize_family(f, cc.center);
  for (int t = 0; t < 200; ++t) {
    Vec x(3);
    for (double& v : x) v = rng.uniform(-2, 2);
    Vec shifted = x;
    for (std::size_t i = 0; i < 3; ++i) shifted[i] -= cc.center[i];
    for (std::size_t b = 0; b < f.bodies.size(); ++b)
      for (std::size_t k = 0; k < f.bodies[b].constraints.size(); ++k) {
        const bool in_raw = dot(f.bodies[b].constraints[k].normal, x) <= f.bodies[b].constraints[k].offset;
        const bool in_norm = dot(g.bodies[b].constraints[k].normal, shifted) <= 1.0;
        CHECK(in_raw == in_norm);
      }
  }
}

TEST_CASE("Chebyshev center of the square and the simplex") {
  const ChebyshevCenter c = chebyshev_center(cube(2, 1.0));
  CHECK(c.margin == doctest::Approx(1.0));
  CHECK(norm2(c.center) < 1e-9);

  const ChebyshevCenter s = chebyshev_center(simplex(2));
  // inradius of the right triangle with legs 1
  const double r = 1.0 / (2.0 + std::sqrt(2.0));
  CHECK(s.margin == doctest::Approx(r));
  CHECK(s.center[0] == doctest::Approx(r));
  CHECK(s.center[1] == doctest::Approx(r));
}

TEST_CASE("Chebyshev center rejects flat intersections") {
  BodyFamily f;
  f.mode = FamilyMode::General;
  f.dim = 2;
  f.bodies.push_back({"a", {{{1, 0}, 0.0}}});
  f.bodies.push_back({"b", {{{-1, 0}, 0.0}}});
  f.bodies.push_back({"c", {{{0, 1}, 1.0}, {{0, -1}, 1.0}}});
  CHECK(code_of([&] { chebyshev_center(f); }) == ErrorCode::DegenerateInterior);
}

TEST_CASE("polar generators carry owners") {
  BodyFamily f = cube(2, 2.0);
  const BodyFamily g = normalize_family(f, Vec{0, 0});
  const TaggedPointSet p = polar_generators(g);
  REQUIRE(p.points.size() == 4);
  CHECK(p.points[0][0] == doctest::Approx(0.5));
  CHECK(p.points[1][0] == doctest::Approx(-0.5));
  CHECK(p.owners == std::vector<std::size_t>{0, 0, 1, 1});
}

TEST_CASE("containment factor: cube and missing slabs") {
  const BodyFamily f = normalize_family(cube(3), Vec(3, 0.0));
  const std::vector<std::size_t> all = {0, 1, 2};
  CHECK(containment_factor(all, f) == 1.0);
  const std::vector<std::size_t> two = {0, 1};
  CHECK(std::isinf(containment_factor(two, f)));
}

TEST_CASE("containment factor of a square inside a rotated square") {
  // |x| <= 1, |y| <= 1 against |x + y| <= 1, |x - y| <= 1 scaled by sqrt 2
  BodyFamily f;
  f.mode = FamilyMode::Symmetric;
  f.dim = 2;
  f.bodies.push_back({"x", {{{1, 0}, 1.0}}});
  f.bodies.push_back({"y", {{{0, 1}, 1.0}}});
  f.bodies.push_back({"p", {{{1, 1}, 1.0}}});
  f.bodies.push_back({"q", {{{1, -1}, 1.0}}});
  const BodyFamily g = normalize_family(f, Vec{0, 0});
  const std::vector<std::size_t> sq = {0, 1};
  // the square's vertex (1,1) hits x + y = 2
  CHECK(containment_factor(sq, g) == doctest::Approx(2.0));
  CHECK(containment_factor_exact(sq, g) == doctest::Approx(2.0));
  const std::vector<std::size_t> diamond = {2, 3};
  CHECK(containment_factor(diamond, g) == doctest::Approx(1.0));
}

TEST_CASE("containment factor agrees with the vertex oracle") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const BodyFamily f = gen_halfspace_family(2 + seed % 2, 7, 0.1, seed);
    const BodyFamily g = normalize_family(f, chebyshev_center(f).center);
    std::vector<std::size_t> sel;
    for (std::size_t i = 0; i < g.bodies.size(); i += 2) sel.push_back(i);
    const double lp = containment_factor(sel, g);
    if (!std::isfinite(lp)) continue;
    CHECK(lp == doctest::Approx(containment_factor_exact(sel, g)).epsilon(1e-8));
  }
}

TEST_CASE("Minkowski functional of the cross-polytope hull") {
  const std::vector<Vec> pts = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  CHECK(minkowski_functional_v(pts, Vec{0, 0}) == 0.0);
  CHECK(minkowski_functional_v(pts, Vec{0.5, 0.5}) == doctest::Approx(1.0));
  CHECK(minkowski_functional_v(pts, Vec{3, -1}) == doctest::Approx(4.0));
  const std::vector<Vec> half = {{1, 0}, {0, 1}};
  CHECK(code_of([&] { minkowski_functional_v(half, Vec{-1, 0}); }) == ErrorCode::Outside);
}

TEST_CASE("Minkowski functional is sublinear") {
  Rng rng(14);
  std::vector<Vec> pts;
  for (int k = 0; k < 12; ++k) pts.push_back(rng.unit_vector(3));
  for (int k = 0; k < 3; ++k) {
    Vec e(3, 0.0);
    e[k] = 1.0;
    pts.push_back(e);
    e[k] = -1.0;
    pts.push_back(e);
  }
  for (int t = 0; t < 50; ++t) {
    Vec x(3), y(3);
    for (double& v : x) v = rng.normal();
    for (double& v : y) v = rng.normal();
    Vec s = x;
    for (std::size_t i = 0; i < 3; ++i) s[i] += y[i];
    const double px = minkowski_functional_v(pts, x);
    const double py = minkowski_functional_v(pts, y);
    CHECK(minkowski_functional_v(pts, s) <= px + py + 1e-9);
    Vec x3 = x;
    for (double& v : x3) v *= 3.0;
    CHECK(minkowski_functional_v(pts, x3) == doctest::Approx(3.0 * px).epsilon(1e-9));
  }
}
