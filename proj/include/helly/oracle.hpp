#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "helly/geometry.hpp"
#include "helly/linalg.hpp"
#include "helly/lp.hpp"

namespace helly {

// Brute-force ground truth for small instances. Everything here is
// deliberately naive so that it can serve as the reference for the LP code.

inline constexpr std::size_t kOracleMaxDim = 6;
inline constexpr double kOracleMaxBases = 4e6;
inline constexpr double kBruteForceMaxSubsets = 2e5;

struct VertexSet {
  std::vector<Vec> vertices;
  // indices of the constraints active at each vertex
  std::vector<std::vector<std::size_t>> active;
};

/// All vertices of a bounded polyhedron by solving every n-subset of
/// constraint hyperplanes and keeping feasible solutions (merged at 1e-7).
/// Throws OracleTooLarge beyond the caps, UnboundedBody if unbounded,
/// EmptyBody if empty.
VertexSet enumerate_vertices(std::span<const Halfspace> constraints, std::size_t dim);

double diameter_exact(std::span<const Halfspace> constraints, std::size_t dim);

struct CircumradiusBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Cone branch-and-bound on max ||x|| over the polytope; needs the origin
/// strictly inside (all offsets > 0). Each cone spanned by unit vectors g_i
/// is bounded by the LP max of sum(lambda) over x = G lambda in P, lambda >= 0.
/// Stops when upper <= lower (1 + rel_tol), or once the answer relative to
/// `threshold` is certified (upper <= threshold or lower > threshold).
/// Throws OracleTooLarge past `max_cones` LP solves.
CircumradiusBounds circumradius_bounds(std::span<const Halfspace> constraints, std::size_t dim, double rel_tol,
                                       double threshold = -1.0, std::size_t max_cones = 400000);

/// max ||x|| over the polytope (origin-centered). Vertex enumeration within
/// the enumeration caps, cone branch-and-bound to 1e-9 relative otherwise.
/// Returns +infinity for unbounded polyhedra.
double circumradius_exact(std::span<const Halfspace> constraints, std::size_t dim);

/// Containment factor of the selected bodies in the normalized family,
/// computed from the vertices of their intersection.
double containment_factor_exact(std::span<const std::size_t> selected, const BodyFamily& family);

struct BruteForceResult {
  double alpha = 0.0;
  std::vector<std::size_t> subset;
};

/// Minimum containment factor over all size-s subfamilies.
BruteForceResult best_subset_bruteforce(const BodyFamily& family, std::size_t s);

struct SharpnessInstance {
  BodyFamily family;
  CircumradiusBounds circumradius;
  int attempts = 0;
};

/// N unit-offset slabs with uniformly random unit directions. B_2^n lies
/// inside by construction; the outer inclusion in 2 B_2^n is certified and
/// the sample is redrawn (up to 20 times) until it holds.
SharpnessInstance gen_sharpness_instance(std::size_t n, std::size_t count, std::uint64_t seed);

/// Random bounded symmetric family: `bodies` bodies of 1-3 slabs each.
BodyFamily gen_slab_family(std::size_t n, std::size_t bodies, std::uint64_t seed);

/// Random bounded general family whose intersection contains a ball of
/// radius `margin` around a random interior point; bodies hold 1-2 halfspaces.
BodyFamily gen_halfspace_family(std::size_t n, std::size_t bodies, double margin, std::uint64_t seed);

/// Whether the polyhedron is bounded (finite support in every +-e_i).
bool is_bounded(std::span<const Halfspace> constraints, std::size_t dim);

}  // namespace helly
