#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "helly/linalg.hpp"
#include "helly/lp.hpp"

namespace helly {

enum class FamilyMode { Symmetric, General };

/// One member of the family. In symmetric mode each constraint (a, c) is the
/// slab |<x, a>| <= c; in general mode it is the halfspace <x, a> <= c.
struct Body {
  std::string id;
  std::vector<Halfspace> constraints;
};

struct BodyFamily {
  FamilyMode mode = FamilyMode::General;
  std::size_t dim = 0;
  std::vector<Body> bodies;

  std::size_t constraint_count() const;
};

/// Polar generators with the index of the body each one came from.
struct TaggedPointSet {
  std::vector<Vec> points;
  std::vector<std::size_t> owners;
};

struct ChebyshevCenter {
  Vec center;
  double margin = 0.0;
};

inline constexpr double kInteriorMargin = 1e-7;

/// Structural checks: dimensions, finite entries, nonzero normals, positive
/// offsets in symmetric mode. Throws InvalidInput.
void validate_family(const BodyFamily& family);

/// Halfspaces of one body; slabs expand to two halfspaces.
std::vector<Halfspace> body_halfspaces(const Body& body, FamilyMode mode);

/// Halfspaces of the listed bodies (all bodies when `selected` is empty).
std::vector<Halfspace> family_halfspaces(const BodyFamily& family, std::span<const std::size_t> selected = {});

/// Rewrites every constraint about the new origin z with right-hand side 1.
/// Symmetric families only accept z = 0 and are rescaled to offset 1.
/// Throws NotInterior if some constraint has distance < 1e-7 from z.
BodyFamily normalize_family(const BodyFamily& raw, std::span<const double> z);

/// Largest inscribed ball of the full intersection (one LP). Throws
/// DegenerateInterior if the margin is <= 1e-9.
ChebyshevCenter chebyshev_center(const BodyFamily& family);

/// Requires a normalized family. Symmetric: +-a for every slab vector;
/// general: every constraint vector.
TaggedPointSet polar_generators(const BodyFamily& family);

/// Least alpha with Q <= alpha P where Q intersects the selected bodies and
/// P the whole (normalized) family. Returns +infinity if Q is unbounded.
double containment_factor(std::span<const std::size_t> selected, const BodyFamily& family);

/// Gauge of conv(points) at x: min t >= 0 with x in t conv(points).
/// Throws Outside if no such t exists (x outside the cone of the points).
double minkowski_functional_v(std::span<const Vec> points, std::span<const double> x);

}  // namespace helly
