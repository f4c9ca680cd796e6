#pragma once

#include <span>
#include <vector>

#include "helly/geometry.hpp"
#include "helly/linalg.hpp"

namespace helly {

/// {x : (x - center)^T shape (x - center) <= 1}
struct Ellipsoid {
  Vec center;
  SymMatrix shape;
};

struct MveeResult {
  Ellipsoid ellipsoid;
  Vec weights;        // dual weights p_k >= 0, sum 1
  double gap = 0.0;   // max(omega_max / D - 1, 1 - omega_min_support / D)
  long iterations = 0;
};

/// Origin-centered minimum-volume ellipsoid containing +-points (Khachiyan
/// iteration with Todd-Yildirim away steps). Stops at relative gap `eps`.
/// Throws DegenerateSpan if the points do not span.
MveeResult mvee_centered(std::span<const Vec> points, double eps = 1e-8);

/// Minimum-volume ellipsoid with free center: lift to (x, 1), solve the
/// centered problem one dimension up, project back.
MveeResult mvee_general(std::span<const Vec> points, double eps = 1e-8);

struct JohnOptions {
  double eps_mvee = 1e-8;
  double tol_john = 1e-5;
};

/// Approximate decomposition of the identity: sum a_j v_j v_j^T ~ I (and
/// sum a_j v_j ~ 0 when centered) over contact points in Lowner coordinates.
struct JohnDecomposition {
  std::vector<Vec> vectors;
  Vec weights;
  bool centered = false;
  double residual_identity = 0.0;
  double residual_barycenter = 0.0;
  double residual_trace = 0.0;       // |sum a_j - n|
  double max_unit_deviation = 0.0;   // max | ||x|| - 1 | over contact points before snapping to the sphere
  std::vector<std::size_t> sources;  // index into the input point set
  std::vector<std::size_t> owners;   // owning body of each source point
};

struct JohnResult {
  JohnDecomposition decomposition;
  SymMatrix lowner_map;             // M^{1/2}
  Vec center;                       // MVEE center (zero when not centered)
  std::vector<Vec> mapped_points;   // every input point in Lowner coordinates
  MveeResult mvee;
};

/// Puts the points in Lowner position (their MVEE becomes the unit ball),
/// keeps the slackness-active contact points with weight above 1e-9/m and
/// sets a_j = n p_j. The centered variant also refits the weights by
/// nonnegative least squares on the identity and barycenter equations.
/// Throws JohnExtractionFailed when residuals exceed tol_john.
JohnResult john_decomposition(const TaggedPointSet& points, bool centered, const JohnOptions& options = {});

/// Recomputes the three residuals of a stored decomposition.
void measure_residuals(JohnDecomposition& decomposition, std::size_t dim);

}  // namespace helly
