#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "helly/geometry.hpp"
#include "helly/john.hpp"
#include "helly/linalg.hpp"
#include "helly/sparsify.hpp"

namespace helly {

struct CaratheodoryWitness {
  std::vector<std::size_t> tau;  // indices into the point list
  Vec rho;                       // > 0, sums to 1
  Vec target;
  double residual = 0.0;         // ||sum rho_i p_i - w||
  double sum_residual = 0.0;     // |sum rho - 1|
};

/// Writes w as a convex combination of at most n + 1 of the points: a basic
/// feasible solution of the hull LP, reduced along null-space directions if
/// needed, then polished on its support. Throws CaratheodoryFailed when w is
/// outside the hull.
CaratheodoryWitness caratheodory_express(std::span<const double> w, std::span<const Vec> points);

/// Contact vectors kept in the certificate so that `certify` can recompute
/// the residuals without rerunning the ellipsoid iteration.
struct JohnRecord {
  std::vector<Vec> vectors;
  Vec weights;
  std::vector<std::size_t> sources;  // index into the polar generators
  std::vector<std::size_t> owners;
  SymMatrix lowner_map;
  Vec center;
  double residual_identity = 0.0;
  double residual_barycenter = 0.0;
  double residual_trace = 0.0;
  double max_unit_deviation = 0.0;
  double mvee_gap = 0.0;
  long mvee_iterations = 0;
};

struct SymmetricStage {
  double d = 4.0;
  double gamma = 3.0;
  std::vector<std::size_t> sigma;  // indices into JohnRecord::vectors
  Vec b;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::size_t barvinok_samples = 0;
  double barvinok_worst = 0.0;  // max over z of max_C |<z,x>| / (gamma sqrt(n) max_X |<z,x>|)
};

struct GeneralStage {
  double eps = 0.5;
  ShiftedDecomposition shifted;  // sigma indexes JohnRecord::vectors
  Vec w;
  double w_norm = 0.0;
  CaratheodoryWitness caratheodory;  // tau indexes JohnRecord::vectors
  std::size_t size_budget = 0;       // ceil(d (n + 1)) + n + 1
  std::size_t recenter_iterations = 0;
  double recenter_offset = 0.0;      // sqrt(c^T M c) of the final polar ellipsoid center
};

struct ReductionStep {
  std::size_t dropped = 0;  // body index
  std::size_t m = 0;        // bodies before the drop
  double radius_before = 0.0;
  double radius_after = 0.0;
  double growth = 0.0;
  double bound = 0.0;       // m / (m - 2n)
  bool pass = false;
};

struct ReductionRecord {
  std::vector<std::size_t> start;
  std::vector<ReductionStep> steps;
  double cumulative_growth = 1.0;
  double binomial_bound = 1.0;  // binom(s, 2n)
  double diameter_ratio_start = 0.0;
  double diameter_ratio_final = 0.0;
  double alpha_start = 0.0;
};

struct DiameterReport {
  bool exact = false;
  double diam_selected = 0.0;  // exact mode only
  double diam_full = 0.0;
  double ratio = 0.0;          // exact ratio, or the bound alpha
};

struct SelectionCertificate {
  FamilyMode mode = FamilyMode::Symmetric;
  std::size_t dim = 0;
  std::size_t body_count = 0;
  std::size_t constraint_count = 0;
  std::uint64_t seed = 0;
  double tol_john = 1e-5;
  std::vector<std::size_t> selected;  // sorted body indices
  std::vector<std::string> selected_ids;
  Vec translate;
  double bound_claimed = 0.0;  // gamma_d sqrt(n), or alpha itself in general mode
  double alpha = 0.0;
  double c_reported = 0.0;     // alpha / n^{3/2}
  std::size_t size_bound = 0;
  JohnRecord john;
  std::optional<SymmetricStage> symmetric;
  std::optional<GeneralStage> general;
  std::optional<ReductionRecord> reduction;
  std::optional<DiameterReport> diameter;
  std::optional<double> alpha_exact;
  std::vector<std::pair<std::string, bool>> verdicts;
  std::vector<std::string> notes;
  std::optional<double> runtime_seconds;

  bool all_pass() const;
  void set_verdict(const std::string& name, bool pass);
};

struct PipelineOptions {
  double d = 4.0;
  double eps = 0.5;
  double tol_john = 1e-5;
  double eps_mvee = 1e-8;
  std::uint64_t seed = 0;
  std::size_t barvinok_samples = 200;
};

/// Normalize, decompose the polar generators, sparsify, map contact points
/// to their bodies and measure the containment factor by LP.
SelectionCertificate select_symmetric(const BodyFamily& family, const PipelineOptions& options = {});

/// Chebyshev center, recentering until the polar's minimal ellipsoid is
/// origin-centered, centered decomposition, shifted sparsification,
/// Caratheodory step and LP containment.
SelectionCertificate select_general(const BodyFamily& family, const PipelineOptions& options = {});

/// The family in the coordinates the certificate was produced in.
BodyFamily certificate_frame(const BodyFamily& family, const SelectionCertificate& cert);

/// Greedy drop of the body whose removal keeps the oracle circumradius
/// smallest, until 2n bodies remain. Needs n <= 6 (OracleTooLarge otherwise).
SelectionCertificate reduce_to_2n(const BodyFamily& family, const SelectionCertificate& cert);

/// Diameter of the selected intersection against the full one. Exact mode
/// uses vertex enumeration; bound mode reports alpha.
DiameterReport diameter_report(const BodyFamily& family, const SelectionCertificate& cert, bool exact);

/// Recomputes every verdict from the stored vectors and weights, the
/// instance, and fresh LP solves. The pipelines fill their verdicts with
/// this same function, so an untouched certificate rechecks identically.
std::vector<std::pair<std::string, bool>> recheck_certificate(const BodyFamily& family,
                                                              const SelectionCertificate& cert);

/// binom(s, k) as a double
double binomial(std::size_t s, std::size_t k);

}  // namespace helly
