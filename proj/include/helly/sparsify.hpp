#pragma once

#include <span>
#include <string>
#include <vector>

#include "helly/linalg.hpp"

namespace helly {

/// (sqrt(d) + 1) / (sqrt(d) - 1)
double gamma_d(double d);

struct SparsifierResult {
  std::vector<std::size_t> sigma;  // sorted, distinct
  Vec b;                           // reweight per sigma entry
  double lambda_min = 0.0;         // of sum b_j a_j v_j v_j^T, after scaling
  double lambda_max = 0.0;
  double d = 0.0;
  double gamma = 0.0;
  double input_residual = 0.0;     // ||sum a_j v_j v_j^T - I||_F of the input
  std::size_t steps = 0;
  bool certified = false;          // ratio <= gamma^2 (1 + 1e-6), widened by the input residual
};

/// Barrier-potential subset selection. With sum a_j v_j v_j^T = I it returns
/// at most ceil(d n) indices with I <= sum_sigma b_j a_j v_j v_j^T <= gamma_d^2 I.
/// The extremes are recomputed by eigendecomposition after the run.
/// Throws BarrierStuck if a step finds no admissible index.
SparsifierResult bss_select(std::span<const Vec> vectors, std::span<const double> weights, double d);

struct OperatorCertificate {
  double t_norm = 0.0;      // (sum b) ||v||^2, also ||T|| by eigen-check
  double t_eigen = 0.0;     // spectral norm of T computed directly
  bool t_pass = false;      // t_norm <= eps
  double a_min = 0.0;       // extremes of A = sum b_j v_j v_j^T
  double a_max = 0.0;
  bool a_pass = false;      // A in [1 - eps, 4 + 3 eps]
  double trace_residual = 0.0;
};

struct ShiftedDecomposition {
  std::vector<std::size_t> sigma;
  Vec b;  // beta_j, indexed like sigma
  Vec v;
  double eps = 0.5;
  double d = 0.0;  // the escalation step that succeeded
  double sum_b = 0.0;
  double barycenter_residual = 0.0;  // ||sum b_j (v_j + v)||
  double shift_norm_sq = 0.0;        // ||v||^2
  double shifted_min = 0.0;          // extremes of sum b_j (v_j + v)(v_j + v)^T
  double shifted_max = 0.0;
  OperatorCertificate operator_t;
  bool barycenter_pass = false;
  bool shift_pass = false;
  bool sum_pass = false;
  bool shifted_pass = false;
  std::vector<std::string> trail;  // one line per attempted d
};

inline constexpr double kShiftEscalation[] = {9.0, 16.0, 25.0, 36.0};

/// Lift v_j to (v_j, 1/sqrt(n)), sparsify in dimension n + 1 and shift the
/// selection so its weighted barycenter is zero. Weights are scaled so the
/// shifted sum is at least I. Retries with larger d until every check passes;
/// throws ShiftCertificateFailed with the trail otherwise.
ShiftedDecomposition shifted_select(std::span<const Vec> vectors, std::span<const double> weights, double eps = 0.5);

/// Checks on T = sum b_j (v_j v^T + v v_j^T) + (sum b) v v^T and on A.
OperatorCertificate certify_operator_T(std::span<const Vec> vectors, std::span<const std::size_t> sigma,
                                       std::span<const double> b, std::span<const double> v, double eps);

}  // namespace helly
