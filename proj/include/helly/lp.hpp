#pragma once

#include <span>
#include <vector>

#include "helly/linalg.hpp"

namespace helly {

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// maximize objective . x  subject to  G x <= h,  E x = f,
/// with x free, or x >= 0 when `nonnegative` is set.
struct LinearProgram {
  Vec objective;
  Matrix inequality;
  Vec inequality_rhs;
  Matrix equality;
  Vec equality_rhs;
  bool nonnegative = false;
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vec x;
  double value = 0.0;
};

/// minimize cost . y  subject to  A y = b,  y >= 0.
struct StandardForm {
  Matrix a;
  Vec b;
  Vec cost;
};

struct StandardResult {
  LpStatus status = LpStatus::Infeasible;
  Vec y;
  Vec duals;  // pi with A^T pi <= cost at optimality
  double value = 0.0;
  std::vector<std::size_t> basis;
};

/// Two-phase dense tableau simplex with Bland's rule (lowest index enters,
/// lowest basic index leaves on ratio ties). The final basis is re-solved
/// from the original data to clean up tableau drift. Throws SolverStall if
/// the pivot budget runs out.
StandardResult solve_standard(const StandardForm& lp);

/// Solves the general form by reduction to standard form. Free variables
/// are split, slacks serve as the starting basis where the row allows it.
LpResult solve_lp(const LinearProgram& lp);

/// Halfspace <x, normal> <= offset.
struct Halfspace {
  Vec normal;
  double offset = 1.0;
};

struct SupportResult {
  LpStatus status = LpStatus::Optimal;
  double value = 0.0;
  Vec maximizer;
};

/// sup <x, direction> over the intersection of the halfspaces. Solved
/// through the dual (dimension rows instead of constraint rows). Throws
/// EmptyBody if the intersection is empty.
SupportResult support_query(std::span<const Halfspace> constraints, std::span<const double> direction);

/// Value of support_query; +infinity when the polyhedron is unbounded in
/// the direction.
double support_h_polytope(std::span<const Halfspace> constraints, std::span<const double> direction);

/// True if some point satisfies every constraint (phase-one check).
bool is_feasible(std::span<const Halfspace> constraints, std::size_t dim);

}  // namespace helly
