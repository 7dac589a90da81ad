#pragma once

#include <cstddef>
#include <vector>

#include "collatz/numeric.hpp"

namespace collatz {

// One linear constraint coeffs·x REL rhs over rational variables.
struct LinearConstraint {
  enum class Rel { eq, ge };
  std::vector<Rat> coeffs;
  Rat rhs;
  Rel rel = Rel::ge;
};

LinearConstraint make_ge(std::vector<Rat> coeffs, Rat rhs);
LinearConstraint make_eq(std::vector<Rat> coeffs, Rat rhs);

struct FeasibilityResult {
  bool feasible = false;
  std::vector<Rat> point;  // a satisfying assignment when feasible
};

// Exact feasibility of a system of rational linear constraints by
// Fourier-Motzkin elimination. Equalities are removed by substitution,
// inequalities by pairwise combination; a satisfying point is recovered by
// back-substitution. Intended for the small systems that arise here
// (dimension <= ~30); elimination can blow up exponentially in general, so
// the working set is capped at kMaxWorkingConstraints and exceeding the cap
// throws FEASIBILITY_BLOWUP.
inline constexpr std::size_t kMaxWorkingConstraints = 200000;

FeasibilityResult solve_feasibility(std::size_t num_vars, std::vector<LinearConstraint> constraints);

}  // namespace collatz
