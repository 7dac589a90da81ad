#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "collatz/form.hpp"
#include "collatz/map.hpp"
#include "collatz/numeric.hpp"

namespace collatz {

// Closed convex cone generated by finitely many lattice vectors. For a map
// the positive shift cone B+ is generated by the nonzero shifts; B- is the
// same cone negated.
struct FinitelyGeneratedCone {
  std::vector<LatticePoint> generators;  // nonzero
};

// Minimal nonzero |F(x)| over x in the residue class: with c = <a, rep> mod d
// this is d when c = 0 and min(c, d-c) otherwise (F primitive, so F takes
// every value of c + dZ on the class).
Int min_nonzero_abs(const IntegerForm& form, const ResidueClass& omega, const Int& d);

// F is separating when m_w * min_nonzero_abs(F, w, d) > |F(r_w)| for all w,
// i.e. T preserves the sign of F off the kernel.
bool is_separating(const IntegerForm& form, const CollatzMap& map);

// Complete duplicate-free list of separating forms, canonically signed, in
// lexicographic order. Candidates are enumerated in the exact coefficient box
// |<a, g_i>| <= d*m_i - 1 induced by rank-many independent shifts g_i;
// box_scale inflates the box (used to test completeness). Throws
// SHIFTS_DONT_SPAN when the shifts do not span, SIZE_GUARD when the candidate
// box is unreasonably large.
std::vector<IntegerForm> enumerate_separating_forms(const CollatzMap& map, unsigned box_scale = 1);

// x is a nonnegative rational combination of the generators. Exact: a fast
// angular-sector test at rank 2, a Farkas separation certificate via
// rational elimination otherwise. The zero point is always contained.
bool cone_contains(const FinitelyGeneratedCone& cone, const LatticePoint& x);
bool cone_contains(const FinitelyGeneratedCone& cone, const std::vector<Rat>& x);

// x lies outside both B+ and B-, i.e. on some semipermeable hyperplane.
// Throws ZERO_POINT for x = 0 and NOT_ACUTE when the shift set admits no
// strictly positive form.
bool is_directed(const CollatzMap& map, const LatticePoint& x);

// Open full-dimensional cell of the hyperplane arrangement: the set
// {x : sign_j * F_j(x) > 0 for all j}.
struct Chamber {
  std::vector<std::int8_t> signs;  // +1 / -1 per form
  bool wild = false;
  std::vector<Rat> witness;  // interior point, feasibility-certified
};

// All nonempty chambers of the arrangement. Rank 2 uses exact angular sector
// sweep around the origin; other ranks enumerate sign vectors depth-first
// with rational feasibility pruning (guard: at most 20 forms, else
// TOO_MANY_FORMS). Both paths produce identical chamber sets at rank 2
// (cross-checked in tests).
std::vector<Chamber> build_chambers(const std::vector<IntegerForm>& forms, std::size_t rank);
std::vector<Chamber> build_chambers_by_signs(const std::vector<IntegerForm>& forms, std::size_t rank);

// Sets the wild flag: a chamber is wild iff it meets the shift cone, decided
// by exact feasibility in the cone coefficients.
void classify_wild(std::vector<Chamber>& chambers, const std::vector<IntegerForm>& forms,
                   const FinitelyGeneratedCone& shift_cone);

// The wild cone W is B- together with the closures of the wild chambers; the
// tame cone D is its complement. Tame lattice points have divergent
// trajectories (relatively prime type + acute shifts).
class TameCone {
 public:
  TameCone(std::size_t rank, std::vector<IntegerForm> forms, std::vector<Chamber> chambers,
           FinitelyGeneratedCone shift_cone);

  std::size_t rank() const noexcept { return rank_; }
  const std::vector<IntegerForm>& forms() const noexcept { return forms_; }
  const std::vector<Chamber>& chambers() const noexcept { return chambers_; }
  const FinitelyGeneratedCone& shift_cone() const noexcept { return shift_cone_; }

  bool contains(const LatticePoint& x) const;
  bool contains(const std::vector<Rat>& x) const;

 private:
  template <typename Point>
  bool contains_impl(const Point& x) const;

  std::size_t rank_ = 0;
  std::vector<IntegerForm> forms_;
  std::vector<Chamber> chambers_;
  FinitelyGeneratedCone shift_cone_;
};

// Full decomposition pipeline: enumerate separating forms, build chambers,
// classify against the shift cone. Requires relatively prime type and acute
// shifts (errors NOT_RELATIVELY_PRIME / NOT_ACUTE), which is what makes tame
// points certified divergent.
TameCone build_tame_cone(const CollatzMap& map);

// x is tame: x != 0, x not in B-, and no wild chamber's closure contains x.
// The closure test compares the sign vector of x against each wild chamber,
// requiring agreement at every nonzero entry. 0 is never tame.
bool tame_cone_contains(const TameCone& tame, const LatticePoint& x);

// Redundancy-free generator set for the same cone (each dropped generator is
// a nonnegative combination of the kept ones).
std::vector<LatticePoint> minimal_generators(const FinitelyGeneratedCone& cone, std::size_t rank);

}  // namespace collatz
