#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "collatz/form.hpp"
#include "collatz/numeric.hpp"

namespace collatz {

// Canonical residue representative: coordinates in [0, d).
using ResidueClass = LatticePoint;

struct MapEntry {
  ResidueClass residue;
  Int m;           // multiplier, > 0
  LatticePoint r;  // shift
};

// Unvalidated map description as it arrives from a file or a constructor.
struct RawMapEntry {
  LatticePoint residue;
  Int m;
  LatticePoint r;
};

struct RawMap {
  std::size_t rank = 0;
  Int d = 0;
  std::vector<RawMapEntry> entries;
};

// A validated generalized Collatz mapping x -> (m_w x + r_w)/d on Z^rank,
// where w is the residue class of x mod d. Immutable after validation.
class CollatzMap {
 public:
  std::size_t rank() const noexcept { return rank_; }
  const Int& modulus() const noexcept { return d_; }

  // Entries in lexicographic residue order, one per residue class.
  const std::vector<MapEntry>& entries() const noexcept { return entries_; }

  const MapEntry& entry_for(const LatticePoint& x) const;
  std::size_t residue_index(const ResidueClass& rep) const;
  ResidueClass residue_at(std::size_t index) const;

  // All distinct nonzero shift vectors (generators of the shift cone).
  std::vector<LatticePoint> nonzero_shifts() const;

  friend CollatzMap validate_map(const RawMap& raw);

 private:
  CollatzMap() = default;

  std::size_t rank_ = 0;
  Int d_ = 0;
  std::vector<MapEntry> entries_;
};

// Checks modulus, table completeness, multiplier positivity and the
// divisibility condition m_w w + r_w = 0 mod d. Throws Error on violation:
// BAD_MODULUS, MISSING_RESIDUE, RANK_MISMATCH, NONPOSITIVE_MULTIPLIER,
// DIVISIBILITY.
CollatzMap validate_map(const RawMap& raw);

// Coordinatewise reduction of x into [0, d)^e.
ResidueClass residue_of(const LatticePoint& x, const CollatzMap& map);
ResidueClass reduce_mod(const LatticePoint& x, const Int& d);

// gcd(m_w, d) = 1 for every residue class.
bool is_relatively_prime_type(const CollatzMap& map);

// Rank over Q of the matrix whose columns are all shifts (fraction-free
// integer elimination).
std::size_t shift_span_rank(const CollatzMap& map);
std::size_t span_rank(const std::vector<LatticePoint>& vectors, std::size_t rank);

// An integer form F with F(w) > 0 for every nonzero w in the set, or nullopt
// when no such real form exists. Decided by exact rational feasibility of
// {<a,w> >= 1}, which is scale-equivalent to strict positivity; the rational
// witness is cleared to an integer form. A set with no nonzero vectors is
// vacuously acute and gets the first unit form.
std::optional<IntegerForm> strictly_positive_witness(const std::vector<LatticePoint>& shifts,
                                                     std::size_t rank);

}  // namespace collatz
