#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "collatz/geometry.hpp"
#include "collatz/map.hpp"
#include "collatz/numeric.hpp"

namespace collatz {

// One application of T: (m_w x + r_w)/d, exact division.
LatticePoint step(const CollatzMap& map, const LatticePoint& x);

// k-fold composition of step.
LatticePoint iterate(const CollatzMap& map, LatticePoint x, std::size_t k);

// [w(x,0), ..., w(x,k-1)], the residues visited by the first k steps.
std::vector<ResidueClass> residual_sequence(const CollatzMap& map, const LatticePoint& x,
                                            std::size_t k);

// Evaluates the closed-form iterate
//   T^k(x) = d^{-k} ( (prod_i m_i) x + sum_j (prod_{i>j} m_i) d^j r_j )
// with m_i, r_i read off the residual sequence. Equals iterate(map, x, k).
LatticePoint closed_form_iterate(const CollatzMap& map, const LatticePoint& x, std::size_t k);

// The residual-sequence map on Z^e / d^k Z^e: coset index -> encoded length-k
// residue sequence. Bijective for valid maps; the inverse provides a coset
// representative realizing any given sequence. Cosets are indexed
// lexicographically by representative in [0, d^k)^e, sequences by
// little-endian base-(d^e) digits.
class OmegaMap {
 public:
  OmegaMap(const CollatzMap& map, std::size_t k);

  std::size_t k() const noexcept { return k_; }
  std::size_t size() const noexcept { return seq_of_coset_.size(); }  // d^{ek}
  bool bijective() const noexcept { return bijective_; }

  std::uint64_t sequence_key(std::size_t coset_index) const { return seq_of_coset_[coset_index]; }
  LatticePoint coset_representative(std::size_t coset_index) const;
  std::vector<ResidueClass> sequence_at(std::size_t coset_index) const;

  std::uint64_t encode_sequence(const std::vector<ResidueClass>& seq) const;
  std::optional<std::size_t> coset_of_sequence(const std::vector<ResidueClass>& seq) const;

 private:
  const CollatzMap* map_;
  std::size_t k_ = 0;
  Int dk_;                                   // d^k
  std::uint64_t residue_count_ = 0;          // d^e
  std::vector<std::uint64_t> seq_of_coset_;  // coset index -> sequence key
  std::vector<std::uint64_t> coset_of_seq_;  // sequence key -> coset index
  bool bijective_ = false;
};

// Guard: d^{ek} must stay enumerable. Throws SIZE_GUARD above 10^6.
OmegaMap omega_map(const CollatzMap& map, std::size_t k);

struct Cycle {
  std::size_t preperiod = 0;
  std::size_t period = 0;  // minimal
};
struct CertifiedDivergent {
  std::size_t witness_step = 0;  // first index whose point is tame
};
struct ExceededCap {
  std::size_t steps = 0;
};
using TrajectoryOutcome = std::variant<Cycle, CertifiedDivergent, ExceededCap>;

// Brent cycle detection over exact points. When a tame cone is supplied,
// every point of the orbit is tested as it is first generated and the orbit
// is certified divergent at the earliest tame index (tame points diverge, and
// a divergent tail makes the whole orbit divergent).
TrajectoryOutcome detect_cycle(const CollatzMap& map, const LatticePoint& x, std::size_t max_steps,
                               const TameCone* tame = nullptr);

struct StoppingResult {
  std::optional<std::size_t> k;  // least k in [1, cap] with ||T^k x|| < ||x||
  std::size_t cap = 0;
};

// Exact norm comparisons (squared integers for Euclidean). x = 0 never stops.
StoppingResult stopping_time(const CollatzMap& map, const LatticePoint& x, Norm norm,
                             std::size_t cap);

// A norm threshold stored exactly through its square.
struct NormBound {
  Norm norm = Norm::euclidean;
  Rat bound_sq;

  bool exceeded_by(const LatticePoint& y) const;  // ||y|| > bound, exact
  double approx() const;                          // sqrt as double, for display
};

// The guaranteed stopping radius R*S_k/L_k for a residual sequence, where
// R = max ||r_w||, M = max m_w, S_k = sum_{j<k} M^{k-1-j} d^j and
// L_k = d^k - prod m_{w_i}. Defined when L_k > 0 (the sequence lies in A_k);
// every y with that residual sequence and ||y|| above the bound satisfies
// ||T^k y|| < ||y||. S_k is an integer geometric sum, so M = d needs no
// special case (it degenerates to k d^{k-1}).
std::optional<NormBound> guaranteed_stopping_radius(const CollatzMap& map,
                                                    const std::vector<ResidueClass>& seq,
                                                    Norm norm);

}  // namespace collatz
