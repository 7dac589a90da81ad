#include "collatz/trajectory.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "collatz/errors.hpp"

namespace collatz {

namespace {

Int pow_int(const Int& base, std::size_t exp) {
  Int out = 1;
  for (std::size_t i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

LatticePoint step(const CollatzMap& map, const LatticePoint& x) {
  const MapEntry& e = map.entry_for(x);
  const Int& d = map.modulus();
  LatticePoint y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    Int num = e.m * x[i] + e.r[i];
    if (num % d != 0)
      fail(Errc::internal_divisibility,
           "step at " + to_string(x) + " is not divisible by d; the map is corrupt");
    y[i] = num / d;
  }
  return y;
}

LatticePoint iterate(const CollatzMap& map, LatticePoint x, std::size_t k) {
  for (std::size_t i = 0; i < k; ++i) x = step(map, x);
  return x;
}

std::vector<ResidueClass> residual_sequence(const CollatzMap& map, const LatticePoint& x,
                                            std::size_t k) {
  std::vector<ResidueClass> seq;
  seq.reserve(k);
  LatticePoint cur = x;
  for (std::size_t i = 0; i < k; ++i) {
    seq.push_back(residue_of(cur, map));
    cur = step(map, cur);
  }
  return seq;
}

LatticePoint closed_form_iterate(const CollatzMap& map, const LatticePoint& x, std::size_t k) {
  const auto seq = residual_sequence(map, x, k);
  const Int& d = map.modulus();
  const std::size_t e = map.rank();

  // suffix[j] = prod_{i > j} m_i; suffix[k-1] = 1; total product is
  // suffix[0] * m_0.
  std::vector<Int> m(k);
  for (std::size_t i = 0; i < k; ++i) m[i] = map.entries()[map.residue_index(seq[i])].m;
  std::vector<Int> suffix(k + 1);
  suffix[k] = 1;
  for (std::size_t i = k; i-- > 0;) suffix[i] = suffix[i + 1] * m[i];

  LatticePoint acc(e);
  for (std::size_t c = 0; c < e; ++c) acc[c] = suffix[0] * x[c];
  Int dj = 1;
  for (std::size_t j = 0; j < k; ++j) {
    const LatticePoint& r = map.entries()[map.residue_index(seq[j])].r;
    const Int coef = suffix[j + 1] * dj;
    for (std::size_t c = 0; c < e; ++c) acc[c] += coef * r[c];
    dj *= d;
  }
  const Int dk = dj;  // d^k
  for (std::size_t c = 0; c < e; ++c) {
    if (acc[c] % dk != 0)
      fail(Errc::internal_divisibility, "closed-form iterate is not divisible by d^k");
    acc[c] /= dk;
  }
  return acc;
}

OmegaMap::OmegaMap(const CollatzMap& map, std::size_t k) : map_(&map), k_(k) {
  const Int& d = map.modulus();
  dk_ = pow_int(d, k);
  residue_count_ = pow_int(d, map.rank()).convert_to<std::uint64_t>();
  const std::uint64_t total = pow_int(dk_, map.rank()).convert_to<std::uint64_t>();

  seq_of_coset_.resize(total);
  coset_of_seq_.assign(total, std::numeric_limits<std::uint64_t>::max());
  bijective_ = true;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    const auto seq = residual_sequence(map, coset_representative(idx), k);
    const std::uint64_t key = encode_sequence(seq);
    seq_of_coset_[idx] = key;
    if (coset_of_seq_[key] != std::numeric_limits<std::uint64_t>::max()) bijective_ = false;
    else coset_of_seq_[key] = idx;
  }
}

LatticePoint OmegaMap::coset_representative(std::size_t coset_index) const {
  const std::size_t e = map_->rank();
  LatticePoint rep(e);
  Int rem = coset_index;
  for (std::size_t i = e; i-- > 0;) {
    rep[i] = rem % dk_;
    rem /= dk_;
  }
  return rep;
}

std::vector<ResidueClass> OmegaMap::sequence_at(std::size_t coset_index) const {
  std::uint64_t key = seq_of_coset_[coset_index];
  std::vector<ResidueClass> seq(k_);
  for (std::size_t t = 0; t < k_; ++t) {
    seq[t] = map_->residue_at(key % residue_count_);
    key /= residue_count_;
  }
  return seq;
}

std::uint64_t OmegaMap::encode_sequence(const std::vector<ResidueClass>& seq) const {
  if (seq.size() != k_) throw std::invalid_argument("sequence length does not match k");
  std::uint64_t key = 0;
  for (std::size_t t = seq.size(); t-- > 0;)
    key = key * residue_count_ + map_->residue_index(seq[t]);
  return key;
}

std::optional<std::size_t> OmegaMap::coset_of_sequence(const std::vector<ResidueClass>& seq) const {
  const std::uint64_t key = encode_sequence(seq);
  const std::uint64_t idx = coset_of_seq_[key];
  if (idx == std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return idx;
}

OmegaMap omega_map(const CollatzMap& map, std::size_t k) {
  if (k == 0) throw std::invalid_argument("omega_map requires k >= 1");
  const Int total = pow_int(map.modulus(), map.rank() * k);
  if (total > 1000000)
    fail(Errc::size_guard, "d^(e*k) = " + total.str() + " exceeds the enumeration guard of 10^6");
  return OmegaMap(map, k);
}

TrajectoryOutcome detect_cycle(const CollatzMap& map, const LatticePoint& x, std::size_t max_steps,
                               const TameCone* tame) {
  if (max_steps < 1) throw std::invalid_argument("detect_cycle requires max_steps >= 1");
  if (tame && tame->contains(x)) return CertifiedDivergent{0};

  // Brent: tortoise sits at index 2^i - 1 while the hare walks every index,
  // so each orbit point is generated (and certified) exactly once in order.
  LatticePoint tortoise = x;
  LatticePoint hare = step(map, x);
  std::size_t idx = 1;
  if (tame && tame->contains(hare)) return CertifiedDivergent{idx};
  std::size_t power = 1;
  std::size_t lam = 1;
  while (hare != tortoise) {
    if (idx >= max_steps) return ExceededCap{max_steps};
    if (power == lam) {
      tortoise = hare;
      power *= 2;
      lam = 0;
    }
    hare = step(map, hare);
    ++idx;
    ++lam;
    if (tame && tame->contains(hare)) return CertifiedDivergent{idx};
  }

  // Recover the preperiod; every point visited here was already generated in
  // the detection pass.
  std::size_t mu = 0;
  LatticePoint slow = x;
  LatticePoint fast = iterate(map, x, lam);
  while (slow != fast) {
    slow = step(map, slow);
    fast = step(map, fast);
    ++mu;
  }
  return Cycle{mu, lam};
}

StoppingResult stopping_time(const CollatzMap& map, const LatticePoint& x, Norm norm,
                             std::size_t cap) {
  StoppingResult result;
  result.cap = cap;
  if (is_zero(x)) return result;  // the zero norm cannot strictly decrease
  LatticePoint cur = x;
  for (std::size_t k = 1; k <= cap; ++k) {
    cur = step(map, cur);
    if (norm_less(cur, x, norm)) {
      result.k = k;
      return result;
    }
  }
  return result;
}

bool NormBound::exceeded_by(const LatticePoint& y) const {
  const Int n2 = norm == Norm::euclidean ? norm_sq(y) : Int(sup_norm(y) * sup_norm(y));
  return Rat(n2) > bound_sq;
}

double NormBound::approx() const { return std::sqrt(to_double(bound_sq)); }

std::optional<NormBound> guaranteed_stopping_radius(const CollatzMap& map,
                                                    const std::vector<ResidueClass>& seq,
                                                    Norm norm) {
  if (seq.empty()) throw std::invalid_argument("guaranteed_stopping_radius requires a sequence");
  const Int& d = map.modulus();
  const std::size_t k = seq.size();

  Int product = 1;
  for (const auto& w : seq) {
    if (w.size() != map.rank()) fail(Errc::rank_mismatch, "residue rank mismatch");
    product *= map.entries()[map.residue_index(reduce_mod(w, d))].m;
  }
  const Int dk = pow_int(d, k);
  const Int lambda = dk - product;
  if (lambda <= 0) return std::nullopt;

  Int max_m = 0;
  Int max_r_sq = 0;  // squared norm of the largest shift, in the chosen norm
  for (const auto& e : map.entries()) {
    if (e.m > max_m) max_m = e.m;
    const Int r2 = norm == Norm::euclidean ? norm_sq(e.r) : Int(sup_norm(e.r) * sup_norm(e.r));
    if (r2 > max_r_sq) max_r_sq = r2;
  }

  // S_k = sum_{j<k} M^{k-1-j} d^j; the geometric-sum form of
  // (M^k - d^k)/(M - d), which also covers M = d (giving k d^{k-1}).
  Int s = 0;
  Int mp = 1;  // M^{k-1-j}, built backwards
  std::vector<Int> dpow(k);
  Int dj = 1;
  for (std::size_t j = 0; j < k; ++j) {
    dpow[j] = dj;
    dj *= d;
  }
  for (std::size_t j = k; j-- > 0;) {
    s += mp * dpow[j];
    mp *= max_m;
  }

  NormBound bound;
  bound.norm = norm;
  bound.bound_sq = Rat(max_r_sq * s * s, lambda * lambda);
  return bound;
}

}  // namespace collatz
