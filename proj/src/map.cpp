#include "collatz/map.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "collatz/errors.hpp"
#include "collatz/feasibility.hpp"

namespace collatz {

namespace {

Int mod_reduce(const Int& v, const Int& d) {
  Int c = v % d;
  if (c < 0) c += d;
  return c;
}

Int pow_int(const Int& base, std::size_t exp) {
  Int out = 1;
  for (std::size_t i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

ResidueClass reduce_mod(const LatticePoint& x, const Int& d) {
  ResidueClass rep(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) rep[i] = mod_reduce(x[i], d);
  return rep;
}

ResidueClass residue_of(const LatticePoint& x, const CollatzMap& map) {
  if (x.size() != map.rank()) fail(Errc::rank_mismatch, "point rank does not match map rank");
  return reduce_mod(x, map.modulus());
}

std::size_t CollatzMap::residue_index(const ResidueClass& rep) const {
  Int idx = 0;
  for (std::size_t i = 0; i < rank_; ++i) idx = idx * d_ + rep[i];
  return idx.convert_to<std::size_t>();
}

ResidueClass CollatzMap::residue_at(std::size_t index) const {
  ResidueClass rep(rank_);
  Int rem = index;
  for (std::size_t i = rank_; i-- > 0;) {
    rep[i] = rem % d_;
    rem /= d_;
  }
  return rep;
}

const MapEntry& CollatzMap::entry_for(const LatticePoint& x) const {
  return entries_[residue_index(residue_of(x, *this))];
}

std::vector<LatticePoint> CollatzMap::nonzero_shifts() const {
  std::set<LatticePoint> seen;
  std::vector<LatticePoint> out;
  for (const auto& e : entries_) {
    if (is_zero(e.r)) continue;
    if (seen.insert(e.r).second) out.push_back(e.r);
  }
  return out;
}

CollatzMap validate_map(const RawMap& raw) {
  if (raw.d <= 1) fail(Errc::bad_modulus, "modulus must be at least 2, got " + raw.d.str());
  if (raw.rank == 0) fail(Errc::rank_mismatch, "rank must be positive");

  const Int expected = pow_int(raw.d, raw.rank);
  if (Int(raw.entries.size()) != expected)
    fail(Errc::missing_residue, "table has " + std::to_string(raw.entries.size()) +
                                    " entries, expected " + expected.str());

  CollatzMap map;
  map.rank_ = raw.rank;
  map.d_ = raw.d;
  map.entries_.resize(raw.entries.size());

  std::vector<bool> seen(raw.entries.size(), false);
  for (const auto& entry : raw.entries) {
    if (entry.residue.size() != raw.rank)
      fail(Errc::rank_mismatch, "residue vector has length " +
                                    std::to_string(entry.residue.size()) + ", expected " +
                                    std::to_string(raw.rank));
    if (entry.r.size() != raw.rank)
      fail(Errc::rank_mismatch, "shift vector has length " + std::to_string(entry.r.size()) +
                                    ", expected " + std::to_string(raw.rank));
    if (entry.m <= 0)
      fail(Errc::nonpositive_multiplier,
           "multiplier " + entry.m.str() + " at residue " + to_string(entry.residue));

    const ResidueClass rep = reduce_mod(entry.residue, raw.d);
    const std::size_t idx = map.residue_index(rep);
    if (seen[idx]) fail(Errc::missing_residue, "duplicate residue " + to_string(rep));
    seen[idx] = true;

    for (std::size_t i = 0; i < raw.rank; ++i) {
      if ((entry.m * rep[i] + entry.r[i]) % raw.d != 0)
        fail(Errc::divisibility, "m*w + r not divisible by d at residue " + to_string(rep) +
                                     ": m=" + entry.m.str() + ", r=" + to_string(entry.r));
    }
    map.entries_[idx] = MapEntry{rep, entry.m, entry.r};
  }

  for (std::size_t idx = 0; idx < seen.size(); ++idx) {
    if (!seen[idx]) fail(Errc::missing_residue, "missing residue " + to_string(map.residue_at(idx)));
  }
  return map;
}

bool is_relatively_prime_type(const CollatzMap& map) {
  for (const auto& e : map.entries()) {
    if (gcd(e.m, map.modulus()) != 1) return false;
  }
  return true;
}

std::size_t span_rank(const std::vector<LatticePoint>& vectors, std::size_t rank) {
  // Fraction-free elimination on the rank x n matrix of column vectors.
  std::vector<std::vector<Int>> rows(rank, std::vector<Int>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j)
    for (std::size_t i = 0; i < rank; ++i) rows[i][j] = vectors[j][i];

  std::size_t r = 0;
  for (std::size_t col = 0; col < vectors.size() && r < rank; ++col) {
    std::size_t pivot = r;
    while (pivot < rank && rows[pivot][col].is_zero()) ++pivot;
    if (pivot == rank) continue;
    std::swap(rows[r], rows[pivot]);
    for (std::size_t i = r + 1; i < rank; ++i) {
      if (rows[i][col].is_zero()) continue;
      const Int a = rows[r][col];
      const Int b = rows[i][col];
      for (std::size_t j = col; j < vectors.size(); ++j)
        rows[i][j] = a * rows[i][j] - b * rows[r][j];
    }
    ++r;
  }
  return r;
}

std::size_t shift_span_rank(const CollatzMap& map) {
  std::vector<LatticePoint> shifts;
  for (const auto& e : map.entries()) shifts.push_back(e.r);
  return span_rank(shifts, map.rank());
}

std::optional<IntegerForm> strictly_positive_witness(const std::vector<LatticePoint>& shifts,
                                                     std::size_t rank) {
  std::set<LatticePoint> nonzero;
  for (const auto& w : shifts) {
    if (w.size() != rank) fail(Errc::rank_mismatch, "shift rank mismatch");
    if (!is_zero(w)) nonzero.insert(w);
  }
  if (nonzero.empty()) {
    std::vector<Int> unit(rank, 0);
    unit[0] = 1;
    return IntegerForm(std::move(unit));
  }

  std::vector<LinearConstraint> constraints;
  constraints.reserve(nonzero.size());
  for (const auto& w : nonzero) {
    std::vector<Rat> coeffs(rank);
    for (std::size_t i = 0; i < rank; ++i) coeffs[i] = Rat(w[i]);
    constraints.push_back(make_ge(std::move(coeffs), Rat(1)));
  }
  auto result = solve_feasibility(rank, std::move(constraints));
  if (!result.feasible) return std::nullopt;

  Int lcm_den = 1;
  for (const auto& q : result.point) lcm_den = lcm(lcm_den, denominator(q));
  std::vector<Int> coeffs(rank);
  for (std::size_t i = 0; i < rank; ++i)
    coeffs[i] = numerator(result.point[i]) * (lcm_den / denominator(result.point[i]));
  return IntegerForm(std::move(coeffs));
}

}  // namespace collatz
