#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "collatz/numeric.hpp"

namespace collatz {

// A nonzero integer linear form on the lattice, stored primitive (the gcd of
// the coefficients is 1). Sign is kept as given: a form and its negation cut
// out the same hyperplane but are distinct as functionals, and positivity
// witnesses must not be flipped. Deduplication up to sign goes through
// is_canonical()/canonicalized().
class IntegerForm {
 public:
  explicit IntegerForm(std::vector<Int> coeffs);

  const std::vector<Int>& coeffs() const noexcept { return coeffs_; }
  std::size_t rank() const noexcept { return coeffs_.size(); }

  Int eval(const LatticePoint& x) const { return dot(coeffs_, x); }
  Rat eval(const std::vector<Rat>& x) const { return dot(coeffs_, x); }

  // Canonical representative of {a, -a}: first nonzero coefficient positive.
  bool is_canonical() const;
  IntegerForm canonicalized() const;
  IntegerForm negated() const;

  std::string to_string() const;

  friend bool operator==(const IntegerForm& a, const IntegerForm& b) {
    return a.coeffs_ == b.coeffs_;
  }
  friend bool operator<(const IntegerForm& a, const IntegerForm& b) {
    return a.coeffs_ < b.coeffs_;
  }

 private:
  std::vector<Int> coeffs_;
};

}  // namespace collatz
