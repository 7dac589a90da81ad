#include "collatz/form.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <utility>

#include "collatz/errors.hpp"

namespace collatz {

IntegerForm::IntegerForm(std::vector<Int> coeffs) : coeffs_(std::move(coeffs)) {
  Int g = 0;
  for (const auto& c : coeffs_) g = gcd(g, c);
  if (g.is_zero()) fail(Errc::zero_point, "integer form must be nonzero");
  if (g != 1)
    for (auto& c : coeffs_) c /= g;
}

bool IntegerForm::is_canonical() const {
  for (const auto& c : coeffs_) {
    if (c.is_zero()) continue;
    return c > 0;
  }
  return false;
}

IntegerForm IntegerForm::canonicalized() const {
  return is_canonical() ? *this : negated();
}

IntegerForm IntegerForm::negated() const {
  std::vector<Int> neg(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) neg[i] = -coeffs_[i];
  return IntegerForm(std::move(neg));
}

std::string IntegerForm::to_string() const {
  return collatz::to_string(coeffs_);
}

}  // namespace collatz
