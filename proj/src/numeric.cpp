#include "collatz/numeric.hpp"

#include <sstream>

#include "collatz/errors.hpp"

namespace collatz {

Int dot(const std::vector<Int>& a, const LatticePoint& x) {
  if (a.size() != x.size()) fail(Errc::rank_mismatch, "dot product arity mismatch");
  Int acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * x[i];
  return acc;
}

Rat dot(const std::vector<Int>& a, const std::vector<Rat>& x) {
  if (a.size() != x.size()) fail(Errc::rank_mismatch, "dot product arity mismatch");
  Rat acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += Rat(a[i]) * x[i];
  return acc;
}

LatticePoint add(const LatticePoint& a, const LatticePoint& b) {
  if (a.size() != b.size()) fail(Errc::rank_mismatch, "vector sum arity mismatch");
  LatticePoint out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

LatticePoint negate(const LatticePoint& a) {
  LatticePoint out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

bool is_zero(const LatticePoint& a) {
  for (const auto& c : a)
    if (!c.is_zero()) return false;
  return true;
}

Int norm_sq(const LatticePoint& x) {
  Int acc = 0;
  for (const auto& c : x) acc += c * c;
  return acc;
}

Rat norm_sq(const std::vector<Rat>& x) {
  Rat acc = 0;
  for (const auto& c : x) acc += c * c;
  return acc;
}

Int sup_norm(const LatticePoint& x) {
  Int best = 0;
  for (const auto& c : x) {
    Int a = abs(c);
    if (a > best) best = a;
  }
  return best;
}

bool norm_less(const LatticePoint& a, const LatticePoint& b, Norm norm) {
  if (norm == Norm::euclidean) return norm_sq(a) < norm_sq(b);
  return sup_norm(a) < sup_norm(b);
}

Int rat_floor(const Rat& q) {
  Int n = numerator(q);
  Int d = denominator(q);
  Int quot = n / d;
  if (n < 0 && quot * d != n) --quot;
  return quot;
}

std::string to_string(const LatticePoint& x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ')';
  return os.str();
}

std::string to_string(const Rat& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

}  // namespace collatz
