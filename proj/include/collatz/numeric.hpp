#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace collatz {

// All lattice arithmetic is exact: arbitrary-precision integers for points
// and forms, rationals for feasibility and densities.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// A lattice point is a length-e coordinate vector.
using LatticePoint = std::vector<Int>;

enum class Norm { euclidean, sup };

inline int sgn(const Int& v) { return v.sign(); }
inline int sgn(const Rat& v) { return v.sign(); }

Int dot(const std::vector<Int>& a, const LatticePoint& x);
Rat dot(const std::vector<Int>& a, const std::vector<Rat>& x);

LatticePoint add(const LatticePoint& a, const LatticePoint& b);
LatticePoint negate(const LatticePoint& a);
bool is_zero(const LatticePoint& a);

// Squared Euclidean norm; exact.
Int norm_sq(const LatticePoint& x);
Rat norm_sq(const std::vector<Rat>& x);
// Sup norm; exact.
Int sup_norm(const LatticePoint& x);

// ‖a‖ < ‖b‖, decided exactly (squared comparison for the Euclidean norm).
bool norm_less(const LatticePoint& a, const LatticePoint& b, Norm norm);

inline double to_double(const Rat& q) { return q.convert_to<double>(); }
inline double to_double(const Int& n) { return n.convert_to<double>(); }

// Largest integer <= q.
Int rat_floor(const Rat& q);

std::string to_string(const LatticePoint& x);
std::string to_string(const Rat& q);

}  // namespace collatz
