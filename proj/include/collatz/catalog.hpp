#pragma once

#include <optional>
#include <string>

#include "collatz/map.hpp"

namespace collatz {

// d = 2 on Z^2: the squared Collatz-like map on Z[sqrt(2)] in the basis
// (1, sqrt(2)), with entries
//   (0,0) -> (x/2, y/2), (1,0) -> ((3x+1)/2, 3y/2),
//   (0,1) -> (3x/2, (3y+1)/2), (1,1) -> ((9x+3)/2, (9y+1)/2).
CollatzMap build_zsqrt2_map();

// Two-parameter family on Z^2 with one contracting residue and an acute
// shift fan whose wild sector narrows as b*d grows.
struct Section4Params {
  long d = 2;  // >= 2
  long b = 1;  // >= 1
};

CollatzMap build_section4_map(const Section4Params& p);

// Closed-form divergence-density lower bound for the family:
// 1 - arccos(bd / sqrt(1 + (bd)^2)) / pi.
double section4_closed_form_bound(const Section4Params& p);

struct CatalogEntry {
  std::string name;
  CollatzMap map;
  std::optional<Section4Params> section4;  // set for family members
};

// Resolves "zsqrt2" or "section4:d=<D>,b=<B>". Throws PARSE on anything else.
CatalogEntry catalog_lookup(const std::string& name);

}  // namespace collatz
