#pragma once

#include <string>

#include "collatz/map.hpp"

namespace collatz {

// Parses the JSON map document
//   {"rank": e, "d": d, "entries": [{"residue": [...], "m": M, "r": [...]}]}
// and validates it. Integers may be JSON numbers or decimal strings (use
// strings beyond 64 bits). Throws PARSE with entry context on malformed
// input, plus the validate_map errors.
CollatzMap parse_map_json(const std::string& text);

// Inverse of parse_map_json on valid maps; entries in canonical residue
// order, stable formatting.
std::string emit_map_json(const CollatzMap& map);

}  // namespace collatz
