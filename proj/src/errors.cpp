#include "collatz/errors.hpp"

namespace collatz {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::bad_modulus: return "BAD_MODULUS";
    case Errc::missing_residue: return "MISSING_RESIDUE";
    case Errc::divisibility: return "DIVISIBILITY";
    case Errc::nonpositive_multiplier: return "NONPOSITIVE_MULTIPLIER";
    case Errc::rank_mismatch: return "RANK_MISMATCH";
    case Errc::internal_divisibility: return "INTERNAL_DIVISIBILITY";
    case Errc::size_guard: return "SIZE_GUARD";
    case Errc::shifts_dont_span: return "SHIFTS_DONT_SPAN";
    case Errc::too_many_forms: return "TOO_MANY_FORMS";
    case Errc::zero_point: return "ZERO_POINT";
    case Errc::not_acute: return "NOT_ACUTE";
    case Errc::not_relatively_prime: return "NOT_RELATIVELY_PRIME";
    case Errc::state_guard: return "STATE_GUARD";
    case Errc::empty_sample: return "EMPTY_SAMPLE";
    case Errc::parse: return "PARSE";
    case Errc::feasibility_blowup: return "FEASIBILITY_BLOWUP";
  }
  return "UNKNOWN";
}

}  // namespace collatz
