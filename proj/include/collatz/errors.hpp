#pragma once

#include <stdexcept>
#include <string>

namespace collatz {

// Stable error codes surfaced through the library API and the CLI reports.
enum class Errc {
  bad_modulus,
  missing_residue,
  divisibility,
  nonpositive_multiplier,
  rank_mismatch,
  internal_divisibility,
  size_guard,
  shifts_dont_span,
  too_many_forms,
  zero_point,
  not_acute,
  not_relatively_prime,
  state_guard,
  empty_sample,
  parse,
  feasibility_blowup,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace collatz
