#include "collatz/catalog.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "collatz/errors.hpp"

namespace collatz {

CollatzMap build_zsqrt2_map() {
  RawMap raw;
  raw.rank = 2;
  raw.d = 2;
  raw.entries = {
      {{Int(0), Int(0)}, Int(1), {Int(0), Int(0)}},
      {{Int(1), Int(0)}, Int(3), {Int(1), Int(0)}},
      {{Int(0), Int(1)}, Int(3), {Int(0), Int(1)}},
      {{Int(1), Int(1)}, Int(9), {Int(3), Int(1)}},
  };
  return validate_map(raw);
}

CollatzMap build_section4_map(const Section4Params& p) {
  if (p.d < 2) throw std::invalid_argument("family parameter d must be at least 2");
  if (p.b < 1) throw std::invalid_argument("family parameter b must be at least 1");
  const long d = p.d;
  const long b = p.b;

  RawMap raw;
  raw.rank = 2;
  raw.d = d;
  raw.entries.reserve(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < d; ++j) {
      RawMapEntry e;
      e.residue = {Int(i), Int(j)};
      if (i == 0 && j == 0) {
        e.m = 1;
        e.r = {Int(0), Int(0)};
      } else if (i == d - 1) {
        e.m = d + 1;
        e.r = {Int(1), Int((b + 1) * d - j)};
      } else if (j == d - 1) {
        e.m = d + 1;
        e.r = {Int(d - i), Int(b * d * (d - i) + 1)};
      } else {
        e.m = d - 1;
        e.r = {Int(i), Int(j + b * d * i)};
      }
      raw.entries.push_back(std::move(e));
    }
  }
  return validate_map(raw);
}

double section4_closed_form_bound(const Section4Params& p) {
  if (p.d < 2 || p.b < 1) throw std::invalid_argument("invalid family parameters");
  const long double bd = static_cast<long double>(p.b) * static_cast<long double>(p.d);
  const long double cosine = bd / std::sqrt(1.0L + bd * bd);
  return static_cast<double>(1.0L - std::acos(cosine) / std::numbers::pi_v<long double>);
}

namespace {

long parse_long_field(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(text, &used);
  } catch (const std::exception&) {
    fail(Errc::parse, "catalog parameter " + what + " is not an integer: '" + text + "'");
  }
  if (used != text.size())
    fail(Errc::parse, "catalog parameter " + what + " has trailing characters: '" + text + "'");
  return value;
}

}  // namespace

CatalogEntry catalog_lookup(const std::string& name) {
  if (name == "zsqrt2") return CatalogEntry{name, build_zsqrt2_map(), std::nullopt};

  const std::string prefix = "section4:";
  if (name.rfind(prefix, 0) == 0) {
    const std::string rest = name.substr(prefix.size());
    const auto comma = rest.find(',');
    if (comma == std::string::npos ||
        rest.rfind("d=", 0) != 0 ||
        rest.compare(comma + 1, 2, "b=") != 0) {
      fail(Errc::parse, "expected section4:d=<D>,b=<B>, got '" + name + "'");
    }
    Section4Params p;
    p.d = parse_long_field(rest.substr(2, comma - 2), "d");
    p.b = parse_long_field(rest.substr(comma + 3), "b");
    if (p.d < 2) fail(Errc::parse, "section4 requires d >= 2");
    if (p.b < 1) fail(Errc::parse, "section4 requires b >= 1");
    if (p.d > 500) fail(Errc::size_guard, "section4 residue table too large (d > 500)");
    return CatalogEntry{name, build_section4_map(p), p};
  }

  fail(Errc::parse, "unknown catalog name '" + name + "' (try zsqrt2 or section4:d=<D>,b=<B>)");
}

}  // namespace collatz
