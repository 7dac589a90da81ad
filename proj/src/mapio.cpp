#include "collatz/mapio.hpp"

#include <cstdint>
#include <limits>
#include <string>

#include <json.hpp>

#include "collatz/errors.hpp"

namespace collatz {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

Int json_to_int(const json& j, const std::string& where) {
  if (j.is_number_unsigned()) return Int(j.get<std::uint64_t>());
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Int(j.get<std::string>());
    } catch (const std::exception&) {
      fail(Errc::parse, where + ": '" + j.get<std::string>() + "' is not a decimal integer");
    }
  }
  if (j.is_number_float())
    fail(Errc::parse, where + ": non-integral number; write large integers as decimal strings");
  fail(Errc::parse, where + ": expected an integer (number or decimal string)");
}

LatticePoint json_to_point(const json& j, const std::string& where) {
  if (!j.is_array()) fail(Errc::parse, where + ": expected an array of integers");
  LatticePoint out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(json_to_int(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

const json& require_field(const json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) fail(Errc::parse, where + ": missing field '" + key + "'");
  return *it;
}

ordered_json int_to_json(const Int& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() &&
      v <= std::numeric_limits<std::int64_t>::max()) {
    return v.convert_to<std::int64_t>();
  }
  return v.str();
}

ordered_json point_to_json(const LatticePoint& x) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : x) arr.push_back(int_to_json(c));
  return arr;
}

}  // namespace

CollatzMap parse_map_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Errc::parse, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(Errc::parse, "top level: expected an object");

  RawMap raw;
  const Int rank = json_to_int(require_field(doc, "rank", "top level"), "field 'rank'");
  if (rank < 1 || rank > 64) fail(Errc::parse, "field 'rank': must be between 1 and 64");
  raw.rank = rank.convert_to<std::size_t>();
  raw.d = json_to_int(require_field(doc, "d", "top level"), "field 'd'");

  const json& entries = require_field(doc, "entries", "top level");
  if (!entries.is_array()) fail(Errc::parse, "field 'entries': expected an array");
  raw.entries.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string where = "entry " + std::to_string(i);
    const json& e = entries[i];
    if (!e.is_object()) fail(Errc::parse, where + ": expected an object");
    RawMapEntry out;
    out.residue = json_to_point(require_field(e, "residue", where), where + ".residue");
    out.m = json_to_int(require_field(e, "m", where), where + ".m");
    out.r = json_to_point(require_field(e, "r", where), where + ".r");
    raw.entries.push_back(std::move(out));
  }
  return validate_map(raw);
}

std::string emit_map_json(const CollatzMap& map) {
  ordered_json doc;
  doc["rank"] = map.rank();
  doc["d"] = int_to_json(map.modulus());
  ordered_json arr = ordered_json::array();
  for (const auto& e : map.entries()) {
    ordered_json je;
    je["residue"] = point_to_json(e.residue);
    je["m"] = int_to_json(e.m);
    je["r"] = point_to_json(e.r);
    arr.push_back(std::move(je));
  }
  doc["entries"] = std::move(arr);
  return doc.dump(2) + "\n";
}

}  // namespace collatz
