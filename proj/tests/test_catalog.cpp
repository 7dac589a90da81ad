#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "collatz/catalog.hpp"
#include "collatz/density.hpp"
#include "collatz/errors.hpp"
#include "collatz/map.hpp"
#include "collatz/trajectory.hpp"

using namespace collatz;

namespace {

template <typename Fn>
std::optional<Errc> code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("the zsqrt2 catalog map") {
  const CollatzMap map = build_zsqrt2_map();
  CHECK(map.rank() == 2);
  CHECK(map.modulus() == 2);
  REQUIRE(map.entries().size() == 4);
  CHECK(map.entries()[0].m == 1);
  CHECK(map.entries()[1].m == 3);
  CHECK(map.entries()[2].m == 3);
  CHECK(map.entries()[3].m == 9);
  CHECK((step(map, LatticePoint{1, 1}) == LatticePoint{6, 5}));
  CHECK(is_relatively_prime_type(map));
}

TEST_CASE("family construction on pinned entries") {
  const CollatzMap map = build_section4_map({3, 1});
  CHECK(map.modulus() == 3);
  REQUIRE(map.entries().size() == 9);

  const MapEntry& corner = map.entry_for(LatticePoint{2, 1});
  CHECK(corner.m == 4);
  CHECK((corner.r == LatticePoint{1, 5}));

  const MapEntry& inner = map.entry_for(LatticePoint{1, 0});
  CHECK(inner.m == 2);
  CHECK((inner.r == LatticePoint{1, 3}));

  const MapEntry& origin = map.entry_for(LatticePoint{0, 0});
  CHECK(origin.m == 1);
  CHECK((origin.r == LatticePoint{0, 0}));
}

TEST_CASE("family members validate across the parameter grid") {
  for (long d = 2; d <= 6; ++d) {
    for (long b : {1L, 2L, 10L}) {
      const CollatzMap map = build_section4_map({d, b});
      CHECK(map.modulus() == d);
      CHECK(map.entries().size() == static_cast<std::size_t>(d * d));
      CHECK(is_relatively_prime_type(map));

      for (const auto& e : map.entries()) {
        const Int s = e.r[0];
        const Int t = e.r[1] - Int(b) * d * s;
        CHECK(s >= 0);
        CHECK(s < e.m);
        CHECK(t >= 0);
        CHECK(t < e.m);
      }
    }
  }
}

TEST_CASE("family parameter guards") {
  CHECK_THROWS_AS(build_section4_map({1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(build_section4_map({3, 0}), std::invalid_argument);
}

TEST_CASE("closed-form bound values") {
  CHECK(std::abs(section4_closed_form_bound({3, 1}) - 0.897584) < 5e-7);
  CHECK(std::abs(section4_closed_form_bound({2, 1}) - 0.852416) < 5e-7);

  const double f31 = section4_closed_form_bound({3, 1});
  const double f310 = section4_closed_form_bound({3, 10});
  const double f520 = section4_closed_form_bound({5, 20});
  const double f3100 = section4_closed_form_bound({3, 100});
  CHECK(f31 < f310);
  CHECK(f310 < f520);
  CHECK(f520 < f3100);
}

TEST_CASE("pipeline bound equals the closed form") {
  for (const Section4Params p : {Section4Params{3, 1}, Section4Params{3, 2}, Section4Params{5, 1}}) {
    const auto est = divergence_density_bound(build_section4_map(p));
    CHECK(est.kind == EstimateKind::exact);
    CHECK(std::abs(est.value - section4_closed_form_bound(p)) <= 1e-9);
  }
}

TEST_CASE("catalog lookup") {
  const CatalogEntry z = catalog_lookup("zsqrt2");
  CHECK(z.name == "zsqrt2");
  CHECK_FALSE(z.section4.has_value());
  CHECK(z.map.modulus() == 2);

  const CatalogEntry fam = catalog_lookup("section4:d=3,b=1");
  CHECK(fam.name == "section4:d=3,b=1");
  REQUIRE(fam.section4.has_value());
  CHECK(fam.section4->d == 3);
  CHECK(fam.section4->b == 1);
  CHECK(fam.map.entries().size() == 9);

  CHECK(code_of([] { catalog_lookup("zsqrt3"); }) == Errc::parse);
  CHECK(code_of([] { catalog_lookup(""); }) == Errc::parse);
  CHECK(code_of([] { catalog_lookup("section4:d=1,b=1"); }) == Errc::parse);
  CHECK(code_of([] { catalog_lookup("section4:d=3"); }) == Errc::parse);
  CHECK(code_of([] { catalog_lookup("section4:d=x,b=1"); }) == Errc::parse);
  CHECK(code_of([] { catalog_lookup("section4:d=3,b=0"); }) == Errc::parse);
  CHECK(code_of([] { catalog_lookup("section4:b=1,d=3"); }) == Errc::parse);
  CHECK(code_of([] { catalog_lookup("section4:d=600,b=1"); }) == Errc::size_guard);
}
