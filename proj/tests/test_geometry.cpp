#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "collatz/catalog.hpp"
#include "collatz/errors.hpp"
#include "collatz/feasibility.hpp"
#include "collatz/geometry.hpp"
#include "collatz/map.hpp"
#include "collatz/trajectory.hpp"
#include "test_support.hpp"

using namespace collatz;
using testsupport::rand_in;
using testsupport::zsqrt2_raw;

namespace {

const CollatzMap& zmap() {
  static const CollatzMap map = validate_map(zsqrt2_raw());
  return map;
}

template <typename Fn>
std::optional<Errc> code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

std::vector<IntegerForm> forms_from(const std::vector<std::vector<long>>& rows) {
  std::vector<IntegerForm> out;
  for (const auto& row : rows) {
    std::vector<Int> coeffs(row.begin(), row.end());
    out.emplace_back(std::move(coeffs));
  }
  return out;
}

bool farkas_cone_contains(const FinitelyGeneratedCone& cone, const LatticePoint& x) {
  const std::size_t n = cone.generators.size();
  const std::size_t rank = x.size();
  if (n == 0) return is_zero(x);
  std::vector<LinearConstraint> cs;
  for (std::size_t j = 0; j < rank; ++j) {
    std::vector<Rat> row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = Rat(cone.generators[i][j]);
    cs.push_back(make_eq(std::move(row), Rat(x[j])));
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rat> row(n, Rat(0));
    row[i] = 1;
    cs.push_back(make_ge(std::move(row), Rat(0)));
  }
  return solve_feasibility(n, std::move(cs)).feasible;
}

bool directed_oracle(const CollatzMap& map, const LatticePoint& x) {
  const auto shifts = map.nonzero_shifts();
  std::vector<LinearConstraint> cs;
  for (const auto& w : shifts) {
    std::vector<Rat> row(map.rank());
    for (std::size_t i = 0; i < map.rank(); ++i) row[i] = Rat(w[i]);
    cs.push_back(make_ge(std::move(row), Rat(1)));
  }
  std::vector<Rat> row(map.rank());
  for (std::size_t i = 0; i < map.rank(); ++i) row[i] = Rat(x[i]);
  cs.push_back(make_eq(std::move(row), Rat(0)));
  return solve_feasibility(map.rank(), std::move(cs)).feasible;
}

std::set<std::vector<std::int8_t>> sign_set(const std::vector<Chamber>& chambers) {
  std::set<std::vector<std::int8_t>> out;
  for (const auto& c : chambers) out.insert(c.signs);
  return out;
}

}  // namespace

TEST_CASE("minimal nonzero form values on residue classes") {
  CHECK(min_nonzero_abs(IntegerForm({1, 0}), ResidueClass{1, 0}, Int(2)) == 1);
  CHECK(min_nonzero_abs(IntegerForm({1, 1}), ResidueClass{1, 1}, Int(2)) == 2);
  CHECK(min_nonzero_abs(IntegerForm({1, 0}), ResidueClass{0, 1}, Int(2)) == 2);
}

TEST_CASE("separating form predicate on pinned forms") {
  CHECK(is_separating(IntegerForm({1, 1}), zmap()));
  CHECK_FALSE(is_separating(IntegerForm({1, 3}), zmap()));
  CHECK(is_separating(IntegerForm({0, 1}), zmap()));
}

TEST_CASE("separating form enumeration matches the known list") {
  const auto forms = enumerate_separating_forms(zmap());
  const auto expected = forms_from({{0, 1},
                                    {1, -4},
                                    {1, -2},
                                    {1, -1},
                                    {1, 0},
                                    {1, 1},
                                    {1, 2},
                                    {1, 4},
                                    {2, -1},
                                    {2, 1}});
  REQUIRE(forms.size() == 10);
  CHECK(forms == expected);
}

TEST_CASE("doubling the candidate box finds no further forms") {
  CHECK(enumerate_separating_forms(zmap(), 2) == enumerate_separating_forms(zmap()));

  const CollatzMap d3 = build_section4_map({3, 1});
  CHECK(enumerate_separating_forms(d3, 2) == enumerate_separating_forms(d3));

  const CollatzMap d4 = build_section4_map({4, 1});
  CHECK(enumerate_separating_forms(d4, 2) == enumerate_separating_forms(d4));
}

TEST_CASE("family separating forms include both bounding kernels") {
  const CollatzMap d3 = build_section4_map({3, 1});
  const auto forms = enumerate_separating_forms(d3);
  bool kernel_13 = false;
  bool kernel_01 = false;
  for (const auto& f : forms) {
    if (f.eval(LatticePoint{1, 3}) == 0) kernel_13 = true;
    if (f.eval(LatticePoint{0, 1}) == 0) kernel_01 = true;
  }
  CHECK(kernel_13);
  CHECK(kernel_01);
}

TEST_CASE("enumeration requires spanning shifts") {
  RawMap collinear;
  collinear.rank = 2;
  collinear.d = 2;
  collinear.entries = {{{0, 0}, 1, {0, 0}},
                       {{0, 1}, 2, {2, 0}},
                       {{1, 0}, 2, {-2, 0}},
                       {{1, 1}, 2, {4, 0}}};
  const CollatzMap map = validate_map(collinear);
  CHECK(code_of([&] { enumerate_separating_forms(map); }) == Errc::shifts_dont_span);
}

TEST_CASE("separating forms preserve signs along the map") {
  std::mt19937_64 rng(616);
  const auto forms = enumerate_separating_forms(zmap());
  for (const auto& form : forms) {
    for (int trial = 0; trial < 100; ++trial) {
      const LatticePoint x = testsupport::random_point(rng, 2, 500);
      const Int v = form.eval(x);
      if (v == 0) continue;
      CHECK(sgn(form.eval(step(zmap(), x))) == sgn(v));
    }
  }
}

TEST_CASE("cone membership on pinned cases") {
  const FinitelyGeneratedCone quad{{{1, 0}, {0, 1}, {3, 1}}};
  CHECK(cone_contains(quad, LatticePoint{2, 3}));
  CHECK_FALSE(cone_contains(quad, LatticePoint{-1, 2}));
  CHECK(cone_contains(quad, LatticePoint{0, 0}));

  const FinitelyGeneratedCone narrow{{{1, 2}, {2, 1}}};
  CHECK(cone_contains(narrow, LatticePoint{1, 1}));
  CHECK_FALSE(cone_contains(narrow, LatticePoint{1, 3}));
  CHECK(cone_contains(narrow, LatticePoint{1, 2}));

  const FinitelyGeneratedCone ray{{{2, 3}}};
  CHECK(cone_contains(ray, LatticePoint{4, 6}));
  CHECK_FALSE(cone_contains(ray, LatticePoint{-2, -3}));
  CHECK_FALSE(cone_contains(ray, LatticePoint{3, 2}));

  const FinitelyGeneratedCone line{{{1, 0}, {-1, 0}}};
  CHECK(cone_contains(line, LatticePoint{5, 0}));
  CHECK(cone_contains(line, LatticePoint{-5, 0}));
  CHECK_FALSE(cone_contains(line, LatticePoint{0, 1}));

  const FinitelyGeneratedCone halfplane{{{1, 0}, {0, 1}, {-1, 0}}};
  CHECK(cone_contains(halfplane, LatticePoint{-7, 3}));
  CHECK_FALSE(cone_contains(halfplane, LatticePoint{0, -1}));

  const FinitelyGeneratedCone octant{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  CHECK(cone_contains(octant, LatticePoint{1, 2, 3}));
  CHECK_FALSE(cone_contains(octant, LatticePoint{1, 2, -1}));

  const FinitelyGeneratedCone empty{{}};
  CHECK(cone_contains(empty, LatticePoint{0, 0}));
  CHECK_FALSE(cone_contains(empty, LatticePoint{1, 0}));
}

TEST_CASE("cone membership accepts rational points") {
  const FinitelyGeneratedCone narrow{{{1, 2}, {2, 1}}};
  CHECK(cone_contains(narrow, std::vector<Rat>{Rat(1, 2), Rat(1, 2)}));
  CHECK_FALSE(cone_contains(narrow, std::vector<Rat>{Rat(-1, 3), Rat(1, 3)}));
  CHECK(cone_contains(narrow, std::vector<Rat>{Rat(0), Rat(0)}));
}

TEST_CASE("rank-2 cone membership agrees with the elimination certificate") {
  std::mt19937_64 rng(747);
  for (int trial = 0; trial < 300; ++trial) {
    FinitelyGeneratedCone cone;
    const int gens = 1 + trial % 4;
    for (int g = 0; g < gens; ++g) {
      LatticePoint v{rand_in(rng, -9, 9), rand_in(rng, -9, 9)};
      if (is_zero(v)) v = LatticePoint{1, 0};
      cone.generators.push_back(v);
    }
    const LatticePoint x{rand_in(rng, -12, 12), rand_in(rng, -12, 12)};
    CHECK(cone_contains(cone, x) == farkas_cone_contains(cone, x));
  }
}

TEST_CASE("directedness on pinned points") {
  CHECK(is_directed(zmap(), LatticePoint{-1, 1}));
  CHECK_FALSE(is_directed(zmap(), LatticePoint{1, 1}));
  CHECK_FALSE(is_directed(zmap(), LatticePoint{-2, -5}));
  CHECK(code_of([&] { is_directed(zmap(), LatticePoint{0, 0}); }) == Errc::zero_point);

  RawMap opposed;
  opposed.rank = 1;
  opposed.d = 2;
  opposed.entries = {{{0}, 1, {2}}, {{1}, 1, {-1}}};
  const CollatzMap bad = validate_map(opposed);
  CHECK(code_of([&] { is_directed(bad, LatticePoint{1}); }) == Errc::not_acute);
}

TEST_CASE("directedness matches the vanishing-form witness on a full box") {
  for (long a = -20; a <= 20; ++a) {
    for (long b = -20; b <= 20; ++b) {
      if (a == 0 && b == 0) continue;
      const LatticePoint x{a, b};
      CHECK(is_directed(zmap(), x) == directed_oracle(zmap(), x));
    }
  }
}

TEST_CASE("chamber counts on pinned arrangements") {
  const auto forms = enumerate_separating_forms(zmap());
  CHECK(build_chambers(forms, 2).size() == 20);
  CHECK(build_chambers(forms_from({{1, 1}}), 2).size() == 2);
  CHECK(build_chambers(forms_from({{1, 0}, {0, 1}}), 2).size() == 4);
}

TEST_CASE("chamber witnesses realize their sign vectors") {
  const auto forms = enumerate_separating_forms(zmap());
  const auto chambers = build_chambers(forms, 2);
  for (const auto& c : chambers) {
    REQUIRE(c.signs.size() == forms.size());
    REQUIRE(c.witness.size() == 2);
    for (std::size_t j = 0; j < forms.size(); ++j) {
      const Rat v = forms[j].eval(c.witness);
      CHECK(sgn(v) == c.signs[j]);
    }
  }
}

TEST_CASE("angular and sign-vector chamber construction agree") {
  const auto forms = enumerate_separating_forms(zmap());
  CHECK(sign_set(build_chambers(forms, 2)) == sign_set(build_chambers_by_signs(forms, 2)));

  std::mt19937_64 rng(353);
  for (int trial = 0; trial < 200; ++trial) {
    std::set<IntegerForm> pool;
    const int count = 1 + trial % 4;
    while (int(pool.size()) < count) {
      std::vector<Int> coeffs{rand_in(rng, -5, 5), rand_in(rng, -5, 5)};
      if (coeffs[0] == 0 && coeffs[1] == 0) continue;
      pool.insert(IntegerForm(std::move(coeffs)).canonicalized());
    }
    const std::vector<IntegerForm> fs(pool.begin(), pool.end());
    const auto angular = build_chambers(fs, 2);
    const auto by_signs = build_chambers_by_signs(fs, 2);
    CHECK(angular.size() == by_signs.size());
    CHECK(sign_set(angular) == sign_set(by_signs));
  }
}

TEST_CASE("the general chamber path guards the form count") {
  std::vector<IntegerForm> many;
  for (long i = 0; i <= 20; ++i) many.push_back(IntegerForm({1, i}));
  CHECK(code_of([&] { build_chambers_by_signs(many, 2); }) == Errc::too_many_forms);
}

TEST_CASE("wild classification on the quadrant arrangement") {
  const auto forms = forms_from({{1, 0}, {0, 1}});
  auto chambers = build_chambers(forms, 2);
  classify_wild(chambers, forms, FinitelyGeneratedCone{{{1, 2}, {2, 1}}});
  int wild = 0;
  for (const auto& c : chambers) {
    if (!c.wild) continue;
    ++wild;
    CHECK((c.signs == std::vector<std::int8_t>{1, 1}));
  }
  CHECK(wild == 1);
}

TEST_CASE("zsqrt2 wild chambers are the five first-quadrant sectors") {
  const TameCone tame = build_tame_cone(zmap());
  CHECK(tame.forms().size() == 10);
  CHECK(tame.chambers().size() == 20);
  int wild = 0;
  for (const auto& c : tame.chambers()) {
    if (!c.wild) continue;
    ++wild;
    CHECK(c.witness[0] > 0);
    CHECK(c.witness[1] > 0);
  }
  CHECK(wild == 5);
}

TEST_CASE("family wild chambers fill exactly the shift sector") {
  const CollatzMap d3 = build_section4_map({3, 1});
  const TameCone tame = build_tame_cone(d3);
  const FinitelyGeneratedCone sector{{{0, 1}, {1, 3}}};
  int wild = 0;
  for (const auto& c : tame.chambers()) {
    const bool inside = cone_contains(sector, c.witness);
    CHECK(c.wild == inside);
    if (c.wild) ++wild;
  }
  CHECK(wild > 0);
}

TEST_CASE("tame cone membership on pinned points") {
  const TameCone tame = build_tame_cone(zmap());
  CHECK(tame_cone_contains(tame, LatticePoint{-3, 7}));
  CHECK_FALSE(tame_cone_contains(tame, LatticePoint{5, 2}));
  CHECK_FALSE(tame_cone_contains(tame, LatticePoint{0, 1}));
  CHECK_FALSE(tame_cone_contains(tame, LatticePoint{0, 0}));
  CHECK(tame.contains(LatticePoint{7, -2}));
  CHECK_FALSE(tame.contains(LatticePoint{-4, -9}));
}

TEST_CASE("tame region is the open second and fourth quadrant pair") {
  const TameCone tame = build_tame_cone(zmap());
  for (long a = -25; a <= 25; ++a) {
    for (long b = -25; b <= 25; ++b) {
      const bool expected = (a < 0 && b > 0) || (a > 0 && b < 0);
      CHECK(tame_cone_contains(tame, LatticePoint{a, b}) == expected);
    }
  }
}

TEST_CASE("tame points stay tame under the map") {
  const TameCone tame = build_tame_cone(zmap());
  std::mt19937_64 rng(909);
  int checked = 0;
  while (checked < 1000) {
    const long a = rand_in(rng, 1, 400);
    const long b = rand_in(rng, 1, 400);
    const LatticePoint x = checked % 2 == 0 ? LatticePoint{-a, b} : LatticePoint{a, -b};
    if (!tame_cone_contains(tame, x)) continue;
    CHECK(tame_cone_contains(tame, step(zmap(), x)));
    ++checked;
  }
}

TEST_CASE("generic points match exactly one chamber") {
  const TameCone tame = build_tame_cone(zmap());
  for (long a = -6; a <= 6; ++a) {
    for (long b = -6; b <= 6; ++b) {
      if (a == 0 && b == 0) continue;
      const LatticePoint x{a, b};
      bool generic = true;
      std::vector<std::int8_t> s;
      for (const auto& f : tame.forms()) {
        const int v = sgn(f.eval(x));
        if (v == 0) generic = false;
        s.push_back(static_cast<std::int8_t>(v));
      }
      if (!generic) continue;
      int matches = 0;
      for (const auto& c : tame.chambers()) {
        if (c.signs == s) ++matches;
      }
      CHECK(matches == 1);
    }
  }
}

TEST_CASE("minimal generator reduction") {
  const auto z = minimal_generators(FinitelyGeneratedCone{{{1, 0}, {0, 1}, {3, 1}}}, 2);
  const std::set<LatticePoint> zset(z.begin(), z.end());
  CHECK((zset == std::set<LatticePoint>{{1, 0}, {0, 1}}));

  const CollatzMap d3 = build_section4_map({3, 1});
  const auto fam = minimal_generators(FinitelyGeneratedCone{d3.nonzero_shifts()}, 2);
  const std::set<LatticePoint> fset(fam.begin(), fam.end());
  CHECK((fset == std::set<LatticePoint>{{0, 1}, {1, 3}}));

  std::mt19937_64 rng(112);
  for (int trial = 0; trial < 100; ++trial) {
    FinitelyGeneratedCone cone;
    const int gens = 1 + trial % 5;
    for (int g = 0; g < gens; ++g) {
      LatticePoint v{rand_in(rng, -7, 7), rand_in(rng, -7, 7)};
      if (is_zero(v)) v = LatticePoint{0, 1};
      cone.generators.push_back(v);
    }
    const FinitelyGeneratedCone reduced{minimal_generators(cone, 2)};
    for (const auto& g : cone.generators) CHECK(cone_contains(reduced, g));
    for (const auto& g : reduced.generators) CHECK(cone_contains(cone, g));
  }
}

TEST_CASE("tame cone construction requires the right map class") {
  RawMap even;
  even.rank = 1;
  even.d = 2;
  even.entries = {{{0}, 2, {0}}, {{1}, 2, {2}}};
  CHECK(code_of([&] { build_tame_cone(validate_map(even)); }) == Errc::not_relatively_prime);

  RawMap opposed;
  opposed.rank = 1;
  opposed.d = 2;
  opposed.entries = {{{0}, 1, {2}}, {{1}, 1, {-1}}};
  CHECK(code_of([&] { build_tame_cone(validate_map(opposed)); }) == Errc::not_acute);
}
