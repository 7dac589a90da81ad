#include "collatz/geometry.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

#include "collatz/errors.hpp"
#include "collatz/feasibility.hpp"

namespace collatz {

namespace {

constexpr std::size_t kMaxChamberForms = 20;
constexpr long long kMaxEnumerationBox = 20000000;

Int cross2(const LatticePoint& a, const LatticePoint& b) { return a[0] * b[1] - a[1] * b[0]; }
Rat cross2(const LatticePoint& a, const std::vector<Rat>& b) {
  return Rat(a[0]) * b[1] - Rat(a[1]) * b[0];
}
Int dot2(const LatticePoint& a, const LatticePoint& b) { return a[0] * b[0] + a[1] * b[1]; }
Rat dot2(const LatticePoint& a, const std::vector<Rat>& b) {
  return Rat(a[0]) * b[0] + Rat(a[1]) * b[1];
}

LatticePoint primitive_direction(const LatticePoint& v) {
  Int g = 0;
  for (const auto& c : v) g = gcd(g, c);
  LatticePoint out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
  return out;
}

// 0 for the closed upper half (positive x-axis included), 1 for the rest:
// a counterclockwise sweep starting at direction (1,0).
int angular_half(const LatticePoint& p) {
  if (p[1] > 0 || (p[1] == 0 && p[0] > 0)) return 0;
  return 1;
}

bool angular_less(const LatticePoint& p, const LatticePoint& q) {
  const int hp = angular_half(p);
  const int hq = angular_half(q);
  if (hp != hq) return hp < hq;
  return cross2(p, q) > 0;
}

// Distinct primitive directions of the nonzero vectors, counterclockwise.
std::vector<LatticePoint> sorted_rays(const std::vector<LatticePoint>& vectors) {
  std::vector<LatticePoint> rays;
  for (const auto& v : vectors) {
    if (!is_zero(v)) rays.push_back(primitive_direction(v));
  }
  std::sort(rays.begin(), rays.end(), angular_less);
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  return rays;
}

// Exact shape of a finitely generated cone in the plane.
struct Rank2Shape {
  enum class Kind { zero, ray, sector, halfplane, line, full };
  Kind kind = Kind::zero;
  LatticePoint u;  // ray/line direction; sector start; halfplane boundary
  LatticePoint v;  // sector end (counterclockwise from u, angle < pi)
};

Rank2Shape analyze_rank2(const std::vector<LatticePoint>& generators) {
  const auto rays = sorted_rays(generators);
  Rank2Shape shape;
  if (rays.empty()) return shape;  // {0}
  if (rays.size() == 1) {
    shape.kind = Rank2Shape::Kind::ray;
    shape.u = rays[0];
    return shape;
  }

  // Gap classification between consecutive rays: the cross product sign says
  // whether the counterclockwise angle is below, at, or above pi.
  const std::size_t m = rays.size();
  for (std::size_t i = 0; i < m; ++i) {
    const auto& p = rays[i];
    const auto& q = rays[(i + 1) % m];
    if (cross2(p, q) < 0) {  // gap > pi: everything lives in the sector q -> p
      shape.kind = Rank2Shape::Kind::sector;
      shape.u = q;
      shape.v = p;
      return shape;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const auto& p = rays[i];
    const auto& q = rays[(i + 1) % m];
    if (cross2(p, q) == 0) {  // antipodal pair bounding a gap of exactly pi
      if (m == 2) {
        shape.kind = Rank2Shape::Kind::line;
        shape.u = p;
      } else {
        shape.kind = Rank2Shape::Kind::halfplane;
        shape.u = q;  // all rays in the closed halfplane counterclockwise of q
      }
      return shape;
    }
  }
  shape.kind = Rank2Shape::Kind::full;  // every gap < pi: positive spanning
  return shape;
}

template <typename Point>
bool all_coords_zero(const Point& x) {
  for (const auto& c : x)
    if (sgn(c) != 0) return false;
  return true;
}

template <typename Point>
bool rank2_shape_contains(const Rank2Shape& s, const Point& x) {
  switch (s.kind) {
    case Rank2Shape::Kind::zero: return all_coords_zero(x);
    case Rank2Shape::Kind::ray: return sgn(cross2(s.u, x)) == 0 && sgn(dot2(s.u, x)) >= 0;
    case Rank2Shape::Kind::sector:
      return sgn(cross2(s.u, x)) >= 0 && sgn(cross2(s.v, x)) <= 0;
    case Rank2Shape::Kind::halfplane: return sgn(cross2(s.u, x)) >= 0;
    case Rank2Shape::Kind::line: return sgn(cross2(s.u, x)) == 0;
    case Rank2Shape::Kind::full: return true;
  }
  return false;
}

// Farkas separation: x lies outside the cone iff some form is nonnegative on
// every generator and strictly negative on x.
template <typename Point>
bool cone_contains_general(const FinitelyGeneratedCone& cone, const Point& x, std::size_t rank) {
  std::vector<LinearConstraint> constraints;
  constraints.reserve(cone.generators.size() + 1);
  for (const auto& g : cone.generators) {
    if (g.size() != rank) fail(Errc::rank_mismatch, "cone generator rank mismatch");
    std::vector<Rat> coeffs(rank);
    for (std::size_t i = 0; i < rank; ++i) coeffs[i] = Rat(g[i]);
    constraints.push_back(make_ge(std::move(coeffs), Rat(0)));
  }
  std::vector<Rat> neg(rank);
  for (std::size_t i = 0; i < rank; ++i) neg[i] = -Rat(x[i]);
  constraints.push_back(make_ge(std::move(neg), Rat(1)));
  return !solve_feasibility(rank, std::move(constraints)).feasible;
}

template <typename Point>
bool cone_contains_impl(const FinitelyGeneratedCone& cone, const Point& x) {
  const std::size_t rank = x.size();
  if (rank == 0) fail(Errc::rank_mismatch, "empty point");
  if (rank == 2) {
    for (const auto& g : cone.generators)
      if (g.size() != 2) fail(Errc::rank_mismatch, "cone generator rank mismatch");
    return rank2_shape_contains(analyze_rank2(cone.generators), x);
  }
  return cone_contains_general(cone, x, rank);
}

Int bareiss_det(std::vector<std::vector<Int>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k].is_zero()) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a[swap_row][k].is_zero()) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

Int gram_det(const std::vector<const LatticePoint*>& vecs) {
  const std::size_t n = vecs.size();
  std::vector<std::vector<Int>> g(n, std::vector<Int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g[i][j] = dot(*vecs[i], *vecs[j]);
  return bareiss_det(std::move(g));
}

// Exact inverse by Gauss-Jordan; the matrix is known nonsingular.
std::vector<std::vector<Rat>> rational_inverse(std::vector<std::vector<Rat>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col].is_zero()) ++pivot;
    if (pivot == n) throw std::logic_error("singular matrix in rational_inverse");
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    const Rat p = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col].is_zero()) continue;
      const Rat f = a[i][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] -= f * a[col][j];
        inv[i][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

}  // namespace

Int min_nonzero_abs(const IntegerForm& form, const ResidueClass& omega, const Int& d) {
  Int c = dot(form.coeffs(), omega) % d;
  if (c < 0) c += d;
  if (c.is_zero()) return d;
  return std::min(c, Int(d - c));
}

bool is_separating(const IntegerForm& form, const CollatzMap& map) {
  for (const auto& e : map.entries()) {
    const Int lhs = e.m * min_nonzero_abs(form, e.residue, map.modulus());
    if (lhs <= abs(form.eval(e.r))) return false;
  }
  return true;
}

std::vector<IntegerForm> enumerate_separating_forms(const CollatzMap& map, unsigned box_scale) {
  const std::size_t e = map.rank();
  const Int& d = map.modulus();

  // One (shift, multiplier) pair per distinct nonzero shift, keeping the
  // smallest multiplier (it yields the tightest box constraint).
  std::vector<std::pair<LatticePoint, Int>> pairs;
  for (const auto& entry : map.entries()) {
    if (is_zero(entry.r)) continue;
    auto it = std::find_if(pairs.begin(), pairs.end(),
                           [&](const auto& p) { return p.first == entry.r; });
    if (it == pairs.end()) pairs.emplace_back(entry.r, entry.m);
    else if (entry.m < it->second) it->second = entry.m;
  }

  {
    std::vector<LatticePoint> shifts;
    for (const auto& p : pairs) shifts.push_back(p.first);
    if (span_rank(shifts, e) != e)
      fail(Errc::shifts_dont_span, "shift vectors do not span the ambient space");
  }

  // Greedily grow a maximal-volume independent subset of the shifts.
  std::vector<std::size_t> chosen;
  std::vector<const LatticePoint*> basis;
  for (std::size_t t = 0; t < e; ++t) {
    std::size_t best = pairs.size();
    Int best_det = 0;
    for (std::size_t c = 0; c < pairs.size(); ++c) {
      if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
      basis.push_back(&pairs[c].first);
      Int det = abs(gram_det(basis));
      basis.pop_back();
      if (det > best_det) {
        best_det = det;
        best = c;
      }
    }
    if (best == pairs.size()) throw std::logic_error("independent shift selection failed");
    chosen.push_back(best);
    basis.push_back(&pairs[best].first);
  }

  // Every separating form satisfies |<a, g_i>| <= d*m_i - 1 for the chosen
  // shifts, so a = (G^T)^{-1} y ranges over an exact rational box.
  std::vector<std::vector<Rat>> gt(e, std::vector<Rat>(e));
  for (std::size_t i = 0; i < e; ++i)
    for (std::size_t j = 0; j < e; ++j) gt[i][j] = Rat(pairs[chosen[i]].first[j]);
  const auto inv = rational_inverse(std::move(gt));

  std::vector<long long> box(e);
  long long volume = 1;
  for (std::size_t j = 0; j < e; ++j) {
    Rat bound = 0;
    for (std::size_t i = 0; i < e; ++i)
      bound += rat_abs(inv[j][i]) * Rat(d * pairs[chosen[i]].second - 1);
    const Int b = rat_floor(bound * Rat(Int(box_scale)));
    if (b > kMaxEnumerationBox) fail(Errc::size_guard, "separating-form search box too large");
    box[j] = b.convert_to<long long>();
    if (volume > kMaxEnumerationBox / (2 * box[j] + 1))
      fail(Errc::size_guard, "separating-form search box too large");
    volume *= 2 * box[j] + 1;
  }

  std::vector<IntegerForm> out;
  std::vector<long long> a(e, 0);
  for (std::size_t j = 0; j < e; ++j) a[j] = -box[j];
  while (true) {
    // Canonical candidates only: nonzero, first nonzero coefficient
    // positive, primitive.
    std::size_t lead = 0;
    while (lead < e && a[lead] == 0) ++lead;
    if (lead < e && a[lead] > 0) {
      Int g = 0;
      for (std::size_t j = 0; j < e; ++j) g = gcd(g, Int(a[j]));
      if (g == 1) {
        std::vector<Int> coeffs(e);
        for (std::size_t j = 0; j < e; ++j) coeffs[j] = a[j];
        IntegerForm candidate(std::move(coeffs));
        if (is_separating(candidate, map)) out.push_back(std::move(candidate));
      }
    }
    std::size_t pos = e;
    while (pos-- > 0) {
      if (a[pos] < box[pos]) {
        ++a[pos];
        break;
      }
      a[pos] = -box[pos];
      if (pos == 0) {
        std::sort(out.begin(), out.end());
        return out;
      }
    }
  }
}

bool cone_contains(const FinitelyGeneratedCone& cone, const LatticePoint& x) {
  return cone_contains_impl(cone, x);
}

bool cone_contains(const FinitelyGeneratedCone& cone, const std::vector<Rat>& x) {
  return cone_contains_impl(cone, x);
}

bool is_directed(const CollatzMap& map, const LatticePoint& x) {
  if (x.size() != map.rank()) fail(Errc::rank_mismatch, "point rank does not match map rank");
  if (is_zero(x)) fail(Errc::zero_point, "directedness is defined for nonzero points");
  const auto shifts = map.nonzero_shifts();
  if (!strictly_positive_witness(shifts, map.rank()))
    fail(Errc::not_acute, "shift set admits no strictly positive form");
  const FinitelyGeneratedCone cone{shifts};
  return !cone_contains(cone, x) && !cone_contains(cone, negate(x));
}

namespace {

LatticePoint rot90(const LatticePoint& u) { return LatticePoint{-u[1], u[0]}; }

std::vector<Chamber> build_chambers_rank2(const std::vector<IntegerForm>& forms) {
  std::vector<LatticePoint> kernel_dirs;
  for (const auto& f : forms) {
    const auto& a = f.coeffs();
    kernel_dirs.push_back(LatticePoint{-a[1], a[0]});
    kernel_dirs.push_back(LatticePoint{a[1], -a[0]});
  }
  const auto rays = sorted_rays(kernel_dirs);

  std::vector<Chamber> chambers;
  const std::size_t n = rays.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& u = rays[i];
    const auto& v = rays[(i + 1) % n];
    LatticePoint w = add(u, v);
    if (is_zero(w)) w = rot90(u);  // antipodal pair: the sector spans pi
    Chamber c;
    c.signs.resize(forms.size());
    for (std::size_t j = 0; j < forms.size(); ++j) {
      const int s = sgn(forms[j].eval(w));
      if (s == 0) throw std::logic_error("sector witness landed on a hyperplane");
      c.signs[j] = static_cast<std::int8_t>(s);
    }
    c.witness.assign(2, Rat(0));
    c.witness[0] = Rat(w[0]);
    c.witness[1] = Rat(w[1]);
    chambers.push_back(std::move(c));
  }
  return chambers;
}

void chambers_sign_dfs(const std::vector<IntegerForm>& forms, std::size_t rank,
                       std::vector<std::int8_t>& signs, std::vector<LinearConstraint>& constraints,
                       std::vector<Chamber>& out) {
  // Strict positivity on an open cone is scale-equivalent to >= 1.
  const auto result = solve_feasibility(rank, constraints);
  if (!result.feasible) return;
  if (signs.size() == forms.size()) {
    out.push_back(Chamber{signs, false, result.point});
    return;
  }
  const auto& a = forms[signs.size()].coeffs();
  for (const int s : {+1, -1}) {
    std::vector<Rat> coeffs(rank);
    for (std::size_t i = 0; i < rank; ++i) coeffs[i] = Rat(s * a[i]);
    signs.push_back(static_cast<std::int8_t>(s));
    constraints.push_back(make_ge(std::move(coeffs), Rat(1)));
    chambers_sign_dfs(forms, rank, signs, constraints, out);
    constraints.pop_back();
    signs.pop_back();
  }
}

}  // namespace

std::vector<Chamber> build_chambers_by_signs(const std::vector<IntegerForm>& forms,
                                             std::size_t rank) {
  if (forms.empty()) throw std::invalid_argument("build_chambers requires at least one form");
  if (forms.size() > kMaxChamberForms)
    fail(Errc::too_many_forms, "sign enumeration over " + std::to_string(forms.size()) +
                                   " forms exceeds the guard of " +
                                   std::to_string(kMaxChamberForms));
  std::vector<Chamber> out;
  std::vector<std::int8_t> signs;
  std::vector<LinearConstraint> constraints;
  chambers_sign_dfs(forms, rank, signs, constraints, out);
  std::sort(out.begin(), out.end(),
            [](const Chamber& a, const Chamber& b) { return a.signs < b.signs; });
  return out;
}

std::vector<Chamber> build_chambers(const std::vector<IntegerForm>& forms, std::size_t rank) {
  if (forms.empty()) throw std::invalid_argument("build_chambers requires at least one form");
  for (const auto& f : forms)
    if (f.rank() != rank) fail(Errc::rank_mismatch, "form rank does not match ambient rank");
  if (rank == 2) return build_chambers_rank2(forms);
  return build_chambers_by_signs(forms, rank);
}

void classify_wild(std::vector<Chamber>& chambers, const std::vector<IntegerForm>& forms,
                   const FinitelyGeneratedCone& shift_cone) {
  const std::size_t n = shift_cone.generators.size();
  if (n == 0) {
    for (auto& c : chambers) c.wild = false;  // B+ = {0} misses every open chamber
    return;
  }
  // Chamber C meets B+ iff some nonnegative combination y of the generators
  // has sign_j * F_j(y) > 0 for all j; substituting y = sum l_i g_i turns
  // this into feasibility in the coefficients l.
  for (auto& c : chambers) {
    std::vector<LinearConstraint> constraints;
    constraints.reserve(forms.size() + n);
    for (std::size_t j = 0; j < forms.size(); ++j) {
      std::vector<Rat> coeffs(n);
      for (std::size_t i = 0; i < n; ++i)
        coeffs[i] = Rat(Int(c.signs[j]) * forms[j].eval(shift_cone.generators[i]));
      constraints.push_back(make_ge(std::move(coeffs), Rat(1)));
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Rat> coeffs(n, Rat(0));
      coeffs[i] = 1;
      constraints.push_back(make_ge(std::move(coeffs), Rat(0)));
    }
    c.wild = solve_feasibility(n, std::move(constraints)).feasible;
  }
}

std::vector<LatticePoint> minimal_generators(const FinitelyGeneratedCone& cone, std::size_t rank) {
  std::vector<LatticePoint> kept;
  for (const auto& g : cone.generators)
    if (!is_zero(g)) kept.push_back(g);
  for (std::size_t i = 0; i < kept.size();) {
    FinitelyGeneratedCone others;
    for (std::size_t j = 0; j < kept.size(); ++j)
      if (j != i) others.generators.push_back(kept[j]);
    if (!others.generators.empty() && kept[i].size() == rank && cone_contains(others, kept[i]))
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }
  return kept;
}

TameCone::TameCone(std::size_t rank, std::vector<IntegerForm> forms, std::vector<Chamber> chambers,
                   FinitelyGeneratedCone shift_cone)
    : rank_(rank),
      forms_(std::move(forms)),
      chambers_(std::move(chambers)),
      shift_cone_(std::move(shift_cone)) {}

template <typename Point>
bool TameCone::contains_impl(const Point& x) const {
  if (x.size() != rank_) fail(Errc::rank_mismatch, "point rank does not match cone rank");
  if (all_coords_zero(x)) return false;  // 0 lies in B-

  Point neg = x;
  for (auto& c : neg) c = -c;
  if (cone_contains(shift_cone_, neg)) return false;

  std::vector<int> s(forms_.size());
  for (std::size_t j = 0; j < forms_.size(); ++j) s[j] = sgn(forms_[j].eval(x));
  for (const auto& chamber : chambers_) {
    if (!chamber.wild) continue;
    bool compatible = true;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] != 0 && s[j] != chamber.signs[j]) {
        compatible = false;
        break;
      }
    }
    if (compatible) return false;  // x lies in this wild chamber's closure
  }
  return true;
}

bool TameCone::contains(const LatticePoint& x) const { return contains_impl(x); }
bool TameCone::contains(const std::vector<Rat>& x) const { return contains_impl(x); }

bool tame_cone_contains(const TameCone& tame, const LatticePoint& x) { return tame.contains(x); }

TameCone build_tame_cone(const CollatzMap& map) {
  if (!is_relatively_prime_type(map))
    fail(Errc::not_relatively_prime,
         "tame-cone certification requires gcd(m_w, d) = 1 for all residues");
  const auto shifts = map.nonzero_shifts();
  if (!strictly_positive_witness(shifts, map.rank()))
    fail(Errc::not_acute, "shift set admits no strictly positive form");

  auto forms = enumerate_separating_forms(map);
  FinitelyGeneratedCone shift_cone{minimal_generators(FinitelyGeneratedCone{shifts}, map.rank())};

  std::vector<Chamber> chambers;
  if (forms.empty()) {
    // No separating hyperplanes: one chamber covering everything.
    chambers.push_back(Chamber{{}, false, std::vector<Rat>(map.rank(), Rat(0))});
  } else {
    chambers = build_chambers(forms, map.rank());
  }
  classify_wild(chambers, forms, shift_cone);
  return TameCone(map.rank(), std::move(forms), std::move(chambers), std::move(shift_cone));
}

}  // namespace collatz
