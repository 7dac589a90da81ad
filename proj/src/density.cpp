#include "collatz/density.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <variant>

#include "collatz/errors.hpp"
#include "collatz/trajectory.hpp"

namespace collatz {

namespace {

constexpr long long kMaxBallBox = 20000000;
constexpr std::int64_t kSampleGrid = 1 << 30;

double hoeffding_halfwidth(std::size_t n) {
  // 95% two-sided bound: sqrt(ln(2/0.05) / (2n)).
  return std::sqrt(std::log(2.0 / 0.05) / (2.0 * static_cast<double>(n)));
}

Int pow_int(const Int& base, std::size_t exp) {
  Int out = 1;
  for (std::size_t i = 0; i < exp; ++i) out *= base;
  return out;
}

Rat rat_from_double_grid(std::int64_t num) { return Rat(Int(num), Int(kSampleGrid)); }

}  // namespace

std::int64_t uniform_int_in_range(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const std::uint64_t range =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (range == 0) return static_cast<std::int64_t>(rng());  // the full 64-bit span
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t reject_above = max - max % range;  // multiple of range
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= reject_above);
  return lo + static_cast<std::int64_t>(r % range);
}

LatticePoint sample_ball_point(std::mt19937_64& rng, const Rat& radius, Norm norm,
                               std::size_t rank) {
  if (rank == 0) fail(Errc::rank_mismatch, "rank must be positive");
  const Int b = radius.sign() > 0 ? rat_floor(radius) : Int(0);
  if (b.is_zero()) fail(Errc::empty_sample, "ball of radius " + to_string(radius) +
                                                " holds no nonzero lattice point");
  if (b > (Int(1) << 40)) fail(Errc::size_guard, "sampling radius too large");
  const std::int64_t bl = b.convert_to<std::int64_t>();
  const Rat r2 = radius * radius;

  LatticePoint x(rank);
  while (true) {
    bool zero = true;
    for (std::size_t i = 0; i < rank; ++i) {
      x[i] = uniform_int_in_range(rng, -bl, bl);
      if (!x[i].is_zero()) zero = false;
    }
    if (zero) continue;
    if (norm == Norm::euclidean && Rat(norm_sq(x)) > r2) continue;
    return x;
  }
}

void lattice_points_in_ball(const Rat& radius, Norm norm, std::size_t rank,
                            const std::function<void(const LatticePoint&)>& visit) {
  if (rank == 0 || rank > 3)
    fail(Errc::size_guard, "exact ball enumeration supports rank 1..3");
  if (radius.sign() < 0) return;
  const Int b = rat_floor(radius);
  if (b > kMaxBallBox) fail(Errc::size_guard, "enumeration radius too large");
  const long long bl = b.convert_to<long long>();
  long long volume = 1;
  for (std::size_t i = 0; i < rank; ++i) {
    if (volume > kMaxBallBox / (2 * bl + 1)) fail(Errc::size_guard, "enumeration box too large");
    volume *= 2 * bl + 1;
  }
  const Rat r2 = radius * radius;

  LatticePoint x(rank);
  std::vector<long long> cur(rank, -bl);
  while (true) {
    for (std::size_t i = 0; i < rank; ++i) x[i] = cur[i];
    if (norm == Norm::sup || Rat(norm_sq(x)) <= r2) visit(x);
    std::size_t pos = rank;
    bool done = false;
    while (pos-- > 0) {
      if (cur[pos] < bl) {
        ++cur[pos];
        break;
      }
      cur[pos] = -bl;
      if (pos == 0) done = true;
    }
    if (done) break;
  }
}

std::vector<LatticePoint> lattice_points_in_ball(const Rat& radius, Norm norm, std::size_t rank) {
  std::vector<LatticePoint> out;
  lattice_points_in_ball(radius, norm, rank,
                         [&](const LatticePoint& x) { out.push_back(x); });
  return out;
}

namespace {

LatticePoint rot90(const LatticePoint& u) { return LatticePoint{-u[1], u[0]}; }

Int cross2(const LatticePoint& a, const LatticePoint& b) { return a[0] * b[1] - a[1] * b[0]; }

int angular_half(const LatticePoint& p) {
  if (p[1] > 0 || (p[1] == 0 && p[0] > 0)) return 0;
  return 1;
}

LatticePoint primitive_direction(const LatticePoint& v) {
  Int g = 0;
  for (const auto& c : v) g = gcd(g, c);
  LatticePoint out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
  return out;
}

// Boundary rays of the refined partition: kernel rays of every form plus the
// extreme rays of B- (tameness is constant on each open sector in between).
std::vector<LatticePoint> refined_rays(const TameCone& tame) {
  std::vector<LatticePoint> rays;
  for (const auto& f : tame.forms()) {
    const auto& a = f.coeffs();
    rays.push_back(LatticePoint{-a[1], a[0]});
    rays.push_back(LatticePoint{a[1], -a[0]});
  }
  for (const auto& g : tame.shift_cone().generators) {
    if (!is_zero(g)) rays.push_back(negate(g));
  }
  for (auto& r : rays) r = primitive_direction(r);
  std::sort(rays.begin(), rays.end(), [](const LatticePoint& p, const LatticePoint& q) {
    const int hp = angular_half(p);
    const int hq = angular_half(q);
    if (hp != hq) return hp < hq;
    return cross2(p, q) > 0;
  });
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  return rays;
}

DensityEstimate exact_rank1(const TameCone& tame) {
  int count = 0;
  count += tame.contains(LatticePoint{Int(1)}) ? 1 : 0;
  count += tame.contains(LatticePoint{Int(-1)}) ? 1 : 0;
  DensityEstimate est;
  est.exact = Rat(count, 2);
  est.value = to_double(*est.exact);
  est.kind = EstimateKind::exact;
  return est;
}

DensityEstimate exact_rank2_euclidean(const TameCone& tame) {
  const auto rays = refined_rays(tame);
  DensityEstimate est;
  est.kind = EstimateKind::exact;

  if (rays.empty()) {
    // No boundary structure at all: tameness is constant off the origin.
    est.value = tame.contains(LatticePoint{Int(1), Int(0)}) ? 1.0 : 0.0;
    return est;
  }

  long double total = 0.0L;
  const std::size_t n = rays.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& u = rays[i];
    const auto& v = rays[(i + 1) % n];

    LatticePoint w;
    long double ang;
    if (n == 1) {
      w = rot90(u);
      ang = 2.0L * std::numbers::pi_v<long double>;
    } else {
      const Int cr = cross2(u, v);
      const Int dt = u[0] * v[0] + u[1] * v[1];
      ang = std::atan2(static_cast<long double>(to_double(cr)),
                       static_cast<long double>(to_double(dt)));
      if (ang <= 0) ang += 2.0L * std::numbers::pi_v<long double>;  // sectors always advance counterclockwise
      if (cr.is_zero()) {
        w = rot90(u);  // antipodal: the sector spans exactly pi
      } else if (cr > 0) {
        w = add(u, v);
      } else {
        w = negate(add(u, v));  // reflex sector: the short-side midpoint flipped
      }
    }
    if (tame.contains(w)) total += ang;
  }
  est.value = static_cast<double>(total / (2.0L * std::numbers::pi_v<long double>));
  return est;
}

}  // namespace

DensityEstimate tame_measure_fraction_mc(const TameCone& tame, Norm norm, std::size_t samples,
                                         std::uint64_t seed) {
  if (samples == 0) fail(Errc::empty_sample, "sample count must be positive");
  std::mt19937_64 rng(seed);
  const std::size_t rank = tame.rank();
  std::size_t hits = 0;
  std::vector<Rat> q(rank);
  for (std::size_t s = 0; s < samples; ++s) {
    while (true) {
      bool zero = true;
      for (std::size_t i = 0; i < rank; ++i) {
        const std::int64_t g = uniform_int_in_range(rng, -kSampleGrid, kSampleGrid);
        q[i] = rat_from_double_grid(g);
        if (g != 0) zero = false;
      }
      if (zero) continue;
      if (norm == Norm::euclidean && norm_sq(q) > 1) continue;
      break;
    }
    if (tame.contains(q)) ++hits;
  }
  DensityEstimate est;
  est.value = static_cast<double>(hits) / static_cast<double>(samples);
  est.kind = EstimateKind::monte_carlo;
  est.ci_halfwidth = hoeffding_halfwidth(samples);
  est.samples = samples;
  est.seed = seed;
  return est;
}

DensityEstimate tame_measure_fraction(const TameCone& tame, Norm norm, const McOptions& mc) {
  if (tame.rank() == 1) return exact_rank1(tame);
  if (tame.rank() == 2 && norm == Norm::euclidean) return exact_rank2_euclidean(tame);
  return tame_measure_fraction_mc(tame, norm, mc.samples, mc.seed);
}

DensityEstimate divergence_density_bound(const CollatzMap& map, Norm norm, const McOptions& mc) {
  return tame_measure_fraction(build_tame_cone(map), norm, mc);
}

DensityEstimate exact_tame_lattice_density(const TameCone& tame, const Rat& radius, Norm norm) {
  Int total = 0;
  Int tame_count = 0;
  lattice_points_in_ball(radius, norm, tame.rank(), [&](const LatticePoint& x) {
    ++total;
    if (tame.contains(x)) ++tame_count;
  });
  DensityEstimate est;
  est.exact = Rat(tame_count, total);
  est.value = to_double(*est.exact);
  est.kind = EstimateKind::exact;
  return est;
}

DensityEstimate exact_tame_lattice_density(const CollatzMap& map, const Rat& radius, Norm norm) {
  return exact_tame_lattice_density(build_tame_cone(map), radius, norm);
}

AkTable ak_fraction(const CollatzMap& map, std::size_t k, std::size_t max_states) {
  if (k == 0) throw std::invalid_argument("ak_fraction requires k >= 1");
  const Int dk = pow_int(map.modulus(), k);

  // Multiplier multiset: value -> number of residues carrying it.
  std::map<Int, Int> groups;
  for (const auto& e : map.entries()) ++groups[e.m];

  // Distribution of products after each step; products at or above d^k can
  // never fall back below it and are dropped.
  std::map<Int, Int> dist{{Int(1), Int(1)}};
  for (std::size_t s = 0; s < k; ++s) {
    std::map<Int, Int> next;
    for (const auto& [p, count] : dist) {
      for (const auto& [m, mult] : groups) {
        const Int q = p * m;
        if (q >= dk) continue;
        next[q] += count * mult;
      }
    }
    if (next.size() > max_states)
      fail(Errc::state_guard, "distinct multiplier products exceed the state cap");
    dist = std::move(next);
  }

  Int below = 0;
  for (const auto& [p, count] : dist) below += count;
  AkTable table;
  table.k = k;
  table.fraction = Rat(below, pow_int(Int(map.entries().size()), k));
  return table;
}

ProductHypothesis product_hypothesis(const CollatzMap& map) {
  ProductHypothesis result;
  result.product = 1;
  for (const auto& e : map.entries()) result.product *= e.m;
  result.bound = pow_int(map.modulus(), map.entries().size());
  result.holds = result.product < result.bound;
  return result;
}

DensityEstimate empirical_stopping_fraction(const CollatzMap& map, const Rat& radius,
                                            std::size_t cap, std::size_t samples,
                                            std::uint64_t seed, Norm norm) {
  if (samples == 0) fail(Errc::empty_sample, "sample count must be positive");
  std::mt19937_64 rng(seed);
  std::size_t stopped = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const LatticePoint x = sample_ball_point(rng, radius, norm, map.rank());
    if (stopping_time(map, x, norm, cap).k) ++stopped;
  }
  DensityEstimate est;
  est.value = static_cast<double>(stopped) / static_cast<double>(samples);
  est.kind = EstimateKind::monte_carlo;
  est.ci_halfwidth = hoeffding_halfwidth(samples);
  est.samples = samples;
  est.seed = seed;
  return est;
}

DensityEstimate empirical_divergence_fraction(const CollatzMap& map, const Rat& radius,
                                              std::size_t max_steps, std::size_t samples,
                                              std::uint64_t seed, const TameCone* tame) {
  if (samples == 0) fail(Errc::empty_sample, "sample count must be positive");
  std::optional<TameCone> own;
  if (!tame) {
    own.emplace(build_tame_cone(map));
    tame = &*own;
  }
  std::mt19937_64 rng(seed);
  std::size_t divergent = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const LatticePoint x = sample_ball_point(rng, radius, Norm::euclidean, map.rank());
    const auto outcome = detect_cycle(map, x, max_steps, tame);
    if (std::holds_alternative<CertifiedDivergent>(outcome)) ++divergent;
  }
  DensityEstimate est;
  est.value = static_cast<double>(divergent) / static_cast<double>(samples);
  est.kind = EstimateKind::monte_carlo;
  est.ci_halfwidth = hoeffding_halfwidth(samples);
  est.samples = samples;
  est.seed = seed;
  return est;
}

}  // namespace collatz
