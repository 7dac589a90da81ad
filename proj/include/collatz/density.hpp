#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "collatz/geometry.hpp"
#include "collatz/map.hpp"
#include "collatz/numeric.hpp"

namespace collatz {

enum class EstimateKind { exact, monte_carlo };

struct DensityEstimate {
  double value = 0.0;
  std::optional<Rat> exact;  // set when the value is an exact rational
  EstimateKind kind = EstimateKind::exact;
  std::optional<double> ci_halfwidth;  // 95% Hoeffding, Monte Carlo only
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
};

struct AkTable {
  std::size_t k = 0;
  Rat fraction;  // |A_k| / d^{ek}
};

struct ProductHypothesis {
  bool holds = false;
  Int product;  // prod_w m_w
  Int bound;    // d^{d^e}
};

struct McOptions {
  std::size_t samples = 200000;
  std::uint64_t seed = 12345;
};

// Unbiased integer draw from [lo, hi] by rejection; deterministic across
// platforms (unlike std::uniform_int_distribution).
std::int64_t uniform_int_in_range(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi);

// Uniform nonzero lattice point with ||x|| <= radius (rejection from the
// box). Throws EMPTY_SAMPLE when the ball holds no nonzero point, SIZE_GUARD
// for absurd radii. The origin is excluded: it is a fixed point of every map
// and carries no density.
LatticePoint sample_ball_point(std::mt19937_64& rng, const Rat& radius, Norm norm,
                               std::size_t rank);

// Visits every lattice point with ||x|| <= radius, rank <= 3 (SIZE_GUARD
// otherwise, likewise for boxes beyond ~2*10^7 candidates).
void lattice_points_in_ball(const Rat& radius, Norm norm, std::size_t rank,
                            const std::function<void(const LatticePoint&)>& visit);
std::vector<LatticePoint> lattice_points_in_ball(const Rat& radius, Norm norm, std::size_t rank);

// Fraction of the unit ball (equivalently, of directions) lying in the tame
// cone. Rank 1: exact two-direction check. Rank 2 + Euclidean: exact angular
// sweep over the refined sector partition, arcs summed in long double (error
// well under 1e-12). Otherwise: seeded Monte Carlo with exact per-sample
// membership and a Hoeffding CI.
DensityEstimate tame_measure_fraction(const TameCone& tame, Norm norm, const McOptions& mc = {});
DensityEstimate tame_measure_fraction_mc(const TameCone& tame, Norm norm, std::size_t samples,
                                         std::uint64_t seed);

// Lower bound for the density of divergent points: the measure fraction of
// the tame cone, via the full decomposition pipeline.
DensityEstimate divergence_density_bound(const CollatzMap& map, Norm norm = Norm::euclidean,
                                         const McOptions& mc = {});

// Exact share of tame lattice points among all lattice points in the closed
// ball: |{x in ball : tame}| / |ball|, as a rational.
DensityEstimate exact_tame_lattice_density(const CollatzMap& map, const Rat& radius,
                                           Norm norm = Norm::euclidean);
DensityEstimate exact_tame_lattice_density(const TameCone& tame, const Rat& radius, Norm norm);

// |A_k| / d^{ek}: the fraction of length-k residue sequences whose multiplier
// product stays below d^k. Dynamic programming over exact product values with
// pruning at d^k (products never decrease); STATE_GUARD caps the distinct
// product count at max_states.
AkTable ak_fraction(const CollatzMap& map, std::size_t k, std::size_t max_states = 200000);

// Exact comparison prod_w m_w < d^{d^e}.
ProductHypothesis product_hypothesis(const CollatzMap& map);

// Fraction of sampled nonzero lattice points in the ball with stopping time
// <= cap. Deterministic given the seed. samples = 0 throws EMPTY_SAMPLE.
DensityEstimate empirical_stopping_fraction(const CollatzMap& map, const Rat& radius,
                                            std::size_t cap, std::size_t samples,
                                            std::uint64_t seed, Norm norm = Norm::euclidean);

// Fraction of sampled nonzero lattice points certified divergent by
// detect_cycle against the tame cone (built from the map unless supplied).
DensityEstimate empirical_divergence_fraction(const CollatzMap& map, const Rat& radius,
                                              std::size_t max_steps, std::size_t samples,
                                              std::uint64_t seed,
                                              const TameCone* tame = nullptr);

}  // namespace collatz
