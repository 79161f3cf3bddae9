#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "sparsinv/matrix.hpp"
#include "sparsinv/support_set.hpp"

namespace sparsinv {

class Rng;

// Tolerance on ||x|| - 1 accepted by the operations that take unit vectors.
inline constexpr double kUnitTolerance = 1e-8;

// Constants of the compressible / incompressible decomposition.
//   sparsity_fraction       c0: the sparse level is s = floor(c0 N)
//   compressibility_radius  c': compressible iff dist to the s-sparse sphere <= c'
//   spread_level            nu: a coordinate is "large" when |x_k| >= nu / sqrt(N)
//   spread_fraction         rho: incompressible vectors have >= rho N large coordinates
struct SparsityParams {
  double sparsity_fraction = 0.1;
  double compressibility_radius = 0.3;
  double spread_level = 0.0;
  double spread_fraction = 0.0;

  // Defaults with (nu, rho) derived from (c0, c'); see derived_spread_constants.
  static SparsityParams defaults();
  std::size_t sparsity(std::size_t n) const;  // floor(c0 N), at least 1
  void validate() const;                       // throws DomainError

  friend bool operator==(const SparsityParams&, const SparsityParams&) = default;
};

struct SpreadConstants {
  double level = 0.0;     // nu*
  double fraction = 0.0;  // rho*
};

// If fewer than s + 1 coordinates have |x_k| >= nu/sqrt(N), those coordinates
// fit in the head, so ||head_s||^2 > 1 - nu^2. Incompressibility forces
// ||head_s|| < 1 - c'^2/2. Choosing nu^2 = 1 - (1 - c'^2/2)^2 makes the two
// incompatible, so an incompressible x has at least floor(c0 N) + 1 > c0 N
// coordinates of magnitude >= nu/sqrt(N):
//   nu* = sqrt(1 - (1 - c'^2/2)^2),  rho* = c0.
SpreadConstants derived_spread_constants(double sparsity_fraction, double compressibility_radius);

// Spread test vectors: all |x_k| in [lo/sqrt(N), hi/sqrt(N)] before normalization.
inline constexpr double kSpreadLow = 0.5;
inline constexpr double kSpreadHigh = 2.0;

struct HeadTail {
  Vector head;
  Vector tail;
  SupportSet support;  // support of the head
};

// Head keeps the s largest-magnitude coordinates (ties: lowest index wins).
HeadTail head_tail_split(std::span<const double> x, std::size_t s);

// Distance from unit x to Sparse(N, s) intersected with the unit sphere.
// Closed form: the nearest point is head/||head||, so
//   dist^2 = ||tail||^2 + (||head|| - 1)^2  (= 2(1 - ||head||) for ||x|| = 1).
double dist_to_sparse_sphere(std::span<const double> x, std::size_t s);

enum class VectorClass { Compressible, Incompressible };
std::string_view to_string(VectorClass c) noexcept;

VectorClass classify(std::span<const double> x, const SparsityParams& params);

// #{k : |x_k| >= nu / sqrt(N)}.
std::size_t spread_coordinate_count(std::span<const double> x, double level);

// Uniform point on the unit sphere in R^n (normalized Gaussian).
Vector random_unit_vector(std::size_t n, Rng& rng);
// Uniform point on the unit sphere of the coordinate subspace of `support`.
Vector random_sparse_unit_vector(const SupportSet& support, Rng& rng);
// Spread vector: magnitudes uniform in [lo, hi]/sqrt(N), random signs, normalized.
Vector random_spread_vector(std::size_t n, Rng& rng, double low = kSpreadLow, double high = kSpreadHigh);
// Rejection-samples uniform sphere points until `classify` returns `wanted`.
// Throws BudgetError after max_attempts.
Vector sample_in_class(std::size_t n, const SparsityParams& params, VectorClass wanted, Rng& rng,
                       std::size_t max_attempts = 1000000);
// A compressible vector by construction: random sparse unit vector plus a
// perturbation of norm <= radius, renormalized, rejected until classify agrees.
Vector sample_compressible(std::size_t n, const SparsityParams& params, Rng& rng);

void require_unit(std::span<const double> x);

// Covering bounds, all in log space (natural log) to avoid overflow.
//   full         N log(3/eps)                 sphere bound
//   sparse       log C(N,s) + s log(3/eps)    constructive sparse bound
//   binom_bound  s log(eN/s)                  bound on log C(N,s)
struct CoveringBounds {
  double log_full = 0.0;
  double log_sparse = 0.0;
  double log_binomial = 0.0;
  double log_binom_bound = 0.0;
  long double full() const;
  long double sparse() const;
  long double binom_bound() const;
};

// Requires 1 <= s <= N/2 and eps in (0, 1).
CoveringBounds covering_bounds(std::size_t n, std::size_t s, double eps);

}  // namespace sparsinv
