#include "sparsinv/sparse_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparsinv/errors.hpp"
#include "sparsinv/rng.hpp"

namespace sparsinv {

SparsityParams SparsityParams::defaults() {
  SparsityParams p;
  const SpreadConstants c = derived_spread_constants(p.sparsity_fraction, p.compressibility_radius);
  p.spread_level = c.level;
  p.spread_fraction = c.fraction;
  return p;
}

std::size_t SparsityParams::sparsity(std::size_t n) const {
  const auto s = static_cast<std::size_t>(std::floor(sparsity_fraction * static_cast<double>(n)));
  return std::clamp<std::size_t>(s, 1, std::max<std::size_t>(n, 1));
}

void SparsityParams::validate() const {
  if (!(sparsity_fraction > 0.0 && sparsity_fraction < 1.0)) throw DomainError("sparsity fraction must be in (0, 1)");
  if (!(compressibility_radius > 0.0 && compressibility_radius <= std::sqrt(2.0))) {
    throw DomainError("compressibility radius must be in (0, sqrt 2]");
  }
  if (!(spread_level > 0.0)) throw DomainError("spread level must be positive");
  if (!(spread_fraction > 0.0 && spread_fraction < 1.0)) throw DomainError("spread fraction must be in (0, 1)");
}

SpreadConstants derived_spread_constants(double sparsity_fraction, double compressibility_radius) {
  const double head_cap = 1.0 - 0.5 * compressibility_radius * compressibility_radius;
  SpreadConstants c;
  c.level = std::sqrt(std::max(0.0, 1.0 - head_cap * head_cap));
  c.fraction = sparsity_fraction;
  return c;
}

std::string_view to_string(VectorClass c) noexcept {
  return c == VectorClass::Compressible ? "compressible" : "incompressible";
}

HeadTail head_tail_split(std::span<const double> x, std::size_t s) {
  const std::size_t n = x.size();
  if (s < 1 || s > n) throw DomainError("head_tail_split: sparsity out of range");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(x[a]) > std::abs(x[b]); });
  std::vector<std::size_t> head_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(s));
  std::sort(head_idx.begin(), head_idx.end());

  HeadTail out;
  out.head.assign(n, 0.0);
  out.tail.assign(x.begin(), x.end());
  for (std::size_t i : head_idx) {
    out.head[i] = x[i];
    out.tail[i] = 0.0;
  }
  out.support = SupportSet(std::move(head_idx), n);
  return out;
}

void require_unit(std::span<const double> x) {
  if (std::abs(norm2(x) - 1.0) > kUnitTolerance) throw DomainError("expected a unit vector");
}

double dist_to_sparse_sphere(std::span<const double> x, std::size_t s) {
  require_unit(x);
  const HeadTail ht = head_tail_split(x, s);
  const double head = norm2(ht.head);
  const double tail = norm2(ht.tail);
  return std::hypot(tail, head - 1.0);
}

VectorClass classify(std::span<const double> x, const SparsityParams& params) {
  const double d = dist_to_sparse_sphere(x, params.sparsity(x.size()));
  return d <= params.compressibility_radius ? VectorClass::Compressible : VectorClass::Incompressible;
}

std::size_t spread_coordinate_count(std::span<const double> x, double level) {
  if (x.empty()) return 0;
  const double threshold = level / std::sqrt(static_cast<double>(x.size()));
  return static_cast<std::size_t>(
      std::count_if(x.begin(), x.end(), [threshold](double v) { return std::abs(v) >= threshold; }));
}

Vector random_unit_vector(std::size_t n, Rng& rng) {
  Vector v(n);
  do {
    for (double& x : v) x = rng.normal();
  } while (normalize(v) == 0.0);
  return v;
}

Vector random_sparse_unit_vector(const SupportSet& support, Rng& rng) {
  Vector v(support.ambient(), 0.0);
  const Vector local = random_unit_vector(support.size(), rng);
  for (std::size_t k = 0; k < support.size(); ++k) v[support.indices()[k]] = local[k];
  return v;
}

Vector random_spread_vector(std::size_t n, Rng& rng, double low, double high) {
  Vector v(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& x : v) x = rng.sign() * scale * (low + (high - low) * rng.uniform());
  normalize(v);
  return v;
}

Vector sample_in_class(std::size_t n, const SparsityParams& params, VectorClass wanted, Rng& rng,
                       std::size_t max_attempts) {
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    Vector x = random_unit_vector(n, rng);
    if (classify(x, params) == wanted) return x;
  }
  throw BudgetError("rejection sampling exhausted its attempt budget");
}

Vector sample_compressible(std::size_t n, const SparsityParams& params, Rng& rng) {
  const std::size_t s = params.sparsity(n);
  for (;;) {
    const SupportSet support = SupportSet::random(s, n, rng);
    Vector x = random_sparse_unit_vector(support, rng);
    Vector z = random_unit_vector(n, rng);
    const double r = params.compressibility_radius * rng.uniform();
    for (std::size_t i = 0; i < n; ++i) x[i] += r * z[i];
    normalize(x);
    if (classify(x, params) == VectorClass::Compressible) return x;
  }
}

long double CoveringBounds::full() const { return std::exp(static_cast<long double>(log_full)); }
long double CoveringBounds::sparse() const { return std::exp(static_cast<long double>(log_sparse)); }
long double CoveringBounds::binom_bound() const { return std::exp(static_cast<long double>(log_binom_bound)); }

CoveringBounds covering_bounds(std::size_t n, std::size_t s, double eps) {
  if (s < 1 || 2 * s > n) throw DomainError("covering bounds need 1 <= s <= N/2");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("covering bounds need eps in (0, 1)");
  const double dn = static_cast<double>(n);
  const double ds = static_cast<double>(s);
  CoveringBounds b;
  b.log_full = dn * std::log(3.0 / eps);
  b.log_binomial = log_binomial(n, s);
  b.log_sparse = b.log_binomial + ds * std::log(3.0 / eps);
  b.log_binom_bound = ds * (1.0 + std::log(dn / ds));
  return b;
}

}  // namespace sparsinv
