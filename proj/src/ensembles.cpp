#include "sparsinv/ensembles.hpp"

#include <algorithm>
#include <cmath>

#include "sparsinv/errors.hpp"

namespace sparsinv {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

double student_t5_standardized(Rng& rng) {
  const double z = rng.normal();
  double chi2 = 0.0;
  for (int k = 0; k < kHeavyTailDegreesOfFreedom; ++k) {
    const double g = rng.normal();
    chi2 += g * g;
  }
  const double nu = kHeavyTailDegreesOfFreedom;
  const double t = z / std::sqrt(chi2 / nu);
  return t * std::sqrt((nu - 2.0) / nu);
}

MomentCheck make_check(double sum, double sum_sq, std::size_t n, double expected) {
  MomentCheck c;
  const double dn = static_cast<double>(n);
  c.estimate = sum / dn;
  const double var = std::max(0.0, sum_sq / dn - c.estimate * c.estimate);
  const double se = std::sqrt(var / dn);
  c.lower = c.estimate - 3.0 * se;
  c.upper = c.estimate + 3.0 * se;
  c.expected = expected;
  c.flagged = expected < c.lower || expected > c.upper;
  return c;
}

}  // namespace

std::string_view to_string(Distribution d) noexcept {
  switch (d) {
    case Distribution::Gaussian: return "gaussian";
    case Distribution::Rademacher: return "rademacher";
    case Distribution::UniformCentered: return "uniform";
    case Distribution::HeavyTail4: return "heavy-tail-4";
    case Distribution::Identity: return "identity";
  }
  return "unknown";
}

std::string_view to_string(Normalization n) noexcept {
  switch (n) {
    case Normalization::Raw: return "raw";
    case Normalization::ScaledByInvSqrtRows: return "inv-sqrt-rows";
  }
  return "unknown";
}

Distribution parse_distribution(std::string_view name) {
  for (auto d : {Distribution::Gaussian, Distribution::Rademacher, Distribution::UniformCentered,
                 Distribution::HeavyTail4, Distribution::Identity}) {
    if (to_string(d) == name) return d;
  }
  throw DomainError("unknown distribution '" + std::string(name) + "'");
}

Normalization parse_normalization(std::string_view name) {
  for (auto n : {Normalization::Raw, Normalization::ScaledByInvSqrtRows}) {
    if (to_string(n) == name) return n;
  }
  throw DomainError("unknown normalization '" + std::string(name) + "'");
}

double fourth_moment(Distribution d) {
  switch (d) {
    case Distribution::Gaussian: return 3.0;
    case Distribution::Rademacher: return 1.0;
    case Distribution::UniformCentered: return 9.0 / 5.0;
    case Distribution::HeavyTail4: return kHeavyTailFourthMomentBound;
    case Distribution::Identity: break;
  }
  throw DomainError("identity ensemble has no entry law");
}

double sample_entry(Distribution d, Rng& rng) {
  switch (d) {
    case Distribution::Gaussian: return rng.normal();
    case Distribution::Rademacher: return rng.sign();
    case Distribution::UniformCentered: return kSqrt3 * (2.0 * rng.uniform() - 1.0);
    case Distribution::HeavyTail4: return student_t5_standardized(rng);
    case Distribution::Identity: break;
  }
  throw DomainError("identity ensemble has no entry law");
}

Vector sample_vector(Distribution d, std::size_t length, Rng& rng) {
  Vector v(length);
  for (double& x : v) x = sample_entry(d, rng);
  return v;
}

Matrix sample_matrix(const EnsembleSpec& spec, Seed seed, std::size_t trial) {
  return sample_matrix(spec, seed, trial, StreamTag::Matrix);
}

Matrix sample_matrix(const EnsembleSpec& spec, Seed seed, std::size_t trial, StreamTag tag) {
  if (spec.rows == 0 || spec.cols == 0) throw DimensionError("ensemble dimensions must be positive");
  Matrix m(spec.rows, spec.cols);
  if (spec.distribution == Distribution::Identity) {
    for (std::size_t i = 0; i < std::min(spec.rows, spec.cols); ++i) m(i, i) = 1.0;
  } else {
    Rng rng = Rng::stream(seed, trial, tag);
    for (double& x : m.entries()) x = sample_entry(spec.distribution, rng);
  }
  if (spec.normalization == Normalization::ScaledByInvSqrtRows) {
    m *= 1.0 / std::sqrt(static_cast<double>(spec.rows));
  }
  return m;
}

MomentReport validate_ensemble(Distribution distribution, std::size_t samples, Seed seed) {
  if (samples < kMinMomentSamples) throw DomainError("validate_ensemble needs at least 1e4 samples");
  if (distribution == Distribution::Identity) throw DomainError("identity ensemble has no entry law");
  Rng rng = Rng::stream(seed, 0, StreamTag::Moments);
  double s1 = 0, s1sq = 0, s2 = 0, s2sq = 0, s4 = 0, s4sq = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = sample_entry(distribution, rng);
    const double x2 = x * x;
    const double x4 = x2 * x2;
    s1 += x;
    s1sq += x2;
    s2 += x2;
    s2sq += x4;
    s4 += x4;
    s4sq += x4 * x4;
  }
  MomentReport r;
  r.distribution = distribution;
  r.samples = samples;
  r.mean = make_check(s1, s1sq, samples, 0.0);
  r.variance = make_check(s2, s2sq, samples, 1.0);
  r.fourth = make_check(s4, s4sq, samples, fourth_moment(distribution));
  if (distribution == Distribution::HeavyTail4) {
    r.fourth_one_sided = true;
    r.fourth.lower = std::max(0.0, r.fourth.lower);
    r.fourth.flagged = r.fourth.lower > kHeavyTailFourthMomentBound;
  }
  return r;
}

}  // namespace sparsinv
